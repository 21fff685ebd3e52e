#include "polaron/bessel.hpp"

#include <cmath>
#include <limits>

#include "polaron/errors.hpp"

namespace polaron {

namespace {

double jl_series(int l, double x) {
    // j_l(x) = x^l / (2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    double pref = 1.0;
    for (int k = 1; k <= l; ++k) pref *= x / static_cast<double>(2 * k + 1);
    double term = 1.0, sum = 1.0;
    const double x2 = x * x;
    for (int k = 1; k < 60; ++k) {
        term *= -x2 / (2.0 * k * (2.0 * (l + k) + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return pref * sum;
}

}  // namespace

double spherical_jl(int l, double x) {
    if (l < 0) throw ParameterError("spherical_jl: l must be >= 0");
    if (x < 0.0) return (l % 2 ? -1.0 : 1.0) * spherical_jl(l, -x);
    if (x == 0.0) return l == 0 ? 1.0 : 0.0;
    if (l == 0) return std::sin(x) / x;
    if (x < 1e-2 * (l + 1.0) || x < 1e-4) return jl_series(l, x);

    const double j0 = std::sin(x) / x;
    const double j1 = j0 / x - std::cos(x) / x;
    if (l == 1) return j1;

    if (x > static_cast<double>(l) + 0.5) {
        // upward recurrence
        double jm = j0, jc = j1;
        for (int k = 1; k < l; ++k) {
            const double jn = (2.0 * k + 1.0) / x * jc - jm;
            jm = jc;
            jc = jn;
        }
        return jc;
    }

    // downward (Miller) recurrence from a safely higher order
    int start = l + 16 + static_cast<int>(std::sqrt(40.0 * l));
    double up = 0.0, uc = 1e-280;
    double target = 0.0;
    for (int k = start; k >= 0; --k) {
        const double um = (2.0 * k + 3.0) / x * uc - up;
        up = uc;
        uc = um;
        if (k == l) target = uc;
        if (std::abs(uc) > 1e260) {
            up *= 1e-260;
            uc *= 1e-260;
            target *= 1e-260;
        }
    }
    // uc ~ C * j_0(x), up ~ C * j_1(x); normalize with the better-conditioned one
    const double scale = (std::abs(j0) > std::abs(j1)) ? j0 / uc : j1 / up;
    return target * scale;
}

std::vector<double> spherical_bessel_zeros(int l, std::size_t n) {
    if (l < 0) throw ParameterError("spherical_bessel_zeros: l must be >= 0");
    if (n == 0) return {};
    // zeros of j_0 are k*pi; climb sectors using interlacing brackets
    std::size_t need = n + static_cast<std::size_t>(l);
    std::vector<double> prev(need + 1);
    for (std::size_t k = 0; k <= need; ++k) prev[k] = M_PI * static_cast<double>(k + 1);
    for (int m = 1; m <= l; ++m) {
        std::vector<double> cur(prev.size() - 1);
        for (std::size_t k = 0; k + 1 < prev.size(); ++k) {
            double a = prev[k], b = prev[k + 1];
            double fa = spherical_jl(m, a);
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = spherical_jl(m, mid);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
                if (b - a < 1e-14 * b) break;
            }
            cur[k] = 0.5 * (a + b);
        }
        prev = std::move(cur);
    }
    prev.resize(n);
    return prev;
}

}  // namespace polaron
