#include "polaron/radial_ops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "polaron/bessel.hpp"
#include "polaron/errors.hpp"

namespace polaron {

namespace {

void check_density(const RadialFunction& rho, double tol) {
    if (rho.angular_momentum != 0)
        throw DomainError("density must be a scalar (l = 0) field");
    double worst = 0.0;
    for (double v : rho.values) worst = std::min(worst, v);
    if (worst < -tol) throw DomainError("density has negative values beyond tolerance");
}

}  // namespace

RadialFunction newton_potential(const RadialFunction& rho, double negative_tol) {
    check_density(rho, negative_tol);
    const RadialGrid& g = *rho.grid;
    const std::size_t n = g.size();
    std::vector<double> g2(n), g1(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = g.points[i];
        g2[i] = 4.0 * M_PI * r * r * rho.values[i];
        g1[i] = 4.0 * M_PI * r * rho.values[i];
    }
    const auto c2 = cumulative_integral(g, g2);
    const auto c1 = cumulative_integral(g, g1);
    RadialFunction out(g, 0);
    const double c1_total = c1.back();
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = c2[i] / g.points[i] + (c1_total - c1[i]);
    return out;
}

double newton_potential_at_origin(const RadialFunction& rho) {
    check_density(rho, 1e-10);
    const RadialGrid& g = *rho.grid;
    std::vector<double> g1(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        g1[i] = 4.0 * M_PI * g.points[i] * rho.values[i];
    return integrate(g, g1);
}

namespace {

// int_A^B u^k ln|u| du for k = 0..3; A, B may straddle 0.
double log_moment(int k, double A, double B) {
    auto prim = [k](double u) {
        if (u == 0.0) return 0.0;
        const double p = static_cast<double>(k + 1);
        return std::pow(u, p) * (std::log(std::abs(u)) - 1.0 / p) / p;
    };
    return prim(B) - prim(A);
}

// cubic through (xs, ys), coefficients in powers of (x - x0)
void cubic_coefficients(const double* xs, const double* ys, double x0, double c[4]) {
    double d01 = (ys[1] - ys[0]) / (xs[1] - xs[0]);
    double d12 = (ys[2] - ys[1]) / (xs[2] - xs[1]);
    double d23 = (ys[3] - ys[2]) / (xs[3] - xs[2]);
    double d012 = (d12 - d01) / (xs[2] - xs[0]);
    double d123 = (d23 - d12) / (xs[3] - xs[1]);
    double d0123 = (d123 - d012) / (xs[3] - xs[0]);
    // Newton form about xs[0], then shift to x0
    const double a0 = xs[0] - x0, a1 = xs[1] - x0, a2 = xs[2] - x0;
    // N(x) = y0 + d01 (x-xs0) + d012 (x-xs0)(x-xs1) + d0123 (x-xs0)(x-xs1)(x-xs2)
    // expand in t = x - x0:
    c[0] = ys[0] - d01 * a0 + d012 * a0 * a1 - d0123 * a0 * a1 * a2;
    c[1] = d01 - d012 * (a0 + a1) + d0123 * (a0 * a1 + a0 * a2 + a1 * a2);
    c[2] = d012 - d0123 * (a0 + a1 + a2);
    c[3] = d0123;
}

}  // namespace

RadialFunction inverse_square_convolution(const RadialFunction& rho, double negative_tol) {
    check_density(rho, negative_tol);
    const RadialGrid& g = *rho.grid;
    const std::size_t n = g.size();

    // smooth factor of the integrand: q(s) = pi^{-3/2} * 2 pi * s * rho(s)
    // phi(r) = (1/r) * int q(s) [ln(r+s) - ln|r-s|] ds
    std::vector<double> x(n + 1), q(n + 1);
    x[0] = 0.0;
    q[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i + 1] = g.points[i];
        q[i + 1] = std::pow(M_PI, -1.5) * 2.0 * M_PI * g.points[i] * rho.values[i];
    }

    RadialFunction out(g, 0);
    std::vector<double> cplus(4), cminus(4);
    for (std::size_t t = 0; t < n; ++t) {
        const double r = g.points[t];
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < n + 1; ++i) {
            std::size_t i0 = (i == 0) ? 0 : i - 1;
            if (i0 + 3 > n) i0 = n - 3;
            double cp[4], cm[4];
            cubic_coefficients(&x[i0], &q[i0], -r, cp);  // powers of (s + r)
            cubic_coefficients(&x[i0], &q[i0], r, cm);   // powers of (s - r)
            const double Ap = x[i] + r, Bp = x[i + 1] + r;
            const double Am = x[i] - r, Bm = x[i + 1] - r;
            for (int k = 0; k < 4; ++k) {
                acc += cp[k] * log_moment(k, Ap, Bp);
                acc -= cm[k] * log_moment(k, Am, Bm);
            }
        }
        if (!std::isfinite(acc))
            throw NumericalError("inverse_square_convolution: quadrature failure near r = " +
                                 std::to_string(r));
        out.values[t] = acc / r;
    }
    return out;
}

RadialFunction apply_radial_laplacian(const RadialFunction& f, int l, int order,
                                      bool dirichlet_at_rmax) {
    const RadialGrid& g = *f.grid;
    const std::size_t n = g.size();
    if (n < 3) throw ParameterError("apply_radial_laplacian: need >= 3 points");
    if (order != 2 && order != 4)
        throw ParameterError("apply_radial_laplacian: order must be 2 or 4");
    if (order == 4 && g.kind != GridKind::Uniform)
        throw ParameterError("apply_radial_laplacian: order 4 needs a uniform grid");

    // u = r f; (-Delta f) = (-u'' + l(l+1) u / r^2) / r
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = g.points[i] * f.values[i];
    // ghost values: u(0) = 0; for l = 0 extend u oddly through the origin,
    // for l >= 1 u ~ r^{l+1} so the odd extension is wrong but u(0)=0 and the
    // first stencil rows fall back to one-sided second order.
    auto uat = [&](long i) -> double {
        if (i >= 0 && i < static_cast<long>(n)) return u[static_cast<std::size_t>(i)];
        if (i == -1) return 0.0;  // placeholder, handled per-order below
        if (i >= static_cast<long>(n)) return dirichlet_at_rmax ? 0.0 : u[n - 1];
        return 0.0;
    };

    RadialFunction out(g, f.angular_momentum);
    const double ll1 = static_cast<double>(l) * (l + 1);

    if (g.kind == GridKind::Uniform && order == 4) {
        const double h = g.spacing();
        const double h2 = 12.0 * h * h;
        for (std::size_t i = 0; i < n; ++i) {
            double um2, um1, uc = u[i], up1, up2;
            long p = static_cast<long>(i) + 1;  // grid point index (1-based from origin)
            // values at p-2, p-1, p+1, p+2 with u(0)=0 and odd reflection u(-1) = -u(1)
            um1 = (p - 1 == 0) ? 0.0 : uat(i - 1);
            um2 = (p - 2 == 0) ? 0.0 : ((p - 2 == -1) ? -u[0] : uat(i - 2));
            up1 = uat(i + 1);
            up2 = uat(i + 2);
            const double upp = (-um2 + 16.0 * um1 - 30.0 * uc + 16.0 * up1 - up2) / h2;
            const double r = g.points[i];
            out.values[i] = (-upp + ll1 * uc / (r * r)) / r;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double r = g.points[i];
            double rm = (i == 0) ? 0.0 : g.points[i - 1];
            double rp = (i + 1 < n) ? g.points[i + 1] : 2.0 * g.points[n - 1] - g.points[n - 2];
            double um = (i == 0) ? 0.0 : u[i - 1];
            double up = (i + 1 < n) ? u[i + 1] : (dirichlet_at_rmax ? 0.0 : u[n - 1]);
            const double hm = r - rm, hp = rp - r;
            const double upp = 2.0 * (um * hp + up * hm - u[i] * (hm + hp)) / (hm * hp * (hm + hp));
            out.values[i] = (-upp + ll1 * u[i] / (r * r)) / r;
        }
    }
    return out;
}

TransformResult fourier_radial(const RadialFunction& f, int l) {
    const RadialGrid& g = *f.grid;
    const std::size_t n = g.size();
    TransformResult res;
    res.fhat = RadialFunction(g, l);

    double fmax = 0.0;
    for (double v : f.values) fmax = std::max(fmax, std::abs(v));
    const double tail = std::abs(f.values.back()) * g.r_max * g.r_max;
    res.decay_warning = (tail > 1e-12 * std::max(fmax, 1e-300));

    // pre-weighted samples
    std::vector<double> wf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = g.points[i];
        wf[i] = g.weights[i] * r * r * f.values[i];
    }
    const double pref = std::sqrt(2.0 / M_PI);
    if (l == 0) {
        // j_0(kr) = sin(kr)/(kr): do it with explicit sin for speed
        for (std::size_t a = 0; a < n; ++a) {
            const double k = g.points[a];
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double kr = k * g.points[i];
                s += wf[i] * std::sin(kr) / kr;
            }
            res.fhat.values[a] = pref * s;
        }
    } else {
        for (std::size_t a = 0; a < n; ++a) {
            const double k = g.points[a];
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += wf[i] * spherical_jl(l, k * g.points[i]);
            res.fhat.values[a] = pref * s;
        }
    }
    return res;
}

}  // namespace polaron
