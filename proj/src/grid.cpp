#include "polaron/grid.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "polaron/errors.hpp"

namespace polaron {

namespace {

// Composite Simpson coefficients for m+1 equally spaced nodes 0..m
// (step 1). Odd interval counts close with the 3/8 rule.
std::vector<double> simpson_coefficients(std::size_t m) {
    std::vector<double> c(m + 1, 0.0);
    if (m < 3) throw ParameterError("grid too small for quadrature rule");
    std::size_t stop = (m % 2 == 0) ? m : m - 3;
    if (stop >= 2) {
        c[0] += 1.0 / 3.0;
        c[stop] += 1.0 / 3.0;
        for (std::size_t i = 1; i < stop; ++i) c[i] += (i % 2 ? 4.0 : 2.0) / 3.0;
    }
    if (m % 2 != 0) {
        const double w38[4] = {3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0};
        for (int k = 0; k < 4; ++k) c[stop + k] += w38[k];
    }
    return c;
}

}  // namespace

double RadialGrid::spacing() const {
    if (points.size() < 2) throw ParameterError("grid has no spacing");
    return points[1] - points[0];
}

RadialGrid make_grid(std::size_t n, double r_max, GridKind kind) {
    if (n < 16) throw ParameterError("make_grid: n must be >= 16");
    if (!(r_max > 0.0)) throw ParameterError("make_grid: r_max must be positive");

    RadialGrid g;
    g.r_max = r_max;
    g.kind = kind;
    g.points.resize(n);
    g.weights.resize(n);
    const auto c = simpson_coefficients(n);

    if (kind == GridKind::Uniform) {
        const double h = r_max / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            g.points[i] = h * static_cast<double>(i + 1);
            g.weights[i] = c[i + 1] * h;
        }
    } else {
        // r = r_max t^2 clusters points near the origin; quadrature in t with
        // jacobian 2 r_max t folded into the weights.
        const double ht = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = ht * static_cast<double>(i + 1);
            g.points[i] = r_max * t * t;
            g.weights[i] = c[i + 1] * ht * 2.0 * r_max * t;
        }
    }
    return g;
}

RadialFunction::RadialFunction(const RadialGrid& g, std::vector<double> v, int l)
    : grid(std::make_shared<RadialGrid>(g)), values(std::move(v)), angular_momentum(l) {
    if (values.size() != g.size())
        throw ParameterError("RadialFunction: value/grid length mismatch");
}

double integrate(const RadialGrid& g, const std::vector<double>& values) {
    if (values.size() != g.size()) throw ParameterError("integrate: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += g.weights[i] * values[i];
    return s;
}

double integrate_ball(const RadialGrid& g, const std::vector<double>& f) {
    if (f.size() != g.size()) throw ParameterError("integrate_ball: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = g.points[i];
        s += g.weights[i] * 4.0 * M_PI * r * r * f[i];
    }
    return s;
}

double inner_ball(const RadialGrid& g, const std::vector<double>& a,
                  const std::vector<double>& b) {
    if (a.size() != g.size() || b.size() != g.size())
        throw ParameterError("inner_ball: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = g.points[i];
        s += g.weights[i] * 4.0 * M_PI * r * r * a[i] * b[i];
    }
    return s;
}

double l2_norm(const RadialFunction& f) {
    return std::sqrt(inner_ball(*f.grid, f.values, f.values));
}

namespace {

// Integral over [xa, xb] of the cubic through (xs[k], ys[k]), k=0..3,
// in Newton form about xs[0].
double cubic_cell_integral(const double* xs, const double* ys, double xa, double xb) {
    // divided differences
    double d0 = ys[0];
    double d01 = (ys[1] - ys[0]) / (xs[1] - xs[0]);
    double d12 = (ys[2] - ys[1]) / (xs[2] - xs[1]);
    double d23 = (ys[3] - ys[2]) / (xs[3] - xs[2]);
    double d012 = (d12 - d01) / (xs[2] - xs[0]);
    double d123 = (d23 - d12) / (xs[3] - xs[1]);
    double d0123 = (d123 - d012) / (xs[3] - xs[0]);

    // expand N(x) = d0 + d01 u + d012 u (u-b1) + d0123 u (u-b1)(u-b2), u = x - xs[0]
    const double b1 = xs[1] - xs[0];
    const double b2 = xs[2] - xs[0];
    double c0 = d0;
    double c1 = d01 - d012 * b1 + d0123 * b1 * b2;
    double c2 = d012 - d0123 * (b1 + b2);
    double c3 = d0123;

    auto prim = [&](double x) {
        const double u = x - xs[0];
        return u * (c0 + u * (c1 / 2.0 + u * (c2 / 3.0 + u * c3 / 4.0)));
    };
    return prim(xb) - prim(xa);
}

}  // namespace

std::vector<double> cumulative_integral(const RadialGrid& g,
                                        const std::vector<double>& values) {
    const std::size_t n = g.size();
    if (values.size() != n) throw ParameterError("cumulative_integral: length mismatch");
    // prepend the virtual origin (r=0, value 0)
    std::vector<double> x(n + 1), y(n + 1);
    x[0] = 0.0;
    y[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i + 1] = g.points[i];
        y[i + 1] = values[i];
    }
    std::vector<double> out(n, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n + 1; ++i) {
        std::size_t i0 = (i == 0) ? 0 : i - 1;
        if (i0 + 3 > n) i0 = n - 3;
        acc += cubic_cell_integral(&x[i0], &y[i0], x[i], x[i + 1]);
        out[i] = acc;
    }
    return out;
}

std::vector<double> derivative(const RadialGrid& g, const std::vector<double>& v) {
    const std::size_t n = g.size();
    if (v.size() != n) throw ParameterError("derivative: length mismatch");
    if (n < 5) throw ParameterError("derivative: need at least 5 points");
    std::vector<double> out(n);
    if (g.kind == GridKind::Uniform) {
        const double h = g.spacing();
        for (std::size_t i = 2; i + 2 < n; ++i)
            out[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
        out[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
        out[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
        out[n - 2] = -(-3.0 * v[n - 1] - 10.0 * v[n - 2] + 18.0 * v[n - 3] - 6.0 * v[n - 4] + v[n - 5]) / (12.0 * h);
        out[n - 1] = -(-25.0 * v[n - 1] + 48.0 * v[n - 2] - 36.0 * v[n - 3] + 16.0 * v[n - 4] - 3.0 * v[n - 5]) / (12.0 * h);
    } else {
        // central 3-point on nonuniform spacing
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hm = g.points[i] - g.points[i - 1];
            const double hp = g.points[i + 1] - g.points[i];
            out[i] = (v[i + 1] * hm * hm - v[i - 1] * hp * hp + v[i] * (hp * hp - hm * hm)) /
                     (hm * hp * (hm + hp));
        }
        out[0] = (v[1] - v[0]) / (g.points[1] - g.points[0]);
        out[n - 1] = (v[n - 1] - v[n - 2]) / (g.points[n - 1] - g.points[n - 2]);
    }
    return out;
}

}  // namespace polaron
