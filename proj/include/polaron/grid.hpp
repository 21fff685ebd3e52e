#pragma once

#include <memory>
#include <vector>

namespace polaron {

enum class GridKind { Uniform, Graded };

// Radial quadrature grid on (0, r_max]. Points exclude the origin; the
// quadrature weights are built for integrands that vanish at r = 0 (every
// physical integrand here carries at least one power of r), so
//   sum_i w_i g(r_i)  ~=  int_0^{r_max} g(r) dr.
// Composite Simpson coefficients give exactness for polynomial integrands
// up to cubic order, hence volume integrals against r^2 are exact.
struct RadialGrid {
    std::vector<double> points;
    std::vector<double> weights;
    double r_max = 0.0;
    GridKind kind = GridKind::Uniform;

    std::size_t size() const { return points.size(); }
    double spacing() const;  // uniform grids only
};

RadialGrid make_grid(std::size_t n, double r_max, GridKind kind = GridKind::Uniform);

// A radially reduced function f(r) sampled on a grid. angular_momentum is the
// sector index l of the full 3D function f(r) Y_lm; scalar fields use l = 0.
// The function owns a copy of its grid, so it stays valid past the caller's
// grid object.
struct RadialFunction {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> values;
    int angular_momentum = 0;

    RadialFunction() = default;
    RadialFunction(const RadialGrid& g, int l = 0)
        : grid(std::make_shared<RadialGrid>(g)), values(g.size(), 0.0), angular_momentum(l) {}
    RadialFunction(const RadialGrid& g, std::vector<double> v, int l = 0);

    std::size_t size() const { return values.size(); }
};

// int_0^rmax g dr with the grid weights (g must vanish at r=0).
double integrate(const RadialGrid& g, const std::vector<double>& values);

// int f d^3x = int f 4 pi r^2 dr for a radial f.
double integrate_ball(const RadialGrid& g, const std::vector<double>& f);

// L2 norm over R^3: sqrt(int |f|^2 4 pi r^2 dr).
double l2_norm(const RadialFunction& f);

double inner_ball(const RadialGrid& g, const std::vector<double>& a,
                  const std::vector<double>& b);

// Cumulative integral from 0 (virtual origin value 0) to each grid point,
// 4th order via cubic interpolation over sliding 4-point stencils.
std::vector<double> cumulative_integral(const RadialGrid& g,
                                        const std::vector<double>& values);

// Derivative on the grid, 4th-order central stencils with one-sided closures.
std::vector<double> derivative(const RadialGrid& g, const std::vector<double>& values);

}  // namespace polaron
