#pragma once

#include "polaron/grid.hpp"

namespace polaron {

// Coulomb potential of a radial density by Newton's theorem:
//   V(r) = (1/r) int_0^r rho 4 pi s^2 ds + int_r^inf 4 pi s rho ds.
RadialFunction newton_potential(const RadialFunction& rho, double negative_tol = 1e-10);

// V(0) = int_0^inf 4 pi s rho ds (the r -> 0 limit of the above).
double newton_potential_at_origin(const RadialFunction& rho);

// phi(r) = pi^{-3/2} int rho(y) |x-y|^{-2} d^3y reduced to
//   phi(r) = pi^{-3/2} int_0^inf rho(s) (2 pi s / r) ln((r+s)/|r-s|) ds.
// The log kernel is integrated cell-by-cell against a cubic interpolant of
// the smooth factor with analytic moments, so the diagonal singularity costs
// no accuracy.
RadialFunction inverse_square_convolution(const RadialFunction& rho,
                                          double negative_tol = 1e-10);

// (-Delta f)(r) = -f'' - (2/r) f' + l(l+1) f / r^2 via the substitution
// u = r f. order = 2 or 4; uniform grids only for order 4.
RadialFunction apply_radial_laplacian(const RadialFunction& f, int l, int order = 2,
                                      bool dirichlet_at_rmax = true);

struct TransformResult {
    RadialFunction fhat;       // on the same grid, points read as k
    bool decay_warning = false;  // insufficient decay of f at r_max
};

// Spherical Bessel transform of order l with the involutive convention
//   fhat(k) = sqrt(2/pi) int_0^inf f(r) j_l(k r) r^2 dr,
// so applying it twice recovers f and Plancherel holds on L2(r^2 dr).
TransformResult fourier_radial(const RadialFunction& f, int l);

}  // namespace polaron
