#pragma once

#include <vector>

#include <Eigen/Dense>

#include "polaron/ball_basis.hpp"
#include "polaron/pekar.hpp"

namespace polaron {

// Hessian flavor.  Ball: the confined model, K built from Dirichlet-Green
// kernels with unit coupling.  FreeApprox: the free-space Hessian with the
// field treated exactly in momentum space and only the electron problem
// confined to the ball (coupling^2 = 4 pi, matching the free functional).
enum class HessianFlavor { Ball, FreeApprox };

struct SectorReport {
    int l = 0;
    Eigen::MatrixXd K;                 // symmetric, PSD
    std::vector<double> eigenvalues;   // sorted descending
    double trace_contribution = 0.0;   // (2l+1) sum_n (sqrt(1-lambda)-1)
};

struct HessianReport {
    HessianFlavor flavor = HessianFlavor::Ball;
    double radius = 0.0;
    double mu = 0.0;
    double coupling2 = 1.0;
    int l_max = 0;
    std::size_t n_modes = 0;
    std::size_t n_el = 0;
    std::vector<SectorReport> sectors;
    std::vector<double> cumulative_trace;  // partial sums over l

    double trace_partial = 0.0;       // sum over computed sectors
    double trace_tail = 0.0;          // kernel-route sectors l_max+1 .. l_far
    double trace_continuation = 0.0;  // fitted (2l+1)-weighted power tail beyond l_far
    double trace_total = 0.0;
    int l_far = 0;
    double max_eigenvalue = 0.0;
    double min_eigenvalue = 0.0;
};

// K matrix of one angular sector in the Dirichlet field basis:
//   K_{nm} = 4 c^2 e_n^{-1/2} e_m^{-1/2} < psi u_n | Q (H_el - mu)^{-1} Q | psi u_m >.
Eigen::MatrixXd build_K(const PekarSolution& sol, const BallBasis& basis, int l,
                        std::size_t n_modes, std::size_t n_el, double coupling2);

// Electron potential V_phi on the basis grid for the given solution flavor.
std::vector<double> electron_potential(const PekarSolution& sol, const BallBasis& basis);

// Eigenvalues of -Delta_Omega + V_phi in the n_el-mode sector-l basis.
std::vector<double> electron_levels(const PekarSolution& sol, const BallBasis& basis, int l,
                                    std::size_t n_el);

// Independent route to tr K_l: radial Green-function kernels on a coarse
// grid (no field-basis truncation). Used by the trace tail and as a
// cross-check of the basis-route sector traces.
double kernel_sector_trace_check(const PekarSolution& sol, const BallBasis& basis, int l,
                                 std::size_t m_coarse = 600);

// kappa(phi) = lowest eigenvalue of -Delta_Omega + V_phi in the n_el-mode
// l=0 Dirichlet electron basis; phi given by l=0 field coefficients.
double kappa(const std::vector<double>& phi_coeffs, const BallBasis& basis,
             std::size_t n_el, double coupling2 = 1.0);

// Same electron problem with an l-sector field perturbation phi0 + d, d given
// by coefficients in sector l; the electron space couples the l=0 and l
// sectors (exact through second order in the perturbation for odd l).
double kappa_coupled(const std::vector<double>& phi0_coeffs,
                     const std::vector<double>& d_coeffs, int l,
                     const BallBasis& basis, std::size_t n_el, double coupling2 = 1.0);

// Partial fluctuation trace sum_l (2l+1) sum_n (sqrt(1-lambda)-1).
// Throws if any eigenvalue reaches 1 (non-degeneracy violation).
double fluctuation_trace(const std::vector<SectorReport>& sectors);

// Full report including the Green-function tail estimator: sector traces for
// l in (l_max, l_far] are computed from the closed-form radial Coulomb kernel
// and a Numerov-integrated resolvent kernel (exact in the radial index), and
// the remainder is a two-term power fit in nu = l + 1/2.
HessianReport build_hessian_report(const PekarSolution& sol, const BallBasis& basis,
                                   int l_max, std::size_t n_modes, std::size_t n_el,
                                   int l_far = 240, int threads = 1);

// Free-space K in sector l: field discretized as momentum shells (exact free
// square roots), electron resolvent in the Dirichlet basis on the ball.
struct FreeSectorParams {
    double k_max = 14.0;
    std::size_t n_k = 560;
    std::size_t n_el = 56;
    std::size_t n_grid_per_unit = 150;  // ball grid points per unit radius
};
Eigen::MatrixXd build_K_free(const PekarSolution& free_sol, double R, int l,
                             const FreeSectorParams& p = {});

struct ZeroModePoint {
    double R;
    double lambda_max_l1;
    double lambda_max_l0;
};
struct ZeroModeReport {
    std::vector<ZeroModePoint> points;
    double residual_last;  // |(1-K) d| / |d| for d = grad phi^Pek at the largest R
};

// Largest l=1 (translation) and l=0 eigenvalues of the free-approx K on a
// series of ball radii; the l=1 value must climb toward 1.
ZeroModeReport free_zero_modes(const PekarSolution& free_sol,
                               const std::vector<double>& R_list,
                               const FreeSectorParams& p = {});

}  // namespace polaron
