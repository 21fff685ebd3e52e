#pragma once

#include <optional>
#include <vector>

#include "polaron/ball_basis.hpp"
#include "polaron/grid.hpp"

namespace polaron {

enum class PekarDomain { Free, Ball };

// Field kernel for the ball problem.  DirichletGreen is the confined model:
// the Coulomb term is <rho, (-Delta_Omega)^{-1} rho> built from Dirichlet
// eigenmodes.  Coulomb keeps the free-space kernel 1/|x-y| and uses the ball
// only as a hard wall, so R -> infinity reproduces the free problem.
enum class BallKernel { DirichletGreen, Coulomb };

struct PekarSolution {
    PekarDomain domain = PekarDomain::Free;
    BallKernel kernel = BallKernel::Coulomb;  // meaningful for Ball only
    double ball_radius = 0.0;

    RadialFunction psi;   // unit L2 norm over R^3
    RadialFunction phi;   // optimal polarization field for psi
    double kinetic = 0.0;       // T
    double coulomb = 0.0;       // D
    double energy = 0.0;        // e = T - D
    double mu = 0.0;            // e - ||phi||^2
    double phi_norm2 = 0.0;     // ||phi||_2^2
    double el_residual = 0.0;
    bool nodeless = true;
    int iterations = 0;

    // l=0 expansion of psi in Dirichlet electron modes (ball solves)
    std::vector<double> psi_coeffs;
    // accepted energies along the descent (monotone nonincreasing)
    std::vector<double> flow_energy_trace;
};

struct PekarOptions {
    double tol = 1e-8;             // Euler-Lagrange residual target
    double energy_tol = 1e-11;     // energy stagnation per sweep
    int flow_steps = 1500;
    double flow_dt = 0.5;
    int scf_max = 400;
    double scf_mix = 0.5;
};

// Free-space minimizer of  E(psi) = int |grad psi|^2 - iint rho rho / |x-y|
// by imaginary-time flow plus a damped self-consistent-field polish.
// init, when given, must be normalized on the grid.
PekarSolution solve_pekar_free(const RadialGrid& grid,
                               const std::optional<RadialFunction>& init = std::nullopt,
                               const PekarOptions& opt = {});

// Ball minimizer.  DirichletGreen works in the l=0 coefficient space of the
// basis (D = sum_j e_j^{-1} <phi_j, psi^2>^2); Coulomb delegates to the grid
// solver with a Dirichlet wall at R and reports basis coefficients as well.
PekarSolution solve_pekar_ball(const BallBasis& basis, BallKernel kernel,
                               const PekarOptions& opt = {});

// Optimal classical field for a given normalized psi.
RadialFunction pekar_field_free(const RadialFunction& psi);
// Ball version: coefficients e_j^{-1/2} <phi_j, psi^2> over the l=0 sector.
std::vector<double> pekar_field_ball_coeffs(const BallBasis& basis,
                                            const RadialFunction& psi);

// Energy decomposition of an arbitrary normalized trial state (free kernel).
struct EnergyBreakdown {
    double kinetic, coulomb, energy;
};
EnergyBreakdown pekar_energy_free(const RadialFunction& psi);

// Conjectured effective-mass constant, both routes:
//   c_gradphi = (2/3) int |grad phi|^2,  c_psi4 = (8 pi/3) int psi^4.
struct MassConstant {
    double c_psi4, c_gradphi;
};
MassConstant mass_constant(const PekarSolution& sol);

// Momentum-space identities of the free minimizer:
//   moment_residual     |int psihat p.grad psihat + 3/2|
//   el_fourier_residual relative L2 residual of the Euler-Lagrange equation
//                       evaluated through an independent operator route.
struct MassIdentity {
    double moment_residual;
    double el_fourier_residual;
    bool fourier_warning;
};
MassIdentity mass_identity_checks(const PekarSolution& sol);

// First excited l=0 state of the converged electron operator (for
// sensitivity tests).
RadialFunction first_excited_mode(const PekarSolution& sol);

}  // namespace polaron
