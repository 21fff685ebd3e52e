#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "polaron/ball_basis.hpp"
#include "polaron/pekar.hpp"

namespace polaron {

enum class CutoffConvention { Momentum, Energy };

// ---------------------------------------------------------------------------
// mode sets
// ---------------------------------------------------------------------------

struct FiberMode {
    std::array<double, 3> k{};  // cube center
    double g = 0.0;             // coupling, g^2 = (alpha/2pi^2) int_cell |k|^-2
    bool core = false;          // cell center inside |k| < K_cut
};

struct ModeSet {
    std::vector<FiberMode> modes;
    double alpha = 0.0, K_cut = 0.0, eps = 0.0;
    std::size_t cells_core = 0, cells_partial = 0;
    double sum_g2 = 0.0;  // equals (2 alpha/pi) K_cut by construction
};

// Momentum-cube discretization of the fiber interaction: cubes of side eps
// with corners on the eps-lattice tile |k| < K_cut; one mode per covered
// cell, coupling from the exact integral over the cell/ball intersection
// (evaluated by a shared ray sweep so the g^2 sum rule is exact).
ModeSet discretize_modes_free(double alpha, double K_cut, double eps,
                              std::size_t max_modes = 100000);

struct ConfinedMode {
    int l = 0, n = 0;
    double e = 0.0;  // Dirichlet eigenvalue
    double g = 0.0;  // e^{-1/2}
    int degeneracy = 1;
};

struct ConfinedModeSet {
    std::vector<ConfinedMode> modes;
    double Lambda = 0.0;
    CutoffConvention convention = CutoffConvention::Momentum;
    std::size_t total_count = 0;  // with 2l+1 degeneracy
};

// Dirichlet eigenmodes below the cutoff (momentum: e <= Lambda^2,
// energy: e <= Lambda) with confined couplings e^{-1/2}.
ConfinedModeSet modes_from_ball(const BallBasis& basis, double Lambda,
                                CutoffConvention convention = CutoffConvention::Momentum);

// ---------------------------------------------------------------------------
// truncated Fock basis: occupation vectors with sum n_j <= M
// ---------------------------------------------------------------------------

class FockBasis {
  public:
    FockBasis(std::size_t n_modes, int max_phonons, std::size_t budget = 500000);

    std::size_t dimension() const { return dim_; }
    std::size_t n_modes() const { return n_; }
    int max_phonons() const { return m_; }

    // state <-> index; states are sorted multisets of mode indices
    const std::vector<std::uint16_t>& state(std::size_t idx) const { return states_[idx]; }
    std::size_t index_of(const std::vector<std::uint16_t>& multiset) const;

    static double dimension_estimate(std::size_t n_modes, int max_phonons);

  private:
    std::size_t n_ = 0, dim_ = 0;
    int m_ = 0;
    std::vector<std::vector<std::uint16_t>> states_;
    std::vector<std::size_t> offsets_;              // first index of each phonon-count block
    std::vector<std::vector<std::uint64_t>> binom_;  // C(i, k) table
    std::size_t rank_multiset(const std::vector<std::uint16_t>& s) const;
};

// ---------------------------------------------------------------------------
// sparse symmetric Hamiltonian (upper-triangle coordinate list)
// ---------------------------------------------------------------------------

struct HamiltonianMeta {
    std::string model;  // "fiber", "confined-interval", "confined-ball"
    double alpha = 0.0;
    std::array<double, 3> P{};
    int max_phonons = 0;
    std::size_t n_modes = 0, n_el = 0;
    double cutoff = 0.0;
    std::string cutoff_convention;  // "momentum" | "energy"
    std::string units;              // "original" | "strong-coupling"
};

struct SparseHamiltonian {
    std::size_t dimension = 0;
    std::vector<std::uint32_t> rows, cols;  // i <= j
    std::vector<double> values;
    HamiltonianMeta meta;

    void apply(const double* x, double* y) const;
    bool diagonal_only() const;
    void add(std::uint32_t i, std::uint32_t j, double v);
};

// Fiber Hamiltonian at total momentum P (original units):
//   (P - sum n_j k_j)^2 + sum n_j - sum_j g_j sqrt(n_j+1) ladder terms.
SparseHamiltonian assemble_fiber_hamiltonian(const ModeSet& modes, double alpha,
                                             const std::array<double, 3>& P, int max_phonons,
                                             std::size_t budget = 500000);

// Confined Hamiltonian in strong-coupling units with standard-CCR ladders
// (b = alpha a): diag e_a + alpha^{-2} sum n_j, interaction
// -alpha^{-1} sum_j g_j T^j_{ab} (b_j + b_j^dagger).
// The electron basis and phonon profiles are l=0 ball modes.
SparseHamiltonian assemble_confined_ball(const BallBasis& basis, const ConfinedModeSet& modes,
                                         double alpha, int max_phonons, std::size_t n_el,
                                         std::size_t budget = 500000);

// 1D interval variant on (0, L) with sine modes and closed-form triple
// products; n_phonon_modes lowest modes are kept.
SparseHamiltonian assemble_confined_interval(double L, std::size_t n_el,
                                             std::size_t n_phonon_modes, double alpha,
                                             int max_phonons, std::size_t budget = 500000);

// exact interval triple product  int_0^L s_a s_j s_b dx  of unit-normalized
// sine modes (1-based indices)
double interval_triple_product(double L, int a, int j, int b);

// ---------------------------------------------------------------------------
// ground state + dispersion
// ---------------------------------------------------------------------------

struct GroundState {
    double energy = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
    int iterations = 0;
};

// Lowest eigenpair by Lanczos with full reorthogonalization and a
// deterministic vacuum-dominated start vector. Purely diagonal operators are
// scanned exactly.
GroundState ground_state(const SparseHamiltonian& H, double tol = 1e-10,
                         std::uint64_t seed = 1);

struct DispersionCurve {
    std::vector<double> P;  // magnitudes along the z axis
    std::vector<double> E;
    double alpha = 0.0;
    double mass_estimate = 0.0;   // Richardson-corrected from the two smallest |P| > 0
    double mass_fit_residual = 0.0;
    HamiltonianMeta meta;
};

DispersionCurve dispersion(const ModeSet& modes, double alpha,
                           const std::vector<double>& P_values, int max_phonons,
                           double tol = 1e-10, std::size_t budget = 500000);

// Coherent-state (Pekar product) upper bound in original units.
double coherent_upper_bound(const PekarSolution& sol, double alpha);
double coherent_upper_bound_trial(const RadialFunction& psi, double alpha);

}  // namespace polaron
