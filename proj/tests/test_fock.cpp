#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "polaron/bounds.hpp"
#include "polaron/errors.hpp"
#include "polaron/fock.hpp"

using namespace polaron;

namespace {

ModeSet single_mode(double g, std::array<double, 3> k = {0.0, 0.0, 0.0}) {
    ModeSet ms;
    ms.alpha = 1.0;
    ms.K_cut = 1.0;
    ms.eps = 1.0;
    ms.modes.push_back({k, g, true});
    ms.sum_g2 = g * g;
    return ms;
}

Eigen::MatrixXd dense_of(const SparseHamiltonian& H) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<long>(H.dimension),
                                              static_cast<long>(H.dimension));
    for (std::size_t a = 0; a < H.rows.size(); ++a) {
        A(H.rows[a], H.cols[a]) += H.values[a];
        if (H.rows[a] != H.cols[a]) A(H.cols[a], H.rows[a]) += H.values[a];
    }
    return A;
}

}  // namespace

TEST_CASE("mode discretization: cell bookkeeping and exact sum rule") {
    const double alpha = 0.7, K = 2.0, eps = 1.0;
    auto ms = discretize_modes_free(alpha, K, eps);
    // independent recount of cells with center inside the ball
    std::size_t core = 0, covered = 0;
    for (int i = -3; i <= 2; ++i)
        for (int j = -3; j <= 2; ++j)
            for (int k = -3; k <= 2; ++k) {
                const double cx = (i + 0.5) * eps, cy = (j + 0.5) * eps, cz = (k + 0.5) * eps;
                double d2 = 0.0;
                for (double lo : {i * eps, j * eps, k * eps}) {
                    // nearest point of [lo, lo+eps] to 0
                    const double nearest = std::clamp(0.0, lo, lo + eps);
                    d2 += nearest * nearest;
                }
                if (d2 < K * K) {
                    ++covered;
                    if (cx * cx + cy * cy + cz * cz < K * K) ++core;
                }
            }
    CHECK(ms.cells_core == core);
    CHECK(ms.cells_core == 32);
    CHECK(ms.cells_core + ms.cells_partial == covered);
    CHECK(ms.sum_g2 ==
          doctest::Approx(2.0 * alpha / M_PI * K).epsilon(1e-10));

    // parity: every mode has a -k partner with the same coupling
    for (const auto& m : ms.modes) {
        bool found = false;
        for (const auto& m2 : ms.modes)
            if (std::abs(m2.k[0] + m.k[0]) < 1e-14 && std::abs(m2.k[1] + m.k[1]) < 1e-14 &&
                std::abs(m2.k[2] + m.k[2]) < 1e-14) {
                CHECK(m2.g == doctest::Approx(m.g).epsilon(1e-13));
                found = true;
            }
        CHECK(found);
    }
}

TEST_CASE("mode discretization: budget guard and degenerate tiling") {
    CHECK_THROWS_AS(discretize_modes_free(1.0, 8.0, 0.25, 1000), BudgetError);
    CHECK_THROWS_AS(discretize_modes_free(1.0, 1.0, 1.0), ParameterError);
    auto toy = discretize_modes_free(0.5, 2.0, 1.9);  // near-degenerate tiling
    CHECK(toy.modes.size() <= 40);
    auto H = assemble_fiber_hamiltonian(toy, 0.5, {0, 0, 0}, 2);
    auto gs = ground_state(H, 1e-10);
    CHECK(gs.energy < 0.0);
}

TEST_CASE("fock basis: enumeration, ranking, budget") {
    FockBasis b(5, 3);
    CHECK(b.dimension() == 56);  // C(5+3,3)
    for (std::size_t i = 0; i < b.dimension(); ++i)
        CHECK(b.index_of(b.state(i)) == i);
    CHECK_THROWS_AS(FockBasis(1000, 4, 100000), BudgetError);
}

TEST_CASE("fiber Hamiltonian: vacuum at alpha = 0") {
    auto ms = discretize_modes_free(0.0, 2.0, 1.0);
    auto H = assemble_fiber_hamiltonian(ms, 0.0, {0, 0, 0}, 2);
    CHECK(H.diagonal_only());
    auto gs = ground_state(H, 1e-12);
    CHECK(gs.energy == 0.0);
    CHECK(gs.residual == 0.0);
}

TEST_CASE("fiber Hamiltonian: displaced oscillator closed form") {
    const double lam = 0.5;
    auto ms = single_mode(lam);
    for (double P : {0.0, 0.3}) {
        auto H = assemble_fiber_hamiltonian(ms, 1.0, {0.0, 0.0, P}, 20);
        auto gs = ground_state(H, 1e-12);
        CHECK(gs.energy == doctest::Approx(P * P - lam * lam).epsilon(1e-8));
        CHECK(gs.residual <= 1e-12 * std::max(1.0, std::abs(gs.energy)));
    }
}

TEST_CASE("fiber Hamiltonian: second-order perturbation oracle at weak coupling") {
    const double alpha = 0.1;
    auto ms = discretize_modes_free(alpha, 2.0, 1.0);
    auto H = assemble_fiber_hamiltonian(ms, alpha, {0, 0, 0}, 2);
    auto gs = ground_state(H, 1e-11);
    double e2 = 0.0;
    for (const auto& m : ms.modes) {
        const double k2 = m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2];
        e2 -= m.g * m.g / (k2 + 1.0);
    }
    CHECK(std::abs(gs.energy - e2) / std::abs(e2) < 0.10);
}

TEST_CASE("fiber Hamiltonian: dense-oracle equivalence and momentum parity") {
    auto ms = discretize_modes_free(0.8, 2.0, 1.3);
    auto H = assemble_fiber_hamiltonian(ms, 0.8, {0.0, 0.0, 0.25}, 2);
    REQUIRE(H.dimension <= 2000);
    auto gs = ground_state(H, 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_of(H), Eigen::EigenvaluesOnly);
    CHECK(gs.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));

    auto Hm = assemble_fiber_hamiltonian(ms, 0.8, {0.0, 0.0, -0.25}, 2);
    auto gsm = ground_state(Hm, 1e-12);
    CHECK(gsm.energy == doctest::Approx(gs.energy).epsilon(1e-10));

    auto H0 = assemble_fiber_hamiltonian(ms, 0.8, {0.0, 0.0, 0.0}, 2);
    auto gs0 = ground_state(H0, 1e-12);
    CHECK(gs.energy <= gs0.energy + 0.25 * 0.25 + 1e-9);
}

TEST_CASE("ground_state: tiny matrices and the residual contract") {
    SparseHamiltonian H;
    H.dimension = 2;
    H.add(0, 1, 1.0);
    auto gs = ground_state(H, 1e-12);
    CHECK(gs.energy == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(gs.residual <= 1e-12);
}

TEST_CASE("interval triple products match quadrature") {
    const double L = 1.7;
    const int n = 20000;
    for (auto [a, j, b] : {std::array<int, 3>{1, 1, 1}, {1, 2, 2}, {2, 3, 2}, {1, 1, 2}}) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = (i + 0.5) * L / n;
            s += std::sin(a * M_PI * x / L) * std::sin(j * M_PI * x / L) *
                 std::sin(b * M_PI * x / L);
        }
        s *= std::pow(2.0 / L, 1.5) * L / n;
        CHECK(interval_triple_product(L, a, j, b) == doctest::Approx(s).epsilon(1e-6));
    }
}

TEST_CASE("confined interval model: dense oracle, decoupling, M-monotonicity") {
    auto H = assemble_confined_interval(1.0, 2, 1, 2.0, 10);
    CHECK(H.dimension == 22);
    auto gs = ground_state(H, 1e-13);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_of(H), Eigen::EigenvaluesOnly);
    CHECK(gs.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));

    // zero-coupling test double: strip the ladder terms, the ground state is
    // the bare Dirichlet level for any alpha
    auto Hfree = assemble_confined_interval(1.0, 2, 1, 3.7, 3);
    for (std::size_t a = 0; a < Hfree.rows.size(); ++a)
        if (Hfree.rows[a] != Hfree.cols[a]) Hfree.values[a] = 0.0;
    CHECK(ground_state(Hfree, 1e-12).energy ==
          doctest::Approx(M_PI * M_PI).epsilon(1e-12));

    double prev = 1e300;
    for (int M : {1, 2, 3, 4}) {
        auto Hm = assemble_confined_interval(1.0, 3, 2, 1.5, M);
        const double e = ground_state(Hm, 1e-12).energy;
        CHECK(e <= prev + 1e-10);
        prev = e;
    }
}

TEST_CASE("confined ball model: l=0 sector ED") {
    auto basis = ball_dirichlet_basis_fixed(1.0, 1, 6, 1200);
    auto modes = modes_from_ball(basis, 7.0, CutoffConvention::Momentum);
    auto H = assemble_confined_ball(basis, modes, 2.0, 2, 3);
    auto gs = ground_state(H, 1e-11);
    CHECK(gs.energy < M_PI * M_PI);  // interaction lowers the Dirichlet level
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_of(H), Eigen::EigenvaluesOnly);
    CHECK(gs.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
    // enlarging M never raises the ground energy
    auto H3 = assemble_confined_ball(basis, modes, 2.0, 3, 3);
    CHECK(ground_state(H3, 1e-11).energy <= gs.energy + 1e-10);
}

TEST_CASE("modes_from_ball: counts below the cutoff and coupling values") {
    auto basis = ball_dirichlet_basis(1.0, 4, 80.0, 1200);
    auto ms = modes_from_ball(basis, std::sqrt(40.0), CutoffConvention::Momentum);
    // e <= 40: l=0 gives pi^2, 4pi^2; l=1 gives 20.19 (x3); l=2 gives 33.2 (x5)
    CHECK(ms.total_count == 10);
    std::size_t l0 = 0, l1 = 0, l2 = 0;
    for (const auto& m : ms.modes) {
        CHECK(m.g == doctest::Approx(1.0 / std::sqrt(m.e)).epsilon(1e-14));
        if (m.l == 0) ++l0;
        if (m.l == 1) ++l1;
        if (m.l == 2) ++l2;
    }
    CHECK(l0 == 2);
    CHECK(l1 == 1);
    CHECK(l2 == 1);
    // the energy convention reads Lambda as an energy cutoff
    auto ms2 = modes_from_ball(basis, 40.0, CutoffConvention::Energy);
    CHECK(ms2.total_count == 10);
    CHECK_THROWS_AS(modes_from_ball(basis, 1.0, CutoffConvention::Momentum), DomainError);
}

TEST_CASE("dispersion: exact mass at alpha = 0, mass bound, trend in alpha") {
    std::vector<double> Ps = {0.0, 0.1, 0.2};
    auto ms0 = discretize_modes_free(0.0, 2.0, 1.0);
    auto c0 = dispersion(ms0, 0.0, Ps, 2);
    CHECK(std::abs(c0.mass_estimate - 0.5) <= 1e-12);
    CHECK(c0.mass_fit_residual <= 1e-12);

    double prev = 0.0;
    for (double alpha : {0.0, 0.5, 1.0}) {
        auto ms = discretize_modes_free(alpha, 2.0, 1.0);
        auto c = dispersion(ms, alpha, Ps, 2);
        CHECK(c.mass_estimate >= 0.5 - 1e-9);
        CHECK(c.mass_estimate >= prev - 1e-9);
        prev = c.mass_estimate;
        for (std::size_t i = 0; i < c.P.size(); ++i)
            CHECK(c.E[i] <= c.E[0] + c.P[i] * c.P[i] + 1e-9);
        for (std::size_t i = 1; i < c.P.size(); ++i)
            CHECK(c.E[i] >= c.E[i - 1] - 1e-10);  // E nondecreasing in |P| here
    }
}

TEST_CASE("coherent upper bound: Gaussian closed form and sandwich consistency") {
    auto g = make_grid(2000, 30.0, GridKind::Uniform);
    RadialFunction psi(g, 0);
    const double a = 1.0 / (9.0 * M_PI);
    const double nrm = std::pow(2.0 * a / M_PI, 0.75);
    for (std::size_t i = 0; i < g.size(); ++i)
        psi.values[i] = nrm * std::exp(-a * g.points[i] * g.points[i]);
    for (double alpha : {0.5, 1.0, 3.0}) {
        const double ub = coherent_upper_bound_trial(psi, alpha);
        CHECK(ub == doctest::Approx(-alpha * alpha / (3.0 * M_PI)).epsilon(1e-8));
        CHECK(ub >= ly_lower_bound(alpha));
    }
}
