#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "polaron/ball_basis.hpp"
#include "polaron/errors.hpp"
#include "polaron/pekar.hpp"
#include "polaron/radial_ops.hpp"

using namespace polaron;

namespace {

const PekarSolution& default_free_solution() {
    static PekarSolution sol = [] {
        auto grid = make_grid(3000, 30.0, GridKind::Uniform);
        return solve_pekar_free(grid);
    }();
    return sol;
}

RadialFunction normalized_gaussian(const RadialGrid& g, double a) {
    RadialFunction psi(g, 0);
    const double n = std::pow(2.0 * a / M_PI, 0.75);
    for (std::size_t i = 0; i < g.size(); ++i)
        psi.values[i] = n * std::exp(-a * g.points[i] * g.points[i]);
    return psi;
}

}  // namespace

TEST_CASE("free minimizer: energy, virial, multiplier") {
    const auto& sol = default_free_solution();
    CHECK(l2_norm(sol.psi) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.energy <= -1.0 / (3.0 * M_PI) + 1e-6);  // below the Gaussian bound
    CHECK(sol.energy == doctest::Approx(-0.1085).epsilon(0.0005 / 0.1085));
    CHECK(std::abs(sol.coulomb - 2.0 * sol.kinetic) / sol.coulomb < 1e-5);
    CHECK(std::abs(sol.mu - 3.0 * sol.energy) / std::abs(sol.energy) < 1e-4);
    CHECK(sol.el_residual <= 1e-8);
    CHECK(sol.nodeless);
    CHECK(sol.phi_norm2 == doctest::Approx(sol.coulomb).epsilon(1e-12));
}

TEST_CASE("free minimizer: descent energies are monotone nonincreasing") {
    const auto& sol = default_free_solution();
    REQUIRE(sol.flow_energy_trace.size() >= 2);
    for (std::size_t i = 1; i < sol.flow_energy_trace.size(); ++i)
        CHECK(sol.flow_energy_trace[i] <=
              sol.flow_energy_trace[i - 1] + 1e-12 +
                  1e-10 * std::abs(sol.flow_energy_trace[i - 1]));
}

TEST_CASE("free minimizer: grid stability and convergence order") {
    const auto& ref = default_free_solution();
    auto g2 = make_grid(1500, 30.0, GridKind::Uniform);
    auto s2 = solve_pekar_free(g2);
    CHECK(std::abs(s2.energy - ref.energy) / std::abs(ref.energy) < 1e-5);

    // fitted convergence order from coarse grids where the h-signal is visible
    double e[3];
    std::size_t ns[3] = {250, 500, 1000};
    for (int i = 0; i < 3; ++i) {
        auto g = make_grid(ns[i], 30.0, GridKind::Uniform);
        e[i] = solve_pekar_free(g).energy;
    }
    const double order = std::log2(std::abs(e[1] - e[0]) / std::abs(e[2] - e[1]));
    CHECK(order >= 1.8);
}

TEST_CASE("free minimizer: discrete gradient matches finite differences") {
    auto grid = make_grid(1000, 30.0, GridKind::Uniform);
    auto sol = solve_pekar_free(grid);
    const std::size_t n = grid.size();
    const double h = grid.spacing();

    // u-representation of psi and of a direction; E(t) = E[normalize(u + t v)]
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = grid.points[i] * sol.psi.values[i] * std::sqrt(4.0 * M_PI);

    auto energy_of = [&](const std::vector<double>& uu) {
        RadialFunction psi(grid, 0);
        double s = 0.0;
        for (double x : uu) s += h * x * x;
        s = std::sqrt(s);
        for (std::size_t i = 0; i < n; ++i)
            psi.values[i] = uu[i] / s / (grid.points[i] * std::sqrt(4.0 * M_PI));
        return pekar_energy_free(psi).energy;
    };

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.05, 0.6), uc(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> v(n);
        for (int q = 0; q < 3; ++q) {
            const double a = ua(rng), c = uc(rng);
            for (std::size_t i = 0; i < n; ++i) {
                const double r = grid.points[i];
                v[i] += c * r * std::exp(-a * r * r);
            }
        }
        v[n - 1] = 0.0;
        const double eps = 1e-5;
        std::vector<double> up(u), um(u);
        for (std::size_t i = 0; i < n; ++i) {
            up[i] += eps * v[i];
            um[i] -= eps * v[i];
        }
        const double fd = (energy_of(up) - energy_of(um)) / (2.0 * eps);
        // analytic tangent gradient: 2 <v_perp, (K - 2V) u> with <,> = h sum
        std::vector<double> rho(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = grid.points[i];
            rho[i] = u[i] * u[i] / (4.0 * M_PI * r * r);
        }
        auto V = newton_potential(RadialFunction(grid, rho, 0));
        RadialFunction psi(grid, 0);
        for (std::size_t i = 0; i < n; ++i)
            psi.values[i] = u[i] / (grid.points[i] * std::sqrt(4.0 * M_PI));
        auto lap = apply_radial_laplacian(psi, 0, 4);
        // H psi in u-representation: r sqrt(4pi) (lap - 2 V psi)
        double proj = 0.0, grad = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += h * v[i] * u[i];
        for (std::size_t i = 0; i < n; ++i) {
            const double Hu = grid.points[i] * std::sqrt(4.0 * M_PI) *
                              (lap.values[i] - 2.0 * V.values[i] * psi.values[i]);
            grad += 2.0 * h * (v[i] - proj * u[i]) * Hu;
        }
        CHECK(fd == doctest::Approx(grad).epsilon(2e-5));
    }
}

TEST_CASE("free minimizer: a node in the initial guess is tolerated") {
    auto grid = make_grid(1500, 30.0, GridKind::Uniform);
    RadialFunction init(grid, 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.points[i];
        init.values[i] = (1.0 - 0.4 * r) * std::exp(-0.1 * r * r);
    }
    const double nn = l2_norm(init);
    for (auto& v : init.values) v /= nn;
    auto sol = solve_pekar_free(grid, init);
    CHECK(sol.nodeless);
    CHECK(sol.energy == doctest::Approx(default_free_solution().energy).epsilon(1e-6));
}

TEST_CASE("ball minimizer (Dirichlet-Green): variational monotonicity, multiplier") {
    auto b16 = ball_dirichlet_basis_fixed(1.0, 0, 16, 1500);
    auto b32 = ball_dirichlet_basis_fixed(1.0, 0, 32, 1500);
    auto s16 = solve_pekar_ball(b16, BallKernel::DirichletGreen);
    auto s32 = solve_pekar_ball(b32, BallKernel::DirichletGreen);
    CHECK(s32.energy <= s16.energy + 1e-12);
    CHECK(std::abs(s32.energy - s16.energy) < 1e-5);
    CHECK(std::abs(s32.mu - (s32.energy - s32.phi_norm2)) < 1e-6 * std::abs(s32.mu));
    CHECK(l2_norm(s32.psi) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s32.el_residual <= 1e-8);
}

TEST_CASE("ball minimizer (Coulomb kernel): domain exhaustion toward free space") {
    const double e_free = default_free_solution().energy;
    double prev = 0.0;
    for (double R : {8.0, 10.0, 12.0}) {
        auto basis = ball_dirichlet_basis_fixed(R, 0, 8, static_cast<std::size_t>(R * 100));
        auto s = solve_pekar_ball(basis, BallKernel::Coulomb);
        CHECK(s.energy > e_free);  // wall confinement raises the energy
        if (prev != 0.0) CHECK(s.energy < prev);
        prev = s.energy;
        if (R == 12.0) CHECK(std::abs(s.energy - e_free) / std::abs(e_free) < 0.02);
    }
}

TEST_CASE("pekar_field: two-route check on the ball") {
    auto basis = ball_dirichlet_basis_fixed(1.0, 0, 12, 2000);
    const auto& sec = basis.sector(0);
    const RadialGrid& g = basis.grid;
    // psi = lowest Dirichlet mode (3D-normalized)
    RadialFunction psi(g, 0);
    for (std::size_t i = 0; i < g.size(); ++i)
        psi.values[i] = sec.radial[0][i] / std::sqrt(4.0 * M_PI);
    CHECK(l2_norm(psi) == doctest::Approx(1.0).epsilon(1e-10));

    auto coeffs = pekar_field_ball_coeffs(basis, psi);

    // independent route: 4th-order finite-difference solve of (-Delta) w = rho,
    // then phi_j = sqrt(e_j) <phi_j, w>
    const std::size_t n = g.size();
    const double h = g.spacing();
    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    const std::size_t ni = n - 1;
    for (std::size_t i = 0; i < ni; ++i) {
        const long p = static_cast<long>(i) + 1;
        if (p == static_cast<long>(n) - 1) {
            // 3-point closure at the wall (the Dirichlet solution has a
            // nonzero slope there, so zero-padding beyond R is wrong)
            trips.emplace_back(static_cast<int>(i), static_cast<int>(i), 2.0 / (h * h));
            trips.emplace_back(static_cast<int>(i), static_cast<int>(i - 1), -1.0 / (h * h));
            continue;
        }
        const double c[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};  // +u'' stencil
        for (int k = -2; k <= 2; ++k) {
            const long q = p + k;
            const double v = -c[k + 2] / (12.0 * h * h);  // -u''
            if (q == 0 || q >= static_cast<long>(n)) continue;
            if (q == -1) {
                trips.emplace_back(static_cast<int>(i), 0, -v);  // u(-h) = -u(h)
            } else {
                trips.emplace_back(static_cast<int>(i), static_cast<int>(q - 1), v);
            }
        }
    }
    Eigen::SparseMatrix<double> Kmat(static_cast<int>(ni), static_cast<int>(ni));
    Kmat.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(Kmat);
    Eigen::VectorXd rhs(static_cast<int>(ni));
    for (std::size_t i = 0; i < ni; ++i)
        rhs(static_cast<int>(i)) = g.points[i] * psi.values[i] * psi.values[i];
    Eigen::VectorXd w_u = lu.solve(rhs);
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < ni; ++i) w[i] = w_u(static_cast<int>(i)) / g.points[i];

    for (std::size_t j = 0; j < 6; ++j) {
        double ip = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = g.points[i];
            ip += g.weights[i] * r * r * sec.radial[j][i] * w[i];
        }
        const double route2 = std::sqrt(sec.eigenvalues[j]) * std::sqrt(4.0 * M_PI) * ip;
        CHECK(route2 == doctest::Approx(coeffs[j]).epsilon(1e-8));
    }
}

TEST_CASE("pekar_field: free-space positivity and monotone far field") {
    auto g = make_grid(1500, 20.0, GridKind::Uniform);
    auto psi = normalized_gaussian(g, 0.25);
    auto phi = pekar_field_free(psi);
    for (double v : phi.values) CHECK(v >= 0.0);
    std::size_t i5 = 0;
    while (g.points[i5] < 5.0) ++i5;
    for (std::size_t i = i5; i + 50 < g.size(); i += 50)
        CHECK(phi.values[i] > phi.values[i + 50]);
}

TEST_CASE("mass constant: identity, closed form, scaling") {
    const auto& sol = default_free_solution();
    auto mc = mass_constant(sol);
    CHECK(std::abs(mc.c_psi4 - mc.c_gradphi) / mc.c_psi4 <= 1e-3);

    // Gaussian trial: c_psi4 = (8 pi / 3) (a/pi)^{3/2}
    auto g = make_grid(2000, 25.0, GridKind::Uniform);
    const double a = 1.0 / (9.0 * M_PI);
    PekarSolution trial;
    trial.domain = PekarDomain::Free;
    trial.psi = normalized_gaussian(g, a);
    trial.phi = pekar_field_free(trial.psi);
    auto mt = mass_constant(trial);
    CHECK(mt.c_psi4 ==
          doctest::Approx(8.0 * M_PI / 3.0 * std::pow(a / M_PI, 1.5)).epsilon(1e-8));
    CHECK(mt.c_gradphi == doctest::Approx(mt.c_psi4).epsilon(1e-4));

    // dilation scaling: psi_lambda = lambda^{3/2} psi(lambda x) => c_psi4 ~ lambda^3
    PekarSolution trial2;
    trial2.domain = PekarDomain::Free;
    trial2.psi = normalized_gaussian(g, 4.0 * a);  // lambda = 2
    trial2.phi = pekar_field_free(trial2.psi);
    CHECK(mass_constant(trial2).c_psi4 == doctest::Approx(8.0 * mt.c_psi4).epsilon(1e-6));
}

TEST_CASE("momentum-space identities of the free minimizer") {
    const auto& sol = default_free_solution();
    auto mi = mass_identity_checks(sol);
    CHECK_FALSE(mi.fourier_warning);
    CHECK(mi.moment_residual <= 1e-3);
    CHECK(mi.el_fourier_residual <= 1e-5);

    // a 1% admixture of the first excited mode inflates the residual >= 10x
    auto psi1 = first_excited_mode(sol);
    PekarSolution pert = sol;
    for (std::size_t i = 0; i < pert.psi.size(); ++i)
        pert.psi.values[i] = sol.psi.values[i] + 0.01 * psi1.values[i];
    const double nn = l2_norm(pert.psi);
    for (auto& v : pert.psi.values) v /= nn;
    auto eb = pekar_energy_free(pert.psi);
    pert.kinetic = eb.kinetic;
    pert.coulomb = eb.coulomb;
    pert.energy = eb.energy;
    pert.phi_norm2 = eb.coulomb;
    pert.mu = pert.energy - pert.phi_norm2;
    auto mip = mass_identity_checks(pert);
    CHECK(mip.el_fourier_residual >= 10.0 * mi.el_fourier_residual);
}
