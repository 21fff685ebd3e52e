#include "polaron/ball_basis.hpp"

#include <cmath>

#include "polaron/bessel.hpp"
#include "polaron/errors.hpp"

namespace polaron {

namespace {

BallSector make_sector(int l, double R, const std::vector<double>& zeros,
                       const RadialGrid& grid) {
    BallSector s;
    s.l = l;
    s.zeros = zeros;
    s.eigenvalues.reserve(zeros.size());
    s.radial.reserve(zeros.size());
    for (double z : zeros) {
        s.eigenvalues.push_back((z / R) * (z / R));
        // closed-form normalization: int_0^R j_l(z r/R)^2 r^2 dr = (R^3/2) j_{l+1}(z)^2
        const double nrm = std::sqrt(2.0 / (R * R * R)) / std::abs(spherical_jl(l + 1, z));
        std::vector<double> u(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            u[i] = nrm * spherical_jl(l, z * grid.points[i] / R);
        s.radial.push_back(std::move(u));
    }
    return s;
}

}  // namespace

std::size_t BallBasis::total_modes() const {
    std::size_t n = 0;
    for (const auto& s : sectors) n += s.size() * static_cast<std::size_t>(2 * s.l + 1);
    return n;
}

BallBasis ball_dirichlet_basis(double R, int l_max, double e_max, std::size_t n_grid) {
    if (!(R > 0.0)) throw ParameterError("ball_dirichlet_basis: R must be positive");
    if (l_max < 0) throw ParameterError("ball_dirichlet_basis: l_max must be >= 0");
    const double e01 = (M_PI / R) * (M_PI / R);
    if (!(e_max >= e01))
        throw DomainError("ball_dirichlet_basis: e_max below the lowest eigenvalue (pi/R)^2");

    BallBasis b;
    b.radius = R;
    b.l_max = l_max;
    b.e_max = e_max;
    b.grid = make_grid(n_grid, R, GridKind::Uniform);
    const double zmax = std::sqrt(e_max) * R;
    for (int l = 0; l <= l_max; ++l) {
        // count zeros below zmax; zeros grow ~ pi per index
        std::size_t guess = static_cast<std::size_t>(zmax / M_PI) + 2;
        auto zeros = spherical_bessel_zeros(l, guess);
        while (!zeros.empty() && zeros.back() > zmax) zeros.pop_back();
        if (zeros.empty()) break;  // higher sectors are empty too
        b.sectors.push_back(make_sector(l, R, zeros, b.grid));
    }
    if (b.sectors.empty()) throw DomainError("ball_dirichlet_basis: empty basis");
    b.l_max = static_cast<int>(b.sectors.size()) - 1;
    return b;
}

BallBasis ball_dirichlet_basis_fixed(double R, int l_max, std::size_t n_per_sector,
                                     std::size_t n_grid) {
    if (!(R > 0.0)) throw ParameterError("ball_dirichlet_basis_fixed: R must be positive");
    if (l_max < 0 || n_per_sector == 0)
        throw ParameterError("ball_dirichlet_basis_fixed: invalid sector request");
    BallBasis b;
    b.radius = R;
    b.l_max = l_max;
    b.grid = make_grid(n_grid, R, GridKind::Uniform);
    double emax = 0.0;
    for (int l = 0; l <= l_max; ++l) {
        auto zeros = spherical_bessel_zeros(l, n_per_sector);
        auto sec = make_sector(l, R, zeros, b.grid);
        emax = std::max(emax, sec.eigenvalues.back());
        b.sectors.push_back(std::move(sec));
    }
    b.e_max = emax;
    return b;
}

}  // namespace polaron
