#pragma once

#include <vector>

#include "polaron/grid.hpp"

namespace polaron {

// One angular-momentum sector of the Dirichlet Laplacian on a ball:
// radial eigenfunctions u_{l,n}(r) = N j_l(j_{l,n} r/R) with
// int_0^R u^2 r^2 dr = 1, eigenvalues e_{l,n} = (j_{l,n}/R)^2.
// The 3D eigenfunction is u_{l,n}(r) Y_lm, degeneracy 2l+1.
struct BallSector {
    int l = 0;
    std::vector<double> zeros;                     // j_{l,n}
    std::vector<double> eigenvalues;               // e_{l,n}, strictly increasing
    std::vector<std::vector<double>> radial;       // u_{l,n} on the grid
    std::size_t size() const { return eigenvalues.size(); }
};

struct BallBasis {
    double radius = 0.0;
    int l_max = 0;
    double e_max = 0.0;
    RadialGrid grid;
    std::vector<BallSector> sectors;  // indexed by l = 0..l_max

    const BallSector& sector(int l) const { return sectors.at(static_cast<std::size_t>(l)); }
    std::size_t total_modes() const;  // counting 2l+1 degeneracy
};

// All eigenpairs with e_{l,n} <= e_max and l <= l_max. n_grid controls the
// sampling resolution of the radial eigenfunctions.
BallBasis ball_dirichlet_basis(double R, int l_max, double e_max, std::size_t n_grid = 2000);

// Variant with a fixed radial count per sector instead of an energy cutoff.
BallBasis ball_dirichlet_basis_fixed(double R, int l_max, std::size_t n_per_sector,
                                     std::size_t n_grid = 2000);

}  // namespace polaron
