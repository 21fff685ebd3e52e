#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "polaron/errors.hpp"
#include "polaron/fock.hpp"

namespace polaron {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

struct CellKey {
    int i, j, k;
    bool operator==(const CellKey& o) const { return i == o.i && j == o.j && k == o.k; }
};
struct CellHash {
    std::size_t operator()(const CellKey& c) const {
        return (static_cast<std::size_t>(c.i + 512) << 20) ^
               (static_cast<std::size_t>(c.j + 512) << 10) ^
               static_cast<std::size_t>(c.k + 512);
    }
};

}  // namespace

ModeSet discretize_modes_free(double alpha, double K_cut, double eps,
                              std::size_t max_modes) {
    if (!(K_cut > eps) || !(eps > 0.0))
        throw ParameterError("discretize_modes_free: need K_cut > eps > 0");
    if (alpha < 0.0) throw ParameterError("discretize_modes_free: alpha must be >= 0");

    // enumerate cells [m eps, (m+1) eps)^3 intersecting the ball
    const int m = static_cast<int>(std::ceil(K_cut / eps));
    std::vector<CellKey> cells;
    for (int i = -m - 1; i <= m; ++i)
        for (int j = -m - 1; j <= m; ++j)
            for (int k = -m - 1; k <= m; ++k) {
                double d2 = 0.0;
                const int idx[3] = {i, j, k};
                for (int a = 0; a < 3; ++a) {
                    const double lo = idx[a] * eps, hi = lo + eps;
                    const double nearest = std::clamp(0.0, lo, hi);
                    d2 += nearest * nearest;
                }
                if (d2 < K_cut * K_cut) cells.push_back({i, j, k});
            }
    if (cells.size() > max_modes)
        throw BudgetError("discretize_modes_free: " + std::to_string(cells.size()) +
                          " modes exceed the cap of " + std::to_string(max_modes));

    std::unordered_map<CellKey, std::size_t, CellHash> slot;
    slot.reserve(cells.size() * 2);
    for (std::size_t a = 0; a < cells.size(); ++a) slot.emplace(cells[a], a);
    std::vector<double> measure(cells.size(), 0.0);  // int_cell cap ball |k|^-2

    // shared ray sweep: int_{C cap B} |k|^-2 d^3k = int dOmega len(C along omega),
    // so the cell measures always sum to exactly 4 pi K_cut.
    const int n_mu = 240, n_phi = 480;
    std::vector<double> mu, wmu;
    gauss_legendre(n_mu, mu, wmu);
    for (int im = 0; im < n_mu; ++im) {
        const double st = std::sqrt(std::max(0.0, 1.0 - mu[im] * mu[im]));
        for (int ip = 0; ip < n_phi; ++ip) {
            const double phi = 2.0 * M_PI * (ip + 0.5) / n_phi;
            const double wdir = wmu[im] * (2.0 * M_PI / n_phi);
            const double om[3] = {st * std::cos(phi), st * std::sin(phi), mu[im]};
            // DDA from the origin corner out to t = K_cut
            int cell[3];
            double tmax[3];
            for (int a = 0; a < 3; ++a) {
                if (std::abs(om[a]) < 1e-300) {
                    cell[a] = 0;
                    tmax[a] = 1e300;
                } else {
                    cell[a] = om[a] > 0.0 ? 0 : -1;
                    tmax[a] = eps / std::abs(om[a]);
                }
            }
            double t = 0.0;
            while (t < K_cut) {
                int amin = 0;
                if (tmax[1] < tmax[amin]) amin = 1;
                if (tmax[2] < tmax[amin]) amin = 2;
                const double tn = std::min(tmax[amin], K_cut);
                auto it = slot.find({cell[0], cell[1], cell[2]});
                if (it != slot.end()) measure[it->second] += wdir * (tn - t);
                t = tn;
                if (tmax[amin] >= K_cut) break;
                tmax[amin] += eps / std::abs(om[amin]);
                cell[amin] += om[amin] > 0.0 ? 1 : -1;
            }
        }
    }

    // symmetrize over k -> -k cell pairs (cell (i,j,k) <-> (-i-1,-j-1,-k-1))
    for (std::size_t a = 0; a < cells.size(); ++a) {
        const CellKey c = cells[a];
        const CellKey cm{-c.i - 1, -c.j - 1, -c.k - 1};
        auto it = slot.find(cm);
        if (it != slot.end() && it->second > a) {
            const double avg = 0.5 * (measure[a] + measure[it->second]);
            measure[a] = avg;
            measure[it->second] = avg;
        }
    }

    ModeSet ms;
    ms.alpha = alpha;
    ms.K_cut = K_cut;
    ms.eps = eps;
    const double cpl = alpha / (2.0 * M_PI * M_PI);
    for (std::size_t a = 0; a < cells.size(); ++a) {
        if (measure[a] <= 0.0) continue;
        FiberMode md;
        md.k = {(cells[a].i + 0.5) * eps, (cells[a].j + 0.5) * eps, (cells[a].k + 0.5) * eps};
        const double kc = std::sqrt(md.k[0] * md.k[0] + md.k[1] * md.k[1] + md.k[2] * md.k[2]);
        md.core = kc < K_cut;
        md.g = std::sqrt(cpl * measure[a]);
        ms.sum_g2 += cpl * measure[a];
        if (md.core)
            ++ms.cells_core;
        else
            ++ms.cells_partial;
        ms.modes.push_back(md);
    }
    return ms;
}

ConfinedModeSet modes_from_ball(const BallBasis& basis, double Lambda,
                                CutoffConvention convention) {
    if (!(Lambda > 0.0)) throw ParameterError("modes_from_ball: Lambda must be positive");
    const double e_cut = (convention == CutoffConvention::Momentum) ? Lambda * Lambda : Lambda;
    if (e_cut > basis.e_max + 1e-12)
        throw ParameterError("modes_from_ball: basis energy range below the cutoff");
    ConfinedModeSet out;
    out.Lambda = Lambda;
    out.convention = convention;
    for (const auto& sec : basis.sectors) {
        for (std::size_t n = 0; n < sec.size(); ++n) {
            const double e = sec.eigenvalues[n];
            if (e > e_cut) break;
            ConfinedMode m;
            m.l = sec.l;
            m.n = static_cast<int>(n) + 1;
            m.e = e;
            m.g = 1.0 / std::sqrt(e);
            m.degeneracy = 2 * sec.l + 1;
            out.total_count += static_cast<std::size_t>(m.degeneracy);
            out.modes.push_back(m);
        }
    }
    if (out.modes.empty()) throw DomainError("modes_from_ball: no modes below the cutoff");
    return out;
}

}  // namespace polaron
