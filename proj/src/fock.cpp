#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "polaron/errors.hpp"
#include "polaron/fock.hpp"

namespace polaron {

// ---------------------------------------------------------------------------
// FockBasis
// ---------------------------------------------------------------------------

double FockBasis::dimension_estimate(std::size_t n_modes, int max_phonons) {
    double dim = 0.0, c = 1.0;
    for (int t = 0; t <= max_phonons; ++t) {
        if (t > 0) c *= static_cast<double>(n_modes + t - 1) / static_cast<double>(t);
        dim += c;
    }
    return dim;
}

FockBasis::FockBasis(std::size_t n_modes, int max_phonons, std::size_t budget)
    : n_(n_modes), m_(max_phonons) {
    if (n_modes == 0 || max_phonons < 0) throw ParameterError("FockBasis: empty basis request");
    const double est = dimension_estimate(n_modes, max_phonons);
    if (est > static_cast<double>(budget))
        throw BudgetError("FockBasis: dimension " + std::to_string(est) +
                          " exceeds budget " + std::to_string(budget));

    // binomial table C(i, k) for the multiset ranking
    const std::size_t imax = n_modes + static_cast<std::size_t>(max_phonons) + 2;
    binom_.assign(imax + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(max_phonons) + 2, 0));
    for (std::size_t i = 0; i <= imax; ++i) {
        binom_[i][0] = 1;
        for (std::size_t k = 1; k <= static_cast<std::size_t>(max_phonons) + 1; ++k) {
            if (k > i) break;
            binom_[i][k] = (i == 0) ? 0 : binom_[i - 1][k - 1] + binom_[i - 1][k];
        }
    }

    offsets_.assign(static_cast<std::size_t>(max_phonons) + 2, 0);
    states_.reserve(static_cast<std::size_t>(est));
    std::vector<std::uint16_t> cur;
    for (int t = 0; t <= max_phonons; ++t) {
        offsets_[static_cast<std::size_t>(t)] = states_.size();
        // enumerate non-decreasing sequences of length t over [0, n)
        cur.assign(static_cast<std::size_t>(t), 0);
        if (t == 0) {
            states_.push_back(cur);
        } else {
            while (true) {
                states_.push_back(cur);
                int pos = t - 1;
                while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n_ - 1) --pos;
                if (pos < 0) break;
                const std::uint16_t v = static_cast<std::uint16_t>(cur[static_cast<std::size_t>(pos)] + 1);
                for (int q = pos; q < t; ++q) cur[static_cast<std::size_t>(q)] = v;
            }
        }
    }
    offsets_[static_cast<std::size_t>(max_phonons) + 1] = states_.size();
    dim_ = states_.size();
}

std::size_t FockBasis::rank_multiset(const std::vector<std::uint16_t>& s) const {
    // map to a strictly increasing combination and rank lexicographically
    const std::size_t t = s.size();
    if (t == 0) return 0;
    const std::size_t nn = n_ + t - 1;  // combinations from [0, nn)
    std::size_t rank = 0;
    long prev = -1;
    for (std::size_t a = 0; a < t; ++a) {
        const long ca = static_cast<long>(s[a]) + static_cast<long>(a);
        const std::size_t k = t - a;  // slots left including this one
        // sum over x in (prev, ca) of C(nn-1-x, k-1) = C(nn-prev-1, k) - C(nn-ca, k)
        rank += binom_[nn - static_cast<std::size_t>(prev) - 1][k] -
                binom_[nn - static_cast<std::size_t>(ca)][k];
        prev = ca;
    }
    return rank;
}

std::size_t FockBasis::index_of(const std::vector<std::uint16_t>& multiset) const {
    const std::size_t t = multiset.size();
    if (t > static_cast<std::size_t>(m_)) throw ParameterError("index_of: too many phonons");
    return offsets_[t] + rank_multiset(multiset);
}

// ---------------------------------------------------------------------------
// SparseHamiltonian
// ---------------------------------------------------------------------------

void SparseHamiltonian::add(std::uint32_t i, std::uint32_t j, double v) {
    if (i > j) std::swap(i, j);
    rows.push_back(i);
    cols.push_back(j);
    values.push_back(v);
}

bool SparseHamiltonian::diagonal_only() const {
    for (std::size_t a = 0; a < rows.size(); ++a)
        if (rows[a] != cols[a] && values[a] != 0.0) return false;
    return true;
}

void SparseHamiltonian::apply(const double* x, double* y) const {
    for (std::size_t i = 0; i < dimension; ++i) y[i] = 0.0;
    for (std::size_t a = 0; a < rows.size(); ++a) {
        const std::uint32_t i = rows[a], j = cols[a];
        const double v = values[a];
        y[i] += v * x[j];
        if (i != j) y[j] += v * x[i];
    }
}

// ---------------------------------------------------------------------------
// assembly
// ---------------------------------------------------------------------------

SparseHamiltonian assemble_fiber_hamiltonian(const ModeSet& modes, double alpha,
                                             const std::array<double, 3>& P, int max_phonons,
                                             std::size_t budget) {
    if (max_phonons < 1) throw ParameterError("assemble_fiber_hamiltonian: M must be >= 1");
    const std::size_t N = modes.modes.size();
    FockBasis basis(N, max_phonons, budget);

    SparseHamiltonian H;
    H.dimension = basis.dimension();
    H.meta.model = "fiber";
    H.meta.alpha = alpha;
    H.meta.P = P;
    H.meta.max_phonons = max_phonons;
    H.meta.n_modes = N;
    H.meta.cutoff = modes.K_cut;
    H.meta.units = "original";

    std::vector<std::uint16_t> raised;
    for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
        const auto& s = basis.state(idx);
        double kx = 0.0, ky = 0.0, kz = 0.0;
        for (std::uint16_t j : s) {
            kx += modes.modes[j].k[0];
            ky += modes.modes[j].k[1];
            kz += modes.modes[j].k[2];
        }
        const double px = P[0] - kx, py = P[1] - ky, pz = P[2] - kz;
        H.add(static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx),
              px * px + py * py + pz * pz + static_cast<double>(s.size()));
        if (static_cast<int>(s.size()) < max_phonons) {
            for (std::uint16_t j = 0; j < N; ++j) {
                const double g = modes.modes[j].g;
                if (g == 0.0) continue;
                raised = s;
                raised.insert(std::upper_bound(raised.begin(), raised.end(), j), j);
                const std::size_t r = basis.index_of(raised);
                const double nj = static_cast<double>(std::count(s.begin(), s.end(), j));
                H.add(static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(r),
                      -g * std::sqrt(nj + 1.0));
            }
        }
    }
    return H;
}

double interval_triple_product(double L, int a, int j, int b) {
    if ((a + j + b) % 2 == 0) return 0.0;
    // int_0^pi sin(au) sin(ju) sin(bu) du for odd a+j+b, singular terms drop
    auto term = [&](int m) -> double {
        const long d = static_cast<long>(b) * b - static_cast<long>(m) * m;
        if (d == 0) return 0.0;
        return static_cast<double>(b) / static_cast<double>(d);
    };
    const double I = term(a - j) - term(a + j);
    // modes sqrt(2/L) sin(n pi x / L): (2/L)^{3/2} * (L/pi) * I
    return std::pow(2.0 / L, 1.5) * (L / M_PI) * I;
}

namespace {

SparseHamiltonian assemble_confined(const std::vector<double>& e_el,
                                    const std::vector<double>& e_ph,
                                    const std::vector<std::vector<std::vector<double>>>& T,
                                    double alpha, int max_phonons, std::size_t budget,
                                    HamiltonianMeta meta) {
    if (!(alpha > 0.0)) throw ParameterError("confined assembly: alpha must be positive");
    const std::size_t n_el = e_el.size();
    const std::size_t N = e_ph.size();
    FockBasis basis(N, max_phonons, budget / std::max<std::size_t>(n_el, 1));
    const std::size_t dim = basis.dimension() * n_el;
    if (dim > budget) throw BudgetError("confined assembly: dimension exceeds budget");

    SparseHamiltonian H;
    H.dimension = dim;
    H.meta = std::move(meta);
    H.meta.alpha = alpha;
    H.meta.max_phonons = max_phonons;
    H.meta.n_modes = N;
    H.meta.n_el = n_el;
    H.meta.units = "strong-coupling";

    const double ai = 1.0 / alpha;
    const double ai2 = ai * ai;
    std::vector<std::uint16_t> raised;
    for (std::size_t ph = 0; ph < basis.dimension(); ++ph) {
        const auto& s = basis.state(ph);
        const double field = ai2 * static_cast<double>(s.size());
        for (std::size_t a = 0; a < n_el; ++a)
            H.add(static_cast<std::uint32_t>(ph * n_el + a),
                  static_cast<std::uint32_t>(ph * n_el + a), e_el[a] + field);
        if (static_cast<int>(s.size()) < max_phonons) {
            for (std::uint16_t j = 0; j < N; ++j) {
                raised = s;
                raised.insert(std::upper_bound(raised.begin(), raised.end(), j), j);
                const std::size_t r = basis.index_of(raised);
                const double fac =
                    -ai * std::sqrt(static_cast<double>(std::count(s.begin(), s.end(), j)) + 1.0);
                for (std::size_t a = 0; a < n_el; ++a)
                    for (std::size_t b = 0; b < n_el; ++b) {
                        const double v = fac * T[j][a][b];
                        if (v == 0.0) continue;
                        H.add(static_cast<std::uint32_t>(ph * n_el + a),
                              static_cast<std::uint32_t>(r * n_el + b), v);
                    }
            }
        }
    }
    return H;
}

}  // namespace

SparseHamiltonian assemble_confined_ball(const BallBasis& basis, const ConfinedModeSet& modes,
                                         double alpha, int max_phonons, std::size_t n_el,
                                         std::size_t budget) {
    const auto& sec = basis.sector(0);
    if (n_el > sec.size())
        throw ParameterError("assemble_confined_ball: n_el exceeds the l=0 sector");
    std::vector<double> e_el(sec.eigenvalues.begin(), sec.eigenvalues.begin() + n_el);

    // l=0 phonon profiles only (radial truncation of the confined model)
    std::vector<const ConfinedMode*> ph;
    for (const auto& m : modes.modes)
        if (m.l == 0) ph.push_back(&m);
    if (ph.empty()) throw DomainError("assemble_confined_ball: no l=0 modes below cutoff");

    const RadialGrid& g = basis.grid;
    std::vector<double> e_ph(ph.size());
    std::vector<std::vector<std::vector<double>>> T(
        ph.size(), std::vector<std::vector<double>>(n_el, std::vector<double>(n_el, 0.0)));
    const double ang = 1.0 / std::sqrt(4.0 * M_PI);
    for (std::size_t j = 0; j < ph.size(); ++j) {
        e_ph[j] = ph[j]->e;
        const auto& uj = sec.radial[static_cast<std::size_t>(ph[j]->n - 1)];
        for (std::size_t a = 0; a < n_el; ++a)
            for (std::size_t b = a; b < n_el; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const double r = g.points[i];
                    s += g.weights[i] * r * r * sec.radial[a][i] * uj[i] * sec.radial[b][i];
                }
                s *= ang * ph[j]->g;  // coupling e_j^{-1/2} folded into the table
                T[j][a][b] = s;
                T[j][b][a] = s;
            }
    }
    HamiltonianMeta meta;
    meta.model = "confined-ball";
    meta.cutoff = modes.Lambda;
    meta.cutoff_convention =
        modes.convention == CutoffConvention::Momentum ? "momentum" : "energy";
    return assemble_confined(e_el, e_ph, T, alpha, max_phonons, budget, std::move(meta));
}

SparseHamiltonian assemble_confined_interval(double L, std::size_t n_el,
                                             std::size_t n_phonon_modes, double alpha,
                                             int max_phonons, std::size_t budget) {
    if (!(L > 0.0)) throw ParameterError("assemble_confined_interval: L must be positive");
    std::vector<double> e_el(n_el), e_ph(n_phonon_modes);
    for (std::size_t a = 0; a < n_el; ++a) {
        const double k = (a + 1) * M_PI / L;
        e_el[a] = k * k;
    }
    std::vector<std::vector<std::vector<double>>> T(
        n_phonon_modes, std::vector<std::vector<double>>(n_el, std::vector<double>(n_el, 0.0)));
    for (std::size_t j = 0; j < n_phonon_modes; ++j) {
        const double k = (j + 1) * M_PI / L;
        e_ph[j] = k * k;
        const double g = 1.0 / k;  // e_j^{-1/2}
        for (std::size_t a = 0; a < n_el; ++a)
            for (std::size_t b = 0; b < n_el; ++b)
                T[j][a][b] = g * interval_triple_product(L, static_cast<int>(a) + 1,
                                                         static_cast<int>(j) + 1,
                                                         static_cast<int>(b) + 1);
    }
    HamiltonianMeta meta;
    meta.model = "confined-interval";
    meta.cutoff = L;
    return assemble_confined(e_el, e_ph, T, alpha, max_phonons, budget, std::move(meta));
}

// ---------------------------------------------------------------------------
// ground state
// ---------------------------------------------------------------------------

GroundState ground_state(const SparseHamiltonian& H, double tol, std::uint64_t seed) {
    if (H.dimension == 0) throw ParameterError("ground_state: empty Hamiltonian");
    const std::size_t n = H.dimension;

    if (H.diagonal_only()) {
        std::vector<double> diag(n, 0.0);
        for (std::size_t a = 0; a < H.rows.size(); ++a)
            if (H.rows[a] == H.cols[a]) diag[H.rows[a]] += H.values[a];
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (diag[i] < diag[best]) best = i;
        GroundState gs;
        gs.energy = diag[best];
        gs.vector.assign(n, 0.0);
        gs.vector[best] = 1.0;
        gs.residual = 0.0;
        return gs;
    }

    // deterministic vacuum-dominated start
    std::vector<double> v(n);
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& x : v) x = 1e-3 * u(rng);
        v[0] += 1.0;
        double s = 0.0;
        for (double x : v) s += x * x;
        s = std::sqrt(s);
        for (auto& x : v) x /= s;
    }

    const int m_max = static_cast<int>(std::min<std::size_t>(n, 180));
    const int restarts = 10;
    GroundState gs;
    std::vector<std::vector<double>> basis;
    std::vector<double> w(n), alpha_d, beta_d;
    double E = 0.0;
    int total_it = 0;

    for (int cycle = 0; cycle < restarts; ++cycle) {
        basis.clear();
        alpha_d.clear();
        beta_d.clear();
        basis.push_back(v);
        for (int k = 0; k < m_max; ++k) {
            H.apply(basis.back().data(), w.data());
            double a = 0.0;
            for (std::size_t i = 0; i < n; ++i) a += basis.back()[i] * w[i];
            alpha_d.push_back(a);
            // full reorthogonalization, two passes
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : basis) {
                    double c = 0.0;
                    for (std::size_t i = 0; i < n; ++i) c += q[i] * w[i];
                    for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
                }
            double b = 0.0;
            for (std::size_t i = 0; i < n; ++i) b += w[i] * w[i];
            b = std::sqrt(b);
            ++total_it;
            if (b < 1e-14 || k == m_max - 1) break;
            beta_d.push_back(b);
            std::vector<double> q(n);
            for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / b;
            basis.push_back(std::move(q));
        }
        // tridiagonal Ritz problem
        const int m = static_cast<int>(alpha_d.size());
        Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            Tm(i, i) = alpha_d[static_cast<std::size_t>(i)];
            if (i + 1 < m) {
                Tm(i, i + 1) = beta_d[static_cast<std::size_t>(i)];
                Tm(i + 1, i) = beta_d[static_cast<std::size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
        E = es.eigenvalues()(0);
        std::vector<double> y(n, 0.0);
        for (int i = 0; i < m; ++i) {
            const double c = es.eigenvectors()(i, 0);
            for (std::size_t q = 0; q < n; ++q) y[q] += c * basis[static_cast<std::size_t>(i)][q];
        }
        double s = 0.0;
        for (double x : y) s += x * x;
        s = std::sqrt(s);
        for (auto& x : y) x /= s;
        H.apply(y.data(), w.data());
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = w[i] - E * y[i];
            r2 += r * r;
        }
        gs.residual = std::sqrt(r2);
        gs.energy = E;
        gs.vector = y;
        gs.iterations = total_it;
        if (gs.residual <= tol * std::max(1.0, std::abs(E))) return gs;
        v = std::move(y);
    }
    throw ConvergenceError("ground_state: residual " + std::to_string(gs.residual) +
                           " after " + std::to_string(total_it) + " Lanczos steps");
}

// ---------------------------------------------------------------------------
// dispersion
// ---------------------------------------------------------------------------

DispersionCurve dispersion(const ModeSet& modes, double alpha,
                           const std::vector<double>& P_values, int max_phonons,
                           double tol, std::size_t budget) {
    std::vector<double> Ps = P_values;
    std::sort(Ps.begin(), Ps.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (Ps.empty() || std::abs(Ps.front()) > 1e-14)
        throw ParameterError("dispersion: P_values must include 0");
    std::size_t nonzero = 0;
    for (double p : Ps)
        if (std::abs(p) > 1e-14) ++nonzero;
    if (nonzero < 2)
        throw ParameterError("dispersion: need at least two nonzero P values");

    DispersionCurve out;
    out.alpha = alpha;
    for (double p : Ps) {
        auto H = assemble_fiber_hamiltonian(modes, alpha, {0.0, 0.0, p}, max_phonons, budget);
        auto gs = ground_state(H, tol);
        out.P.push_back(p);
        out.E.push_back(gs.energy);
        out.meta = H.meta;
    }
    const double E0 = out.E.front();
    for (std::size_t i = 1; i < out.E.size(); ++i)
        if (out.E[i] < E0 - 1e-9)
            throw ConsistencyError("dispersion: E(P) below E(0); ground state must sit at P=0");

    // mass from the two smallest nonzero |P|: m(P) = m + c P^2 eliminated
    double p1 = 0.0, p2 = 0.0, m1 = 0.0, m2 = 0.0;
    int found = 0;
    for (std::size_t i = 0; i < out.P.size() && found < 2; ++i) {
        const double p = std::abs(out.P[i]);
        if (p < 1e-14) continue;
        const double dE = out.E[i] - E0;
        const double m = p * p / (2.0 * dE);
        if (found == 0) {
            p1 = p;
            m1 = m;
        } else {
            p2 = p;
            m2 = m;
        }
        ++found;
    }
    out.mass_estimate = (m1 * p2 * p2 - m2 * p1 * p1) / (p2 * p2 - p1 * p1);
    out.mass_fit_residual = std::abs(m1 - m2) / std::abs(out.mass_estimate);
    return out;
}

double coherent_upper_bound(const PekarSolution& sol, double alpha) {
    if (sol.domain != PekarDomain::Free)
        throw DomainError("coherent_upper_bound: free-space solution required");
    return alpha * alpha * sol.energy;
}

double coherent_upper_bound_trial(const RadialFunction& psi, double alpha) {
    return alpha * alpha * pekar_energy_free(psi).energy;
}

}  // namespace polaron
