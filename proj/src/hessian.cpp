#include "polaron/hessian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "polaron/bessel.hpp"
#include "polaron/errors.hpp"
#include "polaron/radial_ops.hpp"

namespace polaron {

namespace {

Eigen::VectorXd r2w_vector(const RadialGrid& g) {
    Eigen::VectorXd v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        v(i) = g.weights[i] * g.points[i] * g.points[i];
    return v;
}

// electron Hamiltonian in sector l: diag(e) + <u_a| V |u_b>
Eigen::MatrixXd electron_matrix(const BallBasis& basis, int l, std::size_t n_el,
                                const std::vector<double>& V) {
    const auto& sec = basis.sector(l);
    if (n_el > sec.size())
        throw ParameterError("electron basis larger than available sector modes");
    const RadialGrid& g = basis.grid;
    const std::size_t ng = g.size();
    Eigen::MatrixXd U(n_el, ng);
    for (std::size_t a = 0; a < n_el; ++a)
        for (std::size_t i = 0; i < ng; ++i) U(a, i) = sec.radial[a][i];
    Eigen::VectorXd vw(ng);
    for (std::size_t i = 0; i < ng; ++i)
        vw(i) = V[i] * g.weights[i] * g.points[i] * g.points[i];
    Eigen::MatrixXd H = U * vw.asDiagonal() * U.transpose();
    for (std::size_t a = 0; a < n_el; ++a) H(a, a) += sec.eigenvalues[a];
    return H;
}

std::vector<double> potential_from_coeffs(const BallBasis& basis,
                                          const std::vector<double>& phi_coeffs, int l,
                                          double coupling) {
    const auto& sec = basis.sector(l);
    const RadialGrid& g = basis.grid;
    if (phi_coeffs.size() > sec.size())
        throw ParameterError("field coefficient vector longer than sector");
    std::vector<double> V(g.size(), 0.0);
    const double s4pi = std::sqrt(4.0 * M_PI);
    for (std::size_t j = 0; j < phi_coeffs.size(); ++j) {
        const double w = -2.0 * coupling * phi_coeffs[j] / std::sqrt(sec.eigenvalues[j]) / s4pi;
        for (std::size_t i = 0; i < g.size(); ++i) V[i] += w * sec.radial[j][i];
    }
    return V;
}

}  // namespace

std::vector<double> electron_potential(const PekarSolution& sol, const BallBasis& basis) {
    const RadialGrid& g = basis.grid;
    std::vector<double> rho(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) rho[i] = sol.psi.values[i] * sol.psi.values[i];
    if (sol.domain == PekarDomain::Ball && sol.kernel == BallKernel::DirichletGreen) {
        // V = -2 sum_j e_j^{-1} <phi_j, rho> u_j / sqrt(4pi)
        const auto& sec = basis.sector(0);
        std::vector<double> V(g.size(), 0.0);
        const double s4pi = std::sqrt(4.0 * M_PI);
        for (std::size_t j = 0; j < sec.size(); ++j) {
            double m = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double r = g.points[i];
                m += g.weights[i] * r * r * sec.radial[j][i] * rho[i];
            }
            m *= s4pi;
            const double w = -2.0 * m / sec.eigenvalues[j] / s4pi;
            for (std::size_t i = 0; i < g.size(); ++i) V[i] += w * sec.radial[j][i];
        }
        return V;
    }
    // free kernel: V = -2 rho * 1/|x|
    auto V = newton_potential(RadialFunction(g, rho, 0));
    for (auto& v : V.values) v *= -2.0;
    return V.values;
}

std::vector<double> electron_levels(const PekarSolution& sol, const BallBasis& basis, int l,
                                    std::size_t n_el) {
    auto V = electron_potential(sol, basis);
    Eigen::MatrixXd H = electron_matrix(basis, l, n_el, V);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + n_el);
}

Eigen::MatrixXd build_K(const PekarSolution& sol, const BallBasis& basis, int l,
                        std::size_t n_modes, std::size_t n_el, double coupling2) {
    const auto& sec = basis.sector(l);
    if (n_modes > sec.size()) throw ParameterError("build_K: n_modes exceeds sector size");
    const RadialGrid& g = basis.grid;
    const std::size_t ng = g.size();

    auto V = electron_potential(sol, basis);
    Eigen::MatrixXd H = electron_matrix(basis, l, n_el, V);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd& vals = es.eigenvalues();

    // W(a, n) = int u^el_a S u^field_n r^2 dr
    Eigen::MatrixXd W(n_el, n_modes);
    for (std::size_t a = 0; a < n_el; ++a) {
        for (std::size_t m = 0; m < n_modes; ++m) {
            double s = 0.0;
            for (std::size_t i = 0; i < ng; ++i) {
                const double r = g.points[i];
                s += g.weights[i] * r * r * sec.radial[a][i] * sol.psi.values[i] *
                     sec.radial[m][i];
            }
            W(a, m) = s;
        }
    }
    Eigen::MatrixXd Wt = es.eigenvectors().transpose() * W;

    const std::size_t first = (l == 0) ? 1 : 0;  // Q drops the ground state in l=0
    for (std::size_t a = first; a < n_el; ++a)
        if (std::abs(vals(a) - sol.mu) < 1e-8)
            throw NumericalError("build_K: resolvent singularity, mu hits an electron level");

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n_modes, n_modes);
    for (std::size_t a = first; a < n_el; ++a) {
        const double w = 4.0 * coupling2 / (vals(a) - sol.mu);
        K.noalias() += w * Wt.row(a).transpose() * Wt.row(a);
    }
    for (std::size_t n = 0; n < n_modes; ++n)
        for (std::size_t m = 0; m < n_modes; ++m)
            K(n, m) /= std::sqrt(sec.eigenvalues[n] * sec.eigenvalues[m]);
    return K;
}

double kappa(const std::vector<double>& phi_coeffs, const BallBasis& basis,
             std::size_t n_el, double coupling2) {
    auto V = potential_from_coeffs(basis, phi_coeffs, 0, std::sqrt(coupling2));
    Eigen::MatrixXd H = electron_matrix(basis, 0, n_el, V);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    if (n_el >= 2) {
        const double gap = es.eigenvalues()(1) - es.eigenvalues()(0);
        if (gap < 1e-9)
            throw NumericalError("kappa: electron basis cannot resolve the ground gap");
    }
    return es.eigenvalues()(0);
}

double kappa_coupled(const std::vector<double>& phi0_coeffs,
                     const std::vector<double>& d_coeffs, int l,
                     const BallBasis& basis, std::size_t n_el, double coupling2) {
    if (l < 1) throw ParameterError("kappa_coupled: sector l must be >= 1");
    const double c = std::sqrt(coupling2);
    auto V0 = potential_from_coeffs(basis, phi0_coeffs, 0, c);
    Eigen::MatrixXd H0 = electron_matrix(basis, 0, n_el, V0);
    Eigen::MatrixXd Hl = electron_matrix(basis, l, n_el, V0);

    // Coupling block <u_0a Y00 | V_d | u_lb Ylm>.  The 1/sqrt(4pi) baked into
    // the synthesized radial profile cancels <Y00 Ylm Ylm> = 1/sqrt(4pi)
    // against the bare profile, so the plain radial integral is exact.
    auto Vd = potential_from_coeffs(basis, d_coeffs, l, c);
    const auto& s0 = basis.sector(0);
    const auto& sl = basis.sector(l);
    const RadialGrid& g = basis.grid;
    Eigen::MatrixXd B(n_el, n_el);
    for (std::size_t a = 0; a < n_el; ++a)
        for (std::size_t b = 0; b < n_el; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double r = g.points[i];
                s += g.weights[i] * r * r * s0.radial[a][i] * Vd[i] * sl.radial[b][i];
            }
            B(a, b) = s;
        }
    Eigen::MatrixXd H(2 * n_el, 2 * n_el);
    H.topLeftCorner(n_el, n_el) = H0;
    H.bottomRightCorner(n_el, n_el) = Hl;
    H.topRightCorner(n_el, n_el) = B;
    H.bottomLeftCorner(n_el, n_el) = B.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double fluctuation_trace(const std::vector<SectorReport>& sectors) {
    double total = 0.0;
    for (const auto& s : sectors) {
        for (double lam : s.eigenvalues)
            if (lam >= 1.0)
                throw ConsistencyError("fluctuation_trace: eigenvalue >= 1 in sector l=" +
                                       std::to_string(s.l) + " (non-degeneracy violated)");
        total += s.trace_contribution;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Green-function tail: per-sector tr K_l without radial basis truncation
// ---------------------------------------------------------------------------
namespace {

struct MarchResult {
    std::vector<double> val, lg;  // u(r_i) = val[i] * exp(lg[i])
};

// Numerov march for u'' = q(r) u on a uniform grid, outward from a power-law
// start (regular solution) or inward from u(R) = 0.
MarchResult numerov(const std::vector<double>& q, double h, int l, bool outward,
                    const std::vector<double>& r) {
    const std::size_t n = q.size();
    MarchResult m;
    m.val.assign(n, 0.0);
    m.lg.assign(n, 0.0);
    auto f = [&](std::size_t i) { return 1.0 - h * h * q[i] / 12.0; };
    double scale = 0.0;
    if (outward) {
        // u ~ r^{l+1} near the origin
        m.lg[0] = static_cast<double>(l + 1) * std::log(r[0]);
        m.val[0] = 1.0;
        m.lg[1] = m.lg[0];
        m.val[1] = std::exp(static_cast<double>(l + 1) * (std::log(r[1]) - std::log(r[0])));
        scale = m.lg[0];
        double up = m.val[0], uc = m.val[1];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double un = ((12.0 - 10.0 * f(i)) * uc - f(i - 1) * up) / f(i + 1);
            up = uc;
            uc = un;
            if (std::abs(uc) > 1e120) {
                up /= 1e120;
                uc /= 1e120;
                scale += std::log(1e120);
            }
            m.val[i + 1] = uc;
            m.lg[i + 1] = scale;
        }
    } else {
        m.val[n - 1] = 0.0;
        m.lg[n - 1] = 0.0;
        m.val[n - 2] = 1.0;
        m.lg[n - 2] = 0.0;
        double un = 0.0, uc = 1.0;
        for (std::size_t i = n - 2; i >= 1; --i) {
            double upv = ((12.0 - 10.0 * f(i)) * uc - f(i + 1) * un) / f(i - 1);
            un = uc;
            uc = upv;
            if (std::abs(uc) > 1e120) {
                un /= 1e120;
                uc /= 1e120;
                scale += std::log(1e120);
            }
            m.val[i - 1] = uc;
            m.lg[i - 1] = scale;
        }
    }
    return m;
}

// tr K_l = 4 c^2 iint G_coul(r,s) S(s) G_res(s,r) S(r) dr ds on a coarse grid,
// with G_coul the closed-form radial Dirichlet Coulomb kernel (u-repr) and
// G_res the (H_l - mu)^{-1} kernel from two Numerov solutions.
double kernel_sector_trace(int l, const std::vector<double>& r, double h,
                           const std::vector<double>& w, const std::vector<double>& S,
                           const std::vector<double>& V, double mu, double R,
                           double coupling2, bool dirichlet_coulomb) {
    const std::size_t n = r.size();
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i)
        q[i] = static_cast<double>(l) * (l + 1) / (r[i] * r[i]) + V[i] - mu;
    auto u1 = numerov(q, h, l, true, r);
    auto u2 = numerov(q, h, l, false, r);
    // Wronskian at the midpoint: W = u1 u2' - u1' u2 (times joint scale)
    const std::size_t k = n / 2;
    const double s1 = u1.lg[k], s2 = u2.lg[k];
    const double d1 = (u1.val[k + 1] * std::exp(u1.lg[k + 1] - s1) -
                       u1.val[k - 1] * std::exp(u1.lg[k - 1] - s1)) / (2.0 * h);
    const double d2 = (u2.val[k + 1] * std::exp(u2.lg[k + 1] - s2) -
                       u2.val[k - 1] * std::exp(u2.lg[k - 1] - s2)) / (2.0 * h);
    const double Wr = u1.val[k] * d2 - d1 * u2.val[k];  // * exp(s1+s2)
    const double logW = s1 + s2;

    const double lr_max = std::log(R);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double li = std::log(r[i]);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t lo = std::min(i, j), hi = std::max(i, j);
            const double llo = std::min(li, std::log(r[j]));
            const double lhi = std::max(li, std::log(r[j]));
            // Coulomb kernel in u-representation
            double gc = std::exp((l + 1) * llo - l * lhi) / (2.0 * l + 1.0);
            if (dirichlet_coulomb)
                gc *= 1.0 - std::exp((2.0 * l + 1.0) * (lhi - lr_max));
            // resolvent kernel u1(lo) u2(hi) / (-W)
            const double gr = u1.val[lo] * u2.val[hi] *
                              std::exp(u1.lg[lo] + u2.lg[hi] - logW) / (-Wr);
            acc += w[i] * w[j] * gc * S[j] * gr * S[i];
        }
    }
    return 4.0 * coupling2 * acc;
}

double lagrange_interp(const RadialGrid& g, const std::vector<double>& v, double x) {
    // cubic through the 4 nearest points
    const std::size_t n = g.size();
    std::size_t j = 0;
    {
        auto it = std::lower_bound(g.points.begin(), g.points.end(), x);
        j = static_cast<std::size_t>(it - g.points.begin());
    }
    std::size_t i0 = (j < 2) ? 0 : j - 2;
    if (i0 + 4 > n) i0 = n - 4;
    double out = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        double term = v[i0 + a];
        for (std::size_t b = 0; b < 4; ++b) {
            if (a == b) continue;
            term *= (x - g.points[i0 + b]) / (g.points[i0 + a] - g.points[i0 + b]);
        }
        out += term;
    }
    return out;
}

struct CoarseData {
    RadialGrid grid;
    std::vector<double> S, V;
};

CoarseData coarse_from(const PekarSolution& sol, const BallBasis& basis, std::size_t m) {
    CoarseData c{make_grid(m, basis.radius, GridKind::Uniform), {}, {}};
    c.S.resize(m);
    c.V.resize(m);
    auto Vfine = electron_potential(sol, basis);
    for (std::size_t i = 0; i < m; ++i) {
        c.S[i] = lagrange_interp(*sol.psi.grid, sol.psi.values, c.grid.points[i]);
        c.V[i] = lagrange_interp(basis.grid, Vfine, c.grid.points[i]);
    }
    return c;
}

void parallel_for(int threads, int begin, int end, const std::function<void(int)>& body) {
    if (threads <= 1 || end - begin <= 1) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{begin};
    const int nt = std::min<int>(threads, end - begin);
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < end; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

HessianReport build_hessian_report(const PekarSolution& sol, const BallBasis& basis,
                                   int l_max, std::size_t n_modes, std::size_t n_el,
                                   int l_far, int threads) {
    if (l_max > basis.l_max)
        throw ParameterError("build_hessian_report: l_max exceeds the basis");
    HessianReport rep;
    rep.flavor = (sol.kernel == BallKernel::DirichletGreen && sol.domain == PekarDomain::Ball)
                     ? HessianFlavor::Ball
                     : HessianFlavor::FreeApprox;
    rep.coupling2 = (rep.flavor == HessianFlavor::Ball) ? 1.0 : 4.0 * M_PI;
    rep.radius = basis.radius;
    rep.mu = sol.mu;
    rep.l_max = l_max;
    rep.n_modes = n_modes;
    rep.n_el = n_el;
    rep.l_far = l_far;
    rep.sectors.resize(static_cast<std::size_t>(l_max) + 1);

    parallel_for(threads, 0, l_max + 1, [&](int l) {
        SectorReport s;
        s.l = l;
        s.K = build_K(sol, basis, l, n_modes, n_el, rep.coupling2);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.K, Eigen::EigenvaluesOnly);
        s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n_modes);
        std::sort(s.eigenvalues.rbegin(), s.eigenvalues.rend());
        double tr = 0.0;
        for (double lam : s.eigenvalues) tr += std::sqrt(std::max(1.0 - lam, 0.0)) - 1.0;
        s.trace_contribution = (2.0 * l + 1.0) * tr;
        rep.sectors[static_cast<std::size_t>(l)] = std::move(s);
    });

    rep.max_eigenvalue = -1e300;
    rep.min_eigenvalue = 1e300;
    double cum = 0.0;
    for (const auto& s : rep.sectors) {
        rep.max_eigenvalue = std::max(rep.max_eigenvalue, s.eigenvalues.front());
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, s.eigenvalues.back());
        cum += s.trace_contribution;
        rep.cumulative_trace.push_back(cum);
    }
    rep.trace_partial = fluctuation_trace(rep.sectors);

    // tail sectors on a coarse grid; exact in the radial direction
    auto coarse = coarse_from(sol, basis, 600);
    const double h = coarse.grid.spacing();
    const bool dirichlet = (rep.flavor == HessianFlavor::Ball);
    std::vector<double> tail_contrib(static_cast<std::size_t>(std::max(0, l_far - l_max)), 0.0);
    parallel_for(threads, l_max + 1, l_far + 1, [&](int l) {
        const double trK = kernel_sector_trace(l, coarse.grid.points, h, coarse.grid.weights,
                                               coarse.S, coarse.V, sol.mu, basis.radius,
                                               rep.coupling2, dirichlet);
        tail_contrib[static_cast<std::size_t>(l - l_max - 1)] = -(2.0 * l + 1.0) * trK / 2.0;
    });
    rep.trace_tail = 0.0;
    for (double t : tail_contrib) rep.trace_tail += t;

    // two-term power fit t(nu) = A/nu^2 + B/nu^3 over the last fitted sectors
    rep.trace_continuation = 0.0;
    const int nfit = std::min<int>(40, static_cast<int>(tail_contrib.size()));
    if (nfit >= 4) {
        Eigen::MatrixXd X(nfit, 2);
        Eigen::VectorXd y(nfit);
        for (int i = 0; i < nfit; ++i) {
            const int l = l_far - nfit + 1 + i;
            const double nu = l + 0.5;
            X(i, 0) = 1.0;
            X(i, 1) = 1.0 / nu;
            y(i) = tail_contrib[static_cast<std::size_t>(l - l_max - 1)] * nu * nu;
        }
        Eigen::Vector2d ab = (X.transpose() * X).ldlt().solve(X.transpose() * y);
        double sum2 = 0.0, sum3 = 0.0;
        for (long l = l_far + 1; l <= 400000; ++l) {
            const double nu = l + 0.5;
            sum2 += 1.0 / (nu * nu);
            sum3 += 1.0 / (nu * nu * nu);
        }
        sum2 += 1.0 / 400001.0;  // integral remainder
        rep.trace_continuation = ab(0) * sum2 + ab(1) * sum3;
    }
    rep.trace_total = rep.trace_partial + rep.trace_tail + rep.trace_continuation;
    return rep;
}

double kernel_sector_trace_check(const PekarSolution& sol, const BallBasis& basis, int l,
                                 std::size_t m_coarse) {
    auto coarse = coarse_from(sol, basis, m_coarse);
    const bool dirichlet =
        (sol.kernel == BallKernel::DirichletGreen && sol.domain == PekarDomain::Ball);
    const double c2 = dirichlet ? 1.0 : 4.0 * M_PI;
    return kernel_sector_trace(l, coarse.grid.points, coarse.grid.spacing(),
                               coarse.grid.weights, coarse.S, coarse.V, sol.mu, basis.radius,
                               c2, dirichlet);
}

// ---------------------------------------------------------------------------
// free-space flavor: momentum-shell field basis
// ---------------------------------------------------------------------------

Eigen::MatrixXd build_K_free(const PekarSolution& free_sol, double R, int l,
                             const FreeSectorParams& p) {
    const std::size_t ng = static_cast<std::size_t>(R * p.n_grid_per_unit);
    BallBasis basis = ball_dirichlet_basis_fixed(R, std::max(l, 1), p.n_el, ng);
    const RadialGrid& g = basis.grid;
    const RadialGrid& gf = *free_sol.psi.grid;

    std::vector<double> S(g.size()), V(g.size());
    std::vector<double> rho(gf.size());
    for (std::size_t i = 0; i < gf.size(); ++i)
        rho[i] = free_sol.psi.values[i] * free_sol.psi.values[i];
    auto Vfree = newton_potential(RadialFunction(gf, rho, 0));
    for (std::size_t i = 0; i < g.size(); ++i) {
        S[i] = lagrange_interp(gf, free_sol.psi.values, g.points[i]);
        V[i] = -2.0 * lagrange_interp(gf, Vfree.values, g.points[i]);
    }

    Eigen::MatrixXd H = electron_matrix(basis, l, p.n_el, V);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd& vals = es.eigenvalues();

    // A(a, i) = int u_a S j_l(k_i r) r^2 dr over momentum shells k_i
    const double hk = p.k_max / static_cast<double>(p.n_k);
    const auto& sec = basis.sector(l);
    Eigen::MatrixXd A(p.n_el, p.n_k);
    std::vector<double> wr(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        wr[i] = g.weights[i] * g.points[i] * g.points[i];
    for (std::size_t ki = 0; ki < p.n_k; ++ki) {
        const double k = hk * static_cast<double>(ki + 1);
        for (std::size_t a = 0; a < p.n_el; ++a) {
            double s = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i)
                s += wr[i] * sec.radial[a][i] * S[i] * spherical_jl(l, k * g.points[i]);
            A(a, ki) = s;
        }
    }
    Eigen::MatrixXd At = es.eigenvectors().transpose() * A;
    const std::size_t first = (l == 0) ? 1 : 0;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(p.n_k, p.n_k);
    for (std::size_t a = first; a < p.n_el; ++a) {
        const double w = 4.0 * (4.0 * M_PI) * (2.0 / M_PI) / (vals(a) - free_sol.mu);
        K.noalias() += w * At.row(a).transpose() * At.row(a);
    }
    K *= hk;  // sqrt(w_i) sqrt(w_j) with uniform shell weights
    return K;
}

ZeroModeReport free_zero_modes(const PekarSolution& free_sol,
                               const std::vector<double>& R_list,
                               const FreeSectorParams& p) {
    if (free_sol.domain != PekarDomain::Free)
        throw DomainError("free_zero_modes: free-space solution required");
    ZeroModeReport rep;
    Eigen::MatrixXd K1_last;
    for (double R : R_list) {
        Eigen::MatrixXd K1 = build_K_free(free_sol, R, 1, p);
        Eigen::MatrixXd K0 = build_K_free(free_sol, R, 0, p);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(K1, Eigen::EigenvaluesOnly), e0(K0, Eigen::EigenvaluesOnly);
        rep.points.push_back({R, e1.eigenvalues().maxCoeff(), e0.eigenvalues().maxCoeff()});
        K1_last = std::move(K1);
    }

    // residual of the discretized translation mode at the largest R; the
    // grad phi profile decays only like r^-3, so its transform needs the
    // analytic A/r^2 + B/r^4 far field continued well past the grid
    const Eigen::MatrixXd& K1 = K1_last;
    const RadialGrid& gf = *free_sol.psi.grid;
    auto dphi = derivative(gf, free_sol.phi.values);
    const std::size_t i2 = gf.size() - 1;
    std::size_t i1 = i2;
    while (gf.points[i1] > 0.8 * gf.r_max) --i1;
    const double r1 = gf.points[i1], r2 = gf.points[i2];
    const double A1 = free_sol.phi.values[i1] * r1 * r1;
    const double A2 = free_sol.phi.values[i2] * r2 * r2;
    const double B = (A1 - A2) / (1.0 / (r1 * r1) - 1.0 / (r2 * r2));
    const double A = A2 - B / (r2 * r2);

    const double hk = p.k_max / static_cast<double>(p.n_k);
    const int n_tail = 2700;
    const double r_ext = 10.0 * gf.r_max;
    const double h_tail = (r_ext - gf.r_max) / n_tail;
    Eigen::VectorXd d(p.n_k);
    for (std::size_t ki = 0; ki < p.n_k; ++ki) {
        const double k = hk * static_cast<double>(ki + 1);
        double s = 0.0;
        for (std::size_t i = 0; i < gf.size(); ++i) {
            const double r = gf.points[i];
            s += gf.weights[i] * r * r * dphi[i] * spherical_jl(1, k * r);
        }
        for (int i = 0; i < n_tail; ++i) {
            const double r = gf.r_max + (i + 0.5) * h_tail;
            const double dp = -2.0 * A / (r * r * r) - 4.0 * B / std::pow(r, 5);
            s += h_tail * r * r * dp * spherical_jl(1, k * r);
        }
        d(ki) = std::sqrt(2.0 / M_PI) * s * std::sqrt(hk) * k;
    }
    d.normalize();
    rep.residual_last = (d - K1 * d).norm();
    return rep;
}

}  // namespace polaron
