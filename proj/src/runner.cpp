#include "polaron/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "polaron/bounds.hpp"
#include "polaron/errors.hpp"
#include "polaron/fock.hpp"
#include "polaron/hessian.hpp"
#include "polaron/pekar.hpp"
#include "polaron/version.hpp"

namespace polaron {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct ArtifactSink {
    fs::path dir;
    std::vector<fs::path> written;

    fs::path emit_csv(const std::string& name, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
        fs::create_directories(dir);
        fs::path p = dir / name;
        std::ofstream os(p);
        os << header << "\n";
        os.precision(17);
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << row[i];
            os << "\n";
        }
        if (!os) throw NumericalError("failed to write artifact " + p.string());
        written.push_back(p);
        return p;
    }
    void discard_all() {
        std::error_code ec;
        for (const auto& p : written) fs::remove(p, ec);
    }
};

json scalar(double value, double tolerance) {
    return json{{"value", value}, {"tolerance", tolerance}};
}

BallBasis basis_from(const RunConfig& c) {
    if (c.ball.e_max > 0.0)
        return ball_dirichlet_basis(c.ball.radius, c.ball.l_max, c.ball.e_max, c.ball.n_grid);
    // the electron basis draws on the same sectors as the field modes
    const std::size_t per_sector = std::max(c.ball.n_radial, c.hessian.n_el);
    return ball_dirichlet_basis_fixed(c.ball.radius, c.ball.l_max, per_sector, c.ball.n_grid);
}

PekarOptions solver_options(const RunConfig& c) {
    PekarOptions o;
    o.tol = c.tolerances.solver;
    return o;
}

json pekar_json(const PekarSolution& s, double tol) {
    json r;
    r["e_pek"] = scalar(s.energy, tol);
    r["kinetic"] = scalar(s.kinetic, tol);
    r["coulomb"] = scalar(s.coulomb, tol);
    r["mu"] = scalar(s.mu, tol);
    r["phi_norm2"] = scalar(s.phi_norm2, tol);
    r["el_residual"] = s.el_residual;
    r["virial_residual"] = std::abs(s.coulomb - 2.0 * s.kinetic) / std::abs(s.coulomb);
    r["nodeless"] = s.nodeless;
    r["iterations"] = s.iterations;
    return r;
}

std::vector<std::vector<double>> profile_rows(const PekarSolution& s) {
    std::vector<std::vector<double>> rows;
    const RadialGrid& g = *s.psi.grid;
    for (std::size_t i = 0; i < g.size(); ++i)
        rows.push_back({g.points[i], s.psi.values[i], s.phi.values[i]});
    return rows;
}

}  // namespace

ResultRecord run(const RunConfig& c, int threads) {
    json rec;
    rec["task"] = c.task;
    rec["version"] = kVersion;
    rec["config"] = json::parse(config_to_json(c));
    rec["conventions"] = {
        {"coulomb_coefficient", "1 (not e^2/2); identities mu = 3e and D = 2T hold in this normalization"},
        {"confined_coupling", "e_j^{-1/2} per mode, reading (-Delta_Omega)^{-1/2} for the displayed sqrt(e_j)"},
        {"cutoff_convention", c.fock.cutoff_convention},
        {"ccr_units", "fiber: original units; confined: strong-coupling units, b = alpha a"},
    };
    json ts;
    ts["start"] = timestamp_now();

    ArtifactSink sink{fs::path(c.output_dir) / c.task, {}};
    json results, diagnostics;
    std::vector<std::string> artifact_names;

    try {
        if (c.task == "pekar-free") {
            auto grid = make_grid(c.grid.n, c.grid.r_max,
                                  c.grid.kind == "graded" ? GridKind::Graded : GridKind::Uniform);
            auto sol = solve_pekar_free(grid, std::nullopt, solver_options(c));
            results = pekar_json(sol, c.tolerances.solver);
            auto mc = mass_constant(sol);
            results["mass_constant_psi4"] = scalar(mc.c_psi4, 1e-3);
            results["mass_constant_gradphi"] = scalar(mc.c_gradphi, 1e-3);
            auto p = sink.emit_csv("pekar_profile.csv", "r,psi,phi", profile_rows(sol));
            artifact_names.push_back(p.string());
        } else if (c.task == "pekar-ball") {
            auto basis = basis_from(c);
            auto kernel = c.ball.kernel == "dirichlet" ? BallKernel::DirichletGreen
                                                       : BallKernel::Coulomb;
            auto sol = solve_pekar_ball(basis, kernel, solver_options(c));
            results = pekar_json(sol, c.tolerances.solver);
            results["kernel"] = c.ball.kernel;
            auto p = sink.emit_csv("pekar_profile.csv", "r,psi,phi", profile_rows(sol));
            artifact_names.push_back(p.string());
        } else if (c.task == "hessian-ball") {
            auto basis = basis_from(c);
            auto kernel = c.ball.kernel == "dirichlet" ? BallKernel::DirichletGreen
                                                       : BallKernel::Coulomb;
            auto sol = solve_pekar_ball(basis, kernel, solver_options(c));
            auto rep = build_hessian_report(sol, basis, c.ball.l_max, c.ball.n_radial,
                                            c.hessian.n_el, c.hessian.l_far, threads);
            results["e_pek_domain"] = scalar(sol.energy, c.tolerances.solver);
            results["mu"] = scalar(sol.mu, c.tolerances.solver);
            results["trace_partial"] = scalar(rep.trace_partial, 1e-3);
            results["trace_tail"] = rep.trace_tail;
            results["trace_continuation"] = rep.trace_continuation;
            results["trace_total"] = scalar(rep.trace_total, 1e-3);
            results["max_eigenvalue"] = rep.max_eigenvalue;
            results["min_eigenvalue"] = rep.min_eigenvalue;
            json cum = json::array();
            for (double v : rep.cumulative_trace) cum.push_back(v);
            diagnostics["cumulative_trace"] = cum;
            auto pred = two_term_prediction(sol.energy, rep.trace_total, c.fock.alpha);
            results["two_term_strong_coupling"] = pred.strong_coupling;
            results["two_term_original_units"] = pred.original_units;
            std::vector<std::vector<double>> rows;
            for (const auto& s : rep.sectors)
                for (std::size_t ni = 0; ni < s.eigenvalues.size(); ++ni)
                    rows.push_back({static_cast<double>(s.l), static_cast<double>(ni + 1),
                                    s.eigenvalues[ni]});
            auto p = sink.emit_csv("hessian_eigs.csv", "l,n,eigenvalue", rows);
            artifact_names.push_back(p.string());
        } else if (c.task == "hessian-free") {
            auto grid = make_grid(c.grid.n, c.grid.r_max,
                                  c.grid.kind == "graded" ? GridKind::Graded : GridKind::Uniform);
            auto sol = solve_pekar_free(grid, std::nullopt, solver_options(c));
            auto rep = free_zero_modes(sol, c.hessian.R_list);
            std::vector<std::vector<double>> rows;
            for (const auto& pt : rep.points)
                rows.push_back({pt.R, pt.lambda_max_l1, pt.lambda_max_l0});
            results["zero_mode_residual"] = rep.residual_last;
            results["lambda_l1_final"] = scalar(rep.points.back().lambda_max_l1, 1e-3);
            results["lambda_l0_final"] = scalar(rep.points.back().lambda_max_l0, 1e-3);
            auto p = sink.emit_csv("zero_modes.csv", "R,lambda_l1,lambda_l0", rows);
            artifact_names.push_back(p.string());
        } else if (c.task == "fiber") {
            auto modes = discretize_modes_free(c.fock.alpha, c.fock.K_cut, c.fock.eps,
                                               c.fock.budget);
            auto H = assemble_fiber_hamiltonian(modes, c.fock.alpha, {0, 0, 0},
                                                c.fock.max_phonons, c.fock.budget);
            auto gs = ground_state(H, c.tolerances.eigen, c.seed);
            results["E0"] = scalar(gs.energy, c.tolerances.eigen);
            results["dimension"] = H.dimension;
            results["n_modes"] = modes.modes.size();
            results["sum_g2"] = modes.sum_g2;
            diagnostics["cells_core"] = modes.cells_core;
            diagnostics["cells_partial"] = modes.cells_partial;
            diagnostics["lanczos_residual"] = gs.residual;
            auto p = sink.emit_csv("spectrum.csv", "index,eigenvalue", {{0.0, gs.energy}});
            artifact_names.push_back(p.string());
        } else if (c.task == "dispersion") {
            auto modes = discretize_modes_free(c.fock.alpha, c.fock.K_cut, c.fock.eps,
                                               c.fock.budget);
            auto curve = dispersion(modes, c.fock.alpha, c.fock.P_values, c.fock.max_phonons,
                                    c.tolerances.eigen, c.fock.budget);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < curve.P.size(); ++i)
                rows.push_back({curve.P[i], curve.E[i]});
            results["mass_estimate"] = scalar(curve.mass_estimate, curve.mass_fit_residual);
            results["E0"] = scalar(curve.E.front(), c.tolerances.eigen);
            auto p = sink.emit_csv("dispersion.csv", "P,E", rows);
            artifact_names.push_back(p.string());
        } else if (c.task == "fock-confined") {
            SparseHamiltonian H;
            if (c.confined.variant == "interval") {
                H = assemble_confined_interval(c.confined.L, c.confined.n_el,
                                               c.confined.n_modes, c.fock.alpha,
                                               c.fock.max_phonons, c.fock.budget);
            } else {
                auto basis = basis_from(c);
                auto conv = c.fock.cutoff_convention == "energy" ? CutoffConvention::Energy
                                                                 : CutoffConvention::Momentum;
                auto modes = modes_from_ball(basis, c.fock.Lambda, conv);
                H = assemble_confined_ball(basis, modes, c.fock.alpha, c.fock.max_phonons,
                                           c.confined.n_el, c.fock.budget);
            }
            auto gs = ground_state(H, c.tolerances.eigen, c.seed);
            results["E0_strong_coupling"] = scalar(gs.energy, c.tolerances.eigen);
            results["E0_original_units"] = scalar(c.fock.alpha * c.fock.alpha * gs.energy,
                                                  c.tolerances.eigen);
            results["dimension"] = H.dimension;
            diagnostics["lanczos_residual"] = gs.residual;
            auto p = sink.emit_csv("spectrum.csv", "index,eigenvalue", {{0.0, gs.energy}});
            artifact_names.push_back(p.string());
        } else if (c.task == "bounds" || c.task == "report") {
            auto grid = make_grid(c.grid.n, c.grid.r_max, GridKind::Uniform);
            auto sol = solve_pekar_free(grid, std::nullopt, solver_options(c));
            std::vector<double> alphas =
                c.task == "bounds" ? std::vector<double>{c.fock.alpha}
                                   : std::vector<double>{0.5, 1.0, 2.0};
            // confined two-term data on the unit ball (report task only)
            double e_ball = 0.0, ball_trace = 0.0;
            if (c.task == "report") {
                auto bb = ball_dirichlet_basis_fixed(1.0, 6, 20, 1500);
                auto bs = solve_pekar_ball(bb, BallKernel::DirichletGreen, solver_options(c));
                auto hrep = build_hessian_report(bs, bb, 6, 20, 20, 160, threads);
                e_ball = bs.energy;
                ball_trace = hrep.trace_total;
            }
            std::vector<std::vector<double>> rows;
            for (double a : alphas) {
                std::optional<double> numeric;
                if (a > 0.0) {
                    auto modes = discretize_modes_free(a, c.fock.K_cut, c.fock.eps,
                                                       c.fock.budget);
                    auto H = assemble_fiber_hamiltonian(modes, a, {0, 0, 0},
                                                        c.fock.max_phonons, c.fock.budget);
                    numeric = ground_state(H, c.tolerances.eigen, c.seed).energy;
                }
                auto rep = sandwich(a, sol.energy, numeric);
                const double tt =
                    (c.task == "report" && a > 0.0)
                        ? two_term_prediction(e_ball, ball_trace, a).original_units
                        : std::nan("");
                rows.push_back({a, rep.ly_lower, rep.gaussian_upper, rep.pekar_upper,
                                numeric.value_or(std::nan("")), tt});
                if (alphas.size() == 1) {
                    results["ly_lower"] = scalar(rep.ly_lower, 1e-12);
                    results["gaussian_upper"] = scalar(rep.gaussian_upper, 1e-12);
                    results["pekar_upper"] = scalar(rep.pekar_upper, c.tolerances.solver);
                    if (numeric) results["numeric_energy"] = scalar(*numeric, c.tolerances.eigen);
                    results["cutoff_order1"] = rep.cutoff_order1;
                    results["cutoff_order3"] = rep.cutoff_order3;
                    // one-commutator intermediate at the optimizing cutoff
                    const double Kopt = 8.0 * a / (3.0 * M_PI);
                    if (a > 0.0) {
                        auto mid = ly_intermediate(a, Kopt);
                        results["ly_intermediate"] = {
                            {"K", Kopt},
                            {"kinetic_prefactor", mid.kinetic_prefactor},
                            {"field_shift", mid.field_shift},
                            {"constant_shift", mid.constant_shift}};
                    }
                }
            }
            auto p = sink.emit_csv("bounds.csv",
                                   "alpha,ly_lower,gaussian_upper,pekar_upper,numeric,two_term",
                                   rows);
            artifact_names.push_back(p.string());
        } else {
            throw ConfigError("unknown task '" + c.task + "'");
        }
    } catch (...) {
        sink.discard_all();
        throw;
    }

    ts["end"] = timestamp_now();
    rec["timestamps"] = ts;
    rec["results"] = results;
    rec["diagnostics"] = diagnostics;
    rec["artifacts"] = artifact_names;

    ResultRecord out;
    out.json_text = rec.dump(2);
    fs::create_directories(sink.dir);
    fs::path rp = sink.dir / "record.json";
    {
        std::ofstream os(rp);
        os << out.json_text << "\n";
        if (!os) throw NumericalError("failed to write record " + rp.string());
    }
    out.record_path = rp.string();
    return out;
}

}  // namespace polaron
