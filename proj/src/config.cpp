#include "polaron/config.hpp"

#include <set>

#include <json.hpp>

#include "polaron/errors.hpp"

namespace polaron {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& scope) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + (scope.empty() ? it.key() : scope + "." + it.key()) + "'");
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

const std::set<std::string> kTasks = {"pekar-free", "pekar-ball", "hessian-ball",
                                      "hessian-free", "fock-confined", "fiber",
                                      "dispersion", "bounds", "report"};

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    reject_unknown(j, {"task", "grid", "ball", "hessian", "fock", "confined", "tolerances",
                       "output_dir", "seed"}, "");
    RunConfig c;
    if (!j.contains("task")) throw ConfigError("missing required key 'task'");
    c.task = j.at("task").get<std::string>();
    if (!kTasks.count(c.task)) throw ConfigError("unknown task '" + c.task + "'");

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        reject_unknown(g, {"n", "r_max", "kind"}, "grid");
        get_if(g, "n", c.grid.n);
        get_if(g, "r_max", c.grid.r_max);
        get_if(g, "kind", c.grid.kind);
        if (c.grid.kind != "uniform" && c.grid.kind != "graded")
            throw ConfigError("grid.kind must be 'uniform' or 'graded'");
        if (c.grid.n < 16) throw ConfigError("grid.n must be >= 16");
        if (!(c.grid.r_max > 0.0)) throw ConfigError("grid.r_max must be positive");
    }
    if (j.contains("ball")) {
        const auto& b = j.at("ball");
        reject_unknown(b, {"radius", "l_max", "n_radial", "e_max", "n_grid", "kernel"}, "ball");
        get_if(b, "radius", c.ball.radius);
        get_if(b, "l_max", c.ball.l_max);
        get_if(b, "n_radial", c.ball.n_radial);
        get_if(b, "e_max", c.ball.e_max);
        get_if(b, "n_grid", c.ball.n_grid);
        get_if(b, "kernel", c.ball.kernel);
        if (!(c.ball.radius > 0.0)) throw ConfigError("ball.radius must be positive");
        if (c.ball.l_max < 0) throw ConfigError("ball.l_max must be >= 0");
        if (c.ball.kernel != "dirichlet" && c.ball.kernel != "coulomb")
            throw ConfigError("ball.kernel must be 'dirichlet' or 'coulomb'");
    }
    if (j.contains("hessian")) {
        const auto& h = j.at("hessian");
        reject_unknown(h, {"n_el", "l_far", "R_list"}, "hessian");
        get_if(h, "n_el", c.hessian.n_el);
        get_if(h, "l_far", c.hessian.l_far);
        get_if(h, "R_list", c.hessian.R_list);
    }
    if (j.contains("fock")) {
        const auto& f = j.at("fock");
        reject_unknown(f, {"alpha", "max_phonons", "K_cut", "eps", "cutoff_convention",
                           "P_values", "budget", "Lambda"}, "fock");
        get_if(f, "alpha", c.fock.alpha);
        get_if(f, "max_phonons", c.fock.max_phonons);
        get_if(f, "K_cut", c.fock.K_cut);
        get_if(f, "eps", c.fock.eps);
        get_if(f, "cutoff_convention", c.fock.cutoff_convention);
        get_if(f, "P_values", c.fock.P_values);
        if (f.contains("budget")) {
            const double b = f.at("budget").get<double>();
            if (b <= 0.0) throw ConfigError("fock.budget must be positive");
            c.fock.budget = static_cast<std::size_t>(b);
        }
        get_if(f, "Lambda", c.fock.Lambda);
        if (c.fock.alpha < 0.0) throw ConfigError("fock.alpha must be >= 0");
        if (c.fock.max_phonons < 1) throw ConfigError("fock.max_phonons must be >= 1");
        if (c.fock.cutoff_convention != "momentum" && c.fock.cutoff_convention != "energy")
            throw ConfigError("fock.cutoff_convention must be 'momentum' or 'energy'");
    }
    if (j.contains("confined")) {
        const auto& f = j.at("confined");
        reject_unknown(f, {"variant", "L", "n_el", "n_modes"}, "confined");
        get_if(f, "variant", c.confined.variant);
        get_if(f, "L", c.confined.L);
        get_if(f, "n_el", c.confined.n_el);
        get_if(f, "n_modes", c.confined.n_modes);
        if (c.confined.variant != "interval" && c.confined.variant != "ball")
            throw ConfigError("confined.variant must be 'interval' or 'ball'");
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        reject_unknown(t, {"solver", "eigen"}, "tolerances");
        get_if(t, "solver", c.tolerances.solver);
        get_if(t, "eigen", c.tolerances.eigen);
        if (!(c.tolerances.solver > 0.0) || !(c.tolerances.eigen > 0.0))
            throw ConfigError("tolerances must be positive");
    }
    get_if(j, "output_dir", c.output_dir);
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

std::string config_to_json(const RunConfig& c) {
    json j;
    j["task"] = c.task;
    j["grid"] = {{"n", c.grid.n}, {"r_max", c.grid.r_max}, {"kind", c.grid.kind}};
    j["ball"] = {{"radius", c.ball.radius}, {"l_max", c.ball.l_max},
                 {"n_radial", c.ball.n_radial}, {"e_max", c.ball.e_max},
                 {"n_grid", c.ball.n_grid}, {"kernel", c.ball.kernel}};
    j["hessian"] = {{"n_el", c.hessian.n_el}, {"l_far", c.hessian.l_far},
                    {"R_list", c.hessian.R_list}};
    j["fock"] = {{"alpha", c.fock.alpha}, {"max_phonons", c.fock.max_phonons},
                 {"K_cut", c.fock.K_cut}, {"eps", c.fock.eps},
                 {"cutoff_convention", c.fock.cutoff_convention},
                 {"P_values", c.fock.P_values}, {"budget", c.fock.budget},
                 {"Lambda", c.fock.Lambda}};
    j["confined"] = {{"variant", c.confined.variant}, {"L", c.confined.L},
                     {"n_el", c.confined.n_el}, {"n_modes", c.confined.n_modes}};
    j["tolerances"] = {{"solver", c.tolerances.solver}, {"eigen", c.tolerances.eigen}};
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    return j.dump(2);
}

}  // namespace polaron
