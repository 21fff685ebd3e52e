#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polaron {

// Batch configuration, parsed strictly from JSON: unknown keys are rejected
// so unit/convention mistakes cannot slip through silently.
struct RunConfig {
    std::string task;  // pekar-free | pekar-ball | hessian-ball | hessian-free |
                       // fock-confined | fiber | dispersion | bounds | report

    struct Grid {
        std::size_t n = 3000;
        double r_max = 30.0;
        std::string kind = "uniform";  // uniform | graded
    } grid;

    struct Ball {
        double radius = 1.0;
        int l_max = 7;
        std::size_t n_radial = 24;
        double e_max = 0.0;            // 0: use n_radial per sector
        std::size_t n_grid = 2000;
        std::string kernel = "dirichlet";  // dirichlet | coulomb
    } ball;

    struct Hessian {
        std::size_t n_el = 32;
        int l_far = 240;
        std::vector<double> R_list = {10.0, 14.0, 20.0};
    } hessian;

    struct Fock {
        double alpha = 1.0;
        int max_phonons = 2;
        double K_cut = 2.0;
        double eps = 1.0;
        std::string cutoff_convention = "momentum";  // momentum | energy
        std::vector<double> P_values = {0.0, 0.1, 0.2};
        std::size_t budget = 500000;
        double Lambda = 7.0;  // confined-model cutoff
    } fock;

    struct Confined {
        std::string variant = "interval";  // interval | ball
        double L = 1.0;
        std::size_t n_el = 2;
        std::size_t n_modes = 1;
    } confined;

    struct Tolerances {
        double solver = 1e-8;
        double eigen = 1e-10;
    } tolerances;

    std::string output_dir = "runs";
    std::uint64_t seed = 1;
};

// Parses and validates; throws ConfigError with the offending key or a
// line/column position on syntax errors.
RunConfig parse_config(const std::string& text);

std::string config_to_json(const RunConfig& c);

}  // namespace polaron
