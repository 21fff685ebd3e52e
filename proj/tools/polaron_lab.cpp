// polaron-lab: batch front door for the polaron toolkit.
//   polaron-lab <task> [--config <path>] [--output <dir>] [--seed <int>]
// Tasks: pekar-free pekar-ball hessian-ball hessian-free fock-confined fiber
//        dispersion bounds report
// POLARON_LAB_THREADS caps internal parallelism (default 1).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "polaron/config.hpp"
#include "polaron/errors.hpp"
#include "polaron/runner.hpp"
#include "polaron/version.hpp"

namespace {

void print_usage() {
    std::cout <<
        "polaron-lab " << polaron::kVersion << "\n"
        "usage: polaron-lab <task> [--config <path>] [--output <dir>] [--seed <int>]\n"
        "tasks: pekar-free pekar-ball hessian-ball hessian-free fock-confined\n"
        "       fiber dispersion bounds report\n"
        "A config file is JSON; its 'task' key, when present, must match the\n"
        "positional task. POLARON_LAB_THREADS caps parallelism.\n";
}

int exit_code_for(const polaron::Error& e) {
    const std::string cat = e.category();
    if (cat == "config") return 2;
    if (cat == "parameter" || cat == "domain") return 3;
    if (cat == "budget") return 4;
    if (cat == "convergence" || cat == "numerical") return 5;
    if (cat == "consistency") return 6;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::string task, config_path, output_dir;
    long long seed = -1;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--help" || arg == "-h") {
            print_usage();
            return 0;
        } else if (arg == "--config" && i + 1 < argc) {
            config_path = argv[++i];
        } else if (arg == "--output" && i + 1 < argc) {
            output_dir = argv[++i];
        } else if (arg == "--seed" && i + 1 < argc) {
            seed = std::stoll(argv[++i]);
        } else if (!arg.empty() && arg[0] == '-') {
            std::cerr << "error: category=config: unknown option " << arg << "\n";
            return 2;
        } else if (task.empty()) {
            task = arg;
        } else {
            std::cerr << "error: category=config: unexpected argument " << arg << "\n";
            return 2;
        }
    }
    if (task.empty()) {
        print_usage();
        return 2;
    }

    int threads = 1;
    if (const char* env = std::getenv("POLARON_LAB_THREADS")) {
        threads = std::max(1, std::atoi(env));
    }

    try {
        std::string text = "{\"task\":\"" + task + "\"}";
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw polaron::ConfigError("cannot open config file " + config_path);
            std::ostringstream ss;
            ss << is.rdbuf();
            text = ss.str();
        }
        polaron::RunConfig cfg = polaron::parse_config(text);
        if (!config_path.empty() && cfg.task != task)
            throw polaron::ConfigError("config task '" + cfg.task +
                                       "' does not match positional task '" + task + "'");
        cfg.task = task;
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

        auto rec = polaron::run(cfg, threads);
        std::cout << "record: " << rec.record_path << "\n";
        return 0;
    } catch (const polaron::Error& e) {
        std::cerr << "error: category=" << e.category() << ": " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: category=internal: " << e.what() << "\n";
        return 1;
    }
}
