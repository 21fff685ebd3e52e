#pragma once

#include <string>

#include "polaron/config.hpp"

namespace polaron {

struct ResultRecord {
    std::string json_text;   // full record
    std::string record_path; // where it was written
    int exit_code = 0;
};

// Dispatches the configured task, writes record.json plus CSV artifacts under
// output_dir, and removes partial artifacts on failure. threads caps internal
// parallelism (the POLARON_LAB_THREADS environment variable in the CLI).
ResultRecord run(const RunConfig& config, int threads = 1);

}  // namespace polaron
