#pragma once

#include <cstdint>
#include <string>

namespace qrf {

// One CLI invocation worth of configuration. Identical configs (including the
// seed) produce byte-identical reports.
struct RunConfig {
    std::string command; // check | reduce | change-frame | entangle | relobs | example
    std::string model_path;
    std::string example_name;
    std::string frame, sector;
    std::string from_frame, from_sector;
    std::string to_frame, to_sector;
    std::string state_path; // file path or packaged packet name
    std::string op_name;    // relobs: qA pA qB pB qC pC
    bool assert_mode = false;
    std::uint64_t seed = 20240817;
    double tol = 0.0;          // <= 0: per-check defaults; floored at 1e-14
    long long max_entries = 0; // <= 0: QRF_MAX_DIM / default
};

struct RunResult {
    // 0 success, 1 assertion failure, 2 input error, 3 precondition error
    int status = 0;
    std::string report_json;
    std::string error_message;
};

RunResult run_command(const RunConfig& cfg);

} // namespace qrf
