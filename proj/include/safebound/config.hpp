// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "safebound/geometry.hpp"
#include "safebound/kernel.hpp"

#include <string>
#include <vector>

namespace safebound {

/// One analysis run, as described by a JSON config file.
struct RunConfig {
    AffineGaussianSystem system;
    HyperRect safe_set;
    HyperRect initial_set;
    std::size_t horizon{0};
    std::vector<std::size_t> counts;
    std::string mode; // imc-verify | imdp-synthesize | mc-baseline |
                      // barrier-certify | barrier-synthesize | oracle |
                      // suggest-partition
    std::string out_dir{"."};
    std::string barrier_file;   // optional, for barrier-certify
    double epsilon{0.0};        // for suggest-partition
    unsigned threads{1};
    std::size_t action{0};      // fixed-policy action for imc / mc / barrier modes
    std::size_t mesh_size{4001}; // oracle mesh
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// All schema and consistency violations; empty means valid.
std::vector<std::string> validate(const RunConfig& cfg);

/// Executes the selected mode end to end, writing summary.json and the
/// per-mode CSV/JSON detail files into cfg.out_dir and printing one stable
/// result line to stdout. Returns the process exit code:
/// 0 success, 2 validation error, 3 numerical error.
int run(const RunConfig& cfg);

} // namespace safebound
