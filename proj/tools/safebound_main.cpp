// SPDX-License-Identifier: Apache-2.0
#include "safebound/config.hpp"

#include <iostream>
#include <string>

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"Certified safety bounds for discrete-time stochastic systems"};

    std::string config_path;
    std::string mode_override;
    std::string out_dir_override;
    unsigned threads_override = 0;
    app.add_option("--config", config_path, "Path to the JSON run configuration")->required();
    app.add_option("--mode", mode_override, "Override the mode from the config");
    app.add_option("--threads", threads_override, "Override the thread-count hint");
    app.add_option("--out-dir", out_dir_override, "Override the output directory");
    CLI11_PARSE(app, argc, argv);

    safebound::RunConfig cfg;
    try {
        cfg = safebound::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (!mode_override.empty())
        cfg.mode = mode_override;
    if (threads_override > 0)
        cfg.threads = threads_override;
    if (!out_dir_override.empty())
        cfg.out_dir = out_dir_override;
    return safebound::run(cfg);
}
