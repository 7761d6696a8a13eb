// SPDX-License-Identifier: Apache-2.0
#include "safebound/config.hpp"

#include "safebound/abstraction.hpp"
#include "safebound/barrier.hpp"
#include "safebound/oracle.hpp"
#include "safebound/value_iteration.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace safebound {

namespace {

using nlohmann::json;

std::vector<double> as_vector(const json& j) { return j.get<std::vector<double>>(); }

std::vector<std::vector<double>> as_matrix(const json& j) {
    return j.get<std::vector<std::vector<double>>>();
}

HyperRect rect_from_json(const json& j) {
    return make_rect(as_vector(j.at("lower")), as_vector(j.at("upper")));
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig cfg;
    try {
        const auto& dyn = j.at("dynamics");
        cfg.system.A = as_matrix(dyn.at("A"));
        cfg.system.B = as_matrix(dyn.at("B"));
        cfg.system.c = as_vector(dyn.at("c"));
        cfg.system.sigma = as_vector(dyn.at("sigma"));
        cfg.system.actions = as_matrix(j.at("actions"));
        cfg.safe_set = rect_from_json(j.at("safe_set"));
        cfg.initial_set = rect_from_json(j.at("initial_set"));
        cfg.horizon = j.at("horizon").get<std::size_t>();
        cfg.counts = j.at("counts").get<std::vector<std::size_t>>();
        cfg.mode = j.at("mode").get<std::string>();
        cfg.out_dir = j.value("out_dir", std::string("."));
        cfg.barrier_file = j.value("barrier_file", std::string());
        cfg.epsilon = j.value("epsilon", 0.0);
        cfg.threads = j.value("threads", 1u);
        cfg.action = j.value("action", std::size_t{0});
        cfg.mesh_size = j.value("mesh_size", std::size_t{4001});
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot read file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> diags;
    try {
        cfg.system.validate();
    } catch (const std::exception& e) {
        diags.emplace_back(e.what());
    }
    for (double s : cfg.system.sigma)
        if (!(s > 0.0) &&
            std::find(diags.begin(), diags.end(), "sigma must be strictly positive") == diags.end())
            diags.emplace_back("sigma must be strictly positive");
    try {
        cfg.safe_set.validate();
        cfg.initial_set.validate();
        if (cfg.safe_set.dim() != cfg.system.state_dim())
            diags.emplace_back("safe_set dimension does not match dynamics");
        if (cfg.initial_set.dim() != cfg.safe_set.dim()) {
            diags.emplace_back("initial_set dimension does not match safe_set");
        } else {
            for (std::size_t d = 0; d < cfg.safe_set.dim(); ++d) {
                if (cfg.initial_set.lower[d] < cfg.safe_set.lower[d] ||
                    cfg.initial_set.upper[d] > cfg.safe_set.upper[d]) {
                    diags.emplace_back("initial_set must be contained in safe_set");
                    break;
                }
            }
        }
    } catch (const std::exception& e) {
        diags.emplace_back(e.what());
    }
    if (cfg.counts.size() != cfg.safe_set.dim())
        diags.emplace_back("counts dimension does not match safe_set");
    for (std::size_t c : cfg.counts)
        if (c == 0) {
            diags.emplace_back("counts must be positive");
            break;
        }
    static const char* kModes[] = {"imc-verify",      "imdp-synthesize",    "mc-baseline",
                                   "barrier-certify", "barrier-synthesize", "oracle",
                                   "suggest-partition"};
    if (std::find(std::begin(kModes), std::end(kModes), cfg.mode) == std::end(kModes))
        diags.emplace_back("unknown mode: " + cfg.mode);
    if (cfg.mode == "suggest-partition" && !(cfg.epsilon > 0.0))
        diags.emplace_back("suggest-partition requires a positive epsilon");
    if (!cfg.barrier_file.empty() && !std::filesystem::exists(cfg.barrier_file))
        diags.emplace_back("barrier_file does not exist: " + cfg.barrier_file);
    if (cfg.action >= cfg.system.n_actions())
        diags.emplace_back("action index out of range");
    if (cfg.mode == "oracle" && cfg.mesh_size < 100)
        diags.emplace_back("oracle mesh_size must be >= 100");
    return diags;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

void write_bounds_csv(const std::filesystem::path& path, const UniformGrid& grid,
                      const ValueBounds& vb, const SynthesizedPolicy* policy) {
    std::ostringstream out;
    out << "state_index";
    for (std::size_t d = 0; d < grid.dim(); ++d)
        out << ",cell_lower_" << d;
    for (std::size_t d = 0; d < grid.dim(); ++d)
        out << ",cell_upper_" << d;
    out << ",P_s_lower,P_s_upper";
    if (policy)
        for (std::size_t k = 0; k < vb.horizon; ++k)
            out << ",action_k" << k;
    out << "\n";
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
        const HyperRect cell = grid.cell_of(i);
        out << i;
        for (double v : cell.lower)
            out << ',' << fmt_full(v);
        for (double v : cell.upper)
            out << ',' << fmt_full(v);
        out << ',' << fmt_full(1.0 - vb.pessimistic[0][i]) << ','
            << fmt_full(1.0 - vb.optimistic[0][i]);
        if (policy)
            for (std::size_t k = 0; k < vb.horizon; ++k)
                out << ',' << policy->action_index[k][i];
        out << "\n";
    }
    write_file(path, out.str());
}

void write_policy_csv(const std::filesystem::path& path, const SynthesizedPolicy& policy) {
    std::ostringstream out;
    out << "state_index";
    for (std::size_t k = 0; k < policy.action_index.size(); ++k)
        out << ",action_k" << k;
    out << "\n";
    if (!policy.action_index.empty()) {
        for (std::size_t i = 0; i < policy.action_index[0].size(); ++i) {
            out << i;
            for (std::size_t k = 0; k < policy.action_index.size(); ++k)
                out << ',' << policy.action_index[k][i];
            out << "\n";
        }
    }
    write_file(path, out.str());
}

json barrier_to_json(const PiecewiseBarrier& b, const BarrierCertificate& cert, std::size_t H) {
    json j;
    j["eta"] = cert.eta;
    j["beta"] = cert.beta;
    j["H"] = H;
    j["lower_bound"] = cert.lower_bound;
    j["valid"] = cert.valid;
    j["barrier"] = b.values;
    j["unsafe_value"] = b.unsafe_value;
    return j;
}

PiecewiseBarrier load_barrier(const std::string& path, std::size_t n_cells) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("barrier: cannot read file " + path);
    json j = json::parse(in);
    PiecewiseBarrier b;
    b.values = j.at("barrier").get<std::vector<double>>();
    b.unsafe_value = j.value("unsafe_value", 1.0);
    if (b.values.size() != n_cells)
        throw std::invalid_argument("barrier: size does not match grid");
    return b;
}

} // namespace

int run(const RunConfig& cfg) {
    const auto diags = validate(cfg);
    if (!diags.empty()) {
        for (const auto& d : diags)
            std::cerr << "config error: " << d << "\n";
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        std::filesystem::create_directories(cfg.out_dir);
        const std::filesystem::path out_dir(cfg.out_dir);
        const UniformGrid grid(cfg.safe_set, cfg.counts);
        json summary;
        summary["mode"] = cfg.mode;
        summary["H"] = cfg.horizon;
        summary["dx"] = grid.max_cell_width();

        if (cfg.mode == "imc-verify") {
            const auto imc = build_imc(cfg.system, grid, cfg.action, 1e-12, cfg.threads);
            const auto vb = vi_fixed_policy(imc, cfg.horizon, cfg.threads);
            const auto [p_lo, p_hi] = safety_over_initial(vb, grid, cfg.initial_set);
            write_bounds_csv(out_dir / "bounds.csv", grid, vb, nullptr);
            summary["P_lo"] = p_lo;
            summary["P_hi"] = p_hi;
            std::cout << "P_s ∈ [" << fmt(p_lo) << ", " << fmt(p_hi) << "]\n";
        } else if (cfg.mode == "imdp-synthesize") {
            const auto imdp = build_imdp(cfg.system, grid, 1e-12, cfg.threads);
            const auto [policy, vb] = vi_synthesize(imdp, cfg.horizon, cfg.threads);
            const auto [p_lo, p_hi] = safety_over_initial(vb, grid, cfg.initial_set);
            write_bounds_csv(out_dir / "bounds.csv", grid, vb, &policy);
            write_policy_csv(out_dir / "policy.csv", policy);
            summary["P_lo"] = p_lo;
            summary["P_hi"] = p_hi;
            std::cout << "P_s ∈ [" << fmt(p_lo) << ", " << fmt(p_hi) << "]\n";
        } else if (cfg.mode == "mc-baseline") {
            const auto mc = build_mc(cfg.system, grid);
            const auto v = vi_mc(mc, cfg.horizon);
            double worst = 0.0;
            for (std::size_t c : grid.cells_intersecting(cfg.initial_set))
                worst = std::max(worst, v[c]);
            const double est = 1.0 - worst;
            std::ostringstream csv;
            csv << "state_index,P_s\n";
            for (std::size_t i = 0; i < grid.n_cells(); ++i)
                csv << i << ',' << fmt_full(1.0 - v[i]) << "\n";
            write_file(out_dir / "bounds.csv", csv.str());
            summary["P_lo"] = est;
            summary["P_hi"] = est;
            std::cout << "P_s ∈ [" << fmt(est) << ", " << fmt(est) << "]\n";
        } else if (cfg.mode == "barrier-certify" || cfg.mode == "barrier-synthesize") {
            PiecewiseBarrier barrier;
            BarrierCertificate cert;
            if (cfg.mode == "barrier-synthesize") {
                std::tie(barrier, cert) = synthesize_barrier(cfg.system, grid, cfg.initial_set,
                                                             cfg.horizon, cfg.action);
            } else {
                barrier = cfg.barrier_file.empty()
                              ? indicator_barrier(grid)
                              : load_barrier(cfg.barrier_file, grid.n_cells());
                cert = certify(barrier, cfg.system, grid, cfg.initial_set, cfg.horizon, cfg.action);
            }
            write_file(out_dir / "barrier.json",
                       barrier_to_json(barrier, cert, cfg.horizon).dump(2) + "\n");
            summary["eta"] = cert.eta;
            summary["beta"] = cert.beta;
            summary["lower_bound"] = cert.lower_bound;
            summary["valid"] = cert.valid;
            std::cout << "barrier bound = " << fmt(cert.lower_bound) << "\n";
        } else if (cfg.mode == "oracle") {
            const OracleMode om =
                cfg.system.n_actions() > 1 ? OracleMode::Optimal : OracleMode::FixedAction;
            const auto res =
                exact_dp(cfg.system, cfg.safe_set, cfg.horizon, cfg.mesh_size, om, cfg.action);
            const auto& v0 = res.value_functions.front();
            std::ostringstream csv;
            csv << "x,P_s\n";
            for (std::size_t j = 0; j < v0.mesh.size(); ++j)
                csv << fmt_full(v0.mesh[j]) << ',' << fmt_full(1.0 - v0.values[j]) << "\n";
            write_file(out_dir / "bounds.csv", csv.str());
            double p = std::min(res.safety_at(cfg.initial_set.lower[0]),
                                res.safety_at(cfg.initial_set.upper[0]));
            for (double x : v0.mesh)
                if (x >= cfg.initial_set.lower[0] && x <= cfg.initial_set.upper[0])
                    p = std::min(p, 1.0 - v0.at(x));
            summary["P_lo"] = p;
            summary["P_hi"] = p;
            summary["quadrature_error_bound"] = res.quadrature_error_bound;
            std::cout << "P_s ∈ [" << fmt(p) << ", " << fmt(p) << "]\n";
        } else { // suggest-partition
            const double L = kernel_lipschitz_bound(cfg.system);
            const long long np =
                suggested_partition(L, static_cast<int>(cfg.horizon), cfg.epsilon,
                                    cfg.safe_set.diameter_inf(),
                                    static_cast<int>(cfg.safe_set.dim()));
            summary["L"] = L;
            summary["epsilon"] = cfg.epsilon;
            summary["n_p"] = np;
            std::cout << np << "\n";
        }

        const auto t1 = std::chrono::steady_clock::now();
        summary["runtime_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        write_file(out_dir / "summary.json", summary.dump(2) + "\n");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace safebound
