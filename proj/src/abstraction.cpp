// SPDX-License-Identifier: Apache-2.0
#include "safebound/abstraction.hpp"

#include "safebound/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace safebound {

IntervalAbstraction::IntervalAbstraction(std::size_t n_states, std::size_t n_actions,
                                         double prune_threshold)
    : n_states_(n_states), n_actions_(n_actions), prune_threshold_(prune_threshold),
      rows_(n_states * n_actions) {
    if (n_states < 2 || n_actions < 1)
        throw std::invalid_argument("IntervalAbstraction: need >= 2 states and >= 1 action");
}

const IntervalRow& IntervalAbstraction::row(std::size_t state, std::size_t action) const {
    if (state >= n_states_ || action >= n_actions_)
        throw std::out_of_range("IntervalAbstraction: row index out of range");
    return rows_[state * n_actions_ + action];
}

void IntervalAbstraction::set_row(std::size_t state, std::size_t action, IntervalRow r) {
    if (state >= n_states_ || action >= n_actions_)
        throw std::out_of_range("IntervalAbstraction: row index out of range");
    rows_[state * n_actions_ + action] = std::move(r);
}

void IntervalAbstraction::dense_bounds(std::size_t state, std::size_t action,
                                       std::vector<double>& lo, std::vector<double>& hi) const {
    lo.assign(n_states_, 0.0);
    hi.assign(n_states_, prune_threshold_);
    const IntervalRow& r = row(state, action);
    for (std::size_t k = 0; k < r.targets.size(); ++k) {
        lo[r.targets[k]] = r.intervals[k].lo;
        hi[r.targets[k]] = r.intervals[k].hi;
    }
}

void IntervalAbstraction::check_feasibility(double tol) const {
    for (std::size_t s = 0; s < n_states_; ++s) {
        for (std::size_t a = 0; a < n_actions_; ++a) {
            const IntervalRow& r = rows_[s * n_actions_ + a];
            double sum_lo = 0.0, sum_hi = 0.0;
            for (std::size_t k = 0; k < r.targets.size(); ++k) {
                const auto& iv = r.intervals[k];
                if (!(0.0 <= iv.lo && iv.lo <= iv.hi && iv.hi <= 1.0))
                    throw std::runtime_error("IntervalAbstraction: interval outside [0,1]");
                sum_lo += iv.lo;
                sum_hi += iv.hi;
            }
            sum_hi += static_cast<double>(n_states_ - r.targets.size()) * prune_threshold_;
            if (sum_lo > 1.0 + tol || sum_hi < 1.0 - tol)
                throw std::runtime_error("IntervalAbstraction: empty feasible polytope at state " +
                                         std::to_string(s) + " action " + std::to_string(a));
        }
    }
    // Unsafe state must be absorbing under every action.
    for (std::size_t a = 0; a < n_actions_; ++a) {
        const IntervalRow& r = rows_[unsafe_state() * n_actions_ + a];
        if (r.targets.size() != 1 || r.targets[0] != unsafe_state() ||
            r.intervals[0].lo != 1.0 || r.intervals[0].hi != 1.0)
            throw std::runtime_error("IntervalAbstraction: unsafe state not absorbing");
    }
}

std::string IntervalAbstraction::to_json() const {
    nlohmann::json j;
    j["n_states"] = n_states_;
    j["n_actions"] = n_actions_;
    auto triples = nlohmann::json::array();
    for (std::size_t s = 0; s < n_states_; ++s) {
        for (std::size_t a = 0; a < n_actions_; ++a) {
            const IntervalRow& r = rows_[s * n_actions_ + a];
            for (std::size_t k = 0; k < r.targets.size(); ++k)
                triples.push_back({s, a, r.targets[k], r.intervals[k].lo, r.intervals[k].hi});
        }
    }
    j["triples"] = std::move(triples);
    return j.dump();
}

IntervalAbstraction IntervalAbstraction::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    IntervalAbstraction abs(j.at("n_states").get<std::size_t>(),
                            j.at("n_actions").get<std::size_t>());
    std::vector<IntervalRow> rows(abs.n_states_ * abs.n_actions_);
    for (const auto& t : j.at("triples")) {
        const auto s = t.at(0).get<std::size_t>();
        const auto a = t.at(1).get<std::size_t>();
        IntervalRow& r = rows[s * abs.n_actions_ + a];
        r.targets.push_back(t.at(2).get<std::uint32_t>());
        r.intervals.push_back({t.at(3).get<double>(), t.at(4).get<double>()});
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        abs.rows_[i] = std::move(rows[i]);
    return abs;
}

namespace {

IntervalRow absorbing_row(std::size_t unsafe) {
    IntervalRow r;
    r.targets = {static_cast<std::uint32_t>(unsafe)};
    r.intervals = {{1.0, 1.0}};
    return r;
}

IntervalRow build_interval_row(const AffineGaussianSystem& sys, const UniformGrid& grid,
                               std::size_t cell, std::size_t action, double prune) {
    const HyperRect source = grid.cell_of(cell);
    IntervalRow r;
    double pruned_hi = 0.0;
    for (std::size_t j = 0; j < grid.n_cells(); ++j) {
        const ProbInterval iv = transition_bounds(sys, action, source, grid.cell_of(j));
        if (iv.hi < prune) {
            pruned_hi += iv.hi;
            continue;
        }
        r.targets.push_back(static_cast<std::uint32_t>(j));
        r.intervals.push_back(iv);
    }
    ProbInterval un = unsafe_bounds(sys, action, source, grid.domain());
    un.hi = std::min(1.0, un.hi + pruned_hi);
    r.targets.push_back(static_cast<std::uint32_t>(grid.n_cells()));
    r.intervals.push_back(un);
    return r;
}

} // namespace

IntervalAbstraction build_imdp(const AffineGaussianSystem& sys, const UniformGrid& grid,
                               double prune_threshold, unsigned threads) {
    sys.validate();
    if (grid.dim() != sys.state_dim())
        throw std::invalid_argument("build_imdp: grid dimension mismatch");
    const std::size_t n_states = grid.n_cells() + 1;
    IntervalAbstraction abs(n_states, sys.n_actions(), prune_threshold);
    const std::size_t work = grid.n_cells() * sys.n_actions();
    parallel_for(work, threads, [&](std::size_t idx) {
        const std::size_t cell = idx / sys.n_actions();
        const std::size_t action = idx % sys.n_actions();
        abs.set_row(cell, action, build_interval_row(sys, grid, cell, action, prune_threshold));
    });
    for (std::size_t a = 0; a < sys.n_actions(); ++a)
        abs.set_row(abs.unsafe_state(), a, absorbing_row(abs.unsafe_state()));
    abs.check_feasibility();
    return abs;
}

IntervalAbstraction build_imc(const AffineGaussianSystem& sys, const UniformGrid& grid,
                              std::size_t action_idx, double prune_threshold, unsigned threads) {
    sys.validate();
    if (action_idx >= sys.n_actions())
        throw std::out_of_range("build_imc: action index out of range");
    if (grid.dim() != sys.state_dim())
        throw std::invalid_argument("build_imc: grid dimension mismatch");
    const std::size_t n_states = grid.n_cells() + 1;
    IntervalAbstraction abs(n_states, 1, prune_threshold);
    parallel_for(grid.n_cells(), threads, [&](std::size_t cell) {
        abs.set_row(cell, 0, build_interval_row(sys, grid, cell, action_idx, prune_threshold));
    });
    abs.set_row(abs.unsafe_state(), 0, absorbing_row(abs.unsafe_state()));
    abs.check_feasibility();
    return abs;
}

namespace {

PointAbstraction build_mc_impl(const AffineGaussianSystem& sys, const UniformGrid& grid,
                               const std::vector<std::size_t>& action_list) {
    sys.validate();
    if (grid.dim() != sys.state_dim())
        throw std::invalid_argument("build_mc: grid dimension mismatch");
    PointAbstraction mc;
    mc.n_states = grid.n_cells() + 1;
    mc.n_actions = action_list.size();
    mc.probs.assign(mc.n_states * mc.n_actions, std::vector<double>(mc.n_states, 0.0));
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
        const std::vector<double> center = grid.cell_center(i);
        for (std::size_t ai = 0; ai < action_list.size(); ++ai) {
            auto& row = mc.probs[i * mc.n_actions + ai];
            double mass = 0.0;
            for (std::size_t j = 0; j < grid.n_cells(); ++j) {
                row[j] = transition_prob(sys, action_list[ai], center, grid.cell_of(j));
                mass += row[j];
            }
            // Residual goes to the unsafe state; rows sum to one exactly.
            row[mc.n_states - 1] = std::max(0.0, 1.0 - mass);
        }
    }
    for (std::size_t ai = 0; ai < action_list.size(); ++ai)
        mc.probs[(mc.n_states - 1) * mc.n_actions + ai][mc.n_states - 1] = 1.0;
    return mc;
}

} // namespace

PointAbstraction build_mc(const AffineGaussianSystem& sys, const UniformGrid& grid) {
    std::vector<std::size_t> all(sys.n_actions());
    for (std::size_t a = 0; a < all.size(); ++a)
        all[a] = a;
    return build_mc_impl(sys, grid, all);
}

PointAbstraction build_mc(const AffineGaussianSystem& sys, const UniformGrid& grid,
                          std::size_t action_idx) {
    if (action_idx >= sys.n_actions())
        throw std::out_of_range("build_mc: action index out of range");
    return build_mc_impl(sys, grid, {action_idx});
}

double kernel_lipschitz_bound(const AffineGaussianSystem& sys) {
    sys.validate();
    double row_norm = 0.0;
    for (const auto& row : sys.A) {
        double s = 0.0;
        for (double a : row)
            s += std::abs(a);
        row_norm = std::max(row_norm, s);
    }
    double cdf_slope = 0.0;
    for (double s : sys.sigma)
        cdf_slope += 1.0 / (s * std::sqrt(2.0 * M_PI));
    return row_norm * cdf_slope;
}

long long suggested_partition(double L, int H, double epsilon, double diameter_l, int n) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("suggested_partition: epsilon must be positive");
    if (!(L >= 0.0) || H <= 0 || !(diameter_l > 0.0) || n <= 0)
        throw std::invalid_argument("suggested_partition: arguments must be positive");
    const double base = diameter_l * static_cast<double>(H) * L / epsilon;
    return static_cast<long long>(std::ceil(std::pow(base, n))) + 1;
}

} // namespace safebound
