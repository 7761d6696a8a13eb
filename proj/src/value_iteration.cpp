// SPDX-License-Identifier: Apache-2.0
#include "safebound/value_iteration.hpp"

#include "safebound/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace safebound {

namespace {

constexpr double kFeasTol = 1e-9;

void check_inputs(const std::vector<double>& values, const std::vector<double>& lo,
                  const std::vector<double>& hi) {
    if (values.size() != lo.size() || values.size() != hi.size() || values.empty())
        throw std::invalid_argument("omax: size mismatch");
    for (std::size_t j = 0; j < lo.size(); ++j)
        if (lo[j] > hi[j])
            throw std::invalid_argument("omax: lo > hi");
}

// Ordered assignment over a precomputed visiting order.
OmaxResult assign_in_order(const std::vector<double>& values, const std::vector<double>& lo,
                           const std::vector<double>& hi,
                           const std::vector<std::size_t>& order) {
    double sum_lo = 0.0, sum_hi = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) {
        sum_lo += lo[j];
        sum_hi += hi[j];
    }
    if (sum_lo > 1.0 + kFeasTol || sum_hi < 1.0 - kFeasTol)
        throw std::runtime_error("omax: empty interval polytope");

    OmaxResult res;
    res.witness = lo;
    double budget = std::max(0.0, 1.0 - sum_lo);
    for (std::size_t j : order) {
        if (budget <= 0.0)
            break;
        const double raise = std::min(budget, hi[j] - lo[j]);
        res.witness[j] += raise;
        budget -= raise;
    }
    res.value = std::inner_product(values.begin(), values.end(), res.witness.begin(), 0.0);
    return res;
}

std::vector<std::size_t> sorted_order(const std::vector<double>& values, bool descending) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return descending ? values[a] > values[b] : values[a] < values[b];
    });
    return order;
}

} // namespace

OmaxResult omax(const std::vector<double>& values, const std::vector<double>& lo,
                const std::vector<double>& hi) {
    check_inputs(values, lo, hi);
    return assign_in_order(values, lo, hi, sorted_order(values, true));
}

OmaxResult omin(const std::vector<double>& values, const std::vector<double>& lo,
                const std::vector<double>& hi) {
    check_inputs(values, lo, hi);
    return assign_in_order(values, lo, hi, sorted_order(values, false));
}

namespace {

// One backward pass over the interval abstraction. `policy` selects the
// action per (k, state); null means single-action or synthesis. When
// `out_policy` is set, the pass is a min-over-actions synthesis with omax.
std::vector<std::vector<double>> vi_pass(const IntervalAbstraction& abs, std::size_t H,
                                         bool maximize, const SynthesizedPolicy* policy,
                                         SynthesizedPolicy* out_policy, unsigned threads) {
    const std::size_t n = abs.n_states();
    const std::size_t unsafe = abs.unsafe_state();
    std::vector<std::vector<double>> v(H + 1, std::vector<double>(n, 0.0));
    v[H][unsafe] = 1.0;
    if (out_policy)
        out_policy->action_index.assign(H, std::vector<std::size_t>(n - 1, 0));

    std::vector<double> scratch_lo, scratch_hi;
    for (std::size_t k = H; k-- > 0;) {
        const std::vector<double>& next = v[k + 1];
        const auto order = sorted_order(next, maximize);
        auto backup = [&](std::size_t i, std::vector<double>& lo, std::vector<double>& hi) {
            if (out_policy) {
                double best = 2.0;
                std::size_t best_a = 0;
                for (std::size_t a = 0; a < abs.n_actions(); ++a) {
                    abs.dense_bounds(i, a, lo, hi);
                    const double val = assign_in_order(next, lo, hi, order).value;
                    if (val < best) { // strict improvement; ties keep the lowest index
                        best = val;
                        best_a = a;
                    }
                }
                out_policy->action_index[k][i] = best_a;
                return best;
            }
            std::size_t a = 0;
            if (policy)
                a = policy->action_index[k][i];
            else if (abs.n_actions() != 1)
                throw std::invalid_argument("vi_fixed_policy: abstraction has several actions "
                                            "but no policy was given");
            abs.dense_bounds(i, a, lo, hi);
            return assign_in_order(next, lo, hi, order).value;
        };
        auto& cur = v[k];
        if (threads <= 1) {
            for (std::size_t i = 0; i + 1 < n; ++i)
                cur[i] = std::clamp(backup(i, scratch_lo, scratch_hi), 0.0, 1.0);
        } else {
            parallel_for(n - 1, threads, [&](std::size_t i) {
                thread_local std::vector<double> lo, hi;
                cur[i] = std::clamp(backup(i, lo, hi), 0.0, 1.0);
            });
        }
        cur[unsafe] = 1.0;
    }
    return v;
}

} // namespace

ValueBounds vi_fixed_policy(const IntervalAbstraction& imc, std::size_t H, unsigned threads) {
    ValueBounds vb;
    vb.horizon = H;
    vb.pessimistic = vi_pass(imc, H, true, nullptr, nullptr, threads);
    vb.optimistic = vi_pass(imc, H, false, nullptr, nullptr, threads);
    return vb;
}

ValueBounds vi_fixed_policy(const IntervalAbstraction& imdp, const SynthesizedPolicy& policy,
                            std::size_t H, unsigned threads) {
    if (policy.action_index.size() != H)
        throw std::invalid_argument("vi_fixed_policy: policy horizon mismatch");
    ValueBounds vb;
    vb.horizon = H;
    vb.pessimistic = vi_pass(imdp, H, true, &policy, nullptr, threads);
    vb.optimistic = vi_pass(imdp, H, false, &policy, nullptr, threads);
    return vb;
}

std::pair<SynthesizedPolicy, ValueBounds> vi_synthesize(const IntervalAbstraction& imdp,
                                                        std::size_t H, unsigned threads) {
    SynthesizedPolicy policy;
    ValueBounds vb;
    vb.horizon = H;
    vb.pessimistic = vi_pass(imdp, H, true, nullptr, &policy, threads);
    vb.optimistic = vi_pass(imdp, H, false, &policy, nullptr, threads);
    return {std::move(policy), std::move(vb)};
}

namespace {

std::vector<double> vi_mc_impl(const PointAbstraction& mc, const SynthesizedPolicy* policy,
                               std::size_t H) {
    const std::size_t n = mc.n_states;
    std::vector<double> v(n, 0.0), next(n, 0.0);
    next[mc.unsafe_state()] = 1.0;
    for (std::size_t k = H; k-- > 0;) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double best = 2.0;
            if (policy) {
                const auto& row = mc.row(i, policy->action_index[k][i]);
                best = std::inner_product(row.begin(), row.end(), next.begin(), 0.0);
            } else {
                for (std::size_t a = 0; a < mc.n_actions; ++a) {
                    const auto& row = mc.row(i, a);
                    best = std::min(best, std::inner_product(row.begin(), row.end(),
                                                             next.begin(), 0.0));
                }
            }
            v[i] = std::clamp(best, 0.0, 1.0);
        }
        v[mc.unsafe_state()] = 1.0;
        next = v;
    }
    return H == 0 ? next : v;
}

} // namespace

std::vector<double> vi_mc(const PointAbstraction& mc, std::size_t H) {
    return vi_mc_impl(mc, nullptr, H);
}

std::vector<double> vi_mc(const PointAbstraction& mc, const SynthesizedPolicy& policy,
                          std::size_t H) {
    if (policy.action_index.size() != H)
        throw std::invalid_argument("vi_mc: policy horizon mismatch");
    return vi_mc_impl(mc, &policy, H);
}

std::pair<double, double> safety_over_initial(const ValueBounds& bounds, const UniformGrid& grid,
                                              const HyperRect& x0) {
    const auto cells = grid.cells_intersecting(x0);
    double worst_pess = 0.0, worst_opt = 0.0;
    for (std::size_t c : cells) {
        worst_pess = std::max(worst_pess, bounds.pessimistic[0][c]);
        worst_opt = std::max(worst_opt, bounds.optimistic[0][c]);
    }
    return {1.0 - worst_pess, 1.0 - worst_opt};
}

} // namespace safebound
