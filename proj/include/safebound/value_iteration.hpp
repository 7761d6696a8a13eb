// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "safebound/abstraction.hpp"
#include "safebound/geometry.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace safebound {

struct OmaxResult {
    double value{0.0};
    std::vector<double> witness;
};

/// Maximizes values . t over { lo <= t <= hi, sum t = 1 } by the ordered
/// assignment rule: start at lo, raise entries toward hi in descending value
/// order until the unit budget is spent. Ties break on ascending index.
/// Throws std::runtime_error when the polytope is empty (tolerance 1e-9).
OmaxResult omax(const std::vector<double>& values, const std::vector<double>& lo,
                const std::vector<double>& hi);

/// Same polytope, ascending order; minimizes.
OmaxResult omin(const std::vector<double>& values, const std::vector<double>& lo,
                const std::vector<double>& hi);

/// Two-sided unsafety values per time step and state: pessimistic is the
/// worst-case (upper) bound, optimistic the best-case (lower) bound. Index
/// [k][state] with k in [0, H]; at k = H the value is the unsafe indicator.
struct ValueBounds {
    std::size_t horizon{0};
    std::vector<std::vector<double>> pessimistic;
    std::vector<std::vector<double>> optimistic;
};

/// Deterministic Markov policy: action index per time step per safe state.
struct SynthesizedPolicy {
    std::vector<std::vector<std::size_t>> action_index; // [k][safe_state]
};

/// Robust backward DP under a fixed policy: pessimistic pass backs up with
/// omax, optimistic pass with omin; the unsafe state is pinned at 1.
ValueBounds vi_fixed_policy(const IntervalAbstraction& imc, std::size_t H,
                            unsigned threads = 1);
ValueBounds vi_fixed_policy(const IntervalAbstraction& imdp, const SynthesizedPolicy& policy,
                            std::size_t H, unsigned threads = 1);

/// Min-max synthesis: per state and step pick the action minimizing the omax
/// backup (ties to the lowest action index); the optimistic side is then the
/// fixed-policy omin pass under the synthesized policy.
std::pair<SynthesizedPolicy, ValueBounds> vi_synthesize(const IntervalAbstraction& imdp,
                                                        std::size_t H, unsigned threads = 1);

/// Nominal (non-robust) DP on the representative-point chain; with several
/// actions the backup takes the minimum over actions.
std::vector<double> vi_mc(const PointAbstraction& mc, std::size_t H);
std::vector<double> vi_mc(const PointAbstraction& mc, const SynthesizedPolicy& policy,
                          std::size_t H);

/// Safety bounds over the initial set: worst cell intersecting X0 at k = 0.
std::pair<double, double> safety_over_initial(const ValueBounds& bounds, const UniformGrid& grid,
                                              const HyperRect& x0);

} // namespace safebound
