// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "safebound/geometry.hpp"
#include "safebound/kernel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace safebound {

/// Sparse interval row: explicit (target, [lo, hi]) pairs sorted by target.
/// Omitted targets carry the implicit interval [0, prune_threshold].
struct IntervalRow {
    std::vector<std::uint32_t> targets;
    std::vector<ProbInterval> intervals;
};

/// Finite IMC/IMDP over a grid: n_p safe states plus one absorbing unsafe
/// state (the last index). Transition probabilities are per-edge intervals.
class IntervalAbstraction {
  public:
    IntervalAbstraction(std::size_t n_states, std::size_t n_actions,
                        double prune_threshold = 1e-12);

    std::size_t n_states() const { return n_states_; }
    std::size_t n_actions() const { return n_actions_; }
    std::size_t unsafe_state() const { return n_states_ - 1; }
    double prune_threshold() const { return prune_threshold_; }

    const IntervalRow& row(std::size_t state, std::size_t action) const;
    void set_row(std::size_t state, std::size_t action, IntervalRow row);

    /// Expands a sparse row into dense lo/hi vectors of length n_states.
    void dense_bounds(std::size_t state, std::size_t action,
                      std::vector<double>& lo, std::vector<double>& hi) const;

    /// Checks the absorbing unsafe row and the row-sum feasibility
    /// condition sum(lo) <= 1 <= sum(hi) on every (state, action).
    void check_feasibility(double tol = 1e-9) const;

    std::string to_json() const;
    static IntervalAbstraction from_json(const std::string& text);

  private:
    std::size_t n_states_, n_actions_;
    double prune_threshold_;
    std::vector<IntervalRow> rows_; // state-major, action minor
};

/// Representative-point Markov chain: exact rows from one point per cell.
struct PointAbstraction {
    std::size_t n_states{0}, n_actions{0};
    std::vector<std::vector<double>> probs; // [state * n_actions + action][target]

    const std::vector<double>& row(std::size_t state, std::size_t action) const {
        return probs[state * n_actions + action];
    }
    std::size_t unsafe_state() const { return n_states - 1; }
};

/// IMDP over all actions: entry (i, a, j) = transition_bounds(cell i, cell j),
/// unsafe column from unsafe_bounds, unsafe state absorbing. Upper mass pruned
/// below the threshold is folded into the unsafe upper bound.
IntervalAbstraction build_imdp(const AffineGaussianSystem& sys, const UniformGrid& grid,
                               double prune_threshold = 1e-12, unsigned threads = 1);

/// IMC: the single-action restriction of build_imdp.
IntervalAbstraction build_imc(const AffineGaussianSystem& sys, const UniformGrid& grid,
                              std::size_t action_idx, double prune_threshold = 1e-12,
                              unsigned threads = 1);

/// Representative-point MC over all actions; representative point = cell
/// center, residual row mass assigned to the unsafe state.
PointAbstraction build_mc(const AffineGaussianSystem& sys, const UniformGrid& grid);
PointAbstraction build_mc(const AffineGaussianSystem& sys, const UniformGrid& grid,
                          std::size_t action_idx);

/// Sound Lipschitz constant of x -> T(box | x, a) in the infinity norm,
/// uniform over box targets and actions:
///   L = (max_d sum_k |A[d][k]|) * sum_d 1 / (sigma_d * sqrt(2 pi)).
double kernel_lipschitz_bound(const AffineGaussianSystem& sys);

/// Partition size ceil((l * H * L / epsilon)^n) + 1 sufficient for
/// abstraction error epsilon over horizon H on a domain of diameter l.
long long suggested_partition(double L, int H, double epsilon, double diameter_l, int n);

} // namespace safebound
