// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "safebound/geometry.hpp"

#include <cstddef>
#include <vector>

namespace safebound {

/// Discrete-time dynamics x' = A x + B u + c + v with independent per-axis
/// Gaussian noise v ~ N(0, diag(sigma^2)) and a finite action set.
/// An uncontrolled system is encoded with actions = { zero vector }.
struct AffineGaussianSystem {
    std::vector<std::vector<double>> A;       // n x n
    std::vector<std::vector<double>> B;       // n x m
    std::vector<double> c;                    // n
    std::vector<double> sigma;                // n, strictly positive
    std::vector<std::vector<double>> actions; // each of length m

    std::size_t state_dim() const { return A.size(); }
    std::size_t input_dim() const { return B.empty() ? 0 : B.front().size(); }
    std::size_t n_actions() const { return actions.size(); }
    void validate() const;
};

/// Closed probability interval [lo, hi] within [0, 1].
struct ProbInterval {
    double lo{0.0};
    double hi{0.0};
};

/// Standard normal CDF via erfc; absolute error below 1e-14.
double normal_cdf(double z);

/// Exact per-axis range of A x + B u_a + c over x in `source` (interval
/// arithmetic on each affine row; exact because the rows are affine).
HyperRect mean_image(const AffineGaussianSystem& sys, std::size_t action_idx,
                     const HyperRect& source);

/// One-step probability of landing in `target` from state x under action a:
/// product over axes of Gaussian CDF differences.
double transition_prob(const AffineGaussianSystem& sys, std::size_t action_idx,
                       const std::vector<double>& x, const HyperRect& target);

/// Sound interval for transition_prob over all x in `source`. Per axis the
/// maximum is attained with the mean clamped to the target midpoint and the
/// minimum at the mean-range endpoint farthest from it; products of per-axis
/// extrema give a valid (possibly loose for non-diagonal A) enclosure.
ProbInterval transition_bounds(const AffineGaussianSystem& sys, std::size_t action_idx,
                               const HyperRect& source, const HyperRect& target);

/// Sound interval for the probability of leaving `safe_set` in one step,
/// computed as the complement of the safe-set enclosure.
ProbInterval unsafe_bounds(const AffineGaussianSystem& sys, std::size_t action_idx,
                           const HyperRect& source, const HyperRect& safe_set);

} // namespace safebound
