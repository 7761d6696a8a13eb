// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "safebound/abstraction.hpp"
#include "safebound/geometry.hpp"
#include "safebound/kernel.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace safebound {

/// Piecewise-constant barrier over the grid: one value per safe cell and a
/// constant value (>= 1) on the unsafe complement.
struct PiecewiseBarrier {
    std::vector<double> values;
    double unsafe_value{1.0};
};

/// The certificate attached to a barrier: initial-set bound eta, one-step
/// expected-growth bound beta, and the safety lower bound 1 - (eta + beta H).
struct BarrierCertificate {
    double eta{0.0};
    double beta{0.0};
    double lower_bound{0.0};
    bool valid{false};
};

/// The indicator of the unsafe set: 0 on every safe cell, 1 outside.
PiecewiseBarrier indicator_barrier(const UniformGrid& grid);

/// sup of the barrier over the initial set; exact for piecewise-constant B.
double eta_of(const PiecewiseBarrier& barrier, const UniformGrid& grid, const HyperRect& x0);

/// Sound bound on the worst one-step expected growth of the barrier over the
/// safe set: max over safe cells of omax(B, row intervals) - B_i, clamped at 0.
double beta_of(const PiecewiseBarrier& barrier, const IntervalAbstraction& imc);

/// Verifies the barrier conditions and evaluates the certificate. The IMC is
/// rebuilt internally for the given action.
BarrierCertificate certify(const PiecewiseBarrier& barrier, const AffineGaussianSystem& sys,
                           const UniformGrid& grid, const HyperRect& x0, std::size_t H,
                           std::size_t action_idx = 0);

/// Thrown when the cutting-plane loop hits its iteration cap; carries the
/// best barrier found so far.
struct BarrierSynthesisError : std::runtime_error {
    PiecewiseBarrier best_iterate;
    BarrierSynthesisError(const std::string& msg, PiecewiseBarrier best)
        : std::runtime_error(msg), best_iterate(std::move(best)) {}
};

/// Searches the piecewise-constant class for the barrier minimizing
/// eta + H * beta via a cutting-plane LP: worst-case distribution vertices
/// found by omax become linear cuts until none is violated. The returned
/// certificate comes from an independent certify call.
std::pair<PiecewiseBarrier, BarrierCertificate>
synthesize_barrier(const AffineGaussianSystem& sys, const UniformGrid& grid, const HyperRect& x0,
                   std::size_t H, std::size_t action_idx = 0, std::size_t max_iterations = 200);

} // namespace safebound
