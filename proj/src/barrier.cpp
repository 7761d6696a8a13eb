// SPDX-License-Identifier: Apache-2.0
#include "safebound/barrier.hpp"

#include "safebound/lp.hpp"
#include "safebound/value_iteration.hpp"

#include <algorithm>
#include <cmath>

namespace safebound {

namespace {

constexpr double kCutTol = 1e-9;

// Barrier as a dense value vector over abstraction states, unsafe last.
std::vector<double> state_values(const PiecewiseBarrier& b) {
    std::vector<double> v = b.values;
    v.push_back(b.unsafe_value);
    return v;
}

} // namespace

PiecewiseBarrier indicator_barrier(const UniformGrid& grid) {
    return PiecewiseBarrier{std::vector<double>(grid.n_cells(), 0.0), 1.0};
}

double eta_of(const PiecewiseBarrier& barrier, const UniformGrid& grid, const HyperRect& x0) {
    if (barrier.values.size() != grid.n_cells())
        throw std::invalid_argument("eta_of: barrier size does not match grid");
    double eta = 0.0;
    for (std::size_t c : grid.cells_intersecting(x0))
        eta = std::max(eta, barrier.values[c]);
    return eta;
}

double beta_of(const PiecewiseBarrier& barrier, const IntervalAbstraction& imc) {
    if (barrier.values.size() + 1 != imc.n_states())
        throw std::invalid_argument("beta_of: barrier size does not match abstraction");
    if (imc.n_actions() != 1)
        throw std::invalid_argument("beta_of: abstraction must be single-action");
    const std::vector<double> bvec = state_values(barrier);
    std::vector<double> lo, hi;
    double beta = 0.0;
    for (std::size_t i = 0; i + 1 < imc.n_states(); ++i) {
        imc.dense_bounds(i, 0, lo, hi);
        beta = std::max(beta, omax(bvec, lo, hi).value - barrier.values[i]);
    }
    return std::max(0.0, beta);
}

BarrierCertificate certify(const PiecewiseBarrier& barrier, const AffineGaussianSystem& sys,
                           const UniformGrid& grid, const HyperRect& x0, std::size_t H,
                           std::size_t action_idx) {
    if (barrier.values.size() != grid.n_cells())
        throw std::invalid_argument("certify: barrier size does not match grid");
    BarrierCertificate cert;
    bool conditions = barrier.unsafe_value >= 1.0;
    for (double b : barrier.values)
        conditions = conditions && b >= 0.0 && std::isfinite(b);
    const IntervalAbstraction imc = build_imc(sys, grid, action_idx);
    cert.eta = eta_of(barrier, grid, x0);
    cert.beta = beta_of(barrier, imc);
    cert.lower_bound = std::max(0.0, 1.0 - (cert.eta + cert.beta * static_cast<double>(H)));
    cert.valid = conditions;
    return cert;
}

std::pair<PiecewiseBarrier, BarrierCertificate>
synthesize_barrier(const AffineGaussianSystem& sys, const UniformGrid& grid, const HyperRect& x0,
                   std::size_t H, std::size_t action_idx, std::size_t max_iterations) {
    const IntervalAbstraction imc = build_imc(sys, grid, action_idx);
    const std::size_t np = grid.n_cells();
    const std::size_t var_eta = np, var_beta = np + 1;

    // Variables: B_0..B_{np-1} in [0,1], eta >= 0, beta >= 0.
    LinearProgram lp;
    lp.objective.assign(np + 2, 0.0);
    lp.objective[var_eta] = 1.0;
    lp.objective[var_beta] = static_cast<double>(H);
    lp.lower.assign(np + 2, 0.0);
    lp.upper.assign(np + 2, 1.0);
    lp.upper[var_beta] = LinearProgram::inf();

    // eta dominates the barrier on every cell touching the initial set.
    for (std::size_t c : grid.cells_intersecting(x0)) {
        std::vector<double> row(np + 2, 0.0);
        row[c] = 1.0;
        row[var_eta] = -1.0;
        lp.add_row(std::move(row), Relation::LessEq, 0.0);
    }

    PiecewiseBarrier barrier{std::vector<double>(np, 1.0), 1.0};
    std::vector<double> lo, hi;
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        const LpResult sol = solve(lp);
        if (sol.status != LpStatus::Optimal)
            throw std::runtime_error("synthesize_barrier: master LP not optimal");
        for (std::size_t i = 0; i < np; ++i)
            barrier.values[i] = std::clamp(sol.x[i], 0.0, 1.0);
        const double beta = sol.x[var_beta];

        // Separation: worst-case distribution vertex per cell; violated
        // epigraph constraints become cuts  sum_j t*_j B_j - B_i - beta <= -t*_u.
        const std::vector<double> bvec = state_values(barrier);
        bool added = false;
        for (std::size_t i = 0; i < np; ++i) {
            imc.dense_bounds(i, 0, lo, hi);
            const OmaxResult worst = omax(bvec, lo, hi);
            if (worst.value - barrier.values[i] - beta > kCutTol) {
                std::vector<double> row(np + 2, 0.0);
                for (std::size_t j = 0; j < np; ++j)
                    row[j] = worst.witness[j];
                row[i] -= 1.0;
                row[var_beta] = -1.0;
                lp.add_row(std::move(row), Relation::LessEq, -worst.witness[np]);
                added = true;
            }
        }
        if (!added)
            return {barrier, certify(barrier, sys, grid, x0, H, action_idx)};
    }
    throw BarrierSynthesisError("synthesize_barrier: cutting-plane loop did not converge",
                                std::move(barrier));
}

} // namespace safebound
