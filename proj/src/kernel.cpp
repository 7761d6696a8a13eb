// SPDX-License-Identifier: Apache-2.0
#include "safebound/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace safebound {

void AffineGaussianSystem::validate() const {
    const std::size_t n = state_dim();
    if (n == 0)
        throw std::invalid_argument("system: state dimension must be >= 1");
    for (const auto& row : A)
        if (row.size() != n)
            throw std::invalid_argument("system: A must be square n x n");
    if (B.size() != n)
        throw std::invalid_argument("system: B must have n rows");
    const std::size_t m = input_dim();
    for (const auto& row : B)
        if (row.size() != m)
            throw std::invalid_argument("system: ragged B matrix");
    if (c.size() != n || sigma.size() != n)
        throw std::invalid_argument("system: c and sigma must have length n");
    for (double s : sigma)
        if (!(s > 0.0))
            throw std::invalid_argument("system: sigma must be strictly positive");
    if (actions.empty())
        throw std::invalid_argument("system: action set must be non-empty");
    for (const auto& u : actions)
        if (u.size() != m)
            throw std::invalid_argument("system: action dimension mismatch");
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

namespace {

const std::vector<double>& action_of(const AffineGaussianSystem& sys, std::size_t action_idx) {
    if (action_idx >= sys.n_actions())
        throw std::out_of_range("system: action index out of range");
    return sys.actions[action_idx];
}

// Offset term (B u + c)_d of row d.
double row_offset(const AffineGaussianSystem& sys, const std::vector<double>& u, std::size_t d) {
    double off = sys.c[d];
    for (std::size_t k = 0; k < u.size(); ++k)
        off += sys.B[d][k] * u[k];
    return off;
}

// Probability mass of [lo, hi] under N(mean, sigma^2) on one axis.
double axis_prob(double lo, double hi, double mean, double sigma) {
    return normal_cdf((hi - mean) / sigma) - normal_cdf((lo - mean) / sigma);
}

} // namespace

HyperRect mean_image(const AffineGaussianSystem& sys, std::size_t action_idx,
                     const HyperRect& source) {
    const auto& u = action_of(sys, action_idx);
    source.validate();
    const std::size_t n = sys.state_dim();
    if (source.dim() != n)
        throw std::invalid_argument("mean_image: source dimension mismatch");
    HyperRect img;
    img.lower.resize(n);
    img.upper.resize(n);
    for (std::size_t d = 0; d < n; ++d) {
        double lo = row_offset(sys, u, d);
        double hi = lo;
        for (std::size_t k = 0; k < n; ++k) {
            const double a = sys.A[d][k];
            if (a >= 0.0) {
                lo += a * source.lower[k];
                hi += a * source.upper[k];
            } else {
                lo += a * source.upper[k];
                hi += a * source.lower[k];
            }
        }
        img.lower[d] = lo;
        img.upper[d] = hi;
    }
    return img;
}

double transition_prob(const AffineGaussianSystem& sys, std::size_t action_idx,
                       const std::vector<double>& x, const HyperRect& target) {
    const auto& u = action_of(sys, action_idx);
    const std::size_t n = sys.state_dim();
    if (x.size() != n || target.dim() != n)
        throw std::invalid_argument("transition_prob: dimension mismatch");
    double p = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
        double mean = row_offset(sys, u, d);
        for (std::size_t k = 0; k < n; ++k)
            mean += sys.A[d][k] * x[k];
        p *= axis_prob(target.lower[d], target.upper[d], mean, sys.sigma[d]);
    }
    return std::clamp(p, 0.0, 1.0);
}

ProbInterval transition_bounds(const AffineGaussianSystem& sys, std::size_t action_idx,
                               const HyperRect& source, const HyperRect& target) {
    const HyperRect means = mean_image(sys, action_idx, source);
    const std::size_t n = sys.state_dim();
    if (target.dim() != n)
        throw std::invalid_argument("transition_bounds: target dimension mismatch");
    double lo = 1.0, hi = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
        const double mid = 0.5 * (target.lower[d] + target.upper[d]);
        const double m_best = std::clamp(mid, means.lower[d], means.upper[d]);
        const double m_worst = (mid - means.lower[d] >= means.upper[d] - mid)
                                   ? means.lower[d]
                                   : means.upper[d];
        hi *= axis_prob(target.lower[d], target.upper[d], m_best, sys.sigma[d]);
        lo *= axis_prob(target.lower[d], target.upper[d], m_worst, sys.sigma[d]);
    }
    ProbInterval out{std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0)};
    if (out.lo > out.hi)
        out.lo = out.hi;
    return out;
}

ProbInterval unsafe_bounds(const AffineGaussianSystem& sys, std::size_t action_idx,
                           const HyperRect& source, const HyperRect& safe_set) {
    const ProbInterval safe = transition_bounds(sys, action_idx, source, safe_set);
    return ProbInterval{std::clamp(1.0 - safe.hi, 0.0, 1.0),
                        std::clamp(1.0 - safe.lo, 0.0, 1.0)};
}

} // namespace safebound
