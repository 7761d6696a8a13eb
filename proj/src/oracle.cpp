// SPDX-License-Identifier: Apache-2.0
#include "safebound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace safebound {

double MeshFunction::at(double x) const {
    if (mesh.size() < 2)
        return values.empty() ? 0.0 : values.front();
    if (x <= mesh.front())
        return values.front();
    if (x >= mesh.back())
        return values.back();
    const auto it = std::upper_bound(mesh.begin(), mesh.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - mesh.begin());
    const double t = (x - mesh[j - 1]) / (mesh[j] - mesh[j - 1]);
    return values[j - 1] + t * (values[j] - values[j - 1]);
}

OracleResult exact_dp(const AffineGaussianSystem& sys, const HyperRect& safe, std::size_t H,
                      std::size_t mesh_size, OracleMode mode, std::size_t action_idx) {
    sys.validate();
    if (sys.state_dim() != 1)
        throw std::invalid_argument("exact_dp: only 1-D systems are supported");
    safe.validate();
    if (safe.dim() != 1)
        throw std::invalid_argument("exact_dp: safe set must be 1-D");
    if (mesh_size < 100)
        throw std::invalid_argument("exact_dp: mesh_size must be >= 100");
    if (mode == OracleMode::FixedAction && action_idx >= sys.n_actions())
        throw std::out_of_range("exact_dp: action index out of range");

    const double a = safe.lower[0], b = safe.upper[0];
    const double sigma = sys.sigma[0];
    const std::size_t n = mesh_size;
    const double dy = (b - a) / static_cast<double>(n - 1);

    std::vector<double> mesh(n);
    for (std::size_t j = 0; j < n; ++j)
        mesh[j] = a + static_cast<double>(j) * dy;
    mesh.back() = b;

    std::vector<std::size_t> action_list;
    if (mode == OracleMode::FixedAction)
        action_list = {action_idx};
    else
        for (std::size_t i = 0; i < sys.n_actions(); ++i)
            action_list.push_back(i);
    std::vector<double> shifts; // B u + c per action
    for (std::size_t ai : action_list) {
        double s = sys.c[0];
        for (std::size_t k = 0; k < sys.input_dim(); ++k)
            s += sys.B[0][k] * sys.actions[ai][k];
        shifts.push_back(s);
    }
    const double a11 = sys.A[0][0];
    const double inv_norm = 1.0 / (sigma * std::sqrt(2.0 * M_PI));

    OracleResult res;
    res.value_functions.assign(H + 1, MeshFunction{mesh, std::vector<double>(n, 0.0)});

    std::vector<double> next(n, 0.0), cur(n, 0.0);
    for (std::size_t k = H; k-- > 0;) {
        for (std::size_t m = 0; m < n; ++m) {
            double best = 2.0;
            for (std::size_t ai = 0; ai < action_list.size(); ++ai) {
                const double mu = a11 * mesh[m] + shifts[ai];
                // Escape mass handled analytically; no tail truncation.
                const double stay = normal_cdf((b - mu) / sigma) - normal_cdf((a - mu) / sigma);
                double integral = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double z = (mesh[j] - mu) / sigma;
                    const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
                    integral += w * next[j] * std::exp(-0.5 * z * z);
                }
                integral *= inv_norm * dy;
                best = std::min(best, (1.0 - stay) + integral);
            }
            cur[m] = std::clamp(best, 0.0, 1.0);
        }
        res.value_functions[k].values = cur;
        next.swap(cur);
    }

    // Trapezoid consistency estimate: H * (b - a) * dy^2 / 12 * max|f''| with
    // the curvature of the Gaussian factor, max attained at its mode.
    res.quadrature_error_bound =
        static_cast<double>(H) * (b - a) * dy * dy / 12.0 / (sigma * sigma * sigma * std::sqrt(2.0 * M_PI));
    return res;
}

} // namespace safebound
