// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "safebound/geometry.hpp"
#include "safebound/kernel.hpp"

#include <cstddef>
#include <vector>

namespace safebound {

/// Function samples on a strictly increasing mesh; evaluated elsewhere by
/// linear interpolation (clamped to the mesh range).
struct MeshFunction {
    std::vector<double> mesh;
    std::vector<double> values;

    double at(double x) const;
};

enum class OracleMode { FixedAction, Optimal };

/// Near-exact backward DP for 1-D systems. value_functions[k] holds the
/// unsafety value at step k (k = 0 is the full-horizon value); the escape
/// probability per step is computed from exact CDF complements and the
/// interior integral by trapezoid quadrature on the mesh.
struct OracleResult {
    std::vector<MeshFunction> value_functions; // index k in [0, H]
    double quadrature_error_bound{0.0};

    /// Safety probability 1 - V_0(x).
    double safety_at(double x) const { return 1.0 - value_functions.front().at(x); }
};

OracleResult exact_dp(const AffineGaussianSystem& sys, const HyperRect& safe, std::size_t H,
                      std::size_t mesh_size, OracleMode mode, std::size_t action_idx = 0);

} // namespace safebound
