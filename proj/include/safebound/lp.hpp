// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace safebound {

enum class Relation { LessEq, Eq, GreaterEq };

/// Small dense LP: minimize c.x subject to row constraints and per-variable
/// bounds (+-infinity allowed). Bounds are expanded into rows internally.
struct LinearProgram {
    std::vector<double> objective;
    struct Row {
        std::vector<double> coeffs;
        Relation rel{Relation::LessEq};
        double rhs{0.0};
    };
    std::vector<Row> rows;
    std::vector<double> lower; // per-variable, -inf allowed
    std::vector<double> upper; // per-variable, +inf allowed

    std::size_t n_vars() const { return objective.size(); }
    void add_row(std::vector<double> coeffs, Relation rel, double rhs) {
        rows.push_back(Row{std::move(coeffs), rel, rhs});
    }
    static double inf() { return std::numeric_limits<double>::infinity(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status{LpStatus::Infeasible};
    std::vector<double> x;
    double objective_value{0.0};
    /// One multiplier per user row (bound rows excluded), from the final basis.
    std::vector<double> dual;
};

/// Two-phase primal simplex, Bland's anti-cycling rule, dense tableau.
/// Deterministic: lowest eligible index enters, lowest-index tie-break on the
/// ratio test. Feasibility and optimality tolerances are 1e-9.
/// When `debug_dump_path` is non-empty the final tableau is written there.
LpResult solve(const LinearProgram& lp, const std::string& debug_dump_path = "");

} // namespace safebound
