// SPDX-License-Identifier: Apache-2.0
#include "safebound/lp.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace safebound {

namespace {

constexpr double kTol = 1e-9;
constexpr double kPivotTol = 1e-12;

struct Tableau {
    std::size_t m{0}, n{0};       // rows, columns (excluding rhs)
    std::vector<double> a;        // (m+1) x (n+1), last row = objective
    std::vector<std::size_t> basis;

    double& at(std::size_t i, std::size_t j) { return a[i * (n + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * (n + 1) + j]; }
    double& rhs(std::size_t i) { return a[i * (n + 1) + n]; }
    double& obj(std::size_t j) { return at(m, j); }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t j = 0; j <= n; ++j)
            at(pr, j) /= p;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == pr)
                continue;
            const double f = at(i, pc);
            if (f == 0.0)
                continue;
            for (std::size_t j = 0; j <= n; ++j)
                at(i, j) -= f * at(pr, j);
            at(i, pc) = 0.0;
        }
        if (pr < m)
            basis[pr] = pc;
    }
};

enum class RunOutcome { Optimal, Unbounded };

// Dantzig's rule (most negative reduced cost) with a switch to Bland's rule
// after a run of degenerate pivots, which guarantees termination.
RunOutcome run_simplex(Tableau& t, const std::vector<bool>& allowed) {
    const std::size_t max_iters = 50000 + 200 * (t.m + t.n);
    std::size_t degenerate_streak = 0;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        const bool bland = degenerate_streak > 2 * t.m;
        std::size_t pc = t.n;
        double most_negative = -kTol;
        for (std::size_t j = 0; j < t.n; ++j) {
            if (allowed[j] && t.obj(j) < most_negative) {
                pc = j;
                if (bland)
                    break;
                most_negative = t.obj(j);
            }
        }
        if (pc == t.n)
            return RunOutcome::Optimal;

        std::size_t pr = t.m;
        double best_ratio = 0.0;
        bool tiny_only = false;
        for (std::size_t i = 0; i < t.m; ++i) {
            const double aij = t.at(i, pc);
            if (aij <= kPivotTol) {
                if (aij > 0.0)
                    tiny_only = true;
                continue;
            }
            const double ratio = t.rhs(i) / aij;
            if (pr == t.m || ratio < best_ratio - kPivotTol ||
                (ratio < best_ratio + kPivotTol && t.basis[i] < t.basis[pr])) {
                pr = i;
                best_ratio = ratio;
            }
        }
        if (pr == t.m) {
            if (tiny_only)
                throw std::runtime_error("lp: numerical breakdown, no usable pivot");
            return RunOutcome::Unbounded;
        }
        if (best_ratio < kPivotTol)
            ++degenerate_streak;
        else
            degenerate_streak = 0;
        t.pivot(pr, pc);
    }
    throw std::runtime_error("lp: iteration limit exceeded");
}

void dump_tableau(const Tableau& t, const std::string& path) {
    std::ofstream out(path);
    out << "rows " << t.m << " cols " << t.n << "\n";
    for (std::size_t i = 0; i <= t.m; ++i) {
        for (std::size_t j = 0; j <= t.n; ++j)
            out << t.at(i, j) << (j == t.n ? '\n' : ' ');
    }
    out << "basis";
    for (auto b : t.basis)
        out << ' ' << b;
    out << '\n';
}

} // namespace

LpResult solve(const LinearProgram& lp, const std::string& debug_dump_path) {
    const std::size_t n = lp.n_vars();
    if (n == 0)
        throw std::invalid_argument("lp: empty objective");
    for (const auto& row : lp.rows)
        if (row.coeffs.size() != n)
            throw std::invalid_argument("lp: row dimension mismatch");
    const double inf = LinearProgram::inf();
    std::vector<double> lb(n, -inf), ub(n, inf);
    if (!lp.lower.empty()) {
        if (lp.lower.size() != n)
            throw std::invalid_argument("lp: lower bounds dimension mismatch");
        lb = lp.lower;
    }
    if (!lp.upper.empty()) {
        if (lp.upper.size() != n)
            throw std::invalid_argument("lp: upper bounds dimension mismatch");
        ub = lp.upper;
    }
    for (std::size_t j = 0; j < n; ++j)
        if (lb[j] > ub[j])
            throw std::invalid_argument("lp: lb > ub");

    // Substitute each variable by nonnegative columns:
    //   finite lb:              x = lb + y
    //   lb = -inf, finite ub:   x = ub - y
    //   free:                   x = y+ - y-
    std::vector<double> offset(n, 0.0), sign(n, 1.0);
    std::vector<std::size_t> col_pos(n);
    std::vector<std::ptrdiff_t> col_neg(n, -1);
    std::size_t ny = 0;
    for (std::size_t j = 0; j < n; ++j) {
        col_pos[j] = ny++;
        if (std::isfinite(lb[j])) {
            offset[j] = lb[j];
        } else if (std::isfinite(ub[j])) {
            offset[j] = ub[j];
            sign[j] = -1.0;
        } else {
            col_neg[j] = static_cast<std::ptrdiff_t>(ny++);
        }
    }

    // Rows in y-space: user rows first, then bound rows for doubly-bounded vars.
    struct YRow {
        std::vector<double> a;
        Relation rel;
        double rhs;
    };
    std::vector<YRow> yrows;
    yrows.reserve(lp.rows.size() + n);
    for (const auto& row : lp.rows) {
        YRow yr{std::vector<double>(ny, 0.0), row.rel, row.rhs};
        for (std::size_t j = 0; j < n; ++j) {
            const double aj = row.coeffs[j];
            if (aj == 0.0)
                continue;
            yr.a[col_pos[j]] += aj * sign[j];
            if (col_neg[j] >= 0)
                yr.a[static_cast<std::size_t>(col_neg[j])] -= aj;
            yr.rhs -= aj * offset[j];
        }
        yrows.push_back(std::move(yr));
    }
    const std::size_t n_user_rows = yrows.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (std::isfinite(lb[j]) && std::isfinite(ub[j]) && ub[j] > lb[j]) {
            YRow yr{std::vector<double>(ny, 0.0), Relation::LessEq, ub[j] - lb[j]};
            yr.a[col_pos[j]] = 1.0;
            yrows.push_back(std::move(yr));
        } else if (std::isfinite(lb[j]) && ub[j] == lb[j]) {
            YRow yr{std::vector<double>(ny, 0.0), Relation::Eq, 0.0};
            yr.a[col_pos[j]] = 1.0;
            yrows.push_back(std::move(yr));
        }
    }

    // Normalize to nonnegative rhs, count slack and artificial columns.
    const std::size_t m = yrows.size();
    std::vector<double> row_sign(m, 1.0);
    std::size_t n_slack = 0, n_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (yrows[i].rhs < 0.0) {
            row_sign[i] = -1.0;
            for (auto& v : yrows[i].a)
                v = -v;
            yrows[i].rhs = -yrows[i].rhs;
            if (yrows[i].rel == Relation::LessEq)
                yrows[i].rel = Relation::GreaterEq;
            else if (yrows[i].rel == Relation::GreaterEq)
                yrows[i].rel = Relation::LessEq;
        }
        if (yrows[i].rel != Relation::Eq)
            ++n_slack;
        if (yrows[i].rel != Relation::LessEq)
            ++n_art;
    }

    Tableau t;
    t.m = m;
    t.n = ny + n_slack + n_art;
    t.a.assign((m + 1) * (t.n + 1), 0.0);
    t.basis.assign(m, 0);
    std::vector<std::size_t> slack_col(m, t.n), art_col(m, t.n);
    std::size_t next = ny;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < ny; ++j)
            t.at(i, j) = yrows[i].a[j];
        t.rhs(i) = yrows[i].rhs;
        if (yrows[i].rel == Relation::LessEq) {
            slack_col[i] = next;
            t.at(i, next) = 1.0;
            t.basis[i] = next++;
        } else if (yrows[i].rel == Relation::GreaterEq) {
            slack_col[i] = next;
            t.at(i, next++) = -1.0;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (yrows[i].rel != Relation::LessEq) {
            art_col[i] = next;
            t.at(i, next) = 1.0;
            t.basis[i] = next++;
        }
    }

    // Phase 1: minimize the sum of artificials.
    std::vector<bool> allowed(t.n, true);
    double rhs_scale = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        rhs_scale += std::abs(yrows[i].rhs);
    bool have_art = false;
    for (std::size_t i = 0; i < m; ++i) {
        if (art_col[i] != t.n) {
            have_art = true;
            for (std::size_t j = 0; j <= t.n; ++j)
                t.obj(j) -= t.at(i, j);
            t.obj(art_col[i]) += 1.0;
        }
    }
    LpResult res;
    if (have_art) {
        run_simplex(t, allowed); // phase-1 objective is bounded below by 0
        const double phase1 = -t.at(t.m, t.n);
        if (phase1 > kTol * rhs_scale) {
            res.status = LpStatus::Infeasible;
            if (!debug_dump_path.empty())
                dump_tableau(t, debug_dump_path);
            return res;
        }
        // Pivot basic artificials out where possible; rows that cannot be
        // cleared are redundant and stay at zero.
        for (std::size_t i = 0; i < m; ++i) {
            if (t.basis[i] >= ny + n_slack) {
                for (std::size_t j = 0; j < ny + n_slack; ++j) {
                    if (std::abs(t.at(i, j)) > kPivotTol) {
                        t.pivot(i, j);
                        break;
                    }
                }
            }
        }
        for (std::size_t j = ny + n_slack; j < t.n; ++j)
            allowed[j] = false;
    }

    // Phase 2: reduced costs of the real objective under the current basis.
    for (std::size_t j = 0; j <= t.n; ++j)
        t.obj(j) = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double cj = lp.objective[j];
        t.obj(col_pos[j]) += cj * sign[j];
        if (col_neg[j] >= 0)
            t.obj(static_cast<std::size_t>(col_neg[j])) -= cj;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double cb = t.obj(t.basis[i]);
        if (cb == 0.0)
            continue;
        for (std::size_t j = 0; j <= t.n; ++j)
            t.at(t.m, j) -= cb * t.at(i, j);
        t.obj(t.basis[i]) = 0.0;
    }
    if (run_simplex(t, allowed) == RunOutcome::Unbounded) {
        res.status = LpStatus::Unbounded;
        if (!debug_dump_path.empty())
            dump_tableau(t, debug_dump_path);
        return res;
    }

    // Recover x, objective, and row multipliers.
    std::vector<double> y(t.n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        y[t.basis[i]] = t.rhs(i);
    res.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        res.x[j] = offset[j] + sign[j] * y[col_pos[j]];
        if (col_neg[j] >= 0)
            res.x[j] -= y[static_cast<std::size_t>(col_neg[j])];
    }
    res.objective_value = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        res.objective_value += lp.objective[j] * res.x[j];
    res.dual.assign(n_user_rows, 0.0);
    for (std::size_t i = 0; i < n_user_rows; ++i) {
        double yi;
        if (yrows[i].rel == Relation::LessEq)
            yi = -t.obj(slack_col[i]);
        else if (yrows[i].rel == Relation::GreaterEq)
            yi = t.obj(slack_col[i]);
        else
            yi = -t.obj(art_col[i]);
        res.dual[i] = row_sign[i] * yi;
    }
    res.status = LpStatus::Optimal;
    if (!debug_dump_path.empty())
        dump_tableau(t, debug_dump_path);
    return res;
}

} // namespace safebound
