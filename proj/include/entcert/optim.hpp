#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "entcert/errors.hpp"

namespace entcert {

enum class OptStatus { Optimal, Infeasible, Unbounded };

inline const char* opt_status_name(OptStatus s) {
    switch (s) {
        case OptStatus::Optimal: return "optimal";
        case OptStatus::Infeasible: return "infeasible";
        case OptStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

// maximize objective . x
// subject to  eq_a x == eq_b,  ub_a x <= ub_b,
//             x_i >= 0 unless free_vars[i] (then x_i is unrestricted).
struct LinearProgram {
    Eigen::VectorXd objective;
    Eigen::MatrixXd eq_a;
    Eigen::VectorXd eq_b;
    Eigen::MatrixXd ub_a;
    Eigen::VectorXd ub_b;
    std::vector<bool> free_vars;  // empty means all variables >= 0

    int num_vars() const { return static_cast<int>(objective.size()); }

    void validate() const {
        const int n = num_vars();
        if (n == 0) throw ValidationError("LinearProgram: no variables");
        if (eq_a.size() > 0 && eq_a.cols() != n)
            throw ValidationError("LinearProgram: equality matrix column count mismatch");
        if (eq_a.rows() != eq_b.size())
            throw ValidationError("LinearProgram: equality rhs length mismatch");
        if (ub_a.size() > 0 && ub_a.cols() != n)
            throw ValidationError("LinearProgram: inequality matrix column count mismatch");
        if (ub_a.rows() != ub_b.size())
            throw ValidationError("LinearProgram: inequality rhs length mismatch");
        if (!free_vars.empty() && static_cast<int>(free_vars.size()) != n)
            throw ValidationError("LinearProgram: free-variable mask length mismatch");
        if (!objective.allFinite() || !eq_a.allFinite() || !eq_b.allFinite() ||
            !ub_a.allFinite() || !ub_b.allFinite())
            throw ValidationError("LinearProgram: non-finite entry");
    }
};

struct LPSolution {
    OptStatus status = OptStatus::Infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
};

namespace lp_detail {

inline constexpr double feas_tol = 1e-9;
inline constexpr double pivot_tol = 1e-11;

}  // namespace lp_detail

// Dense-tableau two-phase simplex with Bland's anti-cycling rule. Free
// variables are split into positive and negative parts; inequality rows get
// slack variables; rows whose slack cannot start basic get artificials.
// Deterministic for fixed input.
inline LPSolution solve_lp(const LinearProgram& lp) {
    using lp_detail::feas_tol;
    using lp_detail::pivot_tol;
    lp.validate();

    const int n_orig = lp.num_vars();
    const int m_eq = static_cast<int>(lp.eq_a.rows());
    const int m_ub = static_cast<int>(lp.ub_a.rows());
    const int m = m_eq + m_ub;

    // Column layout: split structural columns, then slacks, then artificials.
    std::vector<int> col_of_var(n_orig), neg_col_of_var(n_orig, -1);
    int ns = 0;
    for (int i = 0; i < n_orig; ++i) {
        col_of_var[i] = ns++;
        if (!lp.free_vars.empty() && lp.free_vars[i]) neg_col_of_var[i] = ns++;
    }
    const int slack0 = ns;
    const int n_struct = ns + m_ub;

    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(m, n_struct);
    Eigen::VectorXd rhs(m);
    for (int r = 0; r < m; ++r) {
        const bool is_eq = r < m_eq;
        const auto a = is_eq ? lp.eq_a.row(r) : lp.ub_a.row(r - m_eq);
        rhs(r) = is_eq ? lp.eq_b(r) : lp.ub_b(r - m_eq);
        for (int i = 0; i < n_orig; ++i) {
            rows(r, col_of_var[i]) = a(i);
            if (neg_col_of_var[i] >= 0) rows(r, neg_col_of_var[i]) = -a(i);
        }
        if (!is_eq) rows(r, slack0 + (r - m_eq)) = 1.0;
        if (rhs(r) < 0.0) {
            rows.row(r) *= -1.0;
            rhs(r) *= -1.0;
        }
    }

    // Initial basis: slack where it survived the sign flip, artificial otherwise.
    std::vector<int> basis(m);
    std::vector<int> artificial_rows;
    int n_total = n_struct;
    for (int r = 0; r < m; ++r) {
        const int sc = (r >= m_eq) ? slack0 + (r - m_eq) : -1;
        if (sc >= 0 && rows(r, sc) > 0.5) {
            basis[r] = sc;
        } else {
            basis[r] = n_total++;
            artificial_rows.push_back(r);
        }
    }
    const int art0 = n_struct;
    Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m, n_total);
    tab.leftCols(n_struct) = rows;
    for (int r = 0; r < m; ++r)
        if (basis[r] >= art0) tab(r, basis[r]) = 1.0;

    // Cost rows carried through all pivots: phase-1 (maximize -sum of
    // artificials) and phase-2 (the split original objective).
    Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(n_total);
    for (int r : artificial_rows) cost1.head(n_struct) += tab.row(r).head(n_struct);
    Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(n_total);
    for (int i = 0; i < n_orig; ++i) {
        cost2(col_of_var[i]) = lp.objective(i);
        if (neg_col_of_var[i] >= 0) cost2(neg_col_of_var[i]) = -lp.objective(i);
    }

    std::vector<bool> locked(n_total, false);  // artificials removed from play

    auto do_pivot = [&](int row, int col) {
        const double p = tab(row, col);
        tab.row(row) /= p;
        rhs(row) /= p;
        for (int r = 0; r < m; ++r) {
            if (r == row) continue;
            const double f = tab(r, col);
            if (f != 0.0) {
                tab.row(r) -= f * tab.row(row);
                rhs(r) -= f * rhs(row);
            }
        }
        cost1 -= cost1(col) * tab.row(row).transpose();
        cost2 -= cost2(col) * tab.row(row).transpose();
        basis[row] = col;
    };

    // Bland: entering column is the lowest eligible index, leaving row breaks
    // ratio ties by the lowest basic index.
    auto iterate = [&](const Eigen::VectorXd& cost, bool phase_one) -> OptStatus {
        const long max_iter = 50000L + 200L * (m + n_total);
        for (long it = 0; it < max_iter; ++it) {
            int enter = -1;
            for (int j = 0; j < n_total; ++j) {
                if (locked[j]) continue;
                if (cost(j) > feas_tol) {
                    bool has_row = false;
                    for (int r = 0; r < m; ++r)
                        if (tab(r, j) > pivot_tol) { has_row = true; break; }
                    if (!has_row) {
                        if (phase_one) continue;  // cannot improve along this column
                        return OptStatus::Unbounded;
                    }
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return OptStatus::Optimal;

            int leave = -1;
            double best = 0.0;
            for (int r = 0; r < m; ++r) {
                if (tab(r, enter) <= pivot_tol) continue;
                const double ratio = rhs(r) / tab(r, enter);
                if (leave < 0 || ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            do_pivot(leave, enter);
        }
        throw ValidationError("solve_lp: iteration limit exceeded");
    };

    LPSolution sol;
    if (!artificial_rows.empty()) {
        iterate(cost1, true);
        double infeasibility = 0.0;
        for (int r = 0; r < m; ++r)
            if (basis[r] >= art0) infeasibility += rhs(r);
        if (infeasibility > feas_tol) {
            sol.status = OptStatus::Infeasible;
            return sol;
        }
        // Drive remaining artificials out of the basis; a row with no usable
        // structural pivot is redundant and harmless to leave in place.
        for (int r = 0; r < m; ++r) {
            if (basis[r] < art0) continue;
            for (int j = 0; j < n_struct; ++j) {
                if (std::abs(tab(r, j)) > pivot_tol) {
                    do_pivot(r, j);
                    break;
                }
            }
        }
        for (int j = art0; j < n_total; ++j) locked[j] = true;
    }

    const OptStatus status = iterate(cost2, false);
    if (status == OptStatus::Unbounded) {
        sol.status = OptStatus::Unbounded;
        return sol;
    }

    Eigen::VectorXd split = Eigen::VectorXd::Zero(n_total);
    for (int r = 0; r < m; ++r)
        if (basis[r] < n_total) split(basis[r]) = rhs(r);
    sol.x.resize(n_orig);
    for (int i = 0; i < n_orig; ++i) {
        sol.x(i) = split(col_of_var[i]);
        if (neg_col_of_var[i] >= 0) sol.x(i) -= split(neg_col_of_var[i]);
    }
    sol.objective = lp.objective.dot(sol.x);
    sol.status = OptStatus::Optimal;
    return sol;
}

// Scalar boundary search for a predicate that is true at the start point and
// monotone along the chosen direction.
struct BisectionSpec {
    std::function<bool(double)> predicate;
    double tolerance = 1e-9;
    double initial_step = 0.05;
    double expansion = 2.0;
    double ceiling = 1e8;  // |offset| beyond which the region counts as unbounded
};

// Returns the edge of the true-region in the given direction (the last point
// confirmed true, within tolerance of the first false point), or a signed
// infinity when the bracket expansion passes the ceiling while still true.
inline double bisect_boundary(const BisectionSpec& spec, double start, int direction) {
    if (direction != 1 && direction != -1)
        throw ArgumentError("bisect_boundary: direction must be +1 or -1");
    if (!(spec.tolerance > 0.0)) throw ArgumentError("bisect_boundary: tolerance must be > 0");
    if (!spec.predicate(start))
        throw ArgumentError("bisect_boundary: predicate must hold at the start point");

    double inside = start;
    double step = spec.initial_step;
    double outside;
    for (;;) {
        outside = inside + direction * step;
        if (std::abs(outside - start) > spec.ceiling)
            return direction > 0 ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
        if (!spec.predicate(outside)) break;
        inside = outside;
        step *= spec.expansion;
    }
    while (std::abs(outside - inside) > spec.tolerance) {
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;  // interval is down to one ulp
        if (spec.predicate(mid))
            inside = mid;
        else
            outside = mid;
    }
    return inside;
}

}  // namespace entcert
