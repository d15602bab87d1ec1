#include "cbd/lp.hpp"

#include <cstddef>
#include <limits>
#include <utility>

#include "cbd/errors.hpp"

namespace cbd::lp {

namespace {

constexpr std::size_t kNoPivot = std::numeric_limits<std::size_t>::max();

// Full tableau over n structural columns followed by one artificial column
// per row. The artificial block doubles as a record of the accumulated row
// operations: the cost row always satisfies cost = c - w.[A | I], so the
// multiplier vector w can be read off the artificial columns at any time.
// That is how dual and Farkas vectors are extracted.
class Tableau {
public:
    enum class Phase { One, Two };

    explicit Tableau(const Problem& problem)
        : n_(problem.num_vars), m_(problem.rows.size()) {
        rows_.resize(m_);
        rhs_.resize(m_);
        basis_.resize(m_);
        sign_.assign(m_, 1);
        for (std::size_t i = 0; i < m_; ++i) {
            rows_[i].assign(n_ + m_, Rational(0));
            bool flip = problem.rhs[i] < 0;
            if (flip) sign_[i] = -1;
            for (std::size_t j = 0; j < n_; ++j) {
                if (problem.rows[i][j] != 0)
                    rows_[i][j] = flip ? -problem.rows[i][j] : problem.rows[i][j];
            }
            rhs_[i] = flip ? -problem.rhs[i] : problem.rhs[i];
            rows_[i][n_ + i] = 1;
            basis_[i] = n_ + i;
        }

        // Phase 1 maximizes -(sum of artificials). With the all-artificial
        // starting basis the reduced costs are the structural column sums
        // and the value is -(sum of rhs).
        phase1_cost_.assign(n_ + m_, Rational(0));
        phase1_value_ = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) phase1_cost_[j] += rows_[i][j];
            phase1_value_ -= rhs_[i];
        }

        phase2_cost_.assign(n_ + m_, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) phase2_cost_[j] = problem.objective[j];
        phase2_value_ = 0;
    }

    // Feasibility phase; true iff the constraints admit a point.
    bool run_phase1() {
        if (!optimize(Phase::One))
            throw Error("internal: phase-1 objective unbounded");
        return phase1_value_ == 0;
    }

    // Optimality phase; false when the objective is unbounded above.
    bool run_phase2() { return optimize(Phase::Two); }

    // After a feasible phase 1, pivot artificial variables out of the basis.
    // A row whose structural part has been reduced to zero is a redundant
    // constraint and is dropped from the working set.
    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_;) {
            if (basis_[i] < n_) {
                ++i;
                continue;
            }
            std::size_t col = kNoPivot;
            for (std::size_t j = 0; j < n_; ++j) {
                if (rows_[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col == kNoPivot) {
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
                rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
                --m_;
            } else {
                pivot(i, col);  // rhs is zero here, so feasibility is kept
                ++i;
            }
        }
    }

    Rational phase1_value() const { return phase1_value_; }
    Rational phase2_value() const { return phase2_value_; }

    std::vector<Rational> primal() const {
        std::vector<Rational> x(n_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
        }
        return x;
    }

    // Multipliers w (per original row, original orientation) accumulated in
    // the given cost row; artificial_cost is that row's cost coefficient on
    // artificial columns (-1 in phase 1, 0 in phase 2).
    std::vector<Rational> multipliers(Phase phase) const {
        const auto& cost = phase == Phase::One ? phase1_cost_ : phase2_cost_;
        Rational artificial_cost = phase == Phase::One ? Rational(-1) : Rational(0);
        std::vector<Rational> w(original_rows_());
        for (std::size_t j = 0; j < w.size(); ++j) {
            w[j] = (artificial_cost - cost[n_ + j]) * sign_[j];
        }
        return w;
    }

private:
    std::size_t original_rows_() const { return sign_.size(); }

    // Bland's rule: the smallest-index structural column with a positive
    // reduced cost enters. Artificial columns never (re-)enter; for equality
    // constraints they must stay at zero once feasibility is reached, and
    // if phase 1 stalls with all structural reduced costs nonpositive the
    // accumulated multipliers already certify infeasibility.
    bool optimize(Phase phase) {
        auto& cost = phase == Phase::One ? phase1_cost_ : phase2_cost_;
        for (;;) {
            std::size_t entering = kNoPivot;
            for (std::size_t j = 0; j < n_; ++j) {
                if (cost[j] > 0) {
                    entering = j;
                    break;
                }
            }
            if (entering == kNoPivot) return true;

            std::size_t leaving = ratio_test(entering);
            if (leaving == kNoPivot) return false;
            pivot(leaving, entering);
        }
    }

    // Least ratio rhs/entry over positive pivot-column entries; ties broken
    // by the smallest basic variable index (Bland).
    std::size_t ratio_test(std::size_t entering) const {
        std::size_t best = kNoPivot;
        Rational best_ratio;
        for (std::size_t i = 0; i < m_; ++i) {
            const Rational& a = rows_[i][entering];
            if (a <= 0) continue;
            Rational ratio = rhs_[i] / a;
            if (best == kNoPivot || ratio < best_ratio ||
                (ratio == best_ratio && basis_[i] < basis_[best])) {
                best = i;
                best_ratio = std::move(ratio);
            }
        }
        return best;
    }

    void pivot(std::size_t row, std::size_t col) {
        Rational p = rows_[row][col];
        if (p != 1) {
            for (auto& entry : rows_[row]) {
                if (entry != 0) entry /= p;
            }
            rhs_[row] /= p;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const Rational factor = rows_[i][col];
            if (factor == 0) continue;
            const auto& src = rows_[row];
            auto& dst = rows_[i];
            for (std::size_t j = 0; j < src.size(); ++j) {
                if (src[j] != 0) dst[j] -= factor * src[j];
            }
            rhs_[i] -= factor * rhs_[row];
        }
        reduce_cost_row(phase1_cost_, phase1_value_, row, col);
        reduce_cost_row(phase2_cost_, phase2_value_, row, col);
        basis_[row] = col;
    }

    void reduce_cost_row(std::vector<Rational>& cost, Rational& value, std::size_t row,
                         std::size_t col) {
        const Rational factor = cost[col];
        if (factor == 0) return;
        const auto& src = rows_[row];
        for (std::size_t j = 0; j < src.size(); ++j) {
            if (src[j] != 0) cost[j] -= factor * src[j];
        }
        value += factor * rhs_[row];
    }

    std::size_t n_;
    std::size_t m_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<int> sign_;
    std::vector<Rational> phase1_cost_;
    Rational phase1_value_;
    std::vector<Rational> phase2_cost_;
    Rational phase2_value_;
};

}  // namespace

Solution solve(const Problem& problem) {
    Tableau tableau(problem);
    Solution solution;

    if (!tableau.run_phase1()) {
        solution.status = Status::Infeasible;
        // Phase-1 multipliers satisfy w.A >= 0 and w.rhs < 0; negate to get
        // the usual Farkas orientation.
        std::vector<Rational> w = tableau.multipliers(Tableau::Phase::One);
        solution.farkas.reserve(w.size());
        for (auto& value : w) solution.farkas.push_back(-value);
        return solution;
    }

    tableau.drive_out_artificials();

    if (!tableau.run_phase2()) {
        solution.status = Status::Unbounded;
        return solution;
    }

    solution.status = Status::Optimal;
    solution.optimum = tableau.phase2_value();
    solution.primal = tableau.primal();
    solution.dual = tableau.multipliers(Tableau::Phase::Two);
    return solution;
}

bool verify_farkas(const Problem& problem, const std::vector<Rational>& y) {
    if (y.size() != problem.rows.size()) return false;
    for (std::size_t j = 0; j < problem.num_vars; ++j) {
        Rational column = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] != 0 && problem.rows[i][j] != 0) column += y[i] * problem.rows[i][j];
        }
        if (column > 0) return false;
    }
    Rational value = 0;
    for (std::size_t i = 0; i < y.size(); ++i) value += y[i] * problem.rhs[i];
    return value > 0;
}

bool verify_optimal(const Problem& problem, const Solution& solution) {
    if (solution.status != Status::Optimal) return false;
    if (solution.primal.size() != problem.num_vars) return false;
    if (solution.dual.size() != problem.rows.size()) return false;

    for (const auto& x : solution.primal) {
        if (x < 0) return false;
    }
    for (std::size_t i = 0; i < problem.rows.size(); ++i) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < problem.num_vars; ++j) {
            if (problem.rows[i][j] != 0 && solution.primal[j] != 0)
                lhs += problem.rows[i][j] * solution.primal[j];
        }
        if (lhs != problem.rhs[i]) return false;
    }

    Rational primal_value = 0;
    for (std::size_t j = 0; j < problem.num_vars; ++j) {
        if (solution.primal[j] != 0) primal_value += problem.objective[j] * solution.primal[j];
    }
    if (primal_value != solution.optimum) return false;

    for (std::size_t j = 0; j < problem.num_vars; ++j) {
        Rational column = 0;
        for (std::size_t i = 0; i < problem.rows.size(); ++i) {
            if (solution.dual[i] != 0 && problem.rows[i][j] != 0)
                column += solution.dual[i] * problem.rows[i][j];
        }
        if (column < problem.objective[j]) return false;
    }
    Rational dual_value = 0;
    for (std::size_t i = 0; i < problem.rows.size(); ++i)
        dual_value += solution.dual[i] * problem.rhs[i];
    return dual_value == solution.optimum;
}

}  // namespace cbd::lp
