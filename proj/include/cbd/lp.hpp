#pragma once

#include <cstddef>
#include <vector>

#include "cbd/rational.hpp"

namespace cbd::lp {

/// maximize objective . x  subject to  rows[i] . x == rhs[i] for all i,
/// x >= 0. Dense representation; every coefficient exact.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<Rational> objective;          // size num_vars
    std::vector<std::vector<Rational>> rows;  // each of size num_vars
    std::vector<Rational> rhs;                // size rows.size()
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;

    // Status::Optimal
    Rational optimum;
    std::vector<Rational> primal;  // size num_vars, feasible, attains optimum
    std::vector<Rational> dual;    // per row: dual . A >= objective, dual . rhs == optimum

    // Status::Infeasible
    std::vector<Rational> farkas;  // per row: farkas . A <= 0, farkas . rhs > 0
};

/// Exact two-phase primal simplex on a dense tableau.
///
/// Pivoting uses Bland's least-index rule in both phases (smallest eligible
/// entering column; ratio ties broken by the smallest basic variable index),
/// which precludes cycling and makes the solve fully deterministic: the same
/// problem always yields the same basis, primal point, and certificates.
/// Infeasibility is reported with a Farkas multiplier vector, optimality with
/// the dual vector, both over the problem's original rows.
Solution solve(const Problem& problem);

/// Exact check of an infeasibility certificate: y . A <= 0 componentwise
/// and y . rhs > 0.
bool verify_farkas(const Problem& problem, const std::vector<Rational>& y);

/// Exact check of an optimal solution: primal feasibility, dual feasibility,
/// and a zero duality gap.
bool verify_optimal(const Problem& problem, const Solution& solution);

}  // namespace cbd::lp
