#pragma once

#include <vector>

#include "rtpta/rational.hpp"

namespace rtpta::geometry::lp {

// One row: sum coeffs[i] * x_i (<= or =) rhs over free variables x.
struct Row {
    std::vector<Rational> coeffs;
    Rational rhs;
    bool equality = false;
};

struct Problem {
    std::size_t num_vars = 0;
    std::vector<Row> rows;
    std::vector<Rational> objective;  // maximised; empty means feasibility only
};

struct Solution {
    enum class Status { infeasible, unbounded, optimal } status = Status::infeasible;
    Rational value;
    std::vector<Rational> point;
};

// Exact two-phase primal simplex with Bland's rule.
Solution solve(const Problem &problem);

}  // namespace rtpta::geometry::lp
