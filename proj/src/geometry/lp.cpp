#include "lp.hpp"

#include <cassert>
#include <limits>

namespace rtpta::geometry::lp {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * (cols + 1)), basis_(rows, kNone) {}

    Rational &at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    const Rational &at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    Rational &rhs(std::size_t r) { return at(r, cols_); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t> &basis() { return basis_; }

    void pivot(std::size_t pr, std::size_t pc, std::vector<Rational> &obj) {
        const Rational p = at(pr, pc);
        if (p != Rational(1)) {
            for (std::size_t c = 0; c <= cols_; ++c) {
                Rational &v = at(pr, c);
                if (!v.is_zero()) {
                    v /= p;
                }
            }
        }
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) {
                continue;
            }
            const Rational f = at(r, pc);
            if (f.is_zero()) {
                continue;
            }
            for (std::size_t c = 0; c <= cols_; ++c) {
                const Rational &src = at(pr, c);
                if (!src.is_zero()) {
                    at(r, c) -= f * src;
                }
            }
        }
        const Rational f = obj[pc];
        if (!f.is_zero()) {
            for (std::size_t c = 0; c <= cols_; ++c) {
                const Rational &src = at(pr, c);
                if (!src.is_zero()) {
                    obj[c] -= f * src;
                }
            }
        }
        basis_[pr] = pc;
    }

    // Maximises with reduced-cost row `obj` (obj[cols] holds -z). Columns
    // flagged in `blocked` never enter. Returns false when unbounded.
    bool optimise(std::vector<Rational> &obj, const std::vector<bool> &blocked) {
        for (;;) {
            std::size_t enter = kNone;
            for (std::size_t c = 0; c < cols_; ++c) {
                if (!blocked[c] && obj[c].sign() > 0) {
                    enter = c;
                    break;
                }
            }
            if (enter == kNone) {
                return true;
            }
            std::size_t leave = kNone;
            Rational best;
            for (std::size_t r = 0; r < rows_; ++r) {
                const Rational &a = at(r, enter);
                if (a.sign() <= 0) {
                    continue;
                }
                Rational ratio = at(r, cols_) / a;
                if (leave == kNone || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = std::move(ratio);
                }
            }
            if (leave == kNone) {
                return false;
            }
            pivot(leave, enter, obj);
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Rational> data_;
    std::vector<std::size_t> basis_;
};

}  // namespace

Solution solve(const Problem &problem) {
    const std::size_t n = problem.num_vars;
    const std::size_t m = problem.rows.size();
    const std::size_t structural = 2 * n;

    std::size_t num_slack = 0;
    std::size_t num_art = 0;
    std::vector<int> row_sign(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        const Row &row = problem.rows[i];
        if (row.rhs.sign() < 0) {
            row_sign[i] = -1;
        }
        if (!row.equality) {
            ++num_slack;
        }
        if (row.equality || row_sign[i] < 0) {
            ++num_art;
        }
    }
    const std::size_t slack0 = structural;
    const std::size_t art0 = structural + num_slack;
    const std::size_t cols = art0 + num_art;

    Tableau t(m, cols);
    std::vector<bool> is_art(cols, false);
    std::size_t s = 0;
    std::size_t a = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const Row &row = problem.rows[i];
        const Rational sg(row_sign[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j < row.coeffs.size() && !row.coeffs[j].is_zero()) {
                Rational v = row_sign[i] < 0 ? -row.coeffs[j] : row.coeffs[j];
                t.at(i, 2 * j + 1) = -v;
                t.at(i, 2 * j) = std::move(v);
            }
        }
        t.rhs(i) = row_sign[i] < 0 ? -row.rhs : row.rhs;
        if (!row.equality) {
            t.at(i, slack0 + s) = sg;
            if (row_sign[i] > 0) {
                t.basis()[i] = slack0 + s;
            }
            ++s;
        }
        if (row.equality || row_sign[i] < 0) {
            t.at(i, art0 + a) = Rational(1);
            t.basis()[i] = art0 + a;
            is_art[art0 + a] = true;
            ++a;
        }
    }

    std::vector<bool> blocked(cols, false);
    if (num_art > 0) {
        // Phase 1: maximise -sum(artificials).
        std::vector<Rational> obj(cols + 1);
        for (std::size_t i = 0; i < m; ++i) {
            if (is_art[t.basis()[i]]) {
                for (std::size_t c = 0; c <= cols; ++c) {
                    if (!is_art[c] || c == cols) {
                        const Rational &v = t.at(i, c);
                        if (!v.is_zero()) {
                            obj[c] += v;
                        }
                    }
                }
            }
        }
        t.optimise(obj, blocked);
        // obj[cols] = sum of artificial values at optimum
        if (obj[cols].sign() != 0) {
            return {};
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_art[t.basis()[i]]) {
                continue;
            }
            for (std::size_t c = 0; c < art0; ++c) {
                if (!t.at(i, c).is_zero()) {
                    t.pivot(i, c, obj);
                    break;
                }
            }
        }
        for (std::size_t c = art0; c < cols; ++c) {
            blocked[c] = true;
        }
    }

    Solution sol;
    if (!problem.objective.empty()) {
        std::vector<Rational> obj(cols + 1);
        for (std::size_t j = 0; j < n && j < problem.objective.size(); ++j) {
            obj[2 * j] = problem.objective[j];
            obj[2 * j + 1] = -problem.objective[j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t b = t.basis()[i];
            if (b >= cols || is_art[b]) {
                continue;
            }
            const Rational cb = obj[b];
            if (cb.is_zero()) {
                continue;
            }
            for (std::size_t c = 0; c <= cols; ++c) {
                const Rational &v = t.at(i, c);
                if (!v.is_zero()) {
                    obj[c] -= cb * v;
                }
            }
        }
        if (!t.optimise(obj, blocked)) {
            sol.status = Solution::Status::unbounded;
            return sol;
        }
        sol.value = -obj[cols];
    }
    sol.status = Solution::Status::optimal;
    std::vector<Rational> y(cols);
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis()[i] < cols) {
            y[t.basis()[i]] = t.rhs(i);
        }
    }
    sol.point.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        sol.point[j] = y[2 * j] - y[2 * j + 1];
    }
    return sol;
}

}  // namespace rtpta::geometry::lp
