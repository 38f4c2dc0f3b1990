#include "rtpta/polyhedron.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fm.hpp"
#include "lp.hpp"

namespace rtpta::geometry {

// ---------------------------------------------------------------- Space

Space::Space(std::vector<Variable> vars) : vars_(std::move(vars)) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (!index_.emplace(vars_[i].name, i).second) {
            throw std::invalid_argument("duplicate variable name: " + vars_[i].name);
        }
    }
    name_order_.resize(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        name_order_[i] = i;
    }
    std::sort(name_order_.begin(), name_order_.end(),
              [&](std::size_t a, std::size_t b) { return vars_[a].name < vars_[b].name; });
}

std::shared_ptr<const Space> Space::make(std::vector<Variable> vars) {
    return std::make_shared<const Space>(std::move(vars));
}

std::optional<std::size_t> Space::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t Space::index_of(std::string_view name) const {
    auto i = find(name);
    if (!i) {
        throw std::out_of_range("unknown variable: " + std::string(name));
    }
    return *i;
}

std::vector<std::size_t> Space::indices_of(VarKind kind) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].kind == kind) {
            out.push_back(i);
        }
    }
    return out;
}

bool same_space(const SpacePtr &a, const SpacePtr &b) { return a == b || (a && b && *a == *b); }

std::string_view to_string(Rel r) {
    switch (r) {
    case Rel::lt:
        return "<";
    case Rel::le:
        return "<=";
    case Rel::eq:
        return "=";
    }
    return "?";
}

// ---------------------------------------------------------------- LinearInequality

bool LinearInequality::is_trivial() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational &r) { return r.is_zero(); });
}

bool LinearInequality::trivially_true() const {
    if (!is_trivial()) {
        return false;
    }
    switch (rel) {
    case Rel::le:
        return bound.sign() >= 0;
    case Rel::lt:
        return bound.sign() > 0;
    case Rel::eq:
        return bound.is_zero();
    }
    return false;
}

Rational LinearInequality::evaluate(std::span<const Rational> point) const {
    Rational s;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (!coeffs[i].is_zero()) {
            s += coeffs[i] * point[i];
        }
    }
    return s;
}

bool LinearInequality::holds_at(std::span<const Rational> point) const {
    Rational s = evaluate(point);
    switch (rel) {
    case Rel::le:
        return s <= bound;
    case Rel::lt:
        return s < bound;
    case Rel::eq:
        return s == bound;
    }
    return false;
}

LinearInequality make_inequality(const Space &space, const std::map<std::string, Rational> &terms, Rel rel,
                                 const Rational &bound) {
    LinearInequality c;
    c.coeffs.resize(space.size());
    for (const auto &[name, v] : terms) {
        c.coeffs[space.index_of(name)] += v;
    }
    c.rel = rel;
    c.bound = bound;
    return c;
}

LinearInequality negate(const LinearInequality &j) {
    if (j.rel == Rel::eq) {
        throw std::invalid_argument("negating an equality needs a side; use negate_equality");
    }
    LinearInequality n;
    n.coeffs.reserve(j.coeffs.size());
    for (const auto &v : j.coeffs) {
        n.coeffs.push_back(-v);
    }
    n.bound = -j.bound;
    n.rel = j.rel == Rel::le ? Rel::lt : Rel::le;
    return n;
}

std::pair<LinearInequality, LinearInequality> negate_equality(const LinearInequality &j) {
    LinearInequality below = j;
    below.rel = Rel::lt;
    LinearInequality above;
    for (const auto &v : j.coeffs) {
        above.coeffs.push_back(-v);
    }
    above.bound = -j.bound;
    above.rel = Rel::lt;
    return {below, above};
}

// ---------------------------------------------------------------- canonical form

namespace {

struct Side {
    std::optional<Rational> value;
    bool strict = false;
};

struct DirectionBounds {
    Side lo;
    Side hi;
};

// lexicographic on (number of variables, position of first nonzero coefficient
// in name order, coefficients in name order)
struct DirectionLess {
    const std::vector<std::size_t> *order;
    bool operator()(const std::vector<Rational> &a, const std::vector<Rational> &b) const {
        auto first = [&](const std::vector<Rational> &v) {
            for (std::size_t k = 0; k < order->size(); ++k) {
                if (!v[(*order)[k]].is_zero()) {
                    return k;
                }
            }
            return order->size();
        };
        auto support = [](const std::vector<Rational> &v) {
            return std::count_if(v.begin(), v.end(), [](const Rational &r) { return !r.is_zero(); });
        };
        auto sa = support(a);
        auto sb = support(b);
        if (sa != sb) {
            return sa < sb;
        }
        std::size_t fa = first(a);
        std::size_t fb = first(b);
        if (fa != fb) {
            return fa < fb;
        }
        for (std::size_t k = 0; k < order->size(); ++k) {
            std::size_t i = (*order)[k];
            if (a[i] != b[i]) {
                return a[i] < b[i];
            }
        }
        return false;
    }
};

void tighten_hi(Side &s, const Rational &v, bool strict) {
    if (!s.value || v < *s.value || (v == *s.value && strict)) {
        s.value = v;
        s.strict = strict;
    }
}

void tighten_lo(Side &s, const Rational &v, bool strict) {
    if (!s.value || v > *s.value || (v == *s.value && strict)) {
        s.value = v;
        s.strict = strict;
    }
}

}  // namespace

std::vector<LinearInequality> canonicalize(const Space &space, std::vector<LinearInequality> cs, bool &empty) {
    empty = false;
    const auto &order = space.name_order();
    std::map<std::vector<Rational>, DirectionBounds, DirectionLess> dirs(DirectionLess{&order});
    for (auto &c : cs) {
        c.coeffs.resize(space.size());
        if (c.is_trivial()) {
            if (!c.trivially_true()) {
                empty = true;
                return {};
            }
            continue;
        }
        fm::normalize(c.coeffs, c.bound);
        int lead = 0;
        for (std::size_t i : order) {
            if (!c.coeffs[i].is_zero()) {
                lead = c.coeffs[i].sign();
                break;
            }
        }
        bool flipped = lead < 0;
        if (flipped) {
            for (auto &v : c.coeffs) {
                if (!v.is_zero()) {
                    v = -v;
                }
            }
            c.bound = -c.bound;
        }
        auto &db = dirs[std::move(c.coeffs)];
        bool strict = c.rel == Rel::lt;
        if (c.rel == Rel::eq) {
            tighten_hi(db.hi, c.bound, false);
            tighten_lo(db.lo, c.bound, false);
        } else if (!flipped) {
            tighten_hi(db.hi, c.bound, strict);
        } else {
            tighten_lo(db.lo, c.bound, strict);
        }
    }
    std::vector<LinearInequality> out;
    out.reserve(dirs.size() * 2);
    for (auto &[dir, b] : dirs) {
        if (b.lo.value && b.hi.value) {
            if (*b.lo.value > *b.hi.value) {
                empty = true;
                return {};
            }
            if (*b.lo.value == *b.hi.value) {
                if (b.lo.strict || b.hi.strict) {
                    empty = true;
                    return {};
                }
                out.push_back(LinearInequality{dir, Rel::eq, *b.hi.value});
                continue;
            }
        }
        if (b.lo.value) {
            std::vector<Rational> neg = dir;
            for (auto &v : neg) {
                if (!v.is_zero()) {
                    v = -v;
                }
            }
            out.push_back(LinearInequality{std::move(neg), b.lo.strict ? Rel::lt : Rel::le, -*b.lo.value});
        }
        if (b.hi.value) {
            out.push_back(LinearInequality{dir, b.hi.strict ? Rel::lt : Rel::le, *b.hi.value});
        }
    }
    return out;
}

// ---------------------------------------------------------------- Polyhedron

Polyhedron::Polyhedron(SpacePtr space, std::vector<LinearInequality> constraints, bool empty, bool canonical)
    : space_(std::move(space)), cons_(std::move(constraints)), empty_(empty) {
    if (!canonical && !empty_) {
        bool e = false;
        cons_ = canonicalize(*space_, std::move(cons_), e);
        empty_ = e;
    }
    if (empty_) {
        cons_.clear();
    }
}

Polyhedron::Polyhedron(SpacePtr space, std::vector<LinearInequality> constraints)
    : Polyhedron(std::move(space), std::move(constraints), false, false) {}

Polyhedron::Polyhedron() : Polyhedron(Space::make({}), {}, false, true) {}

Polyhedron Polyhedron::universe(SpacePtr space) { return Polyhedron(std::move(space), {}, false, true); }

Polyhedron Polyhedron::empty(SpacePtr space) { return Polyhedron(std::move(space), {}, true, true); }

namespace {

void require_same(const Polyhedron &a, const Polyhedron &b) {
    if (!same_space(a.space(), b.space())) {
        throw std::invalid_argument("polyhedra over different variable universes");
    }
}

// Closure rows plus an epsilon column for strict rows.
lp::Problem strict_feasibility_problem(const std::vector<LinearInequality> &cons, std::size_t n, bool &has_strict) {
    has_strict = std::any_of(cons.begin(), cons.end(), [](const LinearInequality &c) { return c.rel == Rel::lt; });
    lp::Problem prob;
    prob.num_vars = n + (has_strict ? 1 : 0);
    for (const auto &c : cons) {
        lp::Row r;
        r.coeffs = c.coeffs;
        r.coeffs.resize(prob.num_vars);
        if (c.rel == Rel::lt) {
            r.coeffs[n] = Rational(1);
        }
        r.rhs = c.bound;
        r.equality = c.rel == Rel::eq;
        prob.rows.push_back(std::move(r));
    }
    if (has_strict) {
        lp::Row cap;
        cap.coeffs.resize(prob.num_vars);
        cap.coeffs[n] = Rational(1);
        cap.rhs = Rational(1);
        prob.rows.push_back(std::move(cap));
        prob.objective.assign(prob.num_vars, Rational());
        prob.objective[n] = Rational(1);
    }
    return prob;
}

bool only_single_variable_rows(const std::vector<LinearInequality> &cons) {
    for (const auto &c : cons) {
        int nz = 0;
        for (const auto &v : c.coeffs) {
            nz += !v.is_zero();
        }
        if (nz > 1) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool Polyhedron::is_empty() const {
    if (empty_) {
        return true;
    }
    if (cons_.empty() || only_single_variable_rows(cons_)) {
        return false;  // canonical form already reconciled every per-variable interval
    }
    bool has_strict = false;
    lp::Problem prob = strict_feasibility_problem(cons_, dimension(), has_strict);
    lp::Solution sol = lp::solve(prob);
    if (sol.status == lp::Solution::Status::infeasible) {
        return true;
    }
    if (!has_strict) {
        return false;
    }
    return sol.value.sign() <= 0;
}

std::optional<Point> Polyhedron::sample_point() const {
    if (empty_) {
        return std::nullopt;
    }
    bool has_strict = false;
    lp::Problem prob = strict_feasibility_problem(cons_, dimension(), has_strict);
    lp::Solution sol = lp::solve(prob);
    if (sol.status == lp::Solution::Status::infeasible || (has_strict && sol.value.sign() <= 0)) {
        return std::nullopt;
    }
    sol.point.resize(dimension());
    return sol.point;
}

Polyhedron Polyhedron::meet(const Polyhedron &o) const {
    require_same(*this, o);
    if (empty_ || o.is_universe()) {
        return *this;
    }
    if (o.empty_ || is_universe()) {
        return o;
    }
    std::vector<LinearInequality> cs = cons_;
    cs.insert(cs.end(), o.cons_.begin(), o.cons_.end());
    return Polyhedron(space_, std::move(cs));
}

Polyhedron Polyhedron::meet(const LinearInequality &c) const {
    if (empty_) {
        return *this;
    }
    std::vector<LinearInequality> cs = cons_;
    cs.push_back(c);
    return Polyhedron(space_, std::move(cs));
}

Polyhedron Polyhedron::meet(std::span<const LinearInequality> extra) const {
    if (empty_ || extra.empty()) {
        return *this;
    }
    std::vector<LinearInequality> cs = cons_;
    cs.insert(cs.end(), extra.begin(), extra.end());
    return Polyhedron(space_, std::move(cs));
}

Polyhedron Polyhedron::eliminate(std::span<const std::size_t> vars) const {
    if (empty_ || cons_.empty() || vars.empty()) {
        return *this;
    }
    std::vector<std::size_t> cols;
    for (std::size_t v : vars) {
        if (v >= dimension()) {
            throw std::out_of_range("eliminate: variable index out of range");
        }
        bool used = std::any_of(cons_.begin(), cons_.end(), [&](const LinearInequality &c) { return !c.coeffs[v].is_zero(); });
        if (used && std::find(cols.begin(), cols.end(), v) == cols.end()) {
            cols.push_back(v);
        }
    }
    if (cols.empty()) {
        return *this;
    }
    bool e = false;
    auto rows = fm::eliminate(cons_, dimension(), std::move(cols), e);
    if (e) {
        return empty(space_);
    }
    return Polyhedron(space_, std::move(rows));
}

Polyhedron Polyhedron::eliminate_names(const std::vector<std::string> &names) const {
    std::vector<std::size_t> idx;
    idx.reserve(names.size());
    for (const auto &n : names) {
        idx.push_back(space_->index_of(n));
    }
    return eliminate(idx);
}

Polyhedron Polyhedron::time_elapse(const SlopeVector &slopes) const {
    if (empty_) {
        return *this;
    }
    const std::size_t n = dimension();
    if (slopes.size() != n) {
        throw std::invalid_argument("time_elapse: slope vector size mismatch");
    }
    // constraint a.x' - (a.s) t rel b over (x', t), t >= 0, then drop t
    std::vector<LinearInequality> rows;
    rows.reserve(cons_.size() + 1);
    bool any_moving = false;
    for (const auto &c : cons_) {
        LinearInequality r = c;
        r.coeffs.resize(n + 1);
        Rational as;
        for (std::size_t i = 0; i < n; ++i) {
            if (slopes[i] != 0 && !c.coeffs[i].is_zero()) {
                as += c.coeffs[i] * Rational(slopes[i]);
            }
        }
        any_moving = any_moving || !as.is_zero();
        r.coeffs[n] = -as;
        rows.push_back(std::move(r));
    }
    if (!any_moving) {
        // no constraint changes along the slope direction
        return *this;
    }
    LinearInequality tpos;
    tpos.coeffs.resize(n + 1);
    tpos.coeffs[n] = Rational(-1);
    tpos.rel = Rel::le;
    rows.push_back(std::move(tpos));
    bool e = false;
    auto out = fm::eliminate(std::move(rows), n + 1, {n}, e);
    if (e) {
        return empty(space_);
    }
    for (auto &r : out) {
        r.coeffs.resize(n);
    }
    return Polyhedron(space_, std::move(out));
}

Polyhedron Polyhedron::reset(std::span<const std::size_t> vars) const {
    if (empty_) {
        return *this;
    }
    Polyhedron p = eliminate(vars);
    if (p.empty_) {
        return p;
    }
    std::vector<LinearInequality> cs = p.cons_;
    for (std::size_t v : vars) {
        LinearInequality z;
        z.coeffs.resize(dimension());
        z.coeffs[v] = Rational(1);
        z.rel = Rel::eq;
        cs.push_back(std::move(z));
    }
    return Polyhedron(space_, std::move(cs));
}

Polyhedron Polyhedron::substitute(std::size_t var, const Rational &value) const {
    if (empty_) {
        return *this;
    }
    std::vector<LinearInequality> cs = cons_;
    for (auto &c : cs) {
        if (!c.coeffs[var].is_zero()) {
            c.bound -= c.coeffs[var] * value;
            c.coeffs[var] = Rational();
        }
    }
    return Polyhedron(space_, std::move(cs));
}

Polyhedron Polyhedron::substitute(const ParamPoint &pt) const {
    if (empty_) {
        return *this;
    }
    std::vector<LinearInequality> cs = cons_;
    for (const auto &[name, value] : pt) {
        auto idx = space_->find(name);
        if (!idx) {
            continue;
        }
        for (auto &c : cs) {
            if (!c.coeffs[*idx].is_zero()) {
                c.bound -= c.coeffs[*idx] * value;
                c.coeffs[*idx] = Rational();
            }
        }
    }
    return Polyhedron(space_, std::move(cs));
}

Polyhedron Polyhedron::rebase(const SpacePtr &target) const {
    if (same_space(space_, target)) {
        return Polyhedron(target, cons_, empty_, true);
    }
    if (empty_) {
        return empty(target);
    }
    std::vector<LinearInequality> cs;
    cs.reserve(cons_.size());
    for (const auto &c : cons_) {
        LinearInequality r;
        r.coeffs.resize(target->size());
        for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
            if (!c.coeffs[i].is_zero()) {
                r.coeffs[target->index_of((*space_)[i].name)] = c.coeffs[i];
            }
        }
        r.rel = c.rel;
        r.bound = c.bound;
        cs.push_back(std::move(r));
    }
    return Polyhedron(target, std::move(cs));
}

namespace {

// `c` already appears in `b` with an equal or tighter bound in the same direction.
bool syntactically_implied(const Polyhedron &b, const LinearInequality &c) {
    for (const auto &d : b.constraints()) {
        if (d.coeffs != c.coeffs) {
            continue;
        }
        if (d.rel == Rel::eq) {
            if (c.rel == Rel::eq) {
                return d.bound == c.bound;
            }
            return d.bound < c.bound || (d.bound == c.bound && c.rel == Rel::le);
        }
        if (c.rel == Rel::eq) {
            return false;
        }
        if (d.bound < c.bound) {
            return true;
        }
        if (d.bound == c.bound) {
            return c.rel == Rel::le || d.rel == Rel::lt;
        }
        return false;
    }
    return false;
}

}  // namespace

bool Polyhedron::includes(const Polyhedron &b) const {
    require_same(*this, b);
    if (b.empty_ || is_universe()) {
        return true;
    }
    if (empty_) {
        return b.is_empty();
    }
    for (const auto &c : cons_) {
        if (syntactically_implied(b, c)) {
            continue;
        }
        if (c.rel == Rel::eq) {
            auto [lo, hi] = negate_equality(c);
            if (!b.meet(lo).is_empty() || !b.meet(hi).is_empty()) {
                return false;
            }
        } else if (!b.meet(negate(c)).is_empty()) {
            return false;
        }
    }
    return true;
}

bool Polyhedron::contains(std::span<const Rational> point) const {
    if (empty_) {
        return false;
    }
    return std::all_of(cons_.begin(), cons_.end(), [&](const LinearInequality &c) { return c.holds_at(point); });
}

bool Polyhedron::satisfies(const ParamPoint &pt) const {
    if (empty_) {
        return false;
    }
    Point v(dimension());
    std::vector<bool> assigned(dimension(), false);
    for (const auto &[name, value] : pt) {
        if (auto idx = space_->find(name)) {
            v[*idx] = value;
            assigned[*idx] = true;
        }
    }
    for (const auto &c : cons_) {
        for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
            if (!c.coeffs[i].is_zero() && !assigned[i]) {
                throw std::invalid_argument("satisfies: unassigned variable " + (*space_)[i].name);
            }
        }
        if (!c.holds_at(v)) {
            return false;
        }
    }
    return true;
}

Optimum Polyhedron::maximize(std::span<const Rational> objective) const {
    Optimum out;
    if (is_empty()) {
        return out;
    }
    lp::Problem prob;
    prob.num_vars = dimension();
    for (const auto &c : cons_) {
        prob.rows.push_back(lp::Row{c.coeffs, c.bound, c.rel == Rel::eq});
    }
    prob.objective.assign(objective.begin(), objective.end());
    prob.objective.resize(dimension());
    lp::Solution sol = lp::solve(prob);
    if (sol.status == lp::Solution::Status::unbounded) {
        out.status = Optimum::Status::unbounded;
        return out;
    }
    if (sol.status == lp::Solution::Status::infeasible) {
        return out;
    }
    out.status = Optimum::Status::bounded;
    out.bound.value = sol.value;
    LinearInequality at{prob.objective, Rel::eq, sol.value};
    out.bound.attained = !meet(at).is_empty();
    return out;
}

Optimum Polyhedron::minimize(std::span<const Rational> objective) const {
    std::vector<Rational> neg(objective.begin(), objective.end());
    for (auto &v : neg) {
        v = -v;
    }
    Optimum o = maximize(neg);
    if (o.status == Optimum::Status::bounded) {
        o.bound.value = -o.bound.value;
    }
    return o;
}

Optimum Polyhedron::minimize(std::size_t var) const {
    std::vector<Rational> obj(dimension());
    obj.at(var) = Rational(1);
    return minimize(obj);
}

Optimum Polyhedron::maximize(std::size_t var) const {
    std::vector<Rational> obj(dimension());
    obj.at(var) = Rational(1);
    return maximize(obj);
}

Polyhedron Polyhedron::remove_redundant() const {
    if (empty_ || cons_.size() < 2) {
        return *this;
    }
    if (is_empty()) {
        return empty(space_);
    }
    std::vector<LinearInequality> kept = cons_;
    for (std::size_t i = 0; i < kept.size();) {
        if (kept[i].rel == Rel::eq) {
            ++i;
            continue;
        }
        std::vector<LinearInequality> others;
        others.reserve(kept.size() - 1);
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (j != i) {
                others.push_back(kept[j]);
            }
        }
        others.push_back(negate(kept[i]));
        if (Polyhedron(space_, std::move(others)).is_empty()) {
            kept.erase(kept.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
    return Polyhedron(space_, std::move(kept), false, true);
}

std::vector<std::size_t> Polyhedron::constrained_variables() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dimension(); ++i) {
        if (std::any_of(cons_.begin(), cons_.end(), [&](const LinearInequality &c) { return !c.coeffs[i].is_zero(); })) {
            out.push_back(i);
        }
    }
    return out;
}

std::string to_string(const Space &space, const LinearInequality &c) {
    const auto &order = space.name_order();
    // print in ">=" form when the leading coefficient is negative
    int lead = 0;
    for (std::size_t i : order) {
        if (i < c.coeffs.size() && !c.coeffs[i].is_zero()) {
            lead = c.coeffs[i].sign();
            break;
        }
    }
    const bool flip = lead < 0 && c.rel != Rel::eq;
    std::ostringstream os;
    bool first = true;
    for (std::size_t i : order) {
        if (i >= c.coeffs.size() || c.coeffs[i].is_zero()) {
            continue;
        }
        Rational v = flip ? -c.coeffs[i] : c.coeffs[i];
        if (first) {
            if (v.sign() < 0) {
                os << "-";
            }
        } else {
            os << (v.sign() < 0 ? " - " : " + ");
        }
        Rational mag = v.abs();
        if (mag != Rational(1)) {
            os << mag << "*";
        }
        os << space[i].name;
        first = false;
    }
    if (first) {
        os << "0";
    }
    std::string_view rel;
    if (c.rel == Rel::eq) {
        rel = "=";
    } else if (flip) {
        rel = c.rel == Rel::le ? ">=" : ">";
    } else {
        rel = c.rel == Rel::le ? "<=" : "<";
    }
    os << " " << rel << " " << (flip ? -c.bound : c.bound);
    return os.str();
}

std::string Polyhedron::to_string() const {
    if (empty_) {
        return "false";
    }
    if (cons_.empty()) {
        return "true";
    }
    std::string out;
    for (const auto &c : cons_) {
        if (!out.empty()) {
            out += " & ";
        }
        out += geometry::to_string(*space_, c);
    }
    return out;
}

bool Polyhedron::operator==(const Polyhedron &o) const {
    return same_space(space_, o.space_) && empty_ == o.empty_ && cons_ == o.cons_;
}

std::size_t Polyhedron::hash() const {
    std::size_t h = empty_ ? 0x51ed27 : 0x7f4a7c15;
    for (const auto &c : cons_) {
        for (const auto &v : c.coeffs) {
            h = h * 1315423911u + v.hash();
        }
        h = h * 31 + static_cast<std::size_t>(c.rel);
        h = h * 1315423911u + c.bound.hash();
    }
    return h;
}

// ---------------------------------------------------------------- hull

Polyhedron convex_hull(const Polyhedron &a, const Polyhedron &b) {
    require_same(a, b);
    if (a.is_empty()) {
        return b;
    }
    if (b.is_empty()) {
        return a;
    }
    if (a.includes(b)) {
        return a;
    }
    if (b.includes(a)) {
        return b;
    }
    const std::size_t n = a.dimension();
    // columns: x (0..n-1), y (n..2n-1), lambda (2n); y is a's scaled share
    const std::size_t width = 2 * n + 1;
    const std::size_t lam = 2 * n;
    std::vector<LinearInequality> rows;
    for (const auto &c : a.constraints()) {
        LinearInequality r;
        r.coeffs.resize(width);
        for (std::size_t i = 0; i < n; ++i) {
            r.coeffs[n + i] = c.coeffs[i];
        }
        r.coeffs[lam] = -c.bound;
        r.rel = c.rel == Rel::eq ? Rel::eq : Rel::le;
        rows.push_back(std::move(r));
    }
    for (const auto &c : b.constraints()) {
        LinearInequality r;
        r.coeffs.resize(width);
        for (std::size_t i = 0; i < n; ++i) {
            r.coeffs[i] = c.coeffs[i];
            r.coeffs[n + i] = -c.coeffs[i];
        }
        r.coeffs[lam] = c.bound;
        r.bound = c.bound;
        r.rel = c.rel == Rel::eq ? Rel::eq : Rel::le;
        rows.push_back(std::move(r));
    }
    LinearInequality lo;
    lo.coeffs.resize(width);
    lo.coeffs[lam] = Rational(-1);
    rows.push_back(lo);
    LinearInequality hi;
    hi.coeffs.resize(width);
    hi.coeffs[lam] = Rational(1);
    hi.bound = Rational(1);
    rows.push_back(hi);

    std::vector<std::size_t> cols;
    for (std::size_t i = n; i < width; ++i) {
        cols.push_back(i);
    }
    bool e = false;
    auto out = fm::eliminate(std::move(rows), width, std::move(cols), e);
    for (auto &r : out) {
        r.coeffs.resize(n);
    }
    Polyhedron closed(a.space(), std::move(out));
    closed = closed.remove_redundant();
    // a bounding hyperplane touched by neither operand is strict in the hull
    std::vector<LinearInequality> cs = closed.constraints();
    for (auto &c : cs) {
        if (c.rel != Rel::le) {
            continue;
        }
        LinearInequality on = c;
        on.rel = Rel::eq;
        if (a.meet(on).is_empty() && b.meet(on).is_empty()) {
            c.rel = Rel::lt;
        }
    }
    return Polyhedron(a.space(), std::move(cs));
}

bool is_empty_by_elimination(const Polyhedron &p) {
    if (p.marked_empty()) {
        return true;
    }
    std::vector<std::size_t> all(p.dimension());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    bool e = false;
    // Chernikov pruning keeps every strict row, so the ground system decides
    // emptiness exactly.
    auto rows = fm::eliminate(p.constraints(), p.dimension(), all, e);
    (void)rows;
    return e;
}

}  // namespace rtpta::geometry
