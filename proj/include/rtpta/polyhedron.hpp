#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rtpta/rational.hpp"

namespace rtpta::geometry {

enum class VarKind { clock, parameter };

struct Variable {
    std::string name;
    VarKind kind = VarKind::clock;

    bool operator==(const Variable &) const = default;
};

// Immutable, ordered universe of variables. Polyhedra over the same universe
// can be combined.
class Space {
public:
    explicit Space(std::vector<Variable> vars);

    static std::shared_ptr<const Space> make(std::vector<Variable> vars);

    [[nodiscard]] std::size_t size() const { return vars_.size(); }
    [[nodiscard]] const Variable &operator[](std::size_t i) const { return vars_[i]; }
    [[nodiscard]] const std::vector<Variable> &variables() const { return vars_; }
    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
    [[nodiscard]] std::size_t index_of(std::string_view name) const;  // throws if absent
    // Variable indices sorted by name; drives the canonical constraint order.
    [[nodiscard]] const std::vector<std::size_t> &name_order() const { return name_order_; }
    [[nodiscard]] std::vector<std::size_t> indices_of(VarKind kind) const;

    bool operator==(const Space &o) const { return vars_ == o.vars_; }

private:
    std::vector<Variable> vars_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::size_t> name_order_;
};

using SpacePtr = std::shared_ptr<const Space>;

bool same_space(const SpacePtr &a, const SpacePtr &b);

enum class Rel { lt, le, eq };

std::string_view to_string(Rel r);

// sum_i coeffs[i] * x_i  rel  bound, dense over a Space.
struct LinearInequality {
    std::vector<Rational> coeffs;
    Rel rel = Rel::le;
    Rational bound;

    [[nodiscard]] bool is_trivial() const;  // every coefficient zero
    [[nodiscard]] bool trivially_true() const;
    [[nodiscard]] bool holds_at(std::span<const Rational> point) const;
    [[nodiscard]] Rational evaluate(std::span<const Rational> point) const;

    bool operator==(const LinearInequality &) const = default;
};

// Builds a constraint from named terms.
LinearInequality make_inequality(const Space &space, const std::map<std::string, Rational> &terms, Rel rel,
                                 const Rational &bound);

// Complement of a non-equality constraint: a.x <= b  ->  -a.x < -b, and a.x < b -> -a.x <= -b.
LinearInequality negate(const LinearInequality &j);

// The two strict complements of an equality (a.x < b, a.x > b).
std::pair<LinearInequality, LinearInequality> negate_equality(const LinearInequality &j);

using Point = std::vector<Rational>;               // dense over a Space
using ParamPoint = std::map<std::string, Rational>;  // named assignment
using SlopeVector = std::vector<int>;              // per variable, 0 or 1; parameters must be 0

struct OptimumBound {
    Rational value;
    bool attained = true;
};

struct Optimum {
    enum class Status { infeasible, unbounded, bounded } status = Status::infeasible;
    OptimumBound bound;
};

// Convex polyhedron in constraint form over a fixed Space. Strict and non-strict
// inequalities and equalities are supported. Values are immutable; every
// operation returns a new, canonicalised polyhedron.
class Polyhedron {
public:
    Polyhedron();  // universe over the zero-dimensional space
    static Polyhedron universe(SpacePtr space);
    static Polyhedron empty(SpacePtr space);

    Polyhedron(SpacePtr space, std::vector<LinearInequality> constraints);

    [[nodiscard]] const SpacePtr &space() const { return space_; }
    [[nodiscard]] const std::vector<LinearInequality> &constraints() const { return cons_; }
    [[nodiscard]] std::size_t dimension() const { return space_->size(); }

    // Empty by syntactic canonicalisation alone.
    [[nodiscard]] bool marked_empty() const { return empty_; }
    [[nodiscard]] bool is_universe() const { return !empty_ && cons_.empty(); }
    // Exact: no rational point satisfies every constraint.
    [[nodiscard]] bool is_empty() const;

    [[nodiscard]] Polyhedron meet(const Polyhedron &o) const;
    [[nodiscard]] Polyhedron meet(const LinearInequality &c) const;
    [[nodiscard]] Polyhedron meet(std::span<const LinearInequality> cs) const;

    // Exact projection: the named variables become unconstrained.
    [[nodiscard]] Polyhedron eliminate(std::span<const std::size_t> vars) const;
    [[nodiscard]] Polyhedron eliminate_names(const std::vector<std::string> &names) const;

    // { v + t*slopes | v in P, t >= 0 }
    [[nodiscard]] Polyhedron time_elapse(const SlopeVector &slopes) const;

    // Eliminates `vars` and then pins each of them to zero.
    [[nodiscard]] Polyhedron reset(std::span<const std::size_t> vars) const;

    // Replaces variable `var` by a constant (the variable stays in the space,
    // unconstrained).
    [[nodiscard]] Polyhedron substitute(std::size_t var, const Rational &value) const;
    [[nodiscard]] Polyhedron substitute(const ParamPoint &pt) const;

    // Re-expresses this polyhedron over another space; every constrained
    // variable must exist there under the same name.
    [[nodiscard]] Polyhedron rebase(const SpacePtr &target) const;

    // b's solution set is a subset of this one.
    [[nodiscard]] bool includes(const Polyhedron &b) const;
    [[nodiscard]] bool equivalent(const Polyhedron &b) const { return includes(b) && b.includes(*this); }
    [[nodiscard]] bool contains(std::span<const Rational> point) const;
    // Every constraint is over assigned variables only and holds.
    [[nodiscard]] bool satisfies(const ParamPoint &pt) const;

    [[nodiscard]] Optimum minimize(std::span<const Rational> objective) const;
    [[nodiscard]] Optimum maximize(std::span<const Rational> objective) const;
    [[nodiscard]] Optimum minimize(std::size_t var) const;
    [[nodiscard]] Optimum maximize(std::size_t var) const;

    // Some point of the polyhedron (relative interior when strict rows exist).
    [[nodiscard]] std::optional<Point> sample_point() const;

    // Drops every constraint implied by the others (exact LP test).
    [[nodiscard]] Polyhedron remove_redundant() const;

    // Variables with a nonzero coefficient in some constraint.
    [[nodiscard]] std::vector<std::size_t> constrained_variables() const;

    [[nodiscard]] std::string to_string() const;

    bool operator==(const Polyhedron &o) const;  // syntactic (canonical form)
    [[nodiscard]] std::size_t hash() const;

private:
    Polyhedron(SpacePtr space, std::vector<LinearInequality> constraints, bool empty, bool canonical);

    SpacePtr space_;
    std::vector<LinearInequality> cons_;
    bool empty_ = false;
};

// Smallest polyhedron of this representation containing both operands. If one
// operand is empty, the other is returned.
Polyhedron convex_hull(const Polyhedron &a, const Polyhedron &b);

// Syntactic canonical form: normalised directions, one lower/upper bound per
// direction, equalities detected, deterministic order. Sets `empty` when a
// contradiction is found syntactically.
std::vector<LinearInequality> canonicalize(const Space &space, std::vector<LinearInequality> cs, bool &empty);

// Fourier-Motzkin based emptiness; independent of the simplex route.
bool is_empty_by_elimination(const Polyhedron &p);

std::string to_string(const Space &space, const LinearInequality &c);

}  // namespace rtpta::geometry
