#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtpta/synthesis.hpp"

namespace rtpta::interface {

using geometry::ParamPoint;
using geometry::Polyhedron;
using synthesis::Tile;

// Union of a and b is convex: the hull has no point outside both.
bool mergeable(const Polyhedron &a, const Polyhedron &b);

// Tiles sorted by region text, then first-fit pairwise merging of same
// verdict, same discrete tiles until no pair is mergeable.
std::vector<Tile> merge_fixpoint(std::vector<Tile> tiles);

struct IntegerMerge {
    std::vector<Tile> tiles;
    bool integers_only = false;  // some merge is exact on integer points only
};

// Merges tiles whose integer intervals on one of `integer_vars` are adjacent
// (hi + 1 == lo) and whose projections on the other variables coincide. With
// `enabled` false the tiles are returned unchanged.
IntegerMerge integer_merge(std::vector<Tile> tiles, const std::set<std::string> &integer_vars, bool enabled = true);

struct InterfaceRow {
    ParamPoint discrete;
    std::vector<Polyhedron> feasible_region;  // disjuncts over the interface parameters
    std::optional<Rational> min_response;
    bool min_attained = true;
    bool integers_only = false;
    std::size_t depth_bound = 0;
    std::string note;

    [[nodiscard]] bool feasible() const { return !feasible_region.empty(); }
};

struct DiscreteRange {
    std::string name;
    std::int64_t lo = 0, hi = 0;
};

struct InterfaceDoc {
    std::string component;
    std::vector<std::string> provided;
    std::string response_parameter;             // deadline parameter of the provided task
    std::vector<std::string> interface_parameters;  // the other continuous parameters
    synthesis::Box box;
    Rational step;
    std::vector<DiscreteRange> discrete;
    std::optional<std::int64_t> burst_bound;
    std::vector<InterfaceRow> rows;  // sorted by discrete assignment, then min_response
    // grid verdicts of every cartography, for plotting; not serialised
    std::vector<std::pair<ParamPoint, synthesis::Verdict>> samples;
};

struct InterfaceOptions {
    synthesis::Box box;                  // empty: declared ranges
    Rational step = 1;
    std::vector<DiscreteRange> discrete;  // empty: declared ranges
    std::size_t jobs = 1;
    std::optional<std::size_t> depth;     // overrides the demand-bound depth
    bool integers = true;                 // integer_merge on the interface parameters
    bool cap_with_burst_bound = true;     // skip assignments above upper_bound_burst
};

// Largest value of the (first) burst parameter for which the oracle finds the
// component schedulable with every continuous parameter at its box maximum;
// one below the declared minimum when none is.
std::int64_t upper_bound_burst(const rts::ComponentSpec &spec, const synthesis::Box &box);

// Throws std::invalid_argument when the component has no interface
// parameters (no provided task with a parametric deadline).
InterfaceDoc synthesize_interface(const rts::ComponentSpec &spec, const InterfaceOptions &opts = {});

nlohmann::json to_json(const InterfaceDoc &doc);
InterfaceDoc interface_from_json(const nlohmann::json &j);
std::string to_table(const InterfaceDoc &doc);
std::string samples_csv(const InterfaceDoc &doc);

}  // namespace rtpta::interface
