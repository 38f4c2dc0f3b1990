#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtpta/psa.hpp"
#include "rtpta/rts.hpp"

namespace rtpta::synthesis {

using geometry::LinearInequality;
using geometry::ParamPoint;
using geometry::Polyhedron;
using geometry::Rel;
using psa::PsaNetwork;

struct ImResult {
    Polyhedron constraint;  // over the network's space, parameters only
    bool reached_fixpoint = false;
    std::size_t explored_states = 0;  // kept states of the last exploration
    std::vector<LinearInequality> incompatible_negations;  // the added not-J, in order
    bool reached_bad = false;  // last exploration met a bad location
};

struct ImOptions {
    std::optional<std::size_t> depth_bound;
    // Starting constraint; defaults to the network's K.
    std::optional<Polyhedron> k;
    std::size_t max_restarts = 100000;
};

// Throws std::invalid_argument if pi violates K.
ImResult inverse_method(const PsaNetwork &net, const ParamPoint &pi, const ImOptions &opts = {});

// First inequality of proj (canonical order) violated by pi. An equality
// contributes the side that pi violates.
LinearInequality select_incompatible(const Polyhedron &proj, const ParamPoint &pi);

enum class Verdict { schedulable, deadline_miss, depth_exceeded };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

// Reachability of a bad location in the concrete instantiation at pt.
Verdict classify_point(const PsaNetwork &net, const ParamPoint &pt, std::size_t depth_bound);

struct Tile {
    Polyhedron region;
    ParamPoint discrete;
    Verdict verdict = Verdict::schedulable;
    ParamPoint witness;
};

struct Range {
    std::string name;
    Rational lo, hi;
};
using Box = std::vector<Range>;

struct Cartography {
    Box box;
    Rational step;
    std::vector<Tile> tiles;
    std::vector<ParamPoint> uncovered_points;
    std::vector<std::pair<ParamPoint, Verdict>> grid;  // every grid point, row-major
};

struct CartographyOptions {
    std::size_t depth_bound = 1000;
    // Per-point bound; the larger of the two is used.
    std::function<std::size_t(const ParamPoint &)> depth_at;
    std::size_t jobs = 1;
    ParamPoint discrete;  // recorded on every tile
};

// Grid points of the box, first parameter varying slowest.
std::vector<ParamPoint> grid_points(const Box &box, const Rational &step);

Cartography cartography(const PsaNetwork &net, const Box &box, const Rational &step,
                        const CartographyOptions &opts = {});

// Box over every continuous parameter from its declared range.
Box declared_box(const rts::ComponentSpec &spec);

// Event-count depth bound from the first demand overload of the box's most
// demanding corner; fallback when demand never exceeds supply.
std::size_t depth_bound_from_dbf(const rts::ComponentSpec &spec, const Box &box, const ParamPoint &discrete = {},
                                 std::size_t fallback = 1000);

// Transitions needed to run the concrete model at pt to its end: the busy
// period end or first miss found by the oracle, six transitions per job
// released until then plus slack. Fallback when the oracle finds neither.
std::size_t depth_bound_at(const rts::ComponentSpec &spec, const ParamPoint &pt, std::size_t fallback = 1000);

// ---------------------------------------------------------------- output

// Only the parameter constraints of the region are printed.
nlohmann::json to_json(const Tile &t, const PsaNetwork &net);
nlohmann::json to_json(const Cartography &c, const PsaNetwork &net);
std::string grid_csv(const Cartography &c);
std::string region_string(const Polyhedron &region, const PsaNetwork &net);

}  // namespace rtpta::synthesis
