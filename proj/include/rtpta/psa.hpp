#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtpta/polyhedron.hpp"

namespace rtpta::psa {

using geometry::ParamPoint;
using geometry::Polyhedron;
using geometry::Rel;
using geometry::SpacePtr;

// Values of the discrete variables, indexed network-wide.
using DiscreteValuation = std::vector<std::int64_t>;

// r0 + sum_k r_k * n_k over discrete variables n_k. Used as a coefficient or a
// bound so that `c = N*C` stays linear once N is known.
struct Coefficient {
    Rational constant;
    std::map<std::string, Rational> discrete;

    Coefficient() = default;
    Coefficient(Rational c) : constant(std::move(c)) {}  // NOLINT(google-explicit-constructor)
    Coefficient(int c) : constant(c) {}                  // NOLINT(google-explicit-constructor)
    static Coefficient of(const std::string &var, Rational k = 1);

    [[nodiscard]] bool is_constant() const { return discrete.empty(); }
    Coefficient &operator+=(const Coefficient &o);
    Coefficient operator-() const;
    Coefficient operator*(const Rational &k) const;
};

// sum terms[v] * v  rel  bound. Variables are clocks or parameters; discrete
// variables only appear inside coefficients.
struct Constraint {
    std::map<std::string, Coefficient> terms;
    Rel rel = Rel::le;
    Coefficient bound;
};

// Helpers for authoring: lhs and rhs are sums of (coefficient, variable) plus
// a constant; a variable name of "" stands for the constant term.
using Term = std::pair<Coefficient, std::string>;
Constraint make_constraint(const std::vector<Term> &lhs, std::string_view rel, const std::vector<Term> &rhs);

// Integer update n := constant + sum k * m.
struct DiscreteUpdate {
    std::string var;
    std::int64_t constant = 0;
    std::map<std::string, std::int64_t> terms;
};

struct LocationDef {
    std::string name;
    std::vector<Constraint> invariant;
    std::set<std::string> stopped;  // owner clocks with slope 0; the others have slope 1
    bool committed = false;
    bool bad = false;               // reaching it is a property violation
    std::set<std::string> inactive;  // clocks whose value is irrelevant here (always reset before use)
};

struct TransitionDef {
    std::size_t source = 0;
    std::string label;
    std::vector<Constraint> guard;
    std::vector<std::string> resets;
    std::vector<DiscreteUpdate> updates;
    std::size_t target = 0;
};

struct PsaModel {
    std::string name;
    std::vector<LocationDef> locations;
    std::size_t initial = 0;
    std::vector<std::string> clocks;
    std::map<std::string, std::int64_t> discretes;  // initial values
    std::vector<TransitionDef> transitions;
    std::set<std::string> extra_labels;  // declared without any transition (blocks the label)

    [[nodiscard]] std::size_t location_index(std::string_view loc) const;
    [[nodiscard]] std::set<std::string> labels() const;
};

struct SymbolicState {
    std::vector<std::uint32_t> locations;
    DiscreteValuation discretes;
    Polyhedron zone;

    [[nodiscard]] bool same_discrete_part(const SymbolicState &o) const {
        return locations == o.locations && discretes == o.discretes;
    }
};

// One move: a label and, for every automaton declaring it, one transition.
struct SyncCombo {
    std::size_t label = 0;
    std::vector<std::pair<std::size_t, std::size_t>> moves;  // (automaton, transition)
};

struct NetworkOptions {
    // Adds a global clock of this name (slope 1 everywhere, never reset) so
    // that event times can be read off zones.
    std::optional<std::string> observer_clock;
};

class PsaNetwork {
public:
    // `parameters` are the continuous parameters; `k` constrains them.
    PsaNetwork(std::vector<PsaModel> automata, std::vector<std::string> parameters, std::vector<Constraint> k,
               NetworkOptions options = {});

    [[nodiscard]] const std::vector<PsaModel> &automata() const { return automata_; }
    [[nodiscard]] const std::vector<std::string> &parameters() const { return parameters_; }
    [[nodiscard]] const SpacePtr &space() const { return space_; }
    [[nodiscard]] const Polyhedron &initial_constraint() const { return k_; }
    [[nodiscard]] const std::vector<std::string> &labels() const { return labels_; }
    [[nodiscard]] const std::vector<std::string> &discrete_names() const { return discrete_names_; }
    [[nodiscard]] const NetworkOptions &options() const { return options_; }
    [[nodiscard]] std::optional<std::size_t> observer_index() const { return observer_; }
    [[nodiscard]] std::vector<std::size_t> clock_indices() const;
    [[nodiscard]] std::vector<std::size_t> parameter_indices() const;
    [[nodiscard]] std::size_t label_index(std::string_view label) const;

    // Polyhedron over this network's space from parameter-only authoring
    // constraints (or text).
    [[nodiscard]] Polyhedron parameter_constraint(const std::vector<Constraint> &cs) const;

    [[nodiscard]] SymbolicState initial_state(const Polyhedron &k) const;
    [[nodiscard]] SymbolicState initial_state() const { return initial_state(k_); }
    [[nodiscard]] std::vector<SyncCombo> enabled_syncs(const SymbolicState &s) const;
    [[nodiscard]] std::optional<SymbolicState> successor(const SymbolicState &s, const SyncCombo &combo) const;
    // Zone restricted to the combo's guards, before resets (the firing instant).
    [[nodiscard]] Polyhedron firing_zone(const SymbolicState &s, const SyncCombo &combo) const;
    [[nodiscard]] Polyhedron project_params(const SymbolicState &s) const;
    [[nodiscard]] bool in_bad_location(const SymbolicState &s) const;

    // Every parameter replaced by its value; the result has no parameters.
    [[nodiscard]] PsaNetwork instantiate(const ParamPoint &pt) const;

    [[nodiscard]] std::string describe(const SymbolicState &s) const;  // "Idle,Running,... | N=1 | zone"
    [[nodiscard]] std::string location_vector(const SymbolicState &s) const;

private:
    struct CompiledCoef {
        Rational constant;
        std::vector<std::pair<std::size_t, Rational>> discrete;
        [[nodiscard]] Rational eval(const DiscreteValuation &v) const;
    };
    struct CompiledConstraint {
        std::vector<std::pair<std::size_t, CompiledCoef>> terms;
        Rel rel = Rel::le;
        CompiledCoef bound;
        [[nodiscard]] geometry::LinearInequality linearize(std::size_t dim, const DiscreteValuation &v) const;
        [[nodiscard]] bool discrete_only() const { return terms.empty(); }
    };
    struct CompiledUpdate {
        std::size_t var;
        std::int64_t constant;
        std::vector<std::pair<std::size_t, std::int64_t>> terms;
    };
    struct CompiledTransition {
        std::size_t source, target, label;
        std::vector<CompiledConstraint> guard;
        std::vector<std::size_t> resets;
        std::vector<CompiledUpdate> updates;
    };
    struct CompiledLocation {
        std::vector<CompiledConstraint> invariant;
        std::vector<std::size_t> stopped;
        std::vector<std::size_t> inactive;
        bool committed;
        bool bad;
        // outgoing transitions grouped by label index
        std::map<std::size_t, std::vector<std::size_t>> out;
    };
    struct CompiledAutomaton {
        std::vector<CompiledLocation> locations;
        std::vector<CompiledTransition> transitions;
    };

    CompiledConstraint compile(const Constraint &c) const;
    Polyhedron apply_invariants(Polyhedron z, const std::vector<std::uint32_t> &locs,
                                const DiscreteValuation &v) const;
    Polyhedron elapse(const Polyhedron &z, const std::vector<std::uint32_t> &locs) const;
    Polyhedron drop_inactive(const Polyhedron &z, const std::vector<std::uint32_t> &locs) const;
    static bool holds(const CompiledConstraint &c, const DiscreteValuation &v);

    std::vector<PsaModel> automata_;
    std::vector<std::string> parameters_;
    std::vector<Constraint> k_source_;
    NetworkOptions options_;
    SpacePtr space_;
    Polyhedron k_;
    std::optional<std::size_t> observer_;
    std::vector<std::string> labels_;
    std::map<std::string, std::size_t, std::less<>> label_index_;
    std::vector<std::vector<std::size_t>> participants_;  // per label
    std::vector<std::string> discrete_names_;
    std::map<std::string, std::size_t, std::less<>> discrete_index_;
    DiscreteValuation discrete_init_;
    std::vector<CompiledAutomaton> compiled_;
};

// ---------------------------------------------------------------- exploration

struct Edge {
    std::size_t from;
    std::size_t label;
    std::size_t to;
    std::vector<std::pair<std::size_t, std::size_t>> moves;
};

struct ExploreOptions {
    std::size_t depth = 1000;          // maximal number of discrete transitions per run
    bool stop_at_bad = false;          // stop as soon as a bad location is reached
    bool record_edges = false;
    bool keep_merged = false;          // keep the zones of states dropped by inclusion
    // Called on every newly generated state (including those merged away);
    // returning false aborts the exploration.
    std::function<bool(const SymbolicState &)> on_state;
};

struct Exploration {
    std::vector<SymbolicState> states;  // kept states; index 0 is the initial state
    std::vector<std::size_t> depth_of;
    std::vector<Edge> edges;
    std::vector<char> has_successor;    // per kept state: some successor was computed
    std::vector<SymbolicState> merged;  // with keep_merged
    std::size_t generated = 0;          // successors computed, merged ones included
    bool depth_exceeded = false;        // some state at the bound still had successors
    bool reached_bad = false;
    bool aborted = false;
};

// Breadth-first reachability with inclusion-based merging: a new state is
// dropped if a kept state with the same locations and discretes includes it.
Exploration bounded_explore(const PsaNetwork &net, const Polyhedron &k, const ExploreOptions &opts);

// Maximal label paths of an exploration's state graph (requires edges and an
// acyclic graph). Each path lists edge indices. Throws on cycles.
std::vector<std::vector<std::size_t>> maximal_paths(const Exploration &ex, std::size_t limit = 100000);

// ---------------------------------------------------------------- export

nlohmann::json to_json(const PsaNetwork &net);
std::string to_dot(const PsaModel &m);
std::string to_string(const Constraint &c);

}  // namespace rtpta::psa
