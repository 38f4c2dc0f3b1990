#include <catch_amalgamated.hpp>

#include "rtpta/polyhedron_io.hpp"
#include "rtpta/psa.hpp"

using namespace rtpta;
using namespace rtpta::psa;

namespace {

Constraint cons(const std::string &var, std::string_view rel, Rational k) {
    return make_constraint({{Coefficient(1), var}}, rel, {{Coefficient(k), ""}});
}

LocationDef loc(std::string name) {
    LocationDef l;
    l.name = std::move(name);
    return l;
}

TransitionDef edge(std::size_t from, std::string label, std::size_t to, std::vector<Constraint> guard = {},
                   std::vector<std::string> resets = {}) {
    TransitionDef t;
    t.source = from;
    t.label = std::move(label);
    t.target = to;
    t.guard = std::move(guard);
    t.resets = std::move(resets);
    return t;
}

Polyhedron text(const PsaNetwork &net, const std::string &s) { return geometry::parse_polyhedron(s, net.space()); }

}  // namespace

TEST_CASE("shared labels need every declaring automaton to move") {
    PsaModel a{"A", {loc("l0"), loc("l1")}, 0, {"x"}, {}, {edge(0, "a", 1, {cons("x", ">=", 2)})}, {}};
    PsaModel b{"B", {loc("m0"), loc("m1")}, 0, {"y"}, {}, {edge(0, "a", 1, {cons("y", "<=", 1)})}, {}};
    PsaNetwork net({a, b}, {}, {});
    auto s0 = net.initial_state();
    auto combos = net.enabled_syncs(s0);
    REQUIRE(combos.size() == 1);
    CHECK(combos[0].moves.size() == 2);
    // x and y advance together from 0, so x >= 2 and y <= 1 never hold at once
    CHECK_FALSE(net.successor(s0, combos[0]).has_value());

    PsaModel c{"C", {loc("n0")}, 0, {}, {}, {}, {"a"}};  // declares a without a transition: blocks it
    PsaNetwork blocked({a, c}, {}, {});
    CHECK(blocked.enabled_syncs(blocked.initial_state()).empty());
}

TEST_CASE("committed locations take priority and freeze time") {
    LocationDef c0 = loc("c0");
    c0.committed = true;
    PsaModel a{"A", {c0, loc("c1")}, 0, {"x"}, {}, {edge(0, "go", 1)}, {}};
    PsaModel b{"B", {loc("m0"), loc("m1")}, 0, {"y"}, {}, {edge(0, "other", 1)}, {}};
    PsaNetwork net({a, b}, {}, {});
    auto s0 = net.initial_state();
    CHECK(s0.zone.equivalent(text(net, "x = 0 & y = 0")));
    auto combos = net.enabled_syncs(s0);
    REQUIRE(combos.size() == 1);
    CHECK(net.labels()[combos[0].label] == "go");
    auto s1 = net.successor(s0, combos[0]);
    REQUIRE(s1);
    CHECK(s1->zone.equivalent(text(net, "x >= 0 & x - y = 0")));
}

TEST_CASE("stopped clocks keep their value while time passes") {
    LocationDef l = loc("run");
    l.stopped = {"c"};
    PsaModel a{"A", {l}, 0, {"c", "d"}, {}, {}, {}};
    PsaNetwork net({a}, {}, {});
    CHECK(net.initial_state().zone.equivalent(text(net, "c = 0 & d >= 0")));
}

TEST_CASE("parametric invariant and guard constrain the parameter") {
    LocationDef l0 = loc("l0");
    l0.invariant = {make_constraint({{Coefficient(1), "x"}}, "<=", {{Coefficient(1), "p"}})};
    PsaModel a{"A", {l0, loc("l1")}, 0, {"x"}, {}, {edge(0, "a", 1, {cons("x", ">=", 3)})}, {}};
    PsaNetwork net({a}, {"p"}, {cons("p", ">=", 0)});
    auto s0 = net.initial_state();
    auto s1 = net.successor(s0, net.enabled_syncs(s0).at(0));
    REQUIRE(s1);
    CHECK(net.project_params(*s1).equivalent(text(net, "p >= 3")));

    auto concrete = net.instantiate({{"p", Rational(2)}});
    auto c0 = concrete.initial_state();
    CHECK_FALSE(concrete.successor(c0, concrete.enabled_syncs(c0).at(0)).has_value());
}

TEST_CASE("inclusion merging makes a self-loop finite") {
    PsaModel a{"A", {loc("l")}, 0, {"x"}, {}, {edge(0, "tick", 0, {cons("x", ">=", 1)}, {"x"})}, {}};
    PsaNetwork net({a}, {}, {});
    ExploreOptions o;
    o.keep_merged = true;
    o.record_edges = true;
    auto ex = bounded_explore(net, net.initial_constraint(), o);
    CHECK(ex.states.size() == 1);
    CHECK(ex.generated == 1);
    CHECK(ex.merged.size() == 1);
    CHECK(ex.has_successor[0]);
    REQUIRE(ex.edges.size() == 1);
    CHECK(ex.edges[0].to == 0);
    CHECK_FALSE(ex.depth_exceeded);
    CHECK_THROWS(maximal_paths(ex));
}

TEST_CASE("discrete counters, depth bound and bad locations") {
    Constraint below3 = make_constraint({{Coefficient::of("n"), ""}}, "<", {{Coefficient(3), ""}});
    TransitionDef inc = edge(0, "inc", 0, {below3});
    inc.updates = {DiscreteUpdate{"n", 1, {{"n", 1}}}};
    Constraint at3 = make_constraint({{Coefficient::of("n"), ""}}, "=", {{Coefficient(3), ""}});
    LocationDef bad = loc("bad");
    bad.bad = true;
    PsaModel a{"A", {loc("l"), bad}, 0, {"x"}, {{"n", 0}}, {inc, edge(0, "fail", 1, {at3})}, {}};
    PsaNetwork net({a}, {}, {});

    ExploreOptions o;
    o.record_edges = true;
    auto ex = bounded_explore(net, net.initial_constraint(), o);
    CHECK(ex.states.size() == 5);  // n = 0..3 and the bad state
    CHECK(ex.reached_bad);
    auto paths = maximal_paths(ex);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].size() == 4);

    o.depth = 2;
    auto cut = bounded_explore(net, net.initial_constraint(), o);
    CHECK(cut.depth_exceeded);
    CHECK_FALSE(cut.reached_bad);
    CHECK(cut.states.size() == 3);
}

TEST_CASE("inactive clocks are dropped from the zone") {
    LocationDef idle = loc("idle");
    idle.inactive = {"c"};
    PsaModel a{"A", {loc("busy"), idle}, 0, {"c", "d"}, {}, {edge(0, "stop", 1, {cons("c", ">=", 2)})}, {}};
    PsaNetwork net({a}, {}, {});
    auto s0 = net.initial_state();
    auto s1 = net.successor(s0, net.enabled_syncs(s0).at(0));
    REQUIRE(s1);
    CHECK(s1->zone.equivalent(text(net, "d >= 2")));
}

TEST_CASE("observer clock and DOT export") {
    PsaModel a{"A", {loc("l0"), loc("l1")}, 0, {"x"}, {}, {edge(0, "a", 1, {cons("x", "=", 5)}, {"x"})}, {}};
    NetworkOptions no;
    no.observer_clock = "now";
    PsaNetwork net({a}, {}, {}, no);
    REQUIRE(net.observer_index());
    auto s0 = net.initial_state();
    auto combo = net.enabled_syncs(s0).at(0);
    auto firing = net.firing_zone(s0, combo);
    auto lo = firing.minimize(*net.observer_index());
    auto hi = firing.maximize(*net.observer_index());
    CHECK(lo.bound.value == Rational(5));
    CHECK(hi.bound.value == Rational(5));
    std::string dot = to_dot(a);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("l1") != std::string::npos);
    CHECK(to_json(net).contains("automata"));
}
