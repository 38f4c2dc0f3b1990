#include <catch_amalgamated.hpp>

#include <random>

#include "rtpta/oracle.hpp"
#include "rtpta/polyhedron_io.hpp"
#include "rtpta/synthesis.hpp"

using namespace rtpta;
using namespace rtpta::synthesis;
using geometry::Space;
using geometry::VarKind;

namespace {

std::string model(const std::string &name) { return std::string(RTPTA_MODELS_DIR) + "/" + name; }

ParamPoint at(Rational t1, Rational t2) { return {{"T1", std::move(t1)}, {"T2", std::move(t2)}}; }

// Label sequences of every maximal run of the concrete model at pt.
std::set<std::string> traces(const PsaNetwork &net, const ParamPoint &pt) {
    auto c = net.instantiate(pt);
    psa::ExploreOptions o;
    o.depth = 500;
    o.record_edges = true;
    auto ex = psa::bounded_explore(c, c.initial_constraint(), o);
    std::set<std::string> out;
    for (const auto &path : psa::maximal_paths(ex)) {
        std::string s;
        for (std::size_t e : path) {
            s += c.labels()[ex.edges[e].label] + " ";
        }
        out.insert(s);
    }
    return out;
}

// Random points of a bounded parameter region by rejection from its box.
std::vector<ParamPoint> sample(const Polyhedron &region, const PsaNetwork &net, std::size_t n, std::mt19937 &rng) {
    std::vector<std::pair<Rational, Rational>> bounds;
    for (auto i : net.parameter_indices()) {
        bounds.emplace_back(region.minimize(i).bound.value, region.maximize(i).bound.value);
    }
    std::vector<ParamPoint> out;
    std::uniform_int_distribution<int> u(0, 997);
    for (int tries = 0; out.size() < n && tries < 100000; ++tries) {
        ParamPoint p;
        geometry::Point x(net.space()->size());
        std::size_t k = 0;
        for (auto i : net.parameter_indices()) {
            auto [lo, hi] = bounds[k++];
            x[i] = lo + (hi - lo) * Rational(u(rng), 997);
            p[(*net.space())[i].name] = x[i];
        }
        if (region.contains(x)) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("select_incompatible picks the first violated inequality") {
    auto s = Space::make({{"T1", VarKind::parameter}, {"T2", VarKind::parameter}});
    ParamPoint pi = at(60, 120);
    auto p = geometry::parse_polyhedron("T1 >= 100", s);
    auto j = select_incompatible(p, pi);
    CHECK(Polyhedron(s, {geometry::negate(j)}).equivalent(geometry::parse_polyhedron("T1 < 100", s)));

    auto eq = geometry::parse_polyhedron("T1 = 80", s);
    auto j2 = select_incompatible(eq, pi);
    CHECK(Polyhedron(s, {j2}).equivalent(geometry::parse_polyhedron("T1 >= 80", s)));
    CHECK(Polyhedron(s, {geometry::negate(j2)}).equivalent(geometry::parse_polyhedron("T1 < 80", s)));

    auto two = geometry::parse_polyhedron("T2 <= 100 & T1 >= 70", s);
    CHECK(select_incompatible(two, pi) == select_incompatible(two, pi));
    CHECK_THROWS_AS(select_incompatible(geometry::parse_polyhedron("T1 <= 70", s), pi), std::invalid_argument);
}

TEST_CASE("IM on a model whose guards ignore the parameters returns K") {
    psa::LocationDef l;
    l.name = "l";
    psa::TransitionDef t;
    t.label = "tick";
    t.guard = {psa::make_constraint({{psa::Coefficient(1), "x"}}, "=", {{psa::Coefficient(1), ""}})};
    t.resets = {"x"};
    psa::PsaModel m{"A", {l}, 0, {"x"}, {}, {t}, {}};
    auto k = psa::make_constraint({{psa::Coefficient(1), "p"}}, "<=", {{psa::Coefficient(5), ""}});
    PsaNetwork net({m}, {"p"}, {k});
    auto r = inverse_method(net, {{"p", Rational(2)}});
    CHECK(r.reached_fixpoint);
    CHECK(r.incompatible_negations.empty());
    CHECK(r.constraint.equivalent(net.initial_constraint()));
    CHECK_THROWS_AS(inverse_method(net, {{"p", Rational(7)}}), std::invalid_argument);
}

TEST_CASE("IM tile of the idle-time model is trace-equivalent to its reference point") {
    auto spec = rts::load_component(model("idle_time.json"));
    auto net = rts::build_component(spec);
    ParamPoint pi = at(60, 120);
    auto r = inverse_method(net, pi);
    REQUIRE(r.reached_fixpoint);
    CHECK(r.constraint.satisfies(pi));
    CHECK_FALSE(r.reached_bad);
    CHECK_FALSE(r.constraint.satisfies(at(55, 120)));
    CHECK_FALSE(r.constraint.satisfies(at(80, 120)));
    CHECK_FALSE(r.constraint.satisfies(at(60, 110)));
    CHECK(r.constraint.satisfies(at(79, 112)));

    std::mt19937 rng(3);
    const auto ref = traces(net, pi);
    auto pts = sample(r.constraint, net, 12, rng);
    REQUIRE(pts.size() == 12);
    for (const auto &p : pts) {
        CHECK(traces(net, p) == ref);
    }
}

TEST_CASE("classify_point agrees with the oracle on the step-5 grid") {
    auto spec = rts::load_component(model("idle_time.json"));
    auto net = rts::build_component(spec);
    CHECK(classify_point(net, at(60, 120), 200) == Verdict::schedulable);
    CHECK(classify_point(net, at(40, 80), 200) == Verdict::deadline_miss);
    for (const auto &p : grid_points(declared_box(spec), Rational(5))) {
        bool ok = oracle::is_schedulable(spec, p).schedulable;
        INFO(p.at("T1") << "," << p.at("T2"));
        CHECK((classify_point(net, p, depth_bound_at(spec, p)) == Verdict::schedulable) == ok);
    }
}

TEST_CASE("cartography covers the box with disjoint tiles") {
    auto spec = rts::load_component(model("idle_time.json"));
    auto net = rts::build_component(spec);

    Box one{{"T1", Rational(60), Rational(60)}, {"T2", Rational(120), Rational(120)}};
    auto single = cartography(net, one, Rational(1));
    CHECK(single.tiles.size() == 1);
    CHECK(single.grid.size() == 1);

    Box box{{"T1", Rational(40), Rational(120)}, {"T2", Rational(80), Rational(200)}};
    CartographyOptions o;
    o.depth_at = [&](const ParamPoint &p) { return depth_bound_at(spec, p); };
    auto c = cartography(net, box, Rational(20), o);
    CHECK(c.uncovered_points.empty());
    CHECK(c.grid.size() == 5 * 7);

    for (const auto &[pt, v] : c.grid) {
        CHECK(v != Verdict::depth_exceeded);
    }

    // tiles cover the grid, not the whole box: off-grid points lie in at most one tile
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> u(0, 9973);
    for (int i = 0; i < 300; ++i) {
        ParamPoint p = at(Rational(40) + Rational(80) * Rational(u(rng), 9973), Rational(80) + Rational(120) * Rational(u(rng), 9973));
        geometry::Point x(net.space()->size());
        x[net.space()->index_of("T1")] = p["T1"];
        x[net.space()->index_of("T2")] = p["T2"];
        int inside = 0;
        for (const auto &t : c.tiles) {
            if (t.region.contains(x)) {
                ++inside;
                CHECK((t.verdict == Verdict::schedulable) == oracle::is_schedulable(spec, p).schedulable);
            }
        }
        CHECK(inside <= 1);
    }

    o.jobs = 3;
    auto par = cartography(net, box, Rational(20), o);
    CHECK(to_json(par, net) == to_json(c, net));
    CHECK(grid_csv(par) == grid_csv(c));
    CHECK(grid_csv(c).rfind("T1,T2,verdict\n40,80,deadline_miss\n", 0) == 0);
}

TEST_CASE("depth bound from the demand bound function") {
    auto spec = rts::load_component(model("idle_time.json"));
    // first t with sum (floor((t - Ti)/Ti) + 1) Ci > t at T = (40, 80), by scan
    std::int64_t first = 0;
    for (std::int64_t t = 1; first == 0; ++t) {
        std::int64_t d = (t >= 40 ? (t / 40) * 31 : 0) + (t >= 80 ? (t / 80) * 49 : 0);
        if (d > t) {
            first = t;
        }
    }
    CHECK(first == 80);
    // jobs released in [0, 80]: 3 of t1, 2 of t2; five automata
    CHECK(depth_bound_from_dbf(spec, declared_box(spec)) == 6 * 5 + 2 * 5);

    rts::ComponentSpec light;
    rts::TaskSpec t;
    t.name = "a";
    t.wcet = 2;
    t.deadline = rts::Quantity::param("T");
    t.activation = {rts::ActivationKind::periodic, rts::Quantity::param("T"), 1};
    light.tasks = {t};
    light.parameters = {{"T", rts::ParamKind::continuous, Rational(8), Rational(20), Rational(8)}};
    CHECK(depth_bound_from_dbf(light, declared_box(light), {}, 777) == 777);
}
