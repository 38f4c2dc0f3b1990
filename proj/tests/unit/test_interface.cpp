#include <catch_amalgamated.hpp>

#include <random>

#include "rtpta/interface.hpp"
#include "rtpta/oracle.hpp"
#include "rtpta/polyhedron_io.hpp"

using namespace rtpta;
using namespace rtpta::interface;
using geometry::Space;
using geometry::VarKind;

namespace {

std::string model(const std::string &name) { return std::string(RTPTA_MODELS_DIR) + "/" + name; }

const geometry::SpacePtr &line() {
    static auto s = Space::make({{"x", VarKind::parameter}});
    return s;
}

const geometry::SpacePtr &plane() {
    static auto s = Space::make({{"P", VarKind::parameter}, {"D2", VarKind::parameter}});
    return s;
}

Tile tile(const std::string &text, const geometry::SpacePtr &s = line()) {
    Tile t;
    t.region = geometry::parse_polyhedron(text, s);
    return t;
}

bool in_any(const std::vector<Tile> &ts, const geometry::Point &x) {
    for (const auto &t : ts) {
        if (t.region.contains(x)) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("mergeable means the union is convex") {
    auto p = [](const char *s) { return geometry::parse_polyhedron(s, line()); };
    CHECK(mergeable(p("x >= 0 & x <= 1"), p("x >= 1 & x <= 2")));
    CHECK(mergeable(p("x >= 0 & x < 1"), p("x >= 1 & x <= 2")));
    CHECK_FALSE(mergeable(p("x >= 0 & x <= 1"), p("x >= 2 & x <= 3")));
    CHECK_FALSE(mergeable(p("x >= 0 & x < 1"), p("x > 1 & x <= 2")));

    auto q = [](const char *s) { return geometry::parse_polyhedron(s, plane()); };
    CHECK(mergeable(q("P >= 0 & P <= 1 & D2 >= 0 & D2 <= 1"), q("P >= 1 & P <= 2 & D2 >= 0 & D2 <= 1")));
    CHECK_FALSE(mergeable(q("P >= 0 & P <= 1 & D2 >= 0 & D2 <= 1"), q("P >= 1 & P <= 2 & D2 >= 0 & D2 <= 2")));
}

TEST_CASE("merge_fixpoint joins a chain and keeps membership") {
    std::vector<Tile> in{tile("x >= 2 & x <= 3"), tile("x >= 0 & x <= 1"), tile("x >= 1 & x <= 2"), tile("x >= 5 & x <= 6")};
    auto out = merge_fixpoint(in);
    REQUIRE(out.size() == 2);
    CHECK(out[0].region.equivalent(geometry::parse_polyhedron("x >= 0 & x <= 3", line())));

    std::mt19937 rng(5);
    std::uniform_int_distribution<int> u(-1000, 8000);
    for (int i = 0; i < 1000; ++i) {
        geometry::Point x{Rational(u(rng), 1000)};
        CHECK(in_any(in, x) == in_any(out, x));
    }

    // different verdicts never merge
    auto miss = tile("x >= 3 & x <= 4");
    miss.verdict = synthesis::Verdict::deadline_miss;
    CHECK(merge_fixpoint({tile("x >= 0 & x <= 3"), miss}).size() == 2);
}

TEST_CASE("integer_merge joins adjacent integer intervals") {
    auto a = tile("P >= 20 & P <= 26 & D2 >= 14 & D2 <= 50", plane());
    auto b = tile("P >= 27 & P <= 34 & D2 >= 14 & D2 <= 50", plane());
    auto r = integer_merge({a, b}, {"P"});
    REQUIRE(r.tiles.size() == 1);
    CHECK(r.integers_only);
    auto expect = geometry::parse_polyhedron("P >= 20 & P <= 34 & D2 >= 14 & D2 <= 50", plane());
    CHECK(r.tiles[0].region.equivalent(expect));

    auto gap = tile("P >= 28 & P <= 34 & D2 >= 14 & D2 <= 50", plane());
    CHECK(integer_merge({a, gap}, {"P"}).tiles.size() == 2);
    auto other = tile("P >= 27 & P <= 34 & D2 >= 15 & D2 <= 50", plane());
    CHECK(integer_merge({a, other}, {"P"}).tiles.size() == 2);

    auto off = integer_merge({a, b}, {"P"}, false);
    CHECK(off.tiles.size() == 2);
    CHECK_FALSE(off.integers_only);
}

TEST_CASE("burst bound of the request server") {
    auto spec = rts::load_component(model("component.json"));
    auto box = synthesis::declared_box(spec);
    auto b = upper_bound_burst(spec, box);
    // by the oracle at the box maximum, Nu = b passes and Nu = b + 1 fails
    CHECK(b == 3);
    ParamPoint top{{"P", Rational(50)}, {"D2", Rational(50)}};
    top["Nu"] = Rational(b);
    CHECK(oracle::is_schedulable(spec, top).schedulable);
    top["Nu"] = Rational(b + 1);
    CHECK_FALSE(oracle::is_schedulable(spec, top).schedulable);
}

TEST_CASE("interface rows match the oracle on a small box") {
    auto spec = rts::load_component(model("component.json"));
    InterfaceOptions o;
    o.box = {{"P", Rational(20), Rational(30)}, {"D2", Rational(10), Rational(20)}};
    o.discrete = {{"Nu", 2, 2}};
    auto doc = synthesize_interface(spec, o);
    CHECK(doc.response_parameter == "D2");
    CHECK(doc.interface_parameters == std::vector<std::string>{"P"});

    // smallest schedulable D2 over the integer grid, by the oracle
    std::optional<std::int64_t> best;
    for (std::int64_t p = 20; p <= 30; ++p) {
        for (std::int64_t d = 10; d <= 20; ++d) {
            if (oracle::is_schedulable(spec, {{"Nu", Rational(2)}, {"P", Rational(p)}, {"D2", Rational(d)}}).schedulable) {
                best = best ? std::min(*best, d) : d;
            }
        }
    }
    REQUIRE(best);
    std::optional<Rational> rows_min;
    for (const auto &r : doc.rows) {
        if (r.feasible() && r.min_response) {
            rows_min = rows_min ? std::min(*rows_min, *r.min_response) : *r.min_response;
        }
    }
    REQUIRE(rows_min);
    CHECK(*rows_min == Rational(*best));

    // every sample agrees with the oracle
    for (const auto &[pt, v] : doc.samples) {
        CHECK((v == synthesis::Verdict::schedulable) == oracle::is_schedulable(spec, pt).schedulable);
    }

    auto j = to_json(doc);
    CHECK(to_json(interface_from_json(j)) == j);
    CHECK(to_table(doc).find("Nu") != std::string::npos);
}

TEST_CASE("interface needs a provided parametric deadline") {
    auto spec = rts::load_component(model("idle_time.json"));
    CHECK_THROWS_AS(synthesize_interface(spec), std::invalid_argument);
}
