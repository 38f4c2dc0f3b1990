// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <random>
#include <sstream>

#include "rtpta/interface.hpp"
#include "rtpta/oracle.hpp"
#include "rtpta/polyhedron_io.hpp"
#include "rtpta/synthesis.hpp"

using namespace rtpta;
using geometry::LinearInequality;
using geometry::ParamPoint;
using geometry::Point;
using geometry::Polyhedron;
using geometry::Rel;
using geometry::Space;
using geometry::VarKind;
using synthesis::Tile;

namespace {

std::string model(const std::string &name) { return std::string(RTPTA_MODELS_DIR) + "/" + name; }

struct Report {
    std::vector<std::string> notes;
    bool ok = true;

    void check(bool cond, const std::string &what) {
        if (!cond) {
            ok = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string &s) { notes.push_back(s); }
};

std::string str(const ParamPoint &p) {
    std::ostringstream o;
    const char *sep = "";
    for (const auto &[k, v] : p) {
        o << sep << k << "=" << v;
        sep = ",";
    }
    return o.str();
}

ParamPoint at(Rational t1, Rational t2) { return {{"T1", std::move(t1)}, {"T2", std::move(t2)}}; }

Polyhedron poly(const std::string &text, const geometry::SpacePtr &s) { return geometry::parse_polyhedron(text, s); }

// ------------------------------------------------------------ IM soundness

// Time-abstract oracle schedule. The oracle handles arrivals before dispatching
// at an instant; the automata complete, dispatch the next pending job, and
// only then take arrivals of the same instant. The sequence is rebuilt from the
// oracle's instants (arrivals, ends, misses) under the automata's order, so a
// coincidence such as an end meeting an arrival reads the same as the end
// followed shortly by the arrival.
std::string event_sequence(const rts::ComponentSpec &spec, const ParamPoint &pt) {
    auto v = oracle::simulate(spec, pt);
    std::map<std::string, int> prio;
    for (const auto &t : rts::resolve(spec, pt)) {
        prio[t.name] = t.priority;
    }
    std::multiset<std::pair<int, std::string>> pending;
    std::optional<std::string> running;
    std::string s;
    auto dispatch_best = [&] {
        if (pending.empty()) {
            return;
        }
        const auto &best = pending.begin()->second;
        if (running != best) {
            if (running) {
                s += " ^" + *running;
            }
            s += " >" + best;
            running = best;
        }
    };
    for (const auto &i : oracle::normalize(v.log)) {
        for (const auto &e : i.ends) {
            s += " -" + e;
            pending.erase(pending.find({prio.at(e), e}));
            if (running == e) {
                running.reset();
            }
        }
        for (const auto &m : i.misses) {
            s += " !" + m;
        }
        dispatch_best();
        if (pending.empty() && !i.ends.empty()) {
            s += " idle";
        }
        for (const auto &a : i.arrivals) {
            s += " +" + a;
            pending.insert({prio.at(a), a});
        }
        dispatch_best();
    }
    return s;
}

// Up to n points of region (parameters only, `extra` bounding it), random
// where the region is full-dimensional, from a fine grid otherwise.
std::vector<ParamPoint> sample_tile(const Polyhedron &region, const psa::PsaNetwork &net, const Polyhedron &extra,
                                    std::size_t n, std::mt19937 &rng) {
    auto r = region.meet(extra);
    const auto idx = net.parameter_indices();
    std::vector<std::pair<Rational, Rational>> bounds;
    for (auto i : idx) {
        auto lo = r.minimize(i), hi = r.maximize(i);
        if (lo.status != geometry::Optimum::Status::bounded || hi.status != geometry::Optimum::Status::bounded) {
            return {};
        }
        bounds.emplace_back(lo.bound.value, hi.bound.value);
    }
    auto named = [&](const Point &x) {
        ParamPoint p;
        for (auto i : idx) {
            p[(*net.space())[i].name] = x[i];
        }
        return p;
    };
    std::vector<ParamPoint> out;
    std::uniform_int_distribution<int> u(0, 9973);
    Point x(net.space()->size());
    for (int tries = 0; out.size() < n && tries < 4000; ++tries) {
        for (std::size_t k = 0; k < idx.size(); ++k) {
            x[idx[k]] = bounds[k].first + (bounds[k].second - bounds[k].first) * Rational(u(rng), 9973);
        }
        if (r.contains(x)) {
            out.push_back(named(x));
        }
    }
    if (out.size() >= n) {
        return out;
    }
    // flat tile: grid points of growing resolution, then any interior point
    for (std::int64_t den : {2, 8, 24}) {
        std::vector<ParamPoint> grid;
        std::function<void(std::size_t)> walk = [&](std::size_t k) {
            if (k == idx.size()) {
                if (r.contains(x)) {
                    grid.push_back(named(x));
                }
                return;
            }
            Rational step(1, den);
            for (Rational v = (bounds[k].first * Rational(den)).ceil() / Rational(den); v <= bounds[k].second; v += step) {
                x[idx[k]] = v;
                walk(k + 1);
            }
        };
        walk(0);
        if (!grid.empty()) {
            std::shuffle(grid.begin(), grid.end(), rng);
            for (std::size_t k = 0; out.size() < n; k = (k + 1) % grid.size()) {
                out.push_back(grid[k]);
            }
            return out;
        }
    }
    if (auto p = r.sample_point()) {
        while (out.size() < n) {
            out.push_back(named(*p));
        }
    }
    return out;
}

struct Soundness {
    std::size_t runs = 0, tiles = 0, points = 0, failures = 0;
    std::vector<std::string> first;

    void fail(const std::string &s) {
        if (first.size() < 5) {
            first.push_back(s);
        }
        ++failures;
    }
};

// pi inside the constraint; for schedulable tiles, 10 sampled points are
// schedulable and share the oracle schedule of pi.
void audit_tile(Soundness &s, const rts::ComponentSpec &spec, const psa::PsaNetwork &net, const Polyhedron &region,
                const ParamPoint &pi, const ParamPoint &discrete, bool schedulable, std::mt19937 &rng,
                const Polyhedron &extra) {
    ++s.runs;
    if (!region.satisfies(pi)) {
        s.fail("pi " + str(pi) + " outside its constraint");
    }
    if (!schedulable) {
        return;
    }
    ++s.tiles;
    ParamPoint full = pi;
    full.insert(discrete.begin(), discrete.end());
    const auto ref = event_sequence(spec, full);
    auto pts = sample_tile(region, net, extra, 10, rng);
    if (pts.size() < 10) {
        s.fail("could not sample tile of " + str(full));
    }
    for (auto p : pts) {
        p.insert(discrete.begin(), discrete.end());
        ++s.points;
        if (!oracle::is_schedulable(spec, p).schedulable) {
            s.fail("miss at " + str(p) + " in tile of " + str(full));
        } else if (event_sequence(spec, p) != ref) {
            s.fail("schedule at " + str(p) + " differs from " + str(full));
        }
    }
}

Soundness soundness;
std::mt19937 soundness_rng(2024);

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ------------------------------------------------------------ criteria

// IM on the cyclic scheduler at (60, 120); exploration capped at the runs of
// one hyperperiod (jobs released in [0, 120]: 3 of t1, 2 of t2).
Report criterion1() {
    Report r;
    auto spec = rts::load_component(model("cyclic.json"));
    auto net = rts::build_component(spec);
    ParamPoint pi = at(60, 120);
    const std::size_t depth = 6 * 5 + 2 * (2 * 2 + 1);
    synthesis::ImOptions o;
    o.depth_bound = depth;
    auto res = synthesis::inverse_method(net, pi, o);
    auto region = res.constraint.eliminate_names([&] {
        std::vector<std::string> clocks;
        for (std::size_t i = 0; i < net.space()->size(); ++i) {
            if ((*net.space())[i].kind != VarKind::parameter) {
                clocks.push_back((*net.space())[i].name);
            }
        }
        return clocks;
    }());
    auto expected = poly("T1 = 60 & T2 = 120", net.space());
    r.note("depth cap " + std::to_string(depth) + ", fixpoint " + (res.reached_fixpoint ? "yes" : "no") +
           ", states " + std::to_string(res.explored_states));
    r.note("constraint: " + synthesis::region_string(res.constraint, net));
    r.check(region.equivalent(expected), "constraint equals T1 = 60 & T2 = 120");
    if (region.satisfies(at(61, 122))) {
        r.note("(61,122) lies in the constraint and has the same oracle schedule: " +
               std::string(event_sequence(spec, at(61, 122)) == event_sequence(spec, pi) ? "yes" : "no"));
    }
    audit_tile(soundness, spec, net, res.constraint, pi, {}, !res.reached_bad, soundness_rng, Polyhedron::universe(net.space()));
    return r;
}

Report criterion2() {
    Report r;
    auto spec = rts::load_component(model("idle_time.json"));
    auto net = rts::build_component(spec);
    const auto &s = net.space();
    ParamPoint pi = at(60, 120);
    synthesis::ImOptions o;
    o.k = poly("T1 > 0 & T2 > 0", s);  // parameters free beyond the declared box
    auto t0 = std::chrono::steady_clock::now();
    auto res = synthesis::inverse_method(net, pi, o);
    double secs = seconds_since(t0);
    const auto &c = res.constraint;
    r.note("constraint: " + synthesis::region_string(c, net) + " (" + std::to_string(secs) + " s)");
    r.check(res.reached_fixpoint, "fixpoint reached");
    r.check(secs < 60, "runtime under a minute");

    // closures of the projections, on integer points
    auto t1 = s->index_of("T1"), t2 = s->index_of("T2");
    auto lo1 = c.minimize(t1), hi1 = c.maximize(t1), lo2 = c.minimize(t2), hi2 = c.maximize(t2);
    auto int_lo = [](const geometry::Optimum &m) {
        auto v = m.bound.value.ceil();
        return (!m.bound.attained && v == m.bound.value) ? v + Rational(1) : v;
    };
    auto int_hi = [](const geometry::Optimum &m) {
        auto v = m.bound.value.floor();
        return (!m.bound.attained && v == m.bound.value) ? v - Rational(1) : v;
    };
    r.check(lo1.status == geometry::Optimum::Status::bounded && hi1.status == geometry::Optimum::Status::bounded,
            "T1 projection bounded");
    r.check(lo2.status == geometry::Optimum::Status::bounded, "T2 projection bounded below");
    if (lo1.status == geometry::Optimum::Status::bounded && hi1.status == geometry::Optimum::Status::bounded &&
        lo2.status == geometry::Optimum::Status::bounded) {
        std::ostringstream n;
        n << "integer closure: T1 in [" << int_lo(lo1) << ", " << int_hi(hi1) << "], T2 in [" << int_lo(lo2)
          << ", " << (hi2.status == geometry::Optimum::Status::unbounded ? std::string("inf") : hi2.bound.value.to_string())
          << ")";
        r.note(n.str());
        r.check(int_lo(lo1) == Rational(56) && int_hi(hi1) == Rational(79), "T1 closure [56, 79]");
        r.check(int_lo(lo2) == Rational(111) || int_lo(lo2) == Rational(112), "T2 closure starts at 111 or 112");
    }
    r.check(hi2.status == geometry::Optimum::Status::unbounded, "T2 projection unbounded above");
    r.check(c.includes(poly("T1 > 56 & T1 < 79 & T2 > 112", s)), "(56,79) x (112,inf) contained");
    r.check(c.meet(poly("T1 = 55", s)).is_empty(), "T1 = 55 excluded");
    r.check(c.meet(poly("T1 = 80", s)).is_empty(), "T1 = 80 excluded");
    r.check(c.meet(poly("T2 = 110", s)).is_empty(), "T2 = 110 excluded");

    auto bp = oracle::busy_period_length(spec, pi);
    auto sim = oracle::simulate(spec, pi);
    r.check(bp == Rational(111) && sim.busy_period_end == Rational(111), "busy period 2 C1 + C2 = 111");
    audit_tile(soundness, spec, net, c, pi, {}, !res.reached_bad, soundness_rng, poly("T2 <= 1000", s));
    return r;
}

Report criterion3() {
    Report r;
    auto spec = rts::load_component(model("idle_time.json"));
    auto net = rts::build_component(spec);
    synthesis::Box box{{"T1", Rational(40), Rational(120)}, {"T2", Rational(80), Rational(200)}};
    synthesis::CartographyOptions o;
    o.depth_bound = synthesis::depth_bound_from_dbf(spec, box);
    o.depth_at = [&](const ParamPoint &p) { return synthesis::depth_bound_at(spec, p); };
    auto t0 = std::chrono::steady_clock::now();
    auto c = synthesis::cartography(net, box, Rational(5), o);
    std::size_t agree = 0, miss = 0;
    for (const auto &[p, v] : c.grid) {
        bool ok = oracle::is_schedulable(spec, p).schedulable;
        if ((v == synthesis::Verdict::schedulable) == ok && v != synthesis::Verdict::depth_exceeded) {
            ++agree;
        } else if (miss++ < 5) {
            r.note("disagreement at " + str(p));
        }
        if (p == at(40, 80)) {
            r.check(v == synthesis::Verdict::deadline_miss, "(40,80) unschedulable");
        }
        if (p == at(60, 120)) {
            r.check(v == synthesis::Verdict::schedulable, "(60,120) schedulable");
        }
    }
    r.note(std::to_string(c.grid.size()) + " grid points (17 x 25), " + std::to_string(agree) + " agree with the oracle, " +
           std::to_string(c.tiles.size()) + " tiles, " + std::to_string(seconds_since(t0)) + " s");
    r.check(c.grid.size() == 17 * 25, "every grid point classified");
    r.check(agree == c.grid.size(), "100% oracle agreement");
    r.check(c.uncovered_points.empty(), "no uncovered points");
    for (const auto &t : c.tiles) {
        audit_tile(soundness, spec, net, t.region, t.witness, t.discrete, t.verdict == synthesis::Verdict::schedulable,
                   soundness_rng, Polyhedron::universe(net.space()));
    }
    return r;
}

Report criterion4() {
    Report r;
    auto spec = rts::load_component(model("component.json"));
    interface::InterfaceOptions o;
    o.cap_with_burst_bound = false;  // Nu = 4 is explored, not skipped
    auto t0 = std::chrono::steady_clock::now();
    auto doc = interface::synthesize_interface(spec, o);
    r.note("interface synthesised in " + std::to_string(seconds_since(t0)) + " s");

    const std::map<std::int64_t, std::pair<std::int64_t, std::pair<std::int64_t, std::int64_t>>> table{
        {1, {10, {20, 50}}}, {2, {14, {24, 50}}}, {3, {21, {47, 50}}}};
    for (std::int64_t nu = 1; nu <= 4; ++nu) {
        std::vector<const interface::InterfaceRow *> rows;
        for (const auto &row : doc.rows) {
            if (row.discrete.at("Nu") == Rational(nu) && row.feasible()) {
                rows.push_back(&row);
            }
        }
        if (nu == 4) {
            r.check(rows.empty(), "Nu = 4 has no feasible row");
            continue;
        }
        if (rows.empty()) {
            r.check(false, "Nu = " + std::to_string(nu) + " feasible");
            continue;
        }
        Rational dmin = *rows.front()->min_response;
        for (const auto *row : rows) {
            dmin = std::min(dmin, *row->min_response);
        }
        // P range of the rows at D2min
        std::optional<Rational> plo, phi;
        for (const auto *row : rows) {
            if (*row->min_response != dmin) {
                continue;
            }
            for (const auto &d : row->feasible_region) {
                auto p = d.space()->index_of("P");
                auto lo = d.minimize(p).bound.value, hi = d.maximize(p).bound.value;
                plo = plo ? std::min(*plo, lo) : lo;
                phi = phi ? std::max(*phi, hi) : hi;
            }
        }
        const auto &[d_expected, p_expected] = table.at(nu);
        std::ostringstream n;
        n << "Nu = " << nu << ": D2min " << dmin << ", P in [" << *plo << ", " << *phi << "], " << rows.size()
          << " feasible row(s)";
        r.note(n.str());
        r.check(dmin == Rational(d_expected), "Nu = " + std::to_string(nu) + " D2min = " + std::to_string(d_expected));
        auto within = [](const Rational &a, std::int64_t b) { return (a - Rational(b)).abs() <= Rational(1); };
        r.check(within(*plo, p_expected.first) && within(*phi, p_expected.second),
                "Nu = " + std::to_string(nu) + " P range within 1 of the table");

        // oracle validation of each row: every integer P at its D2min, and a
        // miss one below at the lowest P
        for (const auto *row : rows) {
            for (const auto &d : row->feasible_region) {
                auto p = d.space()->index_of("P");
                Rational lo = d.minimize(p).bound.value.ceil(), hi = d.maximize(p).bound.value.floor();
                for (Rational x = lo; x <= hi; x += Rational(1)) {
                    ParamPoint pt{{"Nu", Rational(nu)}, {"P", x}, {"D2", *row->min_response}};
                    r.check(oracle::is_schedulable(spec, pt).schedulable, "oracle accepts " + str(pt));
                }
                ParamPoint below{{"Nu", Rational(nu)}, {"P", lo}, {"D2", *row->min_response - Rational(1)}};
                bool missed = !oracle::is_schedulable(spec, below).schedulable;
                if (!missed) {
                    r.note("no miss at " + str(below) + ": worst response of t2 is " +
                           oracle::is_schedulable(spec, below).worst_response.at("t2").to_string());
                }
                r.check(missed, "oracle misses at " + str(below));
            }
        }
    }

    // IM tiles behind the interface, for the soundness audit
    auto box = synthesis::declared_box(spec);
    box.erase(std::remove_if(box.begin(), box.end(), [](const auto &b) { return b.name == "Nu"; }), box.end());
    for (std::int64_t nu = 1; nu <= 4; ++nu) {
        ParamPoint disc{{"Nu", Rational(nu)}};
        auto net = rts::build_component(spec, disc);
        synthesis::CartographyOptions co;
        co.discrete = disc;
        co.depth_bound = synthesis::depth_bound_from_dbf(spec, box, disc);
        co.depth_at = [&](const ParamPoint &p) {
            ParamPoint full = p;
            full.insert(disc.begin(), disc.end());
            return synthesis::depth_bound_at(spec, full);
        };
        auto c = synthesis::cartography(net, box, Rational(1), co);
        for (const auto &t : c.tiles) {
            audit_tile(soundness, spec, net, t.region, t.witness, t.discrete, t.verdict == synthesis::Verdict::schedulable,
                       soundness_rng, Polyhedron::universe(net.space()));
        }
    }
    return r;
}

Report criterion5() {
    Report r;
    std::mt19937 rng(5);
    auto rational_in = [&](std::int64_t lo, std::int64_t hi) {
        std::uniform_int_distribution<std::int64_t> den(1, 4);
        auto d = den(rng);
        std::uniform_int_distribution<std::int64_t> num(lo * d, hi * d);
        return Rational(num(rng), d);
    };
    std::size_t checked = 0, failed = 0;
    auto run = [&](const rts::ComponentSpec &spec, const ParamPoint &pt) {
        ++checked;
        if (auto diff = oracle::cross_check(spec, pt, synthesis::depth_bound_at(spec, pt))) {
            if (failed++ < 5) {
                r.note("at " + str(pt) + ": " + *diff);
            }
        }
    };
    auto idle = rts::load_component(model("idle_time.json"));
    for (int i = 0; i < 50; ++i) {
        run(idle, at(rational_in(40, 120), rational_in(80, 200)));
    }
    auto comp = rts::load_component(model("component.json"));
    std::uniform_int_distribution<int> nu(1, 4);
    for (int i = 0; i < 50; ++i) {
        run(comp, {{"Nu", Rational(nu(rng))}, {"P", rational_in(20, 50)}, {"D2", rational_in(10, 50)}});
    }
    r.note(std::to_string(checked) + " instantiations, " + std::to_string(failed) + " disagreements");
    r.check(failed == 0, "symbolic runs reproduce the oracle log and verdict");
    return r;
}

Report criterion6() {
    Report r;
    r.note(std::to_string(soundness.runs) + " IM constraints, " + std::to_string(soundness.tiles) +
           " schedulable tiles, " + std::to_string(soundness.points) + " sampled points");
    for (const auto &f : soundness.first) {
        r.note(f);
    }
    // the sequence separates an arrival before an end from one after it, and
    // reads a coincidence the way the automata order it
    auto comp = rts::load_component(model("component.json"));
    auto seq = [&](const char *p) {
        return event_sequence(comp, {{"Nu", Rational(1)}, {"P", Rational::parse(p)}, {"D2", Rational(30)}});
    };
    r.check(seq("51/2") != seq("267/10"), "sequence at P = 25.5 differs from P = 26.7");
    r.check(seq("26") == seq("267/10"), "sequence at P = 26 equals P = 26.7");
    r.check(soundness.runs > 0, "IM runs audited");
    r.check(soundness.failures == 0, "pi contained and sampled schedules equal");
    return r;
}

// Extension oracle for one eliminated variable k: the remaining constraints
// bound x_k by an interval that must be non-empty.
bool extends(const std::vector<LinearInequality> &cs, Point x, std::size_t k) {
    std::optional<std::pair<Rational, bool>> lo, hi;  // value, strict
    auto tighten_lo = [&](const Rational &v, bool strict) {
        if (!lo || v > lo->first || (v == lo->first && strict)) {
            lo = {v, strict};
        }
    };
    auto tighten_hi = [&](const Rational &v, bool strict) {
        if (!hi || v < hi->first || (v == hi->first && strict)) {
            hi = {v, strict};
        }
    };
    x[k] = Rational(0);
    for (const auto &c : cs) {
        Rational rest = c.bound - c.evaluate(x);
        const Rational &a = c.coeffs[k];
        bool strict = c.rel == Rel::lt;
        if (a.is_zero()) {
            if (c.rel == Rel::eq ? !rest.is_zero() : (strict ? !(rest > Rational(0)) : rest < Rational(0))) {
                return false;
            }
            continue;
        }
        Rational v = rest / a;
        if (c.rel == Rel::eq) {
            tighten_lo(v, false);
            tighten_hi(v, false);
        } else if (a > Rational(0)) {
            tighten_hi(v, strict);
        } else {
            tighten_lo(v, strict);
        }
    }
    if (!lo || !hi) {
        return true;
    }
    return lo->first < hi->first || (lo->first == hi->first && !lo->second && !hi->second);
}

Report criterion7() {
    Report r;
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> coef(-4, 4), pick(0, 5), small(-20, 20), rel(0, 9);
    std::size_t fm_fail = 0, fm_points = 0, fm_inside = 0;
    for (int sys = 0; sys < 1000; ++sys) {
        const std::size_t n = 3 + sys % 2;
        std::vector<geometry::Variable> vars;
        for (std::size_t i = 0; i < n; ++i) {
            vars.push_back({"v" + std::to_string(i), VarKind::clock});
        }
        auto s = Space::make(vars);
        // constraints through a known centre so that the system is mostly
        // non-empty
        Point centre(n);
        for (auto &c : centre) {
            c = Rational(small(rng), 2);
        }
        std::vector<LinearInequality> cs;
        const int m = 4 + pick(rng);
        for (int k = 0; k < m; ++k) {
            LinearInequality c;
            for (std::size_t i = 0; i < n; ++i) {
                c.coeffs.emplace_back(coef(rng));
            }
            int kind = rel(rng);
            c.rel = kind == 0 ? Rel::eq : (kind < 4 ? Rel::lt : Rel::le);
            c.bound = c.evaluate(centre) + (c.rel == Rel::eq ? Rational(0) : Rational(pick(rng) - 1));
            cs.push_back(c);
        }
        Polyhedron p(s, cs);
        const std::size_t k = sys % n;
        auto proj = p.eliminate(std::vector<std::size_t>{k});
        for (int i = 0; i < 100; ++i) {
            Point x(n);
            for (std::size_t j = 0; j < n; ++j) {
                x[j] = centre[j] + Rational(small(rng), 4);
            }
            bool in_proj = proj.contains(x);
            fm_inside += in_proj;
            ++fm_points;
            if (in_proj != extends(cs, x, k)) {
                ++fm_fail;
            }
        }
    }
    r.note("Fourier-Motzkin: 1000 systems, " + std::to_string(fm_points) + " points (" + std::to_string(fm_inside) +
           " inside), " + std::to_string(fm_fail) + " failures");
    r.check(fm_fail == 0, "projection equals the extension oracle");

    // time elapse
    std::size_t elapse_fail = 0;
    auto s3 = Space::make({{"x", VarKind::clock}, {"y", VarKind::clock}, {"p", VarKind::parameter}});
    for (int i = 0; i < 200; ++i) {
        std::vector<LinearInequality> cs;
        for (int k = 0; k < 4; ++k) {
            LinearInequality c;
            c.coeffs = {Rational(coef(rng)), Rational(coef(rng)), Rational(coef(rng))};
            c.rel = rel(rng) < 3 ? Rel::lt : Rel::le;
            c.bound = Rational(small(rng));
            cs.push_back(c);
        }
        Polyhedron p(s3, cs);
        geometry::SlopeVector slopes{1, pick(rng) % 2, 0};
        auto e = p.time_elapse(slopes);
        if (!e.time_elapse(slopes).equivalent(e) || !e.includes(p)) {
            ++elapse_fail;
        }
        if (auto pt = p.sample_point()) {
            Rational t(pick(rng) * 7, 3);
            Point q = *pt;
            q[0] += t;
            q[1] += t * Rational(slopes[1]);
            if (!e.contains(q)) {
                ++elapse_fail;
            }
        }
    }
    r.note("time elapse: 200 zones, " + std::to_string(elapse_fail) + " failures");
    r.check(elapse_fail == 0, "elapse idempotent, contains its operand and every delayed point");

    // hull and mergeable
    std::size_t hull_fail = 0, merge_pairs = 0, merge_fail = 0, merge_points = 0;
    auto s2 = Space::make({{"a", VarKind::parameter}, {"b", VarKind::parameter}});
    std::uniform_int_distribution<int> corner(0, 6), width(1, 4), side(0, 3);
    auto box = [&](int a0, int a1, int b0, int b1, bool strict_hi) {
        std::ostringstream t;
        t << "a >= " << a0 << " & a " << (strict_hi ? "<" : "<=") << " " << a1 << " & b >= " << b0 << " & b <= " << b1;
        return poly(t.str(), s2);
    };
    for (int i = 0; i < 500; ++i) {
        int a0 = corner(rng), b0 = corner(rng), wa = width(rng), wb = width(rng);
        auto a = box(a0, a0 + wa, b0, b0 + wb, side(rng) == 0);
        Polyhedron b;
        switch (side(rng)) {
            case 0:  // shares the right edge
                b = box(a0 + wa, a0 + wa + width(rng), b0, b0 + wb, false);
                break;
            case 1:  // shifted in b: not convex
                b = box(a0 + wa, a0 + wa + width(rng), b0 + 1, b0 + wb + 1, false);
                break;
            case 2:  // overlaps
                b = box(a0 + 1, a0 + wa + 2, b0, b0 + wb, false);
                break;
            default:
                b = box(corner(rng), corner(rng) + 2, corner(rng), corner(rng) + 2, false);
        }
        auto h = geometry::convex_hull(a, b);
        if (!h.includes(a) || !h.includes(b)) {
            ++hull_fail;
        }
        if (!interface::mergeable(a, b)) {
            continue;
        }
        ++merge_pairs;
        std::uniform_int_distribution<int> u(0, 999);
        auto lo_a = h.minimize(0).bound.value, hi_a = h.maximize(0).bound.value;
        auto lo_b = h.minimize(1).bound.value, hi_b = h.maximize(1).bound.value;
        for (int k = 0; k < 1000; ++k) {
            Point x{lo_a + (hi_a - lo_a) * Rational(u(rng), 999), lo_b + (hi_b - lo_b) * Rational(u(rng), 999)};
            if (!h.contains(x)) {
                continue;
            }
            ++merge_points;
            if (!a.contains(x) && !b.contains(x)) {
                ++merge_fail;
            }
        }
    }
    r.note("hull: 500 pairs, " + std::to_string(hull_fail) + " failures; mergeable: " + std::to_string(merge_pairs) +
           " pairs, " + std::to_string(merge_points) + " hull points, " + std::to_string(merge_fail) + " outside the union");
    r.check(hull_fail == 0, "hull contains both operands");
    r.check(merge_pairs > 0 && merge_fail == 0, "mergeable implies convex union");
    return r;
}

Report criterion8() {
    Report r;
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> n(2, 4), c(1, 12), t(5, 80), den(1, 3), kind(0, 3), b(1, 3);
    std::size_t sets = 0, fail = 0;
    while (sets < 100) {
        std::vector<rts::ConcreteTask> ts;
        int count = n(rng);
        for (int i = 0; i < count; ++i) {
            rts::ConcreteTask x;
            x.name = "t" + std::to_string(i);
            x.priority = i + 1;
            x.wcet = Rational(c(rng), den(rng));
            x.period = std::max(Rational(t(rng), den(rng)), x.wcet);
            x.deadline = x.period;
            x.kind = kind(rng) == 0 ? rts::ActivationKind::arrival_curve : rts::ActivationKind::periodic;
            x.burst = x.kind == rts::ActivationKind::arrival_curve ? b(rng) : 1;
            ts.push_back(x);
        }
        if (!(oracle::utilization(ts) < Rational(95, 100))) {
            continue;
        }
        ++sets;
        auto w = oracle::busy_period_length(ts);
        auto sim = oracle::simulate(ts, {});
        if (!w || w != sim.busy_period_end) {
            if (fail++ < 5) {
                r.note("set " + std::to_string(sets) + ": recurrence " + (w ? w->to_string() : "none") + ", simulation " +
                       (sim.busy_period_end ? sim.busy_period_end->to_string() : "none"));
            }
        }
    }
    r.note("100 task sets, " + std::to_string(fail) + " differences");
    r.check(fail == 0, "busy period recurrence equals simulation");
    return r;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Report()>>> criteria{
        {"IM on the cyclic scheduler converges to the reference point", criterion1},
        {"IM tile of the idle-time scheduler at (60,120)", criterion2},
        {"T1/T2 cartography at step 5 agrees with the oracle", criterion3},
        {"request-server interface rows", criterion4},
        {"symbolic and oracle event sequences on random instantiations", criterion5},
        {"IM soundness on the runs of criteria 1-4", criterion6},
        {"geometry properties", criterion7},
        {"busy-period recurrence against simulation", criterion8},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Report r;
        try {
            r = criteria[i].second();
        } catch (const std::exception &e) {
            r.ok = false;
            r.notes.push_back(std::string("exception: ") + e.what());
        }
        std::printf("%s criterion %zu: %s (%.1f s)\n", r.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    seconds_since(t0));
        for (const auto &n : r.notes) {
            std::printf("    %s\n", n.c_str());
        }
        std::fflush(stdout);
        failed += !r.ok;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
