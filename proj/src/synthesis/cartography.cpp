#include <algorithm>
#include <future>
#include <stdexcept>

#include "rtpta/oracle.hpp"
#include "rtpta/polyhedron_io.hpp"
#include "rtpta/synthesis.hpp"

namespace rtpta::synthesis {

using nlohmann::json;

namespace {

geometry::Point dense(const geometry::Space &space, const ParamPoint &pt) {
    geometry::Point x(space.size());
    for (const auto &[name, v] : pt) {
        if (auto i = space.find(name)) {
            x[*i] = v;
        }
    }
    return x;
}

Polyhedron box_constraint(const PsaNetwork &net, const Box &box) {
    std::vector<LinearInequality> cs;
    for (const auto &r : box) {
        cs.push_back(geometry::make_inequality(*net.space(), {{r.name, Rational(1)}}, Rel::le, r.hi));
        cs.push_back(geometry::make_inequality(*net.space(), {{r.name, Rational(-1)}}, Rel::le, -r.lo));
    }
    return Polyhedron(net.space(), std::move(cs));
}

struct Outcome {
    ImResult im;
    Verdict verdict = Verdict::schedulable;
};

Outcome run_point(const PsaNetwork &net, const Polyhedron &k, const ParamPoint &pt, const CartographyOptions &opts) {
    std::size_t depth = opts.depth_bound;
    if (opts.depth_at) {
        depth = std::max(depth, opts.depth_at(pt));
    }
    ImOptions o;
    o.depth_bound = depth;
    o.k = k;
    Outcome out{inverse_method(net, pt, o), Verdict::depth_exceeded};
    if (out.im.reached_fixpoint) {
        out.verdict = classify_point(net, pt, depth);
    }
    return out;
}

}  // namespace

std::vector<ParamPoint> grid_points(const Box &box, const Rational &step) {
    if (step.sign() <= 0) {
        throw std::invalid_argument("grid step must be positive");
    }
    std::vector<std::vector<Rational>> axes;
    for (const auto &r : box) {
        if (r.lo > r.hi) {
            throw std::invalid_argument("empty range for " + r.name);
        }
        std::vector<Rational> vs;
        for (Rational v = r.lo; v <= r.hi; v += step) {
            vs.push_back(v);
        }
        axes.push_back(std::move(vs));
    }
    std::vector<ParamPoint> out;
    std::vector<std::size_t> idx(box.size(), 0);
    if (box.empty()) {
        return {ParamPoint{}};
    }
    for (;;) {
        ParamPoint p;
        for (std::size_t i = 0; i < box.size(); ++i) {
            p[box[i].name] = axes[i][idx[i]];
        }
        out.push_back(std::move(p));
        std::size_t i = box.size();
        while (i > 0) {
            --i;
            if (++idx[i] < axes[i].size()) {
                break;
            }
            idx[i] = 0;
            if (i == 0) {
                return out;
            }
        }
    }
}

Cartography cartography(const PsaNetwork &net, const Box &box, const Rational &step, const CartographyOptions &opts) {
    for (const auto &r : box) {
        if (!net.space()->find(r.name)) {
            throw std::invalid_argument("box names unknown parameter " + r.name);
        }
    }
    Cartography c;
    c.box = box;
    c.step = step;
    const Polyhedron k = net.initial_constraint().meet(box_constraint(net, box));
    const auto points = grid_points(box, step);
    std::vector<std::optional<std::size_t>> owner(points.size());  // covering tile

    auto covering = [&](const ParamPoint &p) -> std::optional<std::size_t> {
        auto x = dense(*net.space(), p);
        for (std::size_t t = 0; t < c.tiles.size(); ++t) {
            if (c.tiles[t].region.contains(x)) {
                return t;
            }
        }
        return std::nullopt;
    };

    const std::size_t jobs = std::max<std::size_t>(1, opts.jobs);
    std::size_t next = 0;
    while (next < points.size()) {
        // next batch of points not covered by the tiles accepted so far
        std::vector<std::size_t> batch;
        for (; next < points.size() && batch.size() < jobs; ++next) {
            if (auto t = covering(points[next])) {
                owner[next] = t;
            } else {
                batch.push_back(next);
            }
        }
        std::vector<Outcome> results(batch.size());
        if (jobs == 1 || batch.size() == 1) {
            for (std::size_t b = 0; b < batch.size(); ++b) {
                results[b] = run_point(net, k, points[batch[b]], opts);
            }
        } else {
            std::vector<std::future<Outcome>> fs;
            for (std::size_t i : batch) {
                fs.push_back(std::async(std::launch::async,
                                        [&, i] { return run_point(net, k, points[i], opts); }));
            }
            for (std::size_t b = 0; b < batch.size(); ++b) {
                results[b] = fs[b].get();
            }
        }
        // accept in grid order; a point an earlier result now covers is
        // dropped, exactly as a sequential run would have skipped it
        for (std::size_t b = 0; b < batch.size(); ++b) {
            const std::size_t i = batch[b];
            if (auto t = covering(points[i])) {
                owner[i] = t;
                continue;
            }
            Tile tile;
            tile.region = results[b].im.constraint;
            tile.discrete = opts.discrete;
            tile.verdict = results[b].verdict;
            tile.witness = points[i];
            c.tiles.push_back(std::move(tile));
            owner[i] = c.tiles.size() - 1;
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        Verdict v = c.tiles[*owner[i]].verdict;
        if (v == Verdict::depth_exceeded) {
            c.uncovered_points.push_back(points[i]);
        }
        c.grid.emplace_back(points[i], v);
    }
    return c;
}

Box declared_box(const rts::ComponentSpec &spec) {
    Box b;
    for (const auto &p : spec.parameters) {
        if (p.kind == rts::ParamKind::continuous) {
            b.push_back({p.name, p.lo, p.hi});
        }
    }
    return b;
}

std::size_t depth_bound_from_dbf(const rts::ComponentSpec &spec, const Box &box, const ParamPoint &discrete,
                                 std::size_t fallback) {
    // most demanding corner: parameters at their box minimum, discrete
    // parameters at their given value or declared maximum
    ParamPoint corner;
    for (const auto &p : spec.parameters) {
        corner[p.name] = p.kind == rts::ParamKind::discrete ? p.hi : p.lo;
    }
    for (const auto &r : box) {
        corner[r.name] = r.lo;
    }
    for (const auto &[n, v] : discrete) {
        corner[n] = v;
    }
    const auto tasks = rts::resolve(spec, corner);
    const Rational u = oracle::utilization(tasks);
    Rational limit;
    if (u > Rational(1)) {
        limit = Rational(1);
        for (const auto &t : tasks) {
            limit = std::max(limit, t.deadline + t.period * Rational(t.burst));
        }
        while (!oracle::first_overload_instant(tasks, limit)) {
            limit *= Rational(2);
        }
    } else if (u < Rational(1)) {
        // an overload can only show up inside the first busy period
        limit = *oracle::busy_period_length(tasks);
    } else {
        Rational maxd;
        for (const auto &t : tasks) {
            maxd = std::max(maxd, t.deadline);
        }
        try {
            limit = oracle::hyperperiod(tasks) * Rational(2) + maxd;
        } catch (const std::invalid_argument &) {
            return fallback;
        }
    }
    auto t = oracle::first_overload_instant(tasks, limit);
    if (!t) {
        return fallback;
    }
    std::size_t jobs = 0;
    for (const auto &task : tasks) {
        for (std::int64_t k = 0; oracle::release_time(task, k) <= *t; ++k) {
            ++jobs;
        }
    }
    // a task, its activation automaton, and the scheduler
    const std::size_t automata = 2 * tasks.size() + 1;
    return 6 * jobs + 2 * automata;
}

std::size_t depth_bound_at(const rts::ComponentSpec &spec, const ParamPoint &pt, std::size_t fallback) {
    const auto tasks = rts::resolve(spec, pt);
    const oracle::Verdict v = oracle::is_schedulable(tasks);
    std::optional<Rational> end;
    if (v.first_miss) {
        end = v.first_miss->time;
    } else if (v.busy_period_end) {
        end = v.busy_period_end;
    }
    if (!end) {
        return fallback;
    }
    std::size_t jobs = 0;
    for (const auto &task : tasks) {
        for (std::int64_t k = 0; oracle::release_time(task, k) <= *end; ++k) {
            ++jobs;
        }
    }
    return 6 * jobs + 2 * (2 * tasks.size() + 1);
}

// ---------------------------------------------------------------- output

std::string region_string(const Polyhedron &region, const PsaNetwork &net) {
    return region.eliminate(net.clock_indices()).to_string();
}

json to_json(const Tile &t, const PsaNetwork &net) {
    json d = json::object();
    for (const auto &[n, v] : t.discrete) {
        d[n] = v.is_integer() ? json(v.to_int64()) : json(v.to_string());
    }
    json w = json::object();
    for (const auto &[n, v] : t.witness) {
        w[n] = v.to_string();
    }
    return {{"discrete", d},
            {"region", geometry::to_json(t.region.eliminate(net.clock_indices()))},
            {"region_text", region_string(t.region, net)},
            {"verdict", std::string(to_string(t.verdict))},
            {"witness", w}};
}

json to_json(const Cartography &c, const PsaNetwork &net) {
    json box = json::object();
    for (const auto &r : c.box) {
        box[r.name] = {r.lo.to_string(), r.hi.to_string()};
    }
    json tiles = json::array();
    for (const auto &t : c.tiles) {
        tiles.push_back(to_json(t, net));
    }
    json unc = json::array();
    for (const auto &p : c.uncovered_points) {
        json o = json::object();
        for (const auto &[n, v] : p) {
            o[n] = v.to_string();
        }
        unc.push_back(o);
    }
    return {{"box", box}, {"step", c.step.to_string()}, {"tiles", tiles}, {"uncovered_points", unc}};
}

std::string grid_csv(const Cartography &c) {
    std::string out;
    for (const auto &r : c.box) {
        out += r.name + ",";
    }
    out += "verdict\n";
    for (const auto &[p, v] : c.grid) {
        for (const auto &r : c.box) {
            out += p.at(r.name).to_string() + ",";
        }
        out += std::string(to_string(v)) + "\n";
    }
    return out;
}

}  // namespace rtpta::synthesis
