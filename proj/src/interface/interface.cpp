#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rtpta/interface.hpp"
#include "rtpta/oracle.hpp"
#include "rtpta/polyhedron_io.hpp"

namespace rtpta::interface {

using geometry::LinearInequality;
using geometry::Rel;
using nlohmann::json;
using synthesis::Verdict;

namespace {

// The halves whose complements cover the complement of the polyhedron.
std::vector<LinearInequality> halves(const Polyhedron &p) {
    std::vector<LinearInequality> out;
    for (const auto &c : p.constraints()) {
        if (c.rel == Rel::eq) {
            LinearInequality lo = c;
            lo.rel = Rel::le;
            LinearInequality hi = lo;
            for (auto &a : hi.coeffs) {
                a = -a;
            }
            hi.bound = -c.bound;
            out.push_back(std::move(lo));
            out.push_back(std::move(hi));
        } else {
            out.push_back(c);
        }
    }
    return out;
}

bool compatible(const Tile &a, const Tile &b) { return a.verdict == b.verdict && a.discrete == b.discrete; }

// Integer points of the projection of p on variable v; nullopt bounds are
// infinite. Empty intervals have lo > hi.
struct IntInterval {
    std::optional<Rational> lo, hi;
};

IntInterval integer_interval(const Polyhedron &p, std::size_t v) {
    IntInterval r;
    auto mn = p.minimize(v);
    if (mn.status == geometry::Optimum::Status::bounded) {
        Rational x = mn.bound.value.ceil();
        if (x == mn.bound.value && !mn.bound.attained) {
            x += Rational(1);
        }
        r.lo = x;
    }
    auto mx = p.maximize(v);
    if (mx.status == geometry::Optimum::Status::bounded) {
        Rational x = mx.bound.value.floor();
        if (x == mx.bound.value && !mx.bound.attained) {
            x -= Rational(1);
        }
        r.hi = x;
    }
    return r;
}

// Every integer slice of the hull along v is a slice of a or of b.
bool integer_exact(const Polyhedron &hull, const Polyhedron &a, const Polyhedron &b, std::size_t v, const Rational &lo,
                   const Rational &hi) {
    for (Rational x = lo; x <= hi; x += Rational(1)) {
        auto pin = [&](const Polyhedron &p) {
            LinearInequality eq;
            eq.coeffs.resize(p.dimension());
            eq.coeffs[v] = Rational(1);
            eq.rel = Rel::eq;
            eq.bound = x;
            return p.meet(eq);
        };
        Polyhedron h = pin(hull);
        Polyhedron sa = pin(a);
        Polyhedron sb = pin(b);
        if (!(sa.equivalent(h) || sb.equivalent(h))) {
            return false;
        }
    }
    return true;
}

std::string assignment_text(const ParamPoint &d) {
    std::string s;
    for (const auto &[n, v] : d) {
        if (!s.empty()) {
            s += ",";
        }
        s += n + "=" + v.to_string();
    }
    return s;
}

}  // namespace

bool mergeable(const Polyhedron &a, const Polyhedron &b) {
    if (a.is_empty() || b.is_empty()) {
        return true;
    }
    const Polyhedron hull = geometry::convex_hull(a, b);
    const auto ha = halves(a);
    const auto hb = halves(b);
    for (const auto &ca : ha) {
        Polyhedron outside_a = hull.meet(geometry::negate(ca));
        if (outside_a.is_empty()) {
            continue;
        }
        for (const auto &cb : hb) {
            if (!outside_a.meet(geometry::negate(cb)).is_empty()) {
                return false;
            }
        }
    }
    return true;
}

std::vector<Tile> merge_fixpoint(std::vector<Tile> tiles) {
    std::stable_sort(tiles.begin(), tiles.end(),
                     [](const Tile &x, const Tile &y) { return x.region.to_string() < y.region.to_string(); });
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < tiles.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < tiles.size(); ++j) {
                if (compatible(tiles[i], tiles[j]) && mergeable(tiles[i].region, tiles[j].region)) {
                    tiles[i].region = geometry::convex_hull(tiles[i].region, tiles[j].region);
                    tiles.erase(tiles.begin() + static_cast<std::ptrdiff_t>(j));
                    changed = true;
                    break;
                }
            }
        }
    }
    return tiles;
}

IntegerMerge integer_merge(std::vector<Tile> tiles, const std::set<std::string> &integer_vars, bool enabled) {
    IntegerMerge out;
    if (!enabled || tiles.empty()) {
        out.tiles = std::move(tiles);
        return out;
    }
    const auto &space = tiles.front().region.space();
    std::vector<std::size_t> vars;
    for (const auto &n : integer_vars) {
        vars.push_back(space->index_of(n));
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < tiles.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < tiles.size() && !changed; ++j) {
                if (!compatible(tiles[i], tiles[j])) {
                    continue;
                }
                const Polyhedron &a = tiles[i].region;
                const Polyhedron &b = tiles[j].region;
                for (std::size_t v : vars) {
                    IntInterval ia = integer_interval(a, v);
                    IntInterval ib = integer_interval(b, v);
                    if (!ia.lo || !ia.hi || !ib.lo || !ib.hi) {
                        continue;
                    }
                    bool adjacent = *ia.hi + Rational(1) == *ib.lo || *ib.hi + Rational(1) == *ia.lo;
                    if (!adjacent) {
                        continue;
                    }
                    const std::size_t one[] = {v};
                    if (!a.eliminate(one).equivalent(b.eliminate(one))) {
                        continue;
                    }
                    Polyhedron hull = geometry::convex_hull(a, b);
                    Rational lo = std::min(*ia.lo, *ib.lo);
                    Rational hi = std::max(*ia.hi, *ib.hi);
                    if (!integer_exact(hull, a, b, v, lo, hi)) {
                        continue;
                    }
                    // closed integer bounds on v
                    LinearInequality up;
                    up.coeffs.resize(hull.dimension());
                    up.coeffs[v] = Rational(1);
                    up.bound = hi;
                    LinearInequality down = up;
                    down.coeffs[v] = Rational(-1);
                    down.bound = -lo;
                    const LinearInequality bounds[] = {up, down};
                    tiles[i].region = hull.meet(bounds);
                    tiles.erase(tiles.begin() + static_cast<std::ptrdiff_t>(j));
                    out.integers_only = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    out.tiles = std::move(tiles);
    return out;
}

std::int64_t upper_bound_burst(const rts::ComponentSpec &spec, const synthesis::Box &box) {
    const rts::ParameterDecl *burst = nullptr;
    for (const auto &t : spec.tasks) {
        if (t.activation.kind == rts::ActivationKind::arrival_curve && t.activation.burst.is_param()) {
            burst = spec.find_parameter(t.activation.burst.param_name());
            break;
        }
    }
    if (!burst) {
        throw std::invalid_argument("component has no parametric burst");
    }
    ParamPoint pt;
    for (const auto &p : spec.parameters) {
        pt[p.name] = p.kind == rts::ParamKind::discrete ? p.lo : p.hi;
    }
    for (const auto &r : box) {
        pt[r.name] = r.hi;
    }
    const std::int64_t lo = burst->lo.to_int64();
    const std::int64_t hi = burst->hi.to_int64();
    std::int64_t best = lo - 1;
    for (std::int64_t n = lo; n <= hi; ++n) {
        pt[burst->name] = Rational(n);
        if (!oracle::is_schedulable(spec, pt).schedulable) {
            break;
        }
        best = n;
    }
    return best;
}

InterfaceDoc synthesize_interface(const rts::ComponentSpec &spec, const InterfaceOptions &opts) {
    InterfaceDoc doc;
    doc.component = spec.name;
    doc.provided = spec.provided;
    for (const auto &name : spec.provided) {
        for (const auto &t : spec.tasks) {
            if (t.name == name && t.deadline.is_param()) {
                doc.response_parameter = t.deadline.param_name();
            }
        }
        if (!doc.response_parameter.empty()) {
            break;
        }
    }
    if (doc.response_parameter.empty()) {
        throw std::invalid_argument("no provided task has a parametric deadline");
    }
    for (const auto &p : spec.continuous_parameters()) {
        if (p != doc.response_parameter) {
            doc.interface_parameters.push_back(p);
        }
    }
    doc.box = opts.box.empty() ? synthesis::declared_box(spec) : opts.box;
    doc.step = opts.step;
    if (opts.discrete.empty()) {
        for (const auto &p : spec.parameters) {
            if (p.kind == rts::ParamKind::discrete) {
                doc.discrete.push_back({p.name, p.lo.to_int64(), p.hi.to_int64()});
            }
        }
    } else {
        doc.discrete = opts.discrete;
    }
    for (const auto &d : doc.discrete) {
        const auto *decl = spec.find_parameter(d.name);
        if (!decl || decl->kind != rts::ParamKind::discrete) {
            throw std::invalid_argument("not a discrete parameter: " + d.name);
        }
        if (d.lo > d.hi) {
            throw std::invalid_argument("empty range for " + d.name);
        }
    }
    std::optional<std::string> burst_name;
    for (const auto &t : spec.tasks) {
        if (t.activation.kind == rts::ActivationKind::arrival_curve && t.activation.burst.is_param()) {
            burst_name = t.activation.burst.param_name();
            doc.burst_bound = upper_bound_burst(spec, doc.box);
            break;
        }
    }

    std::vector<geometry::Variable> pvars;
    for (const auto &r : doc.box) {
        pvars.push_back({r.name, geometry::VarKind::parameter});
    }
    auto param_space = geometry::Space::make(pvars);
    std::vector<geometry::Variable> ivars;
    for (const auto &n : doc.interface_parameters) {
        ivars.push_back({n, geometry::VarKind::parameter});
    }
    auto iface_space = geometry::Space::make(ivars);
    const std::set<std::string> int_vars(doc.interface_parameters.begin(), doc.interface_parameters.end());

    // cartesian product of the discrete ranges, last name varying fastest
    std::vector<ParamPoint> assignments{ParamPoint{}};
    for (const auto &d : doc.discrete) {
        std::vector<ParamPoint> next;
        for (const auto &a : assignments) {
            for (std::int64_t v = d.lo; v <= d.hi; ++v) {
                ParamPoint b = a;
                b[d.name] = Rational(v);
                next.push_back(std::move(b));
            }
        }
        assignments = std::move(next);
    }

    for (const auto &disc : assignments) {
        InterfaceRow base;
        base.discrete = disc;
        if (opts.cap_with_burst_bound && burst_name && doc.burst_bound &&
            disc.at(*burst_name) > Rational(*doc.burst_bound)) {
            base.note = "above burst bound " + std::to_string(*doc.burst_bound);
            doc.rows.push_back(std::move(base));
            continue;
        }
        psa::PsaNetwork net = rts::build_component(spec, disc);
        synthesis::CartographyOptions co;
        co.jobs = opts.jobs;
        co.discrete = disc;
        co.depth_bound = opts.depth ? *opts.depth : synthesis::depth_bound_from_dbf(spec, doc.box, disc);
        if (!opts.depth) {
            co.depth_at = [&](const ParamPoint &p) {
                ParamPoint q = p;
                q.insert(disc.begin(), disc.end());
                return synthesis::depth_bound_at(spec, q);
            };
        }
        base.depth_bound = co.depth_bound;
        synthesis::Cartography c = synthesis::cartography(net, doc.box, doc.step, co);
        for (const auto &[p, v] : c.grid) {
            ParamPoint q = p;
            q.insert(disc.begin(), disc.end());
            doc.samples.emplace_back(std::move(q), v);
        }
        std::vector<Tile> good;
        for (const auto &t : c.tiles) {
            if (t.verdict == Verdict::schedulable) {
                Tile u = t;
                u.region = t.region.eliminate(net.clock_indices()).rebase(param_space);
                good.push_back(std::move(u));
            }
        }
        if (!c.uncovered_points.empty()) {
            base.note = std::to_string(c.uncovered_points.size()) + " grid points inconclusive";
        }
        good = merge_fixpoint(std::move(good));
        IntegerMerge im = integer_merge(std::move(good), int_vars, opts.integers);
        good = std::move(im.tiles);
        if (good.empty()) {
            if (base.note.empty()) {
                base.note = "no schedulable tile";
            }
            doc.rows.push_back(std::move(base));
            continue;
        }
        // one row per distinct minimal response; its interface region is the
        // union of the projections of the tiles attaining it
        const std::size_t resp = param_space->index_of(doc.response_parameter);
        const std::size_t one[] = {resp};
        std::map<std::pair<Rational, bool>, std::vector<Tile>> by_min;
        for (const auto &t : good) {
            auto m = t.region.minimize(resp);
            if (m.status != geometry::Optimum::Status::bounded) {
                throw std::logic_error("response parameter unbounded below in a tile");
            }
            Tile p = t;
            p.region = t.region.eliminate(one).rebase(iface_space);
            by_min[{m.bound.value, m.bound.attained}].push_back(std::move(p));
        }
        for (auto &[key, tiles] : by_min) {
            InterfaceRow row = base;
            row.min_response = key.first;
            row.min_attained = key.second;
            tiles = merge_fixpoint(std::move(tiles));
            IntegerMerge m2 = integer_merge(std::move(tiles), int_vars, opts.integers);
            row.integers_only = im.integers_only || m2.integers_only;
            for (const auto &t : m2.tiles) {
                row.feasible_region.push_back(t.region);
            }
            std::sort(row.feasible_region.begin(), row.feasible_region.end(),
                      [](const Polyhedron &x, const Polyhedron &y) { return x.to_string() < y.to_string(); });
            doc.rows.push_back(std::move(row));
        }
    }
    return doc;
}

// ---------------------------------------------------------------- output

namespace {

json point_json(const ParamPoint &p, bool integers) {
    json o = json::object();
    for (const auto &[n, v] : p) {
        o[n] = integers && v.is_integer() ? json(v.to_int64()) : json(v.to_string());
    }
    return o;
}

ParamPoint point_from_json(const json &j) {
    ParamPoint p;
    for (const auto &[n, v] : j.items()) {
        p[n] = geometry::rational_from_json(v);
    }
    return p;
}

}  // namespace

json to_json(const InterfaceDoc &doc) {
    json box = json::array();
    for (const auto &r : doc.box) {
        box.push_back({{"name", r.name}, {"lo", r.lo.to_string()}, {"hi", r.hi.to_string()}});
    }
    json disc = json::array();
    for (const auto &d : doc.discrete) {
        disc.push_back({{"name", d.name}, {"lo", d.lo}, {"hi", d.hi}});
    }
    json rows = json::array();
    for (const auto &r : doc.rows) {
        json regions = json::array();
        for (const auto &p : r.feasible_region) {
            regions.push_back(geometry::to_json(p));
        }
        json jr = {{"discrete", point_json(r.discrete, true)},
                   {"feasible", r.feasible()},
                   {"regions", regions},
                   {"integers_only", r.integers_only},
                   {"depth_bound", r.depth_bound}};
        if (r.min_response) {
            jr["min_response"] = r.min_response->to_string();
            jr["min_attained"] = r.min_attained;
        }
        if (!r.note.empty()) {
            jr["note"] = r.note;
        }
        rows.push_back(std::move(jr));
    }
    json out = {{"component", doc.component},
                {"provided", doc.provided},
                {"response_parameter", doc.response_parameter},
                {"interface_parameters", doc.interface_parameters},
                {"analysis", {{"box", box}, {"step", doc.step.to_string()}, {"discrete", disc}}},
                {"rows", rows}};
    if (doc.burst_bound) {
        out["burst_bound"] = *doc.burst_bound;
    }
    return out;
}

InterfaceDoc interface_from_json(const json &j) {
    InterfaceDoc doc;
    doc.component = j.at("component").get<std::string>();
    doc.provided = j.at("provided").get<std::vector<std::string>>();
    doc.response_parameter = j.at("response_parameter").get<std::string>();
    doc.interface_parameters = j.at("interface_parameters").get<std::vector<std::string>>();
    const auto &a = j.at("analysis");
    for (const auto &r : a.at("box")) {
        doc.box.push_back({r.at("name").get<std::string>(), geometry::rational_from_json(r.at("lo")),
                           geometry::rational_from_json(r.at("hi"))});
    }
    doc.step = geometry::rational_from_json(a.at("step"));
    for (const auto &d : a.at("discrete")) {
        doc.discrete.push_back({d.at("name").get<std::string>(), d.at("lo").get<std::int64_t>(), d.at("hi").get<std::int64_t>()});
    }
    if (j.contains("burst_bound")) {
        doc.burst_bound = j.at("burst_bound").get<std::int64_t>();
    }
    std::vector<geometry::Variable> ivars;
    for (const auto &n : doc.interface_parameters) {
        ivars.push_back({n, geometry::VarKind::parameter});
    }
    auto space = geometry::Space::make(ivars);
    for (const auto &jr : j.at("rows")) {
        InterfaceRow r;
        r.discrete = point_from_json(jr.at("discrete"));
        for (const auto &p : jr.at("regions")) {
            r.feasible_region.push_back(geometry::polyhedron_from_json(p, space));
        }
        r.integers_only = jr.at("integers_only").get<bool>();
        r.depth_bound = jr.at("depth_bound").get<std::size_t>();
        if (jr.contains("min_response")) {
            r.min_response = geometry::rational_from_json(jr.at("min_response"));
            r.min_attained = jr.at("min_attained").get<bool>();
        }
        r.note = jr.value("note", std::string());
        doc.rows.push_back(std::move(r));
    }
    return doc;
}

std::string to_table(const InterfaceDoc &doc) {
    std::ostringstream out;
    out << "component " << doc.component;
    if (!doc.provided.empty()) {
        out << ", provided";
        for (const auto &p : doc.provided) {
            out << " " << p;
        }
    }
    out << "\n";
    std::vector<std::array<std::string, 3>> lines{{"assignment", "region", doc.response_parameter + " min"}};
    for (const auto &r : doc.rows) {
        std::string region;
        for (const auto &p : r.feasible_region) {
            if (!region.empty()) {
                region += "  or  ";
            }
            region += "(" + p.to_string() + ")";
        }
        std::string resp;
        if (!r.feasible()) {
            region = "infeasible";
            if (!r.note.empty()) {
                region += " (" + r.note + ")";
            }
        } else {
            resp = r.min_response->to_string();
            if (!r.min_attained) {
                resp = "> " + resp;
            }
            if (r.integers_only) {
                region += " [integers]";
            }
        }
        lines.push_back({assignment_text(r.discrete), region, resp});
    }
    std::size_t w0 = 0, w1 = 0;
    for (const auto &l : lines) {
        w0 = std::max(w0, l[0].size());
        w1 = std::max(w1, l[1].size());
    }
    for (const auto &l : lines) {
        out << l[0] << std::string(w0 - l[0].size() + 2, ' ') << l[1] << std::string(w1 - l[1].size() + 2, ' ') << l[2]
            << "\n";
    }
    return out.str();
}

std::string samples_csv(const InterfaceDoc &doc) {
    std::vector<std::string> cols;
    for (const auto &d : doc.discrete) {
        cols.push_back(d.name);
    }
    for (const auto &r : doc.box) {
        cols.push_back(r.name);
    }
    std::string out;
    for (const auto &c : cols) {
        out += c + ",";
    }
    out += "verdict\n";
    for (const auto &[p, v] : doc.samples) {
        for (const auto &c : cols) {
            out += p.at(c).to_string() + ",";
        }
        out += std::string(synthesis::to_string(v)) + "\n";
    }
    return out;
}

}  // namespace rtpta::interface
