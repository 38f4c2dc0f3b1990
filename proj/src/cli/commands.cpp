#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rtpta/cli.hpp"
#include "rtpta/interface.hpp"
#include "rtpta/polyhedron_io.hpp"

namespace rtpta::cli {

using geometry::ParamPoint;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        if (!cur.empty()) {
            out.push_back(cur);
        }
    }
    return out;
}

std::string trim(std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

Rational parse_value(const std::string &s) {
    try {
        return Rational::parse(s);
    } catch (const std::exception &e) {
        throw UsageError(e.what());
    }
}

rts::ComponentSpec load(const std::string &path) {
    try {
        return rts::load_component(path);
    } catch (const std::exception &e) {
        throw ModelError(e.what());
    }
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write " + path);
    }
    f << content;
}

std::string point_text(const ParamPoint &p) {
    std::string s;
    for (const auto &[n, v] : p) {
        s += (s.empty() ? "" : ", ") + n + "=" + v.to_string();
    }
    return s;
}

json point_json(const ParamPoint &p) {
    json o = json::object();
    for (const auto &[n, v] : p) {
        o[n] = v.to_string();
    }
    return o;
}

// Every name declared; with `complete`, every parameter assigned.
void check_names(const rts::ComponentSpec &spec, const ParamPoint &pt, bool complete) {
    for (const auto &[n, v] : pt) {
        const auto *d = spec.find_parameter(n);
        if (!d) {
            throw UsageError("undeclared parameter " + n);
        }
        if (d->kind == rts::ParamKind::discrete && !v.is_integer()) {
            throw UsageError("discrete parameter " + n + " needs an integer value");
        }
    }
    if (complete) {
        for (const auto &p : spec.parameters) {
            if (!pt.contains(p.name)) {
                throw UsageError("no value for parameter " + p.name + " (use --at)");
            }
        }
    }
}

ParamPoint discrete_part(const rts::ComponentSpec &spec, const ParamPoint &pt) {
    ParamPoint d;
    for (const auto &p : spec.parameters) {
        if (p.kind == rts::ParamKind::discrete) {
            auto it = pt.find(p.name);
            d[p.name] = it == pt.end() ? p.ref : it->second;
        }
    }
    return d;
}

std::size_t default_depth(const rts::ComponentSpec &spec, const ParamPoint &pt) {
    ParamPoint disc = discrete_part(spec, pt);
    return std::max(synthesis::depth_bound_from_dbf(spec, synthesis::declared_box(spec), disc),
                    synthesis::depth_bound_at(spec, pt));
}

void check_box(const rts::ComponentSpec &spec, const synthesis::Box &box) {
    for (const auto &r : box) {
        const auto *d = spec.find_parameter(r.name);
        if (!d || d->kind != rts::ParamKind::continuous) {
            throw UsageError("box names an unknown or discrete parameter " + r.name);
        }
        if (r.lo > r.hi) {
            throw UsageError("empty box range for " + r.name);
        }
        if (r.lo < d->lo || r.hi > d->hi) {
            throw UsageError("box range for " + r.name + " lies outside the declared range");
        }
    }
}

// Box over the declared ranges with the given ranges replacing theirs.
synthesis::Box full_box(const rts::ComponentSpec &spec, const std::string &text) {
    synthesis::Box box = synthesis::declared_box(spec);
    if (!text.empty()) {
        for (const auto &r : parse_box(text)) {
            auto it = std::find_if(box.begin(), box.end(), [&](const auto &b) { return b.name == r.name; });
            if (it == box.end()) {
                check_box(spec, {r});
            } else {
                *it = r;
            }
        }
    }
    check_box(spec, box);
    return box;
}

struct Common {
    std::string model;
    std::string at;
    std::string box;
    std::string step = "1";
    std::optional<std::size_t> depth;
    std::string discrete;
    std::optional<std::string> horizon;
    std::string out;
    std::string trace;
    std::string format;
    std::size_t jobs = 1;
};

int cmd_check(const Common &c, std::ostream &out) {
    auto spec = load(c.model);
    ParamPoint pt = parse_assignment(c.at);
    check_names(spec, pt, true);
    CheckReport r = check_point(spec, pt, c.depth);
    if (c.format == "json") {
        json wr = json::object();
        for (const auto &[t, v] : r.oracle.worst_response) {
            wr[t] = v.to_string();
        }
        json j = {{"point", point_json(pt)},
                  {"oracle", r.oracle.schedulable ? "schedulable" : "deadline_miss"},
                  {"symbolic", std::string(synthesis::to_string(r.symbolic))},
                  {"agree", r.agree()},
                  {"depth", r.depth},
                  {"worst_response", wr}};
        if (r.oracle.busy_period_end) {
            j["busy_period_end"] = r.oracle.busy_period_end->to_string();
        }
        if (r.oracle.first_miss) {
            j["first_miss"] = {{"task", r.oracle.first_miss->task}, {"time", r.oracle.first_miss->time.to_string()}};
        }
        out << j.dump(2) << "\n";
    } else {
        out << "point " << point_text(pt) << "\n";
        for (const auto &[t, v] : r.oracle.worst_response) {
            out << "  " << t << " worst response " << v << "\n";
        }
        if (r.oracle.busy_period_end) {
            out << "busy period end " << *r.oracle.busy_period_end << "\n";
        }
        if (r.oracle.first_miss) {
            out << "first miss " << r.oracle.first_miss->task << " at " << r.oracle.first_miss->time << "\n";
        }
        out << "oracle " << (r.oracle.schedulable ? "schedulable" : "deadline_miss") << "\n";
        out << "symbolic " << synthesis::to_string(r.symbolic) << " (depth " << r.depth << ")\n";
        if (!r.agree()) {
            out << "internal consistency error: oracle and symbolic verdicts differ\n";
        }
    }
    return r.exit_code();
}

int cmd_simulate(const Common &c, std::ostream &out) {
    auto spec = load(c.model);
    ParamPoint pt = parse_assignment(c.at);
    check_names(spec, pt, true);
    std::optional<Rational> horizon;
    if (c.horizon) {
        horizon = parse_value(*c.horizon);
    }
    oracle::SimulationResult r;
    try {
        r = oracle::simulate(spec, pt, horizon);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    const std::string tsv = oracle::to_tsv(r.log);
    if (!c.trace.empty()) {
        write_file(c.trace, tsv);
    }
    const std::string js = oracle::to_json(r).dump(2) + "\n";
    if (!c.out.empty()) {
        write_file(c.out, js);
    }
    if (c.format == "tsv") {
        out << tsv;
    } else if (c.out.empty()) {
        out << js;
    }
    return r.schedulable ? ok : unschedulable;
}

int cmd_analyze(const Common &c, std::ostream &out) {
    auto spec = load(c.model);
    ParamPoint pt = parse_assignment(c.at);
    check_names(spec, pt, true);
    psa::PsaNetwork net = rts::build_component(spec, discrete_part(spec, pt));
    synthesis::ImOptions o;
    o.depth_bound = c.depth ? *c.depth : default_depth(spec, pt);
    synthesis::ImResult r;
    try {
        r = synthesis::inverse_method(net, pt, o);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    const std::string text = synthesis::region_string(r.constraint, net);
    if (c.format == "json") {
        json negs = json::array();
        for (const auto &n : r.incompatible_negations) {
            negs.push_back(geometry::to_string(*net.space(), n));
        }
        json j = {{"point", point_json(pt)},
                  {"constraint", text},
                  {"region", geometry::to_json(r.constraint.eliminate(net.clock_indices()))},
                  {"reached_fixpoint", r.reached_fixpoint},
                  {"explored_states", r.explored_states},
                  {"negations", negs},
                  {"depth", *o.depth_bound}};
        out << j.dump(2) << "\n";
    } else {
        out << text << "\n";
        out << "fixpoint " << (r.reached_fixpoint ? "reached" : "not reached") << ", " << r.explored_states
            << " states, " << r.incompatible_negations.size() << " negations, depth " << *o.depth_bound << "\n";
    }
    return r.reached_fixpoint ? ok : inconclusive;
}

int cmd_cartography(const Common &c, std::ostream &out) {
    auto spec = load(c.model);
    ParamPoint at = parse_assignment(c.at);
    check_names(spec, at, false);
    synthesis::Box box = full_box(spec, c.box);
    Rational step = parse_value(c.step);
    if (step.sign() <= 0) {
        throw UsageError("--step must be positive");
    }
    ParamPoint disc = discrete_part(spec, at);
    psa::PsaNetwork net = rts::build_component(spec, disc);
    synthesis::CartographyOptions o;
    o.jobs = c.jobs;
    o.discrete = disc;
    o.depth_bound = c.depth ? *c.depth : synthesis::depth_bound_from_dbf(spec, box, disc);
    if (!c.depth) {
        o.depth_at = [&](const ParamPoint &p) {
            ParamPoint q = p;
            q.insert(disc.begin(), disc.end());
            return synthesis::depth_bound_at(spec, q);
        };
    }
    synthesis::Cartography carto = synthesis::cartography(net, box, step, o);
    const std::string js = synthesis::to_json(carto, net).dump(2) + "\n";
    const std::string csv = synthesis::grid_csv(carto);
    if (c.out.empty()) {
        out << (c.format == "table" ? csv : js);
    } else {
        write_file(c.out, js);
        std::string csv_path = c.out;
        auto dot = csv_path.rfind('.');
        auto slash = csv_path.rfind('/');
        if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
            csv_path.erase(dot);
        }
        write_file(csv_path + ".csv", csv);
        std::size_t good = 0;
        for (const auto &t : carto.tiles) {
            good += t.verdict == synthesis::Verdict::schedulable;
        }
        out << carto.tiles.size() << " tiles (" << good << " schedulable), " << carto.grid.size() << " grid points, "
            << carto.uncovered_points.size() << " uncovered\n";
    }
    return carto.uncovered_points.empty() ? ok : inconclusive;
}

int cmd_interface(const Common &c, std::ostream &out) {
    auto spec = load(c.model);
    bool has_iface = false;
    for (const auto &name : spec.provided) {
        for (const auto &t : spec.tasks) {
            has_iface = has_iface || (t.name == name && t.deadline.is_param());
        }
    }
    if (!has_iface) {
        throw ModelError("model declares no interface parameters (a provided task with a parametric deadline)");
    }
    interface::InterfaceOptions o;
    o.box = full_box(spec, c.box);
    o.step = parse_value(c.step);
    if (o.step.sign() <= 0) {
        throw UsageError("--step must be positive");
    }
    o.jobs = c.jobs;
    o.depth = c.depth;
    for (const auto &item : split(c.discrete, ',')) {
        auto eq = item.find('=');
        auto dots = item.find("..");
        if (eq == std::string::npos || dots == std::string::npos || dots < eq) {
            throw UsageError("--discrete expects name=lo..hi");
        }
        interface::DiscreteRange d;
        d.name = trim(item.substr(0, eq));
        Rational lo = parse_value(item.substr(eq + 1, dots - eq - 1));
        Rational hi = parse_value(item.substr(dots + 2));
        if (!lo.is_integer() || !hi.is_integer() || lo > hi) {
            throw UsageError("--discrete range must be integers lo..hi with lo <= hi");
        }
        d.lo = lo.to_int64();
        d.hi = hi.to_int64();
        const auto *decl = spec.find_parameter(d.name);
        if (!decl || decl->kind != rts::ParamKind::discrete) {
            throw UsageError("not a discrete parameter: " + d.name);
        }
        o.discrete.push_back(d);
    }
    interface::InterfaceDoc doc = interface::synthesize_interface(spec, o);
    const std::string js = interface::to_json(doc).dump(2) + "\n";
    if (!c.out.empty()) {
        write_file(c.out, js);
    }
    if (c.format == "json") {
        out << js;
    } else {
        out << interface::to_table(doc);
    }
    bool any = std::any_of(doc.rows.begin(), doc.rows.end(), [](const auto &r) { return r.feasible(); });
    return any ? ok : unschedulable;
}

}  // namespace

bool CheckReport::agree() const {
    if (symbolic == synthesis::Verdict::depth_exceeded) {
        return true;
    }
    return oracle.schedulable == (symbolic == synthesis::Verdict::schedulable);
}

int CheckReport::exit_code() const {
    if (!agree()) {
        return disagreement;
    }
    if (symbolic == synthesis::Verdict::depth_exceeded) {
        return oracle.schedulable ? inconclusive : unschedulable;
    }
    return oracle.schedulable ? ok : unschedulable;
}

CheckReport check_point(const rts::ComponentSpec &spec, const ParamPoint &pt, std::optional<std::size_t> depth,
                        const psa::PsaNetwork *net) {
    CheckReport r;
    r.oracle = oracle::is_schedulable(spec, pt);
    r.depth = depth ? *depth : default_depth(spec, pt);
    if (net) {
        r.symbolic = synthesis::classify_point(*net, pt, r.depth);
    } else {
        psa::PsaNetwork built = rts::build_component(spec, discrete_part(spec, pt));
        r.symbolic = synthesis::classify_point(built, pt, r.depth);
    }
    return r;
}

ParamPoint parse_assignment(const std::string &text) {
    ParamPoint pt;
    for (const auto &item : split(text, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw UsageError("expected name=value, got " + item);
        }
        std::string name = trim(item.substr(0, eq));
        if (name.empty() || pt.contains(name)) {
            throw UsageError("bad or repeated name in " + item);
        }
        pt[name] = parse_value(item.substr(eq + 1));
    }
    return pt;
}

synthesis::Box parse_box(const std::string &text) {
    synthesis::Box box;
    for (const auto &item : split(text, ',')) {
        auto eq = item.find('=');
        auto dots = item.find("..");
        if (eq == std::string::npos || dots == std::string::npos || dots < eq) {
            throw UsageError("expected name=lo..hi, got " + item);
        }
        box.push_back({trim(item.substr(0, eq)), parse_value(item.substr(eq + 1, dots - eq - 1)),
                       parse_value(item.substr(dots + 2))});
    }
    return box;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Parametric schedulability analysis of real-time components", "rtpta"};
    app.require_subcommand(1);
    Common c;
    std::size_t depth = 0;

    auto add_model = [&](CLI::App *s) { s->add_option("model", c.model, "component model (JSON)")->required(); };
    auto add_at = [&](CLI::App *s) { s->add_option("--at", c.at, "parameter values, name=value[,..]"); };
    auto add_depth = [&](CLI::App *s) {
        s->add_option("--depth", depth, "maximal number of transitions per run")->check(CLI::PositiveNumber);
    };
    auto add_format = [&](CLI::App *s, std::vector<std::string> allowed) {
        s->add_option("--format", c.format, "output format")->check(CLI::IsMember(allowed));
    };
    auto add_jobs = [&](CLI::App *s) {
        s->add_option("--jobs", c.jobs, "concurrent analysis runs")->check(CLI::PositiveNumber);
    };

    auto *check = app.add_subcommand("check", "oracle and symbolic verdict at one point");
    add_model(check);
    add_at(check);
    add_depth(check);
    add_format(check, {"json", "table"});

    auto *simulate = app.add_subcommand("simulate", "event log of the critical-instant schedule");
    add_model(simulate);
    add_at(simulate);
    simulate->add_option("--horizon", c.horizon, "stop time (needed under overload)");
    simulate->add_option("--trace", c.trace, "write the event log as TSV");
    simulate->add_option("--out", c.out, "write the JSON result");
    add_format(simulate, {"json", "tsv"});

    auto *analyze = app.add_subcommand("analyze", "inverse method around a reference point");
    add_model(analyze);
    add_at(analyze);
    add_depth(analyze);
    add_format(analyze, {"json", "table"});

    auto *carto = app.add_subcommand("cartography", "tile a parameter box");
    add_model(carto);
    add_at(carto);
    carto->add_option("--box", c.box, "ranges, name=lo..hi[,..] (default: declared)");
    carto->add_option("--step", c.step, "grid step");
    add_depth(carto);
    carto->add_option("--out", c.out, "tile JSON; the grid CSV goes next to it");
    add_format(carto, {"json", "table"});
    add_jobs(carto);

    auto *iface = app.add_subcommand("interface", "timed interface over the discrete parameters");
    add_model(iface);
    iface->add_option("--discrete", c.discrete, "ranges, name=lo..hi[,..] (default: declared)");
    iface->add_option("--box", c.box, "ranges, name=lo..hi[,..] (default: declared)");
    iface->add_option("--step", c.step, "grid step");
    add_depth(iface);
    iface->add_option("--out", c.out, "write the interface JSON");
    add_format(iface, {"json", "table"});
    add_jobs(iface);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError &e) {
        err << "rtpta: " << e.what() << "\n";
        if (e.get_exit_code() == 0) {
            return ok;
        }
        return usage;
    }
    if (depth > 0) {
        c.depth = depth;
    }

    try {
        if (check->parsed()) {
            return cmd_check(c, out);
        }
        if (simulate->parsed()) {
            return cmd_simulate(c, out);
        }
        if (analyze->parsed()) {
            return cmd_analyze(c, out);
        }
        if (carto->parsed()) {
            return cmd_cartography(c, out);
        }
        if (iface->parsed()) {
            return cmd_interface(c, out);
        }
    } catch (const UsageError &e) {
        err << "rtpta: " << e.what() << "\n";
        return usage;
    } catch (const ModelError &e) {
        err << "rtpta: " << e.what() << "\n";
        return model_error;
    } catch (const std::invalid_argument &e) {
        err << "rtpta: " << e.what() << "\n";
        return usage;
    }
    return usage;
}

}  // namespace rtpta::cli
