#include <fstream>
#include <set>
#include <stdexcept>

#include "rtpta/polyhedron_io.hpp"
#include "rtpta/rts.hpp"

namespace rtpta::rts {

using nlohmann::json;

Rational Quantity::resolve(const ParamPoint &pt) const {
    if (!is_param()) {
        return constant();
    }
    auto it = pt.find(param_name());
    if (it == pt.end()) {
        throw std::invalid_argument("no value for parameter " + param_name());
    }
    return it->second;
}

const ParameterDecl *ComponentSpec::find_parameter(std::string_view name) const {
    for (const auto &p : parameters) {
        if (p.name == name) {
            return &p;
        }
    }
    return nullptr;
}

ParamPoint ComponentSpec::reference_point() const {
    ParamPoint pt;
    for (const auto &p : parameters) {
        pt[p.name] = p.ref;
    }
    return pt;
}

std::vector<std::string> ComponentSpec::continuous_parameters() const {
    std::vector<std::string> out;
    for (const auto &p : parameters) {
        if (p.kind == ParamKind::continuous) {
            out.push_back(p.name);
        }
    }
    return out;
}

std::vector<std::string> ComponentSpec::discrete_parameters() const {
    std::vector<std::string> out;
    for (const auto &p : parameters) {
        if (p.kind == ParamKind::discrete) {
            out.push_back(p.name);
        }
    }
    return out;
}

void ComponentSpec::validate() const {
    std::set<std::string> names;
    for (const auto &p : parameters) {
        if (!names.insert(p.name).second) {
            throw std::invalid_argument("parameter declared twice: " + p.name);
        }
        if (p.lo > p.hi) {
            throw std::invalid_argument("empty range for parameter " + p.name);
        }
        if (p.ref < p.lo || p.ref > p.hi) {
            throw std::invalid_argument("reference value of " + p.name + " lies outside its range");
        }
        if (p.kind == ParamKind::discrete && (!p.lo.is_integer() || !p.hi.is_integer() || !p.ref.is_integer())) {
            throw std::invalid_argument("discrete parameter " + p.name + " needs integer bounds");
        }
    }
    std::set<std::string> task_names;
    std::set<int> prios;
    for (const auto &t : tasks) {
        if (t.name.empty() || !task_names.insert(t.name).second) {
            throw std::invalid_argument("task names must be unique and non-empty");
        }
        if (!prios.insert(t.priority).second) {
            throw std::invalid_argument("duplicate priority " + std::to_string(t.priority));
        }
        auto check = [&](const Quantity &q, const char *what, bool positive) {
            if (q.is_param()) {
                if (!find_parameter(q.param_name())) {
                    throw std::invalid_argument(t.name + ": undeclared parameter " + q.param_name());
                }
            } else if (positive && q.constant().sign() <= 0) {
                throw std::invalid_argument(t.name + ": " + what + " must be positive");
            }
        };
        check(t.wcet, "wcet", true);
        check(t.deadline, "deadline", true);
        check(t.activation.period, "period", true);
        if (t.activation.kind == ActivationKind::arrival_curve) {
            check(t.activation.burst, "burst", true);
            if (t.activation.burst.is_param()) {
                const auto *d = find_parameter(t.activation.burst.param_name());
                if (d->kind != ParamKind::discrete) {
                    throw std::invalid_argument(t.name + ": burst must be a discrete parameter");
                }
            }
        }
        if (t.offset.sign() < 0) {
            throw std::invalid_argument(t.name + ": negative offset");
        }
    }
    for (const auto &p : provided) {
        if (!task_names.contains(p)) {
            throw std::invalid_argument("provided method refers to unknown task " + p);
        }
    }
}

std::vector<ConcreteTask> resolve(const ComponentSpec &spec, const ParamPoint &pt) {
    std::vector<ConcreteTask> out;
    for (const auto &t : spec.tasks) {
        ConcreteTask c;
        c.name = t.name;
        c.priority = t.priority;
        c.wcet = t.wcet.resolve(pt);
        c.deadline = t.deadline.resolve(pt);
        c.offset = t.offset;
        c.kind = t.activation.kind;
        c.period = t.activation.period.resolve(pt);
        if (c.kind == ActivationKind::arrival_curve) {
            Rational b = t.activation.burst.resolve(pt);
            if (!b.is_integer() || b < Rational(1)) {
                throw std::invalid_argument(t.name + ": burst must be a positive integer");
            }
            c.burst = b.to_int64();
        }
        if (c.wcet.sign() <= 0 || c.deadline.sign() <= 0 || c.period.sign() <= 0) {
            throw std::invalid_argument(t.name + ": wcet, deadline and period must be positive");
        }
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const ConcreteTask &a, const ConcreteTask &b) { return a.priority < b.priority; });
    return out;
}

// ---------------------------------------------------------------- JSON

namespace {

Quantity quantity_from_json(const json &j) {
    if (j.is_object()) {
        return Quantity::param(j.at("param").get<std::string>());
    }
    return Quantity(geometry::rational_from_json(j));
}

json to_json(const Quantity &q) {
    if (q.is_param()) {
        return {{"param", q.param_name()}};
    }
    return q.constant().to_string();
}

std::string kind_name(ActivationKind k) {
    switch (k) {
    case ActivationKind::periodic:
        return "periodic";
    case ActivationKind::sporadic:
        return "sporadic";
    case ActivationKind::arrival_curve:
        return "arrival_curve";
    }
    return "?";
}

}  // namespace

ComponentSpec component_from_json(const json &j) {
    ComponentSpec s;
    s.name = j.value("name", std::string("component"));
    if (j.contains("scheduler")) {
        std::string v = j.at("scheduler").value("variant", std::string("idle_time"));
        if (v == "cyclic") {
            s.variant = SchedulerVariant::cyclic;
        } else if (v == "idle_time") {
            s.variant = SchedulerVariant::idle_time;
        } else {
            throw std::invalid_argument("unknown scheduler variant " + v);
        }
    }
    for (const auto &p : j.value("parameters", json::array())) {
        ParameterDecl d;
        d.name = p.at("name").get<std::string>();
        std::string kind = p.value("kind", std::string("continuous"));
        if (kind == "continuous") {
            d.kind = ParamKind::continuous;
        } else if (kind == "discrete") {
            d.kind = ParamKind::discrete;
        } else {
            throw std::invalid_argument("unknown parameter kind " + kind);
        }
        const auto &r = p.at("range");
        if (!r.is_array() || r.size() != 2) {
            throw std::invalid_argument("parameter range must be [lo, hi]");
        }
        d.lo = geometry::rational_from_json(r[0]);
        d.hi = geometry::rational_from_json(r[1]);
        d.ref = p.contains("ref") ? geometry::rational_from_json(p.at("ref")) : d.lo;
        s.parameters.push_back(std::move(d));
    }
    for (const auto &t : j.at("tasks")) {
        TaskSpec ts;
        ts.name = t.at("name").get<std::string>();
        ts.priority = t.at("priority").get<int>();
        ts.wcet = quantity_from_json(t.at("wcet"));
        const auto &a = t.at("activation");
        std::string type = a.at("type").get<std::string>();
        if (type == "periodic") {
            ts.activation.kind = ActivationKind::periodic;
        } else if (type == "sporadic") {
            ts.activation.kind = ActivationKind::sporadic;
        } else if (type == "arrival_curve") {
            ts.activation.kind = ActivationKind::arrival_curve;
            ts.activation.burst = quantity_from_json(a.at("burst"));
        } else {
            throw std::invalid_argument("unknown activation type " + type);
        }
        ts.activation.period = quantity_from_json(a.contains("period") ? a.at("period") : a.at("min_interarrival"));
        ts.deadline = t.contains("deadline") ? quantity_from_json(t.at("deadline")) : ts.activation.period;
        if (t.contains("offset")) {
            ts.offset = geometry::rational_from_json(t.at("offset"));
        }
        s.tasks.push_back(std::move(ts));
    }
    if (j.contains("provided")) {
        s.provided = j.at("provided").get<std::vector<std::string>>();
    }
    s.conservative = j.value("conservative", false);
    s.validate();
    return s;
}

json to_json(const ComponentSpec &s) {
    json params = json::array();
    for (const auto &p : s.parameters) {
        params.push_back({{"name", p.name},
                          {"kind", p.kind == ParamKind::continuous ? "continuous" : "discrete"},
                          {"range", {p.lo.to_string(), p.hi.to_string()}},
                          {"ref", p.ref.to_string()}});
    }
    json tasks = json::array();
    for (const auto &t : s.tasks) {
        json a = {{"type", kind_name(t.activation.kind)}, {"period", to_json(t.activation.period)}};
        if (t.activation.kind == ActivationKind::arrival_curve) {
            a["burst"] = to_json(t.activation.burst);
        }
        json jt = {{"name", t.name},
                   {"priority", t.priority},
                   {"wcet", to_json(t.wcet)},
                   {"deadline", to_json(t.deadline)},
                   {"activation", a}};
        if (!t.offset.is_zero()) {
            jt["offset"] = t.offset.to_string();
        }
        tasks.push_back(std::move(jt));
    }
    json out = {{"name", s.name},
                {"scheduler", {{"variant", s.variant == SchedulerVariant::cyclic ? "cyclic" : "idle_time"}}},
                {"parameters", params},
                {"tasks", tasks}};
    if (!s.provided.empty()) {
        out["provided"] = s.provided;
    }
    if (s.conservative) {
        out["conservative"] = true;
    }
    return out;
}

ComponentSpec load_component(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open model file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return component_from_json(j);
}

}  // namespace rtpta::rts
