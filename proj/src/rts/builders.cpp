#include <algorithm>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "rtpta/rts.hpp"

namespace rtpta::rts {

using psa::Coefficient;
using psa::Constraint;
using psa::DiscreteUpdate;
using psa::LocationDef;
using psa::make_constraint;
using psa::PsaModel;
using psa::Term;
using psa::TransitionDef;

namespace {

Term quantity_term(const Quantity &q) {
    if (q.is_param()) {
        return {Coefficient(1), q.param_name()};
    }
    return {Coefficient(q.constant()), ""};
}

// N * C, with N a discrete counter.
Term scaled_term(const std::string &counter, const Quantity &q) {
    if (q.is_param()) {
        return {Coefficient::of(counter), q.param_name()};
    }
    return {Coefficient::of(counter, q.constant()), ""};
}

Term clock(const std::string &c) { return {Coefficient(1), c}; }

std::size_t add_location(PsaModel &m, LocationDef l) {
    m.locations.push_back(std::move(l));
    return m.locations.size() - 1;
}

void add_transition(PsaModel &m, std::size_t from, std::string label, std::vector<Constraint> guard,
                    std::vector<std::string> resets, std::vector<DiscreteUpdate> updates, std::size_t to) {
    m.transitions.push_back(
        TransitionDef{from, std::move(label), std::move(guard), std::move(resets), std::move(updates), to});
}

std::int64_t constant_burst(const TaskSpec &t) {
    const Quantity &b = t.activation.burst;
    if (b.is_param()) {
        throw std::invalid_argument(t.name + ": burst parameter " + b.param_name() + " must be instantiated");
    }
    if (!b.constant().is_integer() || b.constant() < Rational(1)) {
        throw std::invalid_argument(t.name + ": burst must be a positive integer");
    }
    return b.constant().to_int64();
}

}  // namespace

PsaModel build_task_automaton(const TaskSpec &t) {
    const std::string c = Names::exec_clock(t.name);
    const std::string d = Names::deadline_clock(t.name);
    const std::string n = Names::counter(t.name);
    PsaModel m;
    m.name = "task_" + t.name;
    m.clocks = {c, d};
    m.discretes = {{n, 0}};

    const Term demand = scaled_term(n, t.wcet);
    const Term deadline = quantity_term(t.deadline);

    std::size_t idle = add_location(m, {"Idle", {}, {c}, false, false, {c, d}});
    std::size_t act = add_location(m, {"ActEvent", {}, {c}, true, false, {}});
    std::size_t waiting = add_location(m, {"Waiting", {make_constraint({clock(d)}, "<=", {deadline})}, {c}, false, false, {}});
    std::size_t running = add_location(
        m, {"Running",
            {make_constraint({clock(c)}, "<=", {demand}), make_constraint({clock(d)}, "<=", {deadline})},
            {},
            false,
            false,
            {}});
    std::size_t missed = add_location(m, {"DeadlineMissed", {}, {c}, false, true, {c, d}});
    m.initial = idle;

    const std::string ev = Names::arrival_event(t.name);
    add_transition(m, idle, ev, {}, {c, d}, {{n, 1, {}}}, act);
    add_transition(m, act, Names::arrival(t.name), {}, {}, {}, waiting);
    add_transition(m, waiting, Names::dispatch(t.name), {}, {}, {}, running);
    add_transition(m, running, Names::preemption(t.name), {}, {}, {}, waiting);
    // a further job arrives while one is pending; a deadline reached at the
    // same instant is reported first, and a completion is taken first
    add_transition(m, waiting, ev, {make_constraint({clock(d)}, "<", {deadline})}, {d}, {{n, 1, {{n, 1}}}}, waiting);
    add_transition(m, running, ev,
                   {make_constraint({clock(c)}, "<", {demand}), make_constraint({clock(d)}, "<", {deadline})}, {d},
                   {{n, 1, {{n, 1}}}}, running);
    add_transition(m, running, Names::end(t.name), {make_constraint({clock(c)}, "=", {demand})}, {c}, {{n, 0, {}}},
                   idle);
    for (std::size_t from : {waiting, running}) {
        add_transition(m, from, Names::miss(t.name),
                       {make_constraint({clock(d)}, ">=", {deadline}), make_constraint({clock(c)}, "<", {demand})}, {},
                       {}, missed);
    }
    return m;
}

namespace {

PsaModel build_periodic_like(const TaskSpec &t, bool critical_instant, bool exact_period) {
    const std::string x = Names::activation_clock(t.name);
    const std::string ev = Names::arrival_event(t.name);
    const Term period = quantity_term(t.activation.period);
    PsaModel m;
    m.name = "activation_" + t.name;
    m.clocks = {x};
    const Rational first = critical_instant ? Rational(0) : t.offset;
    std::size_t init = add_location(m, {"Init", {make_constraint({clock(x)}, "<=", {{Coefficient(first), ""}})}, {}, false, false, {}});
    std::vector<Constraint> inv;
    if (exact_period) {
        inv.push_back(make_constraint({clock(x)}, "<=", {period}));
    }
    std::size_t loop = add_location(m, {"ArrEvent", inv, {}, false, false, {}});
    m.initial = init;
    add_transition(m, init, ev, {make_constraint({clock(x)}, "=", {{Coefficient(first), ""}})}, {x}, {}, loop);
    add_transition(m, loop, ev, {make_constraint({clock(x)}, exact_period ? "=" : ">=", {period})}, {x}, {}, loop);
    return m;
}

}  // namespace

PsaModel build_periodic_activation(const TaskSpec &t, bool critical_instant) {
    if (t.activation.kind != ActivationKind::periodic) {
        throw std::invalid_argument(t.name + ": not a periodic activation");
    }
    return build_periodic_like(t, critical_instant, true);
}

PsaModel build_sporadic_activation(const TaskSpec &t, bool critical_instant) {
    if (t.activation.kind != ActivationKind::sporadic) {
        throw std::invalid_argument(t.name + ": not a sporadic activation");
    }
    // the worst case emits as fast as allowed
    return build_periodic_like(t, critical_instant, critical_instant);
}

PsaModel build_arrival_curve_activation(const TaskSpec &t) {
    if (t.activation.kind != ActivationKind::arrival_curve) {
        throw std::invalid_argument(t.name + ": not an arrival-curve activation");
    }
    const std::int64_t nu = constant_burst(t);
    const std::string x = Names::activation_clock(t.name);
    const std::string n = Names::burst_counter(t.name);
    const std::string ev = Names::arrival_event(t.name);
    const Term period = quantity_term(t.activation.period);
    PsaModel m;
    m.name = "activation_" + t.name;
    m.clocks = {x};
    m.discretes = {{n, 0}};
    std::size_t bursting = add_location(m, {"Bursting", {}, {}, true, false, {x}});
    std::size_t arr = add_location(m, {"ArrEvent", {make_constraint({clock(x)}, "<=", {period})}, {}, false, false, {}});
    m.initial = bursting;
    // n < Nu and n = Nu, with Nu a constant
    Constraint more;
    more.rel = psa::Rel::lt;
    more.bound = Coefficient(Rational(nu));
    more.bound += -Coefficient::of(n);
    Constraint done = more;
    done.rel = psa::Rel::eq;
    add_transition(m, bursting, ev, {more}, {}, {{n, 1, {{n, 1}}}}, bursting);
    add_transition(m, bursting, "burst_done_" + t.name, {done}, {x}, {}, arr);
    add_transition(m, arr, ev, {make_constraint({clock(x)}, "=", {period})}, {x}, {}, arr);
    return m;
}

std::size_t max_tasks() {
    if (const char *env = std::getenv("RTPTA_MAX_TASKS")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return 6;
}

PsaModel build_fpps_scheduler(const std::vector<TaskSpec> &tasks_in, SchedulerVariant variant) {
    if (tasks_in.empty()) {
        throw std::invalid_argument("scheduler needs at least one task");
    }
    if (tasks_in.size() > max_tasks()) {
        throw std::invalid_argument("too many tasks for the scheduler automaton (" + std::to_string(tasks_in.size()) +
                                    " > " + std::to_string(max_tasks()) + "; see RTPTA_MAX_TASKS)");
    }
    std::vector<TaskSpec> tasks = tasks_in;
    std::stable_sort(tasks.begin(), tasks.end(), [](const TaskSpec &a, const TaskSpec &b) { return a.priority < b.priority; });
    const std::size_t n = tasks.size();
    using Set = std::uint32_t;  // bit i = task i (priority order) pending

    PsaModel m;
    m.name = "scheduler";
    // key: (kind, running/next, preempted, pending)
    enum Kind { idle, run, disp, pre, et, stop };
    std::map<std::tuple<int, std::size_t, std::size_t, Set>, std::size_t> index;
    std::vector<std::tuple<int, std::size_t, std::size_t, Set>> todo;

    auto pending_name = [&](Set p) {
        std::string s;
        for (std::size_t i = 0; i < n; ++i) {
            if (p & (1u << i)) {
                s += "_W" + tasks[i].name;
            }
        }
        return s;
    };
    auto loc = [&](int kind, std::size_t a, std::size_t b, Set p) {
        auto key = std::make_tuple(kind, a, b, p);
        if (auto it = index.find(key); it != index.end()) {
            return it->second;
        }
        LocationDef l;
        switch (kind) {
        case idle:
            l.name = "Idle";
            break;
        case run:
            l.name = "R" + tasks[a].name + pending_name(p);
            break;
        case disp:
            l.name = "A" + tasks[a].name + pending_name(p);
            l.committed = true;
            break;
        case pre:
            l.name = "P" + tasks[a].name + "_R" + tasks[b].name + pending_name(p);
            l.committed = true;
            break;
        case et:
            l.name = "Et";
            l.committed = true;
            break;
        default:
            l.name = "Stop";
            break;
        }
        std::size_t i = add_location(m, std::move(l));
        index.emplace(key, i);
        todo.push_back(key);
        return i;
    };
    auto highest = [](Set p) {
        std::size_t i = 0;
        while (!(p & (1u << i))) {
            ++i;
        }
        return i;
    };

    m.initial = loc(idle, 0, 0, 0);
    for (std::size_t k = 0; k < todo.size(); ++k) {
        auto [kind, a, b, p] = todo[k];
        std::size_t from = index.at(todo[k]);
        switch (kind) {
        case idle:
            for (std::size_t i = 0; i < n; ++i) {
                add_transition(m, from, Names::arrival(tasks[i].name), {}, {}, {}, loc(disp, i, 0, 0));
            }
            for (std::size_t j = 0; j < n; ++j) {
                add_transition(m, from, Names::arrival_event(tasks[j].name), {}, {}, {}, from);
            }
            break;
        case run: {
            const auto &r = tasks[a];
            for (std::size_t i = 0; i < n; ++i) {
                if (i == a || (p & (1u << i))) {
                    continue;
                }
                std::size_t to = i < a ? loc(pre, i, a, p) : loc(run, a, 0, p | (1u << i));
                add_transition(m, from, Names::arrival(tasks[i].name), {}, {}, {}, to);
            }
            std::size_t after_end = p == 0 ? loc(et, 0, 0, 0) : loc(disp, highest(p), 0, p & ~(1u << highest(p)));
            add_transition(m, from, Names::end(r.name), {}, {}, {}, after_end);
            // releases wait for a completion due at the same instant
            Constraint unfinished = make_constraint({clock(Names::exec_clock(r.name))}, "<",
                                                    {scaled_term(Names::counter(r.name), r.wcet)});
            for (std::size_t j = 0; j < n; ++j) {
                add_transition(m, from, Names::arrival_event(tasks[j].name), {unfinished}, {}, {}, from);
            }
            break;
        }
        case disp:
            add_transition(m, from, Names::dispatch(tasks[a].name), {}, {}, {}, loc(run, a, 0, p));
            break;
        case pre:
            add_transition(m, from, Names::preemption(tasks[b].name), {}, {}, {}, loc(disp, a, 0, p | (1u << b)));
            break;
        case et:
            add_transition(m, from, "idle", {}, {}, {},
                           variant == SchedulerVariant::cyclic ? loc(idle, 0, 0, 0) : loc(stop, 0, 0, 0));
            break;
        default:
            break;
        }
    }
    // every scheduling label is declared even where no location uses it (for
    // instance the preemption of the top-priority task), so tasks never take it alone
    for (const auto &t : tasks) {
        for (const auto &l : {Names::arrival_event(t.name), Names::arrival(t.name), Names::dispatch(t.name),
                              Names::preemption(t.name), Names::end(t.name)}) {
            m.extra_labels.insert(l);
        }
    }
    return m;
}

psa::PsaNetwork build_component(const ComponentSpec &spec, const ParamPoint &discrete, const BuildOptions &opts) {
    spec.validate();
    ComponentSpec s = spec;
    for (const auto &d : spec.discrete_parameters()) {
        auto it = discrete.find(d);
        if (it == discrete.end()) {
            throw std::invalid_argument("discrete parameter " + d + " needs a value");
        }
        if (!it->second.is_integer()) {
            throw std::invalid_argument("discrete parameter " + d + " must be an integer");
        }
        for (auto &t : s.tasks) {
            auto subst = [&](Quantity &q) {
                if (q.is_param() && q.param_name() == d) {
                    q = Quantity(it->second);
                }
            };
            subst(t.wcet);
            subst(t.deadline);
            subst(t.activation.period);
            subst(t.activation.burst);
        }
    }
    const bool critical = s.variant == SchedulerVariant::idle_time;
    std::vector<PsaModel> automata;
    std::vector<TaskSpec> ordered = s.tasks;
    std::stable_sort(ordered.begin(), ordered.end(), [](const TaskSpec &a, const TaskSpec &b) { return a.priority < b.priority; });
    for (const auto &t : ordered) {
        automata.push_back(build_task_automaton(t));
        switch (t.activation.kind) {
        case ActivationKind::periodic:
            automata.push_back(build_periodic_activation(t, critical));
            break;
        case ActivationKind::sporadic:
            automata.push_back(build_sporadic_activation(t, critical));
            break;
        case ActivationKind::arrival_curve:
            automata.push_back(build_arrival_curve_activation(t));
            break;
        }
    }
    automata.push_back(build_fpps_scheduler(ordered, s.variant));

    std::vector<std::string> params = s.continuous_parameters();
    std::vector<Constraint> k;
    for (const auto &p : s.parameters) {
        if (p.kind != ParamKind::continuous) {
            continue;
        }
        k.push_back(make_constraint({{Coefficient(1), p.name}}, ">=", {{Coefficient(p.lo), ""}}));
        k.push_back(make_constraint({{Coefficient(1), p.name}}, "<=", {{Coefficient(p.hi), ""}}));
    }
    return psa::PsaNetwork(std::move(automata), std::move(params), std::move(k), opts.network);
}

ComponentSpec zero_offset_transform(const ComponentSpec &spec) {
    ComponentSpec out = spec;
    for (auto &t : out.tasks) {
        if (!t.offset.is_zero()) {
            t.offset = Rational(0);
            out.conservative = true;
        }
    }
    return out;
}

}  // namespace rtpta::rts
