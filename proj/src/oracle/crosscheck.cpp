#include <stdexcept>

#include "rtpta/oracle.hpp"

namespace rtpta::oracle {

namespace {

const std::string kObserver = "__now";

std::optional<std::pair<EventKind, std::string>> classify_label(const std::string &label) {
    static const std::vector<std::pair<std::string, EventKind>> prefixes = {
        {"arrival_event_", EventKind::arrival}, {"dispatch_", EventKind::dispatch},
        {"preemption_", EventKind::preemption}, {"end_", EventKind::end},
        {"miss_", EventKind::deadline_miss}};
    for (const auto &[p, k] : prefixes) {
        if (label.starts_with(p)) {
            return std::make_pair(k, label.substr(p.size()));
        }
    }
    return std::nullopt;
}

}  // namespace

SymbolicRuns symbolic_event_logs(const ComponentSpec &spec, const ParamPoint &pt, std::size_t depth) {
    ParamPoint discrete;
    for (const auto &d : spec.discrete_parameters()) {
        discrete[d] = pt.at(d);
    }
    rts::BuildOptions bo;
    bo.network.observer_clock = kObserver;
    const psa::PsaNetwork net = rts::build_component(spec, discrete, bo).instantiate(pt);
    psa::ExploreOptions eo;
    eo.depth = depth;
    eo.record_edges = true;
    const psa::Exploration ex = psa::bounded_explore(net, net.initial_constraint(), eo);

    SymbolicRuns out;
    out.reached_bad = ex.reached_bad;
    out.depth_exceeded = ex.depth_exceeded;
    out.states = ex.states.size();
    const std::size_t obs = *net.observer_index();

    // firing time of every edge
    std::vector<Rational> when(ex.edges.size());
    for (std::size_t e = 0; e < ex.edges.size(); ++e) {
        const auto &edge = ex.edges[e];
        psa::SyncCombo combo{edge.label, edge.moves};
        geometry::Polyhedron z = net.firing_zone(ex.states[edge.from], combo);
        auto lo = z.minimize(obs);
        auto hi = z.maximize(obs);
        if (lo.status != geometry::Optimum::Status::bounded || hi.status != geometry::Optimum::Status::bounded ||
            lo.bound.value != hi.bound.value) {
            throw std::logic_error("event time is not determined in the concrete model (label " +
                                   net.labels()[edge.label] + ")");
        }
        when[e] = lo.bound.value;
    }
    for (const auto &path : psa::maximal_paths(ex)) {
        std::vector<Event> log;
        std::map<std::string, std::int64_t> pending;
        for (std::size_t e : path) {
            auto ev = classify_label(net.labels()[ex.edges[e].label]);
            if (!ev) {
                continue;
            }
            auto [kind, task] = *ev;
            if (kind == EventKind::arrival) {
                ++pending[task];
            }
            if (kind == EventKind::end) {
                // one completion covers every pending job of the task
                for (std::int64_t k = 0; k < pending[task]; ++k) {
                    log.push_back({when[e], kind, task});
                }
                pending[task] = 0;
                continue;
            }
            log.push_back({when[e], kind, task});
        }
        out.logs.push_back(std::move(log));
    }
    return out;
}

std::optional<std::string> cross_check(const ComponentSpec &spec, const ParamPoint &pt, std::size_t depth) {
    const auto tasks = rts::resolve(spec, pt);
    SimOptions o;
    o.stop_at_first_miss = true;
    Verdict v = is_schedulable(tasks);
    if (!v.schedulable && v.first_miss) {
        o.horizon = v.first_miss->time;
    } else if (utilization(tasks) >= Rational(1)) {
        if (!v.busy_period_end) {
            throw std::invalid_argument("cross-check needs a busy period that ends");
        }
        o.horizon = *v.busy_period_end;
    }
    const SimulationResult sim = simulate(tasks, o);
    const SymbolicRuns runs = symbolic_event_logs(spec, pt, depth);
    if (runs.depth_exceeded) {
        return std::string("symbolic exploration exceeded the depth bound");
    }
    if (runs.reached_bad == v.schedulable) {
        return std::string("verdicts differ: oracle ") + (v.schedulable ? "schedulable" : "miss") + ", symbolic " +
               (runs.reached_bad ? "miss" : "schedulable");
    }
    for (std::size_t i = 0; i < runs.logs.size(); ++i) {
        if (auto diff = compare_logs(sim.log, runs.logs[i])) {
            return "run " + std::to_string(i) + ": " + *diff;
        }
    }
    return std::nullopt;
}

}  // namespace rtpta::oracle
