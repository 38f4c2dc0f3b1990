#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "rtpta/oracle.hpp"

namespace rtpta::oracle {

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::arrival:
        return "arrival";
    case EventKind::dispatch:
        return "dispatch";
    case EventKind::preemption:
        return "preemption";
    case EventKind::end:
        return "end";
    case EventKind::deadline_miss:
        return "deadline_miss";
    case EventKind::idle:
        return "idle";
    }
    return "?";
}

Rational utilization(const std::vector<ConcreteTask> &tasks) {
    Rational u;
    for (const auto &t : tasks) {
        u += t.wcet / t.period;
    }
    return u;
}

Rational release_time(const ConcreteTask &t, std::int64_t k) {
    if (t.kind == rts::ActivationKind::arrival_curve) {
        if (k < t.burst) {
            return Rational(0);
        }
        return Rational(k - t.burst + 1) * t.period;
    }
    return Rational(k) * t.period;
}

namespace {

struct Job {
    std::size_t task;
    std::size_t record;
    Rational remaining;
    Rational deadline;
    bool missed = false;
};

}  // namespace

SimulationResult simulate(const std::vector<ConcreteTask> &tasks_in, const SimOptions &opts) {
    std::vector<ConcreteTask> tasks = tasks_in;
    std::stable_sort(tasks.begin(), tasks.end(), [](const auto &a, const auto &b) { return a.priority < b.priority; });
    if (!opts.horizon && !opts.stop_at_idle) {
        throw std::invalid_argument("simulation without idle stop needs a horizon");
    }
    if (!opts.horizon && utilization(tasks) > Rational(1)) {
        throw std::invalid_argument("utilisation exceeds 1: a horizon is required");
    }
    if (opts.demand_scale.sign() <= 0 || opts.demand_scale > Rational(1)) {
        throw std::invalid_argument("demand scale must lie in (0, 1]");
    }
    const std::size_t n = tasks.size();
    SimulationResult res;
    for (const auto &t : tasks) {
        res.jobs[t.name];
    }
    std::vector<std::deque<Job>> queues(n);
    std::vector<std::int64_t> next_job(n, 0);
    auto next_release = [&](std::size_t i) {
        Rational r = release_time(tasks[i], next_job[i]);
        if (opts.use_offsets) {
            r = tasks[i].offset + Rational(next_job[i]) * tasks[i].period;
        }
        return r;
    };
    std::optional<std::size_t> running;
    bool idle_logged = false;
    Rational now;
    auto pending = [&] {
        return std::any_of(queues.begin(), queues.end(), [](const auto &q) { return !q.empty(); });
    };

    for (;;) {
        // completions
        if (running && queues[*running].front().remaining.is_zero()) {
            const std::size_t i = *running;
            Job j = queues[i].front();
            queues[i].pop_front();
            auto &rec = res.jobs[tasks[i].name][j.record];
            rec.finish = now;
            Rational resp = now - rec.arrival;
            auto [it, fresh] = res.worst_response.emplace(tasks[i].name, resp);
            if (!fresh && it->second < resp) {
                it->second = resp;
            }
            res.log.push_back({now, EventKind::end, tasks[i].name});
            running.reset();
        }
        // deadline checks
        for (std::size_t i = 0; i < n; ++i) {
            for (auto &j : queues[i]) {
                if (!j.missed && j.deadline <= now) {
                    j.missed = true;
                    res.schedulable = false;
                    res.log.push_back({now, EventKind::deadline_miss, tasks[i].name});
                }
            }
        }
        if (!res.schedulable && opts.stop_at_first_miss) {
            res.end_time = now;
            return res;
        }
        if (!pending() && (now.sign() > 0 || n == 0 || !opts.stop_at_idle)) {
            bool releases_now = false;
            for (std::size_t i = 0; i < n; ++i) {
                releases_now = releases_now || next_release(i) == now;
            }
            if (!(now.is_zero() && releases_now)) {
                if (!res.busy_period_end) {
                    res.busy_period_end = now;
                }
                if (!idle_logged) {
                    res.log.push_back({now, EventKind::idle, ""});
                    idle_logged = true;
                }
                if (opts.stop_at_idle) {
                    res.end_time = now;
                    return res;
                }
            }
        }
        if (opts.horizon && now >= *opts.horizon) {
            res.end_time = now;
            return res;
        }
        // arrivals
        for (std::size_t i = 0; i < n; ++i) {
            while (next_release(i) == now) {
                auto &recs = res.jobs[tasks[i].name];
                Rational demand = tasks[i].wcet * opts.demand_scale;
                recs.push_back({now, demand, now + tasks[i].deadline, std::nullopt});
                queues[i].push_back({i, recs.size() - 1, demand, now + tasks[i].deadline});
                res.log.push_back({now, EventKind::arrival, tasks[i].name});
                ++next_job[i];
                idle_logged = false;
            }
        }
        // dispatch
        std::optional<std::size_t> top;
        for (std::size_t i = 0; i < n; ++i) {
            if (!queues[i].empty()) {
                top = i;
                break;
            }
        }
        if (top != running) {
            if (running) {
                res.log.push_back({now, EventKind::preemption, tasks[*running].name});
            }
            if (top) {
                res.log.push_back({now, EventKind::dispatch, tasks[*top].name});
            }
            running = top;
        }
        // next instant
        std::optional<Rational> next;
        auto consider = [&](const Rational &t) {
            if (t > now && (!next || t < *next)) {
                next = t;
            }
        };
        for (std::size_t i = 0; i < n; ++i) {
            consider(next_release(i));
            for (const auto &j : queues[i]) {
                if (!j.missed) {
                    consider(j.deadline);
                }
            }
        }
        if (running) {
            consider(now + queues[*running].front().remaining);
        }
        if (opts.horizon) {
            consider(*opts.horizon);
        }
        if (!next) {
            res.end_time = now;
            return res;
        }
        if (running) {
            queues[*running].front().remaining -= *next - now;
        }
        now = *next;
    }
}

SimulationResult simulate(const ComponentSpec &spec, const ParamPoint &pt, std::optional<Rational> horizon) {
    SimOptions o;
    o.horizon = std::move(horizon);
    return simulate(rts::resolve(spec, pt), o);
}

std::optional<Rational> busy_period_length(const std::vector<ConcreteTask> &tasks) {
    if (tasks.empty()) {
        return Rational(0);
    }
    if (utilization(tasks) >= Rational(1)) {
        return std::nullopt;
    }
    // jobs released in [0, W)
    auto released = [](const ConcreteTask &t, const Rational &w) -> std::int64_t {
        std::int64_t k = (w / t.period).ceil().to_int64();
        if (t.kind == rts::ActivationKind::arrival_curve) {
            return t.burst + k - 1;
        }
        return k;
    };
    Rational w;
    for (const auto &t : tasks) {
        w += t.wcet * Rational(t.kind == rts::ActivationKind::arrival_curve ? t.burst : 1);
    }
    for (;;) {
        Rational next;
        for (const auto &t : tasks) {
            next += t.wcet * Rational(released(t, w));
        }
        if (next == w) {
            return w;
        }
        w = next;
    }
}

std::optional<Rational> busy_period_length(const ComponentSpec &spec, const ParamPoint &pt) {
    return busy_period_length(rts::resolve(spec, pt));
}

Rational demand_bound(const std::vector<ConcreteTask> &tasks, const Rational &t) {
    Rational d;
    for (const auto &task : tasks) {
        if (t < task.deadline) {
            continue;
        }
        // jobs with release + D <= t
        std::int64_t k = ((t - task.deadline) / task.period).floor().to_int64() + 1;
        if (task.kind == rts::ActivationKind::arrival_curve) {
            k += task.burst - 1;
        }
        d += task.wcet * Rational(k);
    }
    return d;
}

std::optional<Rational> first_overload_instant(const std::vector<ConcreteTask> &tasks, const Rational &limit) {
    // candidate instants are absolute deadlines, visited in increasing order
    std::vector<std::int64_t> k(tasks.size(), 0);
    for (;;) {
        std::optional<Rational> t;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            Rational d = release_time(tasks[i], k[i]) + tasks[i].deadline;
            if (!t || d < *t) {
                t = d;
            }
        }
        if (!t || *t > limit) {
            return std::nullopt;
        }
        if (demand_bound(tasks, *t) > *t) {
            return t;
        }
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            while (release_time(tasks[i], k[i]) + tasks[i].deadline <= *t) {
                ++k[i];
            }
        }
    }
}

Verdict is_schedulable(const std::vector<ConcreteTask> &tasks) {
    SimOptions o;
    o.stop_at_first_miss = true;
    const Rational u = utilization(tasks);
    if (u > Rational(1)) {
        // demand outgrows supply, so some deadline is missed by the first
        // overload instant
        Rational limit(1);
        std::optional<Rational> t;
        while (!(t = first_overload_instant(tasks, limit))) {
            limit *= Rational(2);
        }
        o.horizon = *t;
    } else if (u == Rational(1)) {
        // the busy period may never end; two periods of the schedule settle it
        Rational maxd;
        Rational l = tasks.front().period;
        for (const auto &t : tasks) {
            maxd = std::max(maxd, t.deadline);
            l = rtpta::lcm(l.numerator(), t.period.numerator()) / rtpta::gcd(l.denominator(), t.period.denominator());
        }
        o.horizon = Rational(2) * l + maxd;
    }
    SimulationResult r = simulate(tasks, o);
    Verdict v;
    v.schedulable = r.schedulable;
    v.worst_response = r.worst_response;
    v.busy_period_end = r.busy_period_end;
    for (const auto &e : r.log) {
        if (e.kind == EventKind::deadline_miss) {
            v.first_miss = e;
            break;
        }
    }
    if (u > Rational(1) && v.schedulable) {
        v.schedulable = false;
        v.first_miss = Event{r.end_time, EventKind::deadline_miss, ""};
    }
    return v;
}

Verdict is_schedulable(const ComponentSpec &spec, const ParamPoint &pt) { return is_schedulable(rts::resolve(spec, pt)); }

Rational hyperperiod(const std::vector<ConcreteTask> &tasks) {
    if (tasks.empty()) {
        throw std::invalid_argument("hyperperiod of an empty task set");
    }
    Rational h;
    bool first = true;
    for (const auto &t : tasks) {
        if (t.kind != rts::ActivationKind::periodic) {
            throw std::invalid_argument("hyperperiod: task " + t.name + " is not periodic");
        }
        if (first) {
            h = t.period;
            first = false;
        } else {
            h = rtpta::lcm(h.numerator(), t.period.numerator()) / rtpta::gcd(h.denominator(), t.period.denominator());
        }
    }
    return h;
}

Rational hyperperiod(const ComponentSpec &spec, const ParamPoint &pt) { return hyperperiod(rts::resolve(spec, pt)); }

SimulationResult simulate_with_offsets(const ComponentSpec &spec, const ParamPoint &pt) {
    auto tasks = rts::resolve(spec, pt);
    Rational h = hyperperiod(tasks);
    Rational phi;
    for (const auto &t : tasks) {
        phi = std::max(phi, t.offset);
    }
    SimOptions o;
    o.use_offsets = true;
    o.stop_at_idle = false;
    o.horizon = Rational(2) * h + phi;
    return simulate(tasks, o);
}

// ---------------------------------------------------------------- output

std::string to_tsv(const std::vector<Event> &log) {
    std::ostringstream os;
    for (const auto &e : log) {
        os << e.time << '\t' << to_string(e.kind) << '\t' << e.task << '\n';
    }
    return os.str();
}

nlohmann::json gantt(const SimulationResult &r) {
    nlohmann::json segs = nlohmann::json::array();
    std::optional<std::pair<std::string, Rational>> open;
    auto close = [&](const Rational &t) {
        if (open && open->second < t) {
            segs.push_back({{"task", open->first}, {"start", open->second.to_string()}, {"end", t.to_string()}});
        }
        open.reset();
    };
    for (const auto &e : r.log) {
        switch (e.kind) {
        case EventKind::dispatch:
            close(e.time);
            open.emplace(e.task, e.time);
            break;
        case EventKind::preemption:
        case EventKind::end:
            close(e.time);
            break;
        default:
            break;
        }
    }
    close(r.end_time);
    return segs;
}

nlohmann::json to_json(const SimulationResult &r) {
    nlohmann::json log = nlohmann::json::array();
    for (const auto &e : r.log) {
        log.push_back({{"time", e.time.to_string()}, {"kind", std::string(to_string(e.kind))}, {"task", e.task}});
    }
    nlohmann::json jobs = nlohmann::json::object();
    for (const auto &[task, recs] : r.jobs) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &j : recs) {
            arr.push_back({{"arrival", j.arrival.to_string()},
                           {"demand", j.demand.to_string()},
                           {"deadline", j.deadline.to_string()},
                           {"finish", j.finish ? nlohmann::json(j.finish->to_string()) : nlohmann::json(nullptr)}});
        }
        jobs[task] = arr;
    }
    nlohmann::json worst = nlohmann::json::object();
    for (const auto &[task, w] : r.worst_response) {
        worst[task] = w.to_string();
    }
    return {{"schedulable", r.schedulable},
            {"busy_period_end", r.busy_period_end ? nlohmann::json(r.busy_period_end->to_string()) : nlohmann::json(nullptr)},
            {"end_time", r.end_time.to_string()},
            {"worst_response", worst},
            {"jobs", jobs},
            {"log", log}};
}

// ---------------------------------------------------------------- comparison

std::vector<Instant> normalize(const std::vector<Event> &log) {
    std::vector<Instant> out;
    std::map<std::string, std::int64_t> pending;
    std::optional<std::string> running;
    for (std::size_t i = 0; i < log.size();) {
        Instant in;
        in.time = log[i].time;
        for (; i < log.size() && log[i].time == in.time; ++i) {
            const Event &e = log[i];
            switch (e.kind) {
            case EventKind::arrival:
                ++pending[e.task];
                in.arrivals.push_back(e.task);
                break;
            case EventKind::end:
                // a task's job sequence ends when nothing of it is left pending
                if (--pending[e.task] <= 0) {
                    pending[e.task] = 0;
                    in.ends.push_back(e.task);
                }
                if (running == e.task) {
                    running.reset();
                }
                break;
            case EventKind::deadline_miss:
                in.misses.push_back(e.task);
                break;
            case EventKind::dispatch:
                running = e.task;
                break;
            case EventKind::preemption:
                if (running == e.task) {
                    running.reset();
                }
                break;
            case EventKind::idle:
                break;
            }
        }
        std::sort(in.arrivals.begin(), in.arrivals.end());
        std::sort(in.ends.begin(), in.ends.end());
        std::sort(in.misses.begin(), in.misses.end());
        in.running_after = running;
        // a job handing over to the next job of the same task is invisible
        // at task level
        bool silent = in.arrivals.empty() && in.ends.empty() && in.misses.empty() &&
                      (out.empty() ? !running.has_value() : out.back().running_after == running);
        if (!silent) {
            out.push_back(std::move(in));
        }
    }
    return out;
}

namespace {

std::string describe(const Instant &i) {
    std::ostringstream os;
    os << "t=" << i.time << " arrivals[";
    for (const auto &a : i.arrivals) {
        os << a << " ";
    }
    os << "] ends[";
    for (const auto &a : i.ends) {
        os << a << " ";
    }
    os << "] misses[";
    for (const auto &a : i.misses) {
        os << a << " ";
    }
    os << "] running=" << i.running_after.value_or("-");
    return os.str();
}

}  // namespace

std::optional<std::string> compare_logs(const std::vector<Event> &a, const std::vector<Event> &b) {
    auto na = normalize(a);
    auto nb = normalize(b);
    auto miss_at = [](const std::vector<Instant> &v) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].misses.empty()) {
                return i;
            }
        }
        return std::nullopt;
    };
    auto ma = miss_at(na);
    auto mb = miss_at(nb);
    if (ma.has_value() != mb.has_value()) {
        return std::string("only one log has a deadline miss");
    }
    std::size_t limit = ma ? std::max(*ma, *mb) + 1 : std::max(na.size(), nb.size());
    for (std::size_t i = 0; i < limit; ++i) {
        if (i >= na.size() || i >= nb.size()) {
            return "logs differ in length at instant " + std::to_string(i);
        }
        if (ma && (i == *ma || i == *mb)) {
            if (*ma != *mb || na[i].time != nb[i].time) {
                return "first deadline miss differs: " + describe(na[i]) + " vs " + describe(nb[i]);
            }
            bool shared = std::any_of(na[i].misses.begin(), na[i].misses.end(), [&](const std::string &t) {
                return t.empty() || std::find(nb[i].misses.begin(), nb[i].misses.end(), t) != nb[i].misses.end();
            });
            if (!shared) {
                return "missing tasks differ: " + describe(na[i]) + " vs " + describe(nb[i]);
            }
            return std::nullopt;
        }
        if (!(na[i] == nb[i])) {
            return "instant " + std::to_string(i) + " differs: " + describe(na[i]) + " vs " + describe(nb[i]);
        }
    }
    return std::nullopt;
}

}  // namespace rtpta::oracle
