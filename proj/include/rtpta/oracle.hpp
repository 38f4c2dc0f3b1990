#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtpta/rts.hpp"

namespace rtpta::oracle {

using geometry::ParamPoint;
using rts::ComponentSpec;
using rts::ConcreteTask;

enum class EventKind { arrival, dispatch, preemption, end, deadline_miss, idle };

std::string_view to_string(EventKind k);

struct Event {
    Rational time;
    EventKind kind = EventKind::arrival;
    std::string task;  // empty for idle

    bool operator==(const Event &) const = default;
};

struct SimulationResult {
    std::vector<Event> log;
    std::map<std::string, std::vector<rts::JobRecord>> jobs;
    std::optional<Rational> busy_period_end;  // first instant the processor idles
    bool schedulable = true;
    std::map<std::string, Rational> worst_response;  // over finished jobs
    Rational end_time;                              // last instant analysed
};

struct SimOptions {
    std::optional<Rational> horizon;
    bool stop_at_idle = true;        // critical-instant busy period only
    bool stop_at_first_miss = false;
    bool use_offsets = false;        // release at offset + k*T instead of at 0
    Rational demand_scale = 1;       // exploratory; 1 means WCET
};

// Long-run processor utilisation sum C/T (arrival curves use C/P).
Rational utilization(const std::vector<ConcreteTask> &tasks);

// Exact event-driven FPPS simulation from the critical instant.
// Throws std::invalid_argument when utilisation exceeds 1 and no horizon is
// given.
SimulationResult simulate(const ComponentSpec &spec, const ParamPoint &pt, std::optional<Rational> horizon = {});
SimulationResult simulate(const std::vector<ConcreteTask> &tasks, const SimOptions &opts);

// Least fixed point of W = sum alpha_i(W) * C_i; none when utilisation >= 1.
std::optional<Rational> busy_period_length(const ComponentSpec &spec, const ParamPoint &pt);
std::optional<Rational> busy_period_length(const std::vector<ConcreteTask> &tasks);

struct Verdict {
    bool schedulable = true;
    std::map<std::string, Rational> worst_response;
    std::optional<Rational> busy_period_end;
    std::optional<Event> first_miss;
};

Verdict is_schedulable(const ComponentSpec &spec, const ParamPoint &pt);
Verdict is_schedulable(const std::vector<ConcreteTask> &tasks);

// lcm of the periods; throws for non-periodic tasks.
Rational hyperperiod(const ComponentSpec &spec, const ParamPoint &pt);
Rational hyperperiod(const std::vector<ConcreteTask> &tasks);

// Simulation over [0, 2H + max offset] honouring offsets; periodic tasks only.
SimulationResult simulate_with_offsets(const ComponentSpec &spec, const ParamPoint &pt);

// Release time of job k (0-based) of a task in the critical scenario.
Rational release_time(const ConcreteTask &t, std::int64_t k);

// Demand of jobs released at the critical instant whose deadlines are <= t.
Rational demand_bound(const std::vector<ConcreteTask> &tasks, const Rational &t);

// Smallest absolute deadline t with demand_bound(t) > t, scanning deadlines
// up to `limit`; none if demand never exceeds supply there.
std::optional<Rational> first_overload_instant(const std::vector<ConcreteTask> &tasks, const Rational &limit);

// ---------------------------------------------------------------- output

std::string to_tsv(const std::vector<Event> &log);
nlohmann::json gantt(const SimulationResult &r);  // [{"task","start","end"}]
nlohmann::json to_json(const SimulationResult &r);

// ---------------------------------------------------------------- comparison

// What happened at one instant, independent of how simultaneous steps were
// interleaved.
struct Instant {
    Rational time;
    std::vector<std::string> arrivals;  // sorted, with multiplicity
    std::vector<std::string> ends;      // sorted
    std::vector<std::string> misses;    // sorted
    std::optional<std::string> running_after;

    bool operator==(const Instant &) const = default;
};

std::vector<Instant> normalize(const std::vector<Event> &log);

// Compares two logs instant by instant. When `a` or `b` contains a deadline
// miss, the comparison stops at the first miss instant, which must coincide
// and share at least one missing task. Returns an explanation on mismatch.
std::optional<std::string> compare_logs(const std::vector<Event> &a, const std::vector<Event> &b);

// Event logs of every maximal run of the concrete symbolic model at `pt`,
// timed through an observer clock.
struct SymbolicRuns {
    std::vector<std::vector<Event>> logs;
    bool reached_bad = false;
    bool depth_exceeded = false;
    std::size_t states = 0;
};

SymbolicRuns symbolic_event_logs(const ComponentSpec &spec, const ParamPoint &pt, std::size_t depth);

// Oracle log (stopped at the first miss) against every symbolic run; returns
// a description of the first disagreement, verdicts included.
std::optional<std::string> cross_check(const ComponentSpec &spec, const ParamPoint &pt, std::size_t depth);

}  // namespace rtpta::oracle
