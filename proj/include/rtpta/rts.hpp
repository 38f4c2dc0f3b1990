#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rtpta/psa.hpp"

namespace rtpta::rts {

using geometry::ParamPoint;

// A constant or a reference to a declared parameter.
struct Quantity {
    std::variant<Rational, std::string> value;

    Quantity() : value(Rational(0)) {}
    Quantity(Rational r) : value(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    Quantity(int r) : value(Rational(r)) {}        // NOLINT(google-explicit-constructor)
    static Quantity param(std::string name) {
        Quantity q;
        q.value = std::move(name);
        return q;
    }

    [[nodiscard]] bool is_param() const { return std::holds_alternative<std::string>(value); }
    [[nodiscard]] const std::string &param_name() const { return std::get<std::string>(value); }
    [[nodiscard]] const Rational &constant() const { return std::get<Rational>(value); }
    // Value under a point; throws if the parameter is unassigned.
    [[nodiscard]] Rational resolve(const ParamPoint &pt) const;

    bool operator==(const Quantity &) const = default;
};

enum class ActivationKind { periodic, sporadic, arrival_curve };

struct ActivationSpec {
    ActivationKind kind = ActivationKind::periodic;
    Quantity period;  // T_i, or P for arrival curves
    Quantity burst = 1;  // N^u; arrival curves only, integer valued

    bool operator==(const ActivationSpec &) const = default;
};

struct TaskSpec {
    std::string name;
    int priority = 1;  // smaller is higher
    Quantity wcet;
    Quantity deadline;
    Rational offset;
    ActivationSpec activation;

    bool operator==(const TaskSpec &) const = default;
};

enum class SchedulerVariant { cyclic, idle_time };

enum class ParamKind { continuous, discrete };

struct ParameterDecl {
    std::string name;
    ParamKind kind = ParamKind::continuous;
    Rational lo;
    Rational hi;
    Rational ref;

    bool operator==(const ParameterDecl &) const = default;
};

struct ComponentSpec {
    std::string name = "component";
    std::vector<TaskSpec> tasks;
    SchedulerVariant variant = SchedulerVariant::idle_time;
    std::vector<ParameterDecl> parameters;
    std::vector<std::string> provided;  // tasks implementing provided methods
    bool conservative = false;          // derived by a one-directional transform

    [[nodiscard]] const ParameterDecl *find_parameter(std::string_view name) const;
    [[nodiscard]] ParamPoint reference_point() const;
    [[nodiscard]] std::vector<std::string> continuous_parameters() const;
    [[nodiscard]] std::vector<std::string> discrete_parameters() const;
    // Throws std::invalid_argument on inconsistent declarations.
    void validate() const;

    bool operator==(const ComponentSpec &) const = default;
};

// Task parameters after substituting a point.
struct ConcreteTask {
    std::string name;
    int priority = 1;
    Rational wcet;
    Rational deadline;
    Rational offset;
    ActivationKind kind = ActivationKind::periodic;
    Rational period;
    std::int64_t burst = 1;
};

std::vector<ConcreteTask> resolve(const ComponentSpec &spec, const ParamPoint &pt);

struct JobRecord {
    Rational arrival;
    Rational demand;
    Rational deadline;  // absolute
    std::optional<Rational> finish;
};

// ---------------------------------------------------------------- builders

// Label and variable naming shared by the builders.
struct Names {
    static std::string arrival_event(const std::string &t) { return "arrival_event_" + t; }
    static std::string arrival(const std::string &t) { return "arrival_" + t; }
    static std::string dispatch(const std::string &t) { return "dispatch_" + t; }
    static std::string preemption(const std::string &t) { return "preemption_" + t; }
    static std::string end(const std::string &t) { return "end_" + t; }
    static std::string miss(const std::string &t) { return "miss_" + t; }
    static std::string exec_clock(const std::string &t) { return "c_" + t; }
    static std::string deadline_clock(const std::string &t) { return "d_" + t; }
    static std::string activation_clock(const std::string &t) { return "x_" + t; }
    static std::string counter(const std::string &t) { return "N_" + t; }
    static std::string burst_counter(const std::string &t) { return "n_" + t; }
};

psa::PsaModel build_task_automaton(const TaskSpec &t);
psa::PsaModel build_periodic_activation(const TaskSpec &t, bool critical_instant);
psa::PsaModel build_sporadic_activation(const TaskSpec &t, bool critical_instant);
// The burst must be a constant (discrete parameters instantiated first).
psa::PsaModel build_arrival_curve_activation(const TaskSpec &t);
psa::PsaModel build_fpps_scheduler(const std::vector<TaskSpec> &tasks, SchedulerVariant variant);

// Scheduler size cap; RTPTA_MAX_TASKS overrides the default of 6.
std::size_t max_tasks();

struct BuildOptions {
    psa::NetworkOptions network;
};

// Discrete parameters are taken from `discrete` (every one must be assigned);
// the continuous parameters stay symbolic with K = their declared ranges.
psa::PsaNetwork build_component(const ComponentSpec &spec, const ParamPoint &discrete = {},
                                const BuildOptions &opts = {});

// All offsets set to zero; flagged conservative when anything changed.
ComponentSpec zero_offset_transform(const ComponentSpec &spec);

// ---------------------------------------------------------------- model files

ComponentSpec component_from_json(const nlohmann::json &j);
nlohmann::json to_json(const ComponentSpec &spec);
ComponentSpec load_component(const std::string &path);

}  // namespace rtpta::rts
