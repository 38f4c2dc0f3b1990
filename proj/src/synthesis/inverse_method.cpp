#include <stdexcept>

#include "rtpta/synthesis.hpp"

namespace rtpta::synthesis {

namespace {

ParamPoint params_only(const PsaNetwork &net, const ParamPoint &pt) {
    ParamPoint out;
    for (const auto &p : net.parameters()) {
        auto it = pt.find(p);
        if (it == pt.end()) {
            throw std::invalid_argument("no value for parameter " + p);
        }
        out.emplace(p, it->second);
    }
    return out;
}

geometry::Point dense(const geometry::Space &space, const ParamPoint &pt) {
    geometry::Point x(space.size());
    for (const auto &[name, v] : pt) {
        if (auto i = space.find(name)) {
            x[*i] = v;
        }
    }
    return x;
}

}  // namespace

LinearInequality select_incompatible(const Polyhedron &proj, const ParamPoint &pi) {
    const geometry::Point x = dense(*proj.space(), pi);
    if (proj.marked_empty()) {
        throw std::invalid_argument("select_incompatible: empty projection has no inequality to select");
    }
    for (const auto &c : proj.constraints()) {
        if (c.rel == Rel::eq) {
            Rational v = c.evaluate(x);
            if (v < c.bound) {
                LinearInequality j = c;  // a.x >= b, stored as -a.x <= -b
                for (auto &a : j.coeffs) {
                    a = -a;
                }
                j.bound = -c.bound;
                j.rel = Rel::le;
                return j;
            }
            if (v > c.bound) {
                LinearInequality j = c;
                j.rel = Rel::le;
                return j;
            }
        } else if (!c.holds_at(x)) {
            return c;
        }
    }
    throw std::invalid_argument("select_incompatible: point satisfies the projection");
}

ImResult inverse_method(const PsaNetwork &net, const ParamPoint &pi_in, const ImOptions &opts) {
    const ParamPoint pi = params_only(net, pi_in);
    Polyhedron k = opts.k ? *opts.k : net.initial_constraint();
    if (!k.contains(dense(*net.space(), pi))) {
        throw std::invalid_argument("inverse_method: reference point violates the initial constraint");
    }
    const auto clocks = net.clock_indices();
    ImResult res;
    for (std::size_t restart = 0;; ++restart) {
        if (restart > opts.max_restarts) {
            throw std::runtime_error("inverse_method: restart limit reached");
        }
        std::optional<psa::SymbolicState> incompatible;
        psa::ExploreOptions eo;
        eo.depth = opts.depth_bound.value_or(std::numeric_limits<std::size_t>::max());
        eo.keep_merged = true;
        eo.on_state = [&](const psa::SymbolicState &s) {
            if (s.zone.substitute(pi).is_empty()) {
                incompatible = s;
                return false;
            }
            return true;
        };
        psa::Exploration ex = psa::bounded_explore(net, k, eo);
        if (incompatible) {
            LinearInequality j = select_incompatible(incompatible->zone.eliminate(clocks), pi);
            LinearInequality not_j = geometry::negate(j);
            Polyhedron next = k.meet(not_j);
            if (next.includes(k)) {
                throw std::logic_error("inverse_method: negation did not shrink the constraint");
            }
            res.incompatible_negations.push_back(not_j);
            k = std::move(next);
            continue;
        }
        // Parameter projections only shrink along a run, so the intersection
        // over all states is the intersection over states without a computed
        // successor plus the states merged away.
        Polyhedron c = k;
        for (std::size_t i = 0; i < ex.states.size(); ++i) {
            if (!ex.has_successor[i]) {
                c = c.meet(ex.states[i].zone.eliminate(clocks));
            }
        }
        for (const auto &s : ex.merged) {
            c = c.meet(s.zone.eliminate(clocks));
        }
        res.constraint = c.remove_redundant();
        res.reached_fixpoint = !ex.depth_exceeded;
        res.explored_states = ex.states.size();
        res.reached_bad = ex.reached_bad;
        return res;
    }
}

Verdict classify_point(const PsaNetwork &net, const ParamPoint &pt, std::size_t depth_bound) {
    PsaNetwork concrete = net.instantiate(params_only(net, pt));
    psa::ExploreOptions eo;
    eo.depth = depth_bound;
    eo.stop_at_bad = true;
    psa::Exploration ex = psa::bounded_explore(concrete, concrete.initial_constraint(), eo);
    if (ex.reached_bad) {
        return Verdict::deadline_miss;
    }
    return ex.depth_exceeded ? Verdict::depth_exceeded : Verdict::schedulable;
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::schedulable:
        return "schedulable";
    case Verdict::deadline_miss:
        return "deadline_miss";
    case Verdict::depth_exceeded:
        return "depth_exceeded";
    }
    return "?";
}

Verdict verdict_from_string(std::string_view s) {
    for (Verdict v : {Verdict::schedulable, Verdict::deadline_miss, Verdict::depth_exceeded}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw std::invalid_argument("unknown verdict " + std::string(s));
}

}  // namespace rtpta::synthesis
