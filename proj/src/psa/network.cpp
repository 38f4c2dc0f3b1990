#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "rtpta/psa.hpp"

namespace rtpta::psa {

using geometry::LinearInequality;
using geometry::Space;
using geometry::VarKind;

// ---------------------------------------------------------------- authoring helpers

Coefficient Coefficient::of(const std::string &var, Rational k) {
    Coefficient c;
    c.discrete[var] = std::move(k);
    return c;
}

Coefficient &Coefficient::operator+=(const Coefficient &o) {
    constant += o.constant;
    for (const auto &[k, v] : o.discrete) {
        discrete[k] += v;
        if (discrete[k].is_zero()) {
            discrete.erase(k);
        }
    }
    return *this;
}

Coefficient Coefficient::operator-() const { return *this * Rational(-1); }

Coefficient Coefficient::operator*(const Rational &k) const {
    Coefficient c;
    if (k.is_zero()) {
        return c;
    }
    c.constant = constant * k;
    for (const auto &[n, v] : discrete) {
        c.discrete[n] = v * k;
    }
    return c;
}

Constraint make_constraint(const std::vector<Term> &lhs, std::string_view rel, const std::vector<Term> &rhs) {
    // lhs - rhs rel 0, constants moved to the right
    Constraint c;
    auto add = [&](const std::vector<Term> &side, const Rational &sign) {
        for (const auto &[coef, var] : side) {
            if (var.empty()) {
                c.bound += coef * (-sign);
            } else {
                c.terms[var] += coef * sign;
            }
        }
    };
    add(lhs, Rational(1));
    add(rhs, Rational(-1));
    if (rel == ">=" || rel == ">") {
        for (auto &[v, coef] : c.terms) {
            coef = -coef;
        }
        c.bound = -c.bound;
        c.rel = rel == ">=" ? Rel::le : Rel::lt;
    } else if (rel == "<=") {
        c.rel = Rel::le;
    } else if (rel == "<") {
        c.rel = Rel::lt;
    } else if (rel == "=" || rel == "==") {
        c.rel = Rel::eq;
    } else {
        throw std::invalid_argument("unknown relation " + std::string(rel));
    }
    std::erase_if(c.terms, [](const auto &kv) { return kv.second.constant.is_zero() && kv.second.discrete.empty(); });
    return c;
}

std::size_t PsaModel::location_index(std::string_view loc) const {
    for (std::size_t i = 0; i < locations.size(); ++i) {
        if (locations[i].name == loc) {
            return i;
        }
    }
    throw std::out_of_range(name + ": no location " + std::string(loc));
}

std::set<std::string> PsaModel::labels() const {
    std::set<std::string> out = extra_labels;
    for (const auto &t : transitions) {
        out.insert(t.label);
    }
    return out;
}

// ---------------------------------------------------------------- compilation

Rational PsaNetwork::CompiledCoef::eval(const DiscreteValuation &v) const {
    Rational r = constant;
    for (const auto &[i, k] : discrete) {
        r += k * Rational(v[i]);
    }
    return r;
}

LinearInequality PsaNetwork::CompiledConstraint::linearize(std::size_t dim, const DiscreteValuation &v) const {
    LinearInequality c;
    c.coeffs.resize(dim);
    for (const auto &[i, k] : terms) {
        c.coeffs[i] += k.eval(v);
    }
    c.rel = rel;
    c.bound = bound.eval(v);
    return c;
}

bool PsaNetwork::holds(const CompiledConstraint &c, const DiscreteValuation &v) {
    Rational b = c.bound.eval(v);
    switch (c.rel) {
    case Rel::lt:
        return b.sign() > 0;
    case Rel::le:
        return b.sign() >= 0;
    case Rel::eq:
        return b.is_zero();
    }
    return false;
}

PsaNetwork::CompiledConstraint PsaNetwork::compile(const Constraint &c) const {
    auto coef = [&](const Coefficient &k) {
        CompiledCoef out;
        out.constant = k.constant;
        for (const auto &[name, v] : k.discrete) {
            auto it = discrete_index_.find(name);
            if (it == discrete_index_.end()) {
                throw std::invalid_argument("unknown discrete variable " + name);
            }
            out.discrete.emplace_back(it->second, v);
        }
        return out;
    };
    CompiledConstraint out;
    for (const auto &[name, k] : c.terms) {
        auto idx = space_->find(name);
        if (!idx) {
            throw std::invalid_argument("unknown variable " + name + " in constraint " + to_string(c));
        }
        out.terms.emplace_back(*idx, coef(k));
    }
    out.rel = c.rel;
    out.bound = coef(c.bound);
    return out;
}

PsaNetwork::PsaNetwork(std::vector<PsaModel> automata, std::vector<std::string> parameters, std::vector<Constraint> k,
                       NetworkOptions options)
    : automata_(std::move(automata)),
      parameters_(std::move(parameters)),
      k_source_(std::move(k)),
      options_(std::move(options)),
      k_(Polyhedron::universe(Space::make({}))) {
    std::vector<geometry::Variable> vars;
    for (const auto &a : automata_) {
        for (const auto &c : a.clocks) {
            vars.push_back({c, VarKind::clock});
        }
        for (const auto &[n, init] : a.discretes) {
            if (discrete_index_.contains(n)) {
                throw std::invalid_argument("discrete variable declared twice: " + n);
            }
            discrete_index_.emplace(n, discrete_names_.size());
            discrete_names_.push_back(n);
            discrete_init_.push_back(init);
        }
    }
    if (options_.observer_clock) {
        observer_ = vars.size();
        vars.push_back({*options_.observer_clock, VarKind::clock});
    }
    for (const auto &p : parameters_) {
        vars.push_back({p, VarKind::parameter});
    }
    space_ = Space::make(std::move(vars));  // rejects duplicate names

    std::set<std::string> all_labels;
    for (const auto &a : automata_) {
        auto ls = a.labels();
        all_labels.insert(ls.begin(), ls.end());
    }
    labels_.assign(all_labels.begin(), all_labels.end());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        label_index_.emplace(labels_[i], i);
    }
    participants_.resize(labels_.size());
    for (std::size_t ai = 0; ai < automata_.size(); ++ai) {
        for (const auto &l : automata_[ai].labels()) {
            participants_[label_index_.at(l)].push_back(ai);
        }
    }

    for (const auto &a : automata_) {
        if (a.initial >= a.locations.size()) {
            throw std::invalid_argument(a.name + ": initial location out of range");
        }
        CompiledAutomaton ca;
        auto own_clock = [&](const std::string &c) {
            if (std::find(a.clocks.begin(), a.clocks.end(), c) == a.clocks.end()) {
                throw std::invalid_argument(a.name + ": clock " + c + " is not owned by this automaton");
            }
            return space_->index_of(c);
        };
        for (const auto &l : a.locations) {
            CompiledLocation cl;
            for (const auto &c : l.invariant) {
                cl.invariant.push_back(compile(c));
            }
            for (const auto &c : l.stopped) {
                cl.stopped.push_back(own_clock(c));
            }
            for (const auto &c : l.inactive) {
                cl.inactive.push_back(own_clock(c));
            }
            cl.committed = l.committed;
            cl.bad = l.bad;
            ca.locations.push_back(std::move(cl));
        }
        for (const auto &t : a.transitions) {
            if (t.source >= a.locations.size() || t.target >= a.locations.size()) {
                throw std::invalid_argument(a.name + ": transition endpoint out of range");
            }
            CompiledTransition ct;
            ct.source = t.source;
            ct.target = t.target;
            ct.label = label_index_.at(t.label);
            for (const auto &g : t.guard) {
                ct.guard.push_back(compile(g));
            }
            for (const auto &r : t.resets) {
                ct.resets.push_back(own_clock(r));
            }
            for (const auto &u : t.updates) {
                CompiledUpdate cu;
                cu.var = discrete_index_.at(u.var);
                cu.constant = u.constant;
                for (const auto &[n, k] : u.terms) {
                    cu.terms.emplace_back(discrete_index_.at(n), k);
                }
                ct.updates.push_back(std::move(cu));
            }
            ca.locations[t.source].out[ct.label].push_back(ca.transitions.size());
            ca.transitions.push_back(std::move(ct));
        }
        compiled_.push_back(std::move(ca));
    }

    std::vector<LinearInequality> kc;
    for (const auto &c : k_source_) {
        for (const auto &[name, coef] : c.terms) {
            auto idx = space_->find(name);
            if (!idx || (*space_)[*idx].kind != VarKind::parameter) {
                throw std::invalid_argument("initial constraint mentions a non-parameter: " + name);
            }
        }
        kc.push_back(compile(c).linearize(space_->size(), discrete_init_));
    }
    k_ = Polyhedron(space_, std::move(kc));
}

std::vector<std::size_t> PsaNetwork::clock_indices() const { return space_->indices_of(VarKind::clock); }

std::vector<std::size_t> PsaNetwork::parameter_indices() const { return space_->indices_of(VarKind::parameter); }

std::size_t PsaNetwork::label_index(std::string_view label) const {
    auto it = label_index_.find(label);
    if (it == label_index_.end()) {
        throw std::out_of_range("unknown label " + std::string(label));
    }
    return it->second;
}

Polyhedron PsaNetwork::parameter_constraint(const std::vector<Constraint> &cs) const {
    std::vector<LinearInequality> out;
    for (const auto &c : cs) {
        out.push_back(compile(c).linearize(space_->size(), discrete_init_));
    }
    return Polyhedron(space_, std::move(out));
}

// ---------------------------------------------------------------- semantics

Polyhedron PsaNetwork::apply_invariants(Polyhedron z, const std::vector<std::uint32_t> &locs,
                                        const DiscreteValuation &v) const {
    std::vector<LinearInequality> extra;
    for (std::size_t a = 0; a < compiled_.size(); ++a) {
        for (const auto &c : compiled_[a].locations[locs[a]].invariant) {
            extra.push_back(c.linearize(space_->size(), v));
        }
    }
    return z.meet(extra);
}

Polyhedron PsaNetwork::elapse(const Polyhedron &z, const std::vector<std::uint32_t> &locs) const {
    geometry::SlopeVector slopes(space_->size(), 0);
    for (std::size_t i : clock_indices()) {
        slopes[i] = 1;
    }
    for (std::size_t a = 0; a < compiled_.size(); ++a) {
        for (std::size_t c : compiled_[a].locations[locs[a]].stopped) {
            slopes[c] = 0;
        }
    }
    return z.time_elapse(slopes);
}

Polyhedron PsaNetwork::drop_inactive(const Polyhedron &z, const std::vector<std::uint32_t> &locs) const {
    std::vector<std::size_t> vars;
    for (std::size_t a = 0; a < compiled_.size(); ++a) {
        const auto &in = compiled_[a].locations[locs[a]].inactive;
        vars.insert(vars.end(), in.begin(), in.end());
    }
    if (vars.empty()) {
        return z;
    }
    return z.eliminate(vars);
}

SymbolicState PsaNetwork::initial_state(const Polyhedron &k) const {
    if (k.is_empty()) {
        throw std::invalid_argument("initial parameter constraint is empty");
    }
    SymbolicState s{std::vector<std::uint32_t>(automata_.size()), discrete_init_, k.rebase(space_)};
    bool committed = false;
    for (std::size_t a = 0; a < automata_.size(); ++a) {
        s.locations[a] = static_cast<std::uint32_t>(automata_[a].initial);
        committed = committed || compiled_[a].locations[s.locations[a]].committed;
    }
    std::vector<LinearInequality> zero;
    for (std::size_t c : clock_indices()) {
        LinearInequality z;
        z.coeffs.resize(space_->size());
        z.coeffs[c] = Rational(1);
        z.rel = Rel::eq;
        zero.push_back(std::move(z));
    }
    Polyhedron z = apply_invariants(s.zone.meet(zero), s.locations, s.discretes);
    z = drop_inactive(z, s.locations);
    if (!committed) {
        z = apply_invariants(elapse(z, s.locations), s.locations, s.discretes);
    }
    if (z.is_empty()) {
        throw std::invalid_argument("initial state is empty under the given parameter constraint");
    }
    s.zone = std::move(z);
    return s;
}

std::vector<SyncCombo> PsaNetwork::enabled_syncs(const SymbolicState &s) const {
    std::vector<SyncCombo> out;
    bool any_committed = false;
    for (std::size_t a = 0; a < compiled_.size(); ++a) {
        any_committed = any_committed || compiled_[a].locations[s.locations[a]].committed;
    }
    for (std::size_t l = 0; l < labels_.size(); ++l) {
        const auto &parts = participants_[l];
        std::vector<std::vector<std::size_t>> choices;
        bool ok = true;
        bool moves_committed = false;
        for (std::size_t a : parts) {
            const auto &loc = compiled_[a].locations[s.locations[a]];
            auto it = loc.out.find(l);
            std::vector<std::size_t> cand;
            if (it != loc.out.end()) {
                for (std::size_t ti : it->second) {
                    const auto &t = compiled_[a].transitions[ti];
                    bool pass = std::all_of(t.guard.begin(), t.guard.end(), [&](const CompiledConstraint &g) {
                        return !g.discrete_only() || holds(g, s.discretes);
                    });
                    if (pass) {
                        cand.push_back(ti);
                    }
                }
            }
            if (cand.empty()) {
                ok = false;
                break;
            }
            moves_committed = moves_committed || loc.committed;
            choices.push_back(std::move(cand));
        }
        if (!ok || parts.empty() || (any_committed && !moves_committed)) {
            continue;
        }
        std::vector<std::size_t> pick(parts.size(), 0);
        for (;;) {
            SyncCombo c;
            c.label = l;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                c.moves.emplace_back(parts[i], choices[i][pick[i]]);
            }
            out.push_back(std::move(c));
            std::size_t i = 0;
            while (i < parts.size() && ++pick[i] == choices[i].size()) {
                pick[i] = 0;
                ++i;
            }
            if (i == parts.size()) {
                break;
            }
        }
    }
    return out;
}

Polyhedron PsaNetwork::firing_zone(const SymbolicState &s, const SyncCombo &combo) const {
    std::vector<LinearInequality> guards;
    for (const auto &[a, ti] : combo.moves) {
        for (const auto &g : compiled_[a].transitions[ti].guard) {
            if (!g.discrete_only()) {
                guards.push_back(g.linearize(space_->size(), s.discretes));
            }
        }
    }
    return s.zone.meet(guards);
}

std::optional<SymbolicState> PsaNetwork::successor(const SymbolicState &s, const SyncCombo &combo) const {
    Polyhedron z = firing_zone(s, combo);
    if (z.is_empty()) {
        return std::nullopt;
    }
    std::vector<std::size_t> resets;
    SymbolicState next{s.locations, s.discretes, z};
    bool committed = false;
    for (const auto &[a, ti] : combo.moves) {
        const auto &t = compiled_[a].transitions[ti];
        resets.insert(resets.end(), t.resets.begin(), t.resets.end());
        for (const auto &u : t.updates) {
            std::int64_t v = u.constant;
            for (const auto &[n, k] : u.terms) {
                v += k * s.discretes[n];
            }
            next.discretes[u.var] = v;
        }
        next.locations[a] = static_cast<std::uint32_t>(t.target);
    }
    for (std::size_t a = 0; a < compiled_.size(); ++a) {
        committed = committed || compiled_[a].locations[next.locations[a]].committed;
    }
    std::sort(resets.begin(), resets.end());
    resets.erase(std::unique(resets.begin(), resets.end()), resets.end());
    if (!resets.empty()) {
        z = z.reset(resets);
    }
    z = apply_invariants(std::move(z), next.locations, next.discretes);
    z = drop_inactive(z, next.locations);
    if (!committed) {
        z = apply_invariants(elapse(z, next.locations), next.locations, next.discretes);
    }
    if (z.is_empty()) {
        return std::nullopt;
    }
    next.zone = std::move(z);
    return next;
}

Polyhedron PsaNetwork::project_params(const SymbolicState &s) const { return s.zone.eliminate(clock_indices()); }

bool PsaNetwork::in_bad_location(const SymbolicState &s) const {
    for (std::size_t a = 0; a < compiled_.size(); ++a) {
        if (compiled_[a].locations[s.locations[a]].bad) {
            return true;
        }
    }
    return false;
}

PsaNetwork PsaNetwork::instantiate(const ParamPoint &pt) const {
    for (const auto &p : parameters_) {
        if (!pt.contains(p)) {
            throw std::invalid_argument("missing value for parameter " + p);
        }
    }
    auto subst = [&](Constraint c) {
        for (auto it = c.terms.begin(); it != c.terms.end();) {
            auto v = pt.find(it->first);
            if (v != pt.end() && std::find(parameters_.begin(), parameters_.end(), it->first) != parameters_.end()) {
                c.bound += -(it->second * v->second);
                it = c.terms.erase(it);
            } else {
                ++it;
            }
        }
        return c;
    };
    std::vector<PsaModel> models = automata_;
    for (auto &m : models) {
        for (auto &l : m.locations) {
            for (auto &c : l.invariant) {
                c = subst(c);
            }
        }
        for (auto &t : m.transitions) {
            for (auto &c : t.guard) {
                c = subst(c);
            }
        }
    }
    std::vector<Constraint> k;
    for (const auto &c : k_source_) {
        k.push_back(subst(c));
    }
    return PsaNetwork(std::move(models), {}, std::move(k), options_);
}

std::string PsaNetwork::location_vector(const SymbolicState &s) const {
    std::string out;
    for (std::size_t a = 0; a < automata_.size(); ++a) {
        if (a) {
            out += ",";
        }
        out += automata_[a].locations[s.locations[a]].name;
    }
    return out;
}

std::string PsaNetwork::describe(const SymbolicState &s) const {
    std::ostringstream os;
    os << location_vector(s) << " |";
    for (std::size_t i = 0; i < discrete_names_.size(); ++i) {
        os << " " << discrete_names_[i] << "=" << s.discretes[i];
    }
    os << " | " << s.zone.to_string();
    return os.str();
}

}  // namespace rtpta::psa
