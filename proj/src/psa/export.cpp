#include <sstream>

#include "rtpta/polyhedron_io.hpp"
#include "rtpta/psa.hpp"

namespace rtpta::psa {

namespace {

std::string coef_string(const Coefficient &c) {
    std::string out;
    if (!c.constant.is_zero() || c.discrete.empty()) {
        out = c.constant.to_string();
    }
    for (const auto &[n, k] : c.discrete) {
        std::string term = k == Rational(1) ? n : k.to_string() + "*" + n;
        out = out.empty() ? term : out + " + " + term;
    }
    return out;
}

std::string constraints_string(const std::vector<Constraint> &cs) {
    if (cs.empty()) {
        return "true";
    }
    std::string out;
    for (const auto &c : cs) {
        if (!out.empty()) {
            out += " & ";
        }
        out += to_string(c);
    }
    return out;
}

}  // namespace

std::string to_string(const Constraint &c) {
    std::string lhs;
    for (const auto &[v, k] : c.terms) {
        std::string coef = coef_string(k);
        std::string term = coef == "1" ? v : (k.discrete.empty() ? coef : "(" + coef + ")") + "*" + v;
        lhs = lhs.empty() ? term : lhs + " + " + term;
    }
    if (lhs.empty()) {
        lhs = "0";
    }
    return lhs + " " + std::string(geometry::to_string(c.rel)) + " " + coef_string(c.bound);
}

nlohmann::json to_json(const PsaNetwork &net) {
    using nlohmann::json;
    json automata = json::array();
    for (const auto &a : net.automata()) {
        json locs = json::array();
        for (const auto &l : a.locations) {
            json jl = {{"name", l.name}, {"invariant", constraints_string(l.invariant)}};
            if (!l.stopped.empty()) {
                jl["stopped"] = l.stopped;
            }
            if (l.committed) {
                jl["committed"] = true;
            }
            if (l.bad) {
                jl["bad"] = true;
            }
            locs.push_back(std::move(jl));
        }
        json trans = json::array();
        for (const auto &t : a.transitions) {
            json jt = {{"source", a.locations[t.source].name},
                       {"target", a.locations[t.target].name},
                       {"label", t.label},
                       {"guard", constraints_string(t.guard)}};
            if (!t.resets.empty()) {
                jt["resets"] = t.resets;
            }
            if (!t.updates.empty()) {
                json ups = json::object();
                for (const auto &u : t.updates) {
                    std::string rhs = std::to_string(u.constant);
                    for (const auto &[n, k] : u.terms) {
                        rhs += (k < 0 ? " - " : " + ") + (std::abs(k) == 1 ? n : std::to_string(std::abs(k)) + "*" + n);
                    }
                    ups[u.var] = rhs;
                }
                jt["updates"] = ups;
            }
            trans.push_back(std::move(jt));
        }
        automata.push_back({{"name", a.name},
                            {"clocks", a.clocks},
                            {"discretes", a.discretes},
                            {"initial", a.locations[a.initial].name},
                            {"locations", locs},
                            {"transitions", trans}});
    }
    return {{"parameters", net.parameters()},
            {"initial_constraint", geometry::to_json(net.initial_constraint())},
            {"automata", automata}};
}

std::string to_dot(const PsaModel &m) {
    std::ostringstream os;
    os << "digraph \"" << m.name << "\" {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < m.locations.size(); ++i) {
        const auto &l = m.locations[i];
        os << "  L" << i << " [label=\"" << l.name;
        if (!l.invariant.empty()) {
            os << "\\n" << constraints_string(l.invariant);
        }
        os << "\"";
        if (l.committed) {
            os << ", peripheries=2";
        }
        if (l.bad) {
            os << ", color=red";
        }
        if (i == m.initial) {
            os << ", style=bold";
        }
        os << "];\n";
    }
    for (const auto &t : m.transitions) {
        os << "  L" << t.source << " -> L" << t.target << " [label=\"" << t.label;
        if (!t.guard.empty()) {
            os << "\\n" << constraints_string(t.guard);
        }
        if (!t.resets.empty()) {
            os << "\\n";
            for (const auto &r : t.resets) {
                os << r << ":=0 ";
            }
        }
        for (const auto &u : t.updates) {
            os << "\\n" << u.var << ":=" << u.constant;
            for (const auto &[n, k] : u.terms) {
                os << (k < 0 ? "-" : "+") << std::abs(k) << "*" << n;
            }
        }
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace rtpta::psa
