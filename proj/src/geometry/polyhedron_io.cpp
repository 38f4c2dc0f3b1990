#include "rtpta/polyhedron_io.hpp"

#include <cctype>
#include <map>
#include <stdexcept>

namespace rtpta::geometry {

namespace {

struct Affine {
    std::map<std::string, Rational> terms;
    Rational constant;
};

enum class Cmp { lt, le, eq, ge, gt };

class Parser {
public:
    Parser(std::string_view text, const SpacePtr &space) : s_(text), space_(space) {}

    Polyhedron run() {
        std::vector<LinearInequality> cs;
        bool any_false = false;
        skip();
        if (eof()) {
            throw std::invalid_argument("empty constraint text");
        }
        for (;;) {
            skip();
            if (keyword("true")) {
            } else if (keyword("false")) {
                any_false = true;
            } else {
                atom(cs);
            }
            skip();
            if (eof()) {
                break;
            }
            if (s_.substr(pos_, 2) == "&&") {
                pos_ += 2;
            } else if (s_[pos_] == '&' || s_[pos_] == ',') {
                ++pos_;
            } else if (keyword("and")) {
            } else {
                fail("expected '&'");
            }
        }
        if (any_false) {
            return Polyhedron::empty(space_);
        }
        return Polyhedron(space_, std::move(cs));
    }

private:
    [[noreturn]] void fail(const std::string &what) const {
        throw std::invalid_argument("constraint parse error at offset " + std::to_string(pos_) + ": " + what);
    }

    bool eof() const { return pos_ >= s_.size(); }

    void skip() {
        while (!eof() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool keyword(std::string_view kw) {
        if (s_.substr(pos_, kw.size()) != kw) {
            return false;
        }
        std::size_t end = pos_ + kw.size();
        if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) {
            return false;
        }
        pos_ = end;
        return true;
    }

    std::optional<Cmp> relation() {
        skip();
        auto take = [&](std::string_view op, Cmp c) -> std::optional<Cmp> {
            if (s_.substr(pos_, op.size()) == op) {
                pos_ += op.size();
                return c;
            }
            return std::nullopt;
        };
        for (auto [op, c] : {std::pair{"<=", Cmp::le}, {">=", Cmp::ge}, {"==", Cmp::eq}, {"<", Cmp::lt},
                             {">", Cmp::gt}, {"=", Cmp::eq}}) {
            if (auto r = take(op, c)) {
                return r;
            }
        }
        return std::nullopt;
    }

    Rational number() {
        std::size_t start = pos_;
        while (!eof() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
            ++pos_;
        }
        Rational v = Rational::parse(s_.substr(start, pos_ - start));
        skip();
        if (!eof() && s_[pos_] == '/') {
            ++pos_;
            skip();
            std::size_t ds = pos_;
            while (!eof() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            if (ds == pos_) {
                fail("expected denominator");
            }
            v = v / Rational::parse(s_.substr(ds, pos_ - ds));
        }
        return v;
    }

    std::string ident() {
        std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected a variable or number");
        }
        std::string name(s_.substr(start, pos_ - start));
        if (!space_->find(name)) {
            fail("unknown variable '" + name + "'");
        }
        return name;
    }

    Affine expr() {
        Affine a;
        bool first = true;
        for (;;) {
            skip();
            int sign = 1;
            if (!eof() && (s_[pos_] == '+' || s_[pos_] == '-')) {
                sign = s_[pos_] == '-' ? -1 : 1;
                ++pos_;
                skip();
            } else if (!first) {
                break;
            }
            if (eof()) {
                fail("unexpected end of input");
            }
            Rational coef(sign);
            if (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.') {
                coef *= number();
                skip();
                if (!eof() && s_[pos_] == '*') {
                    ++pos_;
                    skip();
                    a.terms[ident()] += coef;
                } else if (!eof() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                    a.terms[ident()] += coef;
                } else {
                    a.constant += coef;
                }
            } else {
                a.terms[ident()] += coef;
            }
            first = false;
        }
        return a;
    }

    void emit(std::vector<LinearInequality> &cs, const Affine &l, Cmp c, const Affine &r) {
        // l - r cmp 0
        std::map<std::string, Rational> t = l.terms;
        for (const auto &[k, v] : r.terms) {
            t[k] -= v;
        }
        Rational bound = r.constant - l.constant;
        if (c == Cmp::ge || c == Cmp::gt) {
            for (auto &[k, v] : t) {
                v = -v;
            }
            bound = -bound;
        }
        Rel rel = c == Cmp::eq ? Rel::eq : (c == Cmp::lt || c == Cmp::gt) ? Rel::lt : Rel::le;
        cs.push_back(make_inequality(*space_, t, rel, bound));
    }

    void atom(std::vector<LinearInequality> &cs) {
        Affine lhs = expr();
        auto rel = relation();
        if (!rel) {
            fail("expected a relation");
        }
        Affine mid = expr();
        emit(cs, lhs, *rel, mid);
        std::size_t save = pos_;
        if (auto rel2 = relation()) {
            Affine rhs = expr();
            emit(cs, mid, *rel2, rhs);
        } else {
            pos_ = save;
        }
    }

    std::string_view s_;
    const SpacePtr &space_;
    std::size_t pos_ = 0;
};

}  // namespace

Polyhedron parse_polyhedron(std::string_view text, const SpacePtr &space) { return Parser(text, space).run(); }

nlohmann::json to_json(const Rational &r) { return r.to_string(); }

Rational rational_from_json(const nlohmann::json &j) {
    if (j.is_string()) {
        return Rational::parse(j.get<std::string>());
    }
    if (j.is_number_integer()) {
        return Rational(j.get<std::int64_t>());
    }
    if (j.is_number_float()) {
        // the literal text is exact; go through its shortest decimal spelling
        return Rational::parse(j.dump());
    }
    throw std::invalid_argument("expected a rational, got " + j.dump());
}

nlohmann::json to_json(const Polyhedron &p) {
    nlohmann::json out = nlohmann::json::array();
    if (p.marked_empty()) {
        out.push_back({{"lhs", nlohmann::json::object()}, {"rel", "<"}, {"rhs", "0"}});
        return out;
    }
    const Space &s = *p.space();
    for (const auto &c : p.constraints()) {
        nlohmann::json lhs = nlohmann::json::object();
        for (std::size_t i : s.name_order()) {
            if (!c.coeffs[i].is_zero()) {
                lhs[s[i].name] = c.coeffs[i].to_string();
            }
        }
        out.push_back({{"lhs", lhs}, {"rel", std::string(to_string(c.rel))}, {"rhs", c.bound.to_string()}});
    }
    return out;
}

Polyhedron polyhedron_from_json(const nlohmann::json &j, const SpacePtr &space) {
    if (j.is_string()) {
        return parse_polyhedron(j.get<std::string>(), space);
    }
    if (!j.is_array()) {
        throw std::invalid_argument("polyhedron must be an array of inequalities or a string");
    }
    std::vector<LinearInequality> cs;
    for (const auto &row : j) {
        std::map<std::string, Rational> terms;
        for (const auto &[name, v] : row.at("lhs").items()) {
            terms[name] = rational_from_json(v);
        }
        Rational rhs = rational_from_json(row.at("rhs"));
        std::string rel = row.at("rel").get<std::string>();
        if (rel == ">=" || rel == ">") {
            for (auto &[k, v] : terms) {
                v = -v;
            }
            rhs = -rhs;
            rel = rel == ">=" ? "<=" : "<";
        }
        Rel r;
        if (rel == "<=") {
            r = Rel::le;
        } else if (rel == "<") {
            r = Rel::lt;
        } else if (rel == "=" || rel == "==") {
            r = Rel::eq;
        } else {
            throw std::invalid_argument("unknown relation '" + rel + "'");
        }
        cs.push_back(make_inequality(*space, terms, r, rhs));
    }
    return Polyhedron(space, std::move(cs));
}

}  // namespace rtpta::geometry
