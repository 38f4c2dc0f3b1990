#include "fm.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

namespace rtpta::geometry::fm {

namespace {

struct History {
    std::vector<std::uint64_t> words;

    void set(std::size_t i) { words[i / 64] |= (std::uint64_t{1} << (i % 64)); }
    History operator|(const History &o) const {
        History h{words};
        for (std::size_t i = 0; i < words.size(); ++i) {
            h.words[i] |= o.words[i];
        }
        return h;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }
};

struct Row {
    LinearInequality c;
    History hist;
};

bool ground_holds(const LinearInequality &c) {
    switch (c.rel) {
    case Rel::le:
        return c.bound.sign() >= 0;
    case Rel::lt:
        return c.bound.sign() > 0;
    case Rel::eq:
        return c.bound.is_zero();
    }
    return false;
}

// Keeps, per direction and side, only the tightest row.
void dedupe(std::vector<Row> &rows, bool &empty) {
    std::map<std::vector<Rational>, std::size_t> best;
    std::vector<Row> out;
    out.reserve(rows.size());
    for (auto &r : rows) {
        if (r.c.is_trivial()) {
            if (!ground_holds(r.c)) {
                empty = true;
                return;
            }
            continue;
        }
        normalize(r.c.coeffs, r.c.bound);
        if (r.c.rel == Rel::eq) {
            out.push_back(std::move(r));
            continue;
        }
        auto it = best.find(r.c.coeffs);
        if (it == best.end()) {
            best.emplace(r.c.coeffs, out.size());
            out.push_back(std::move(r));
            continue;
        }
        Row &cur = out[it->second];
        bool tighter = r.c.bound < cur.c.bound || (r.c.bound == cur.c.bound && r.c.rel == Rel::lt && cur.c.rel == Rel::le);
        if (tighter) {
            cur = std::move(r);
        }
    }
    rows = std::move(out);
}

}  // namespace

void normalize(std::vector<Rational> &coeffs, Rational &bound) {
    bool all_small = true;
    std::int64_t den_lcm = 1;
    for (const auto &v : coeffs) {
        if (v.is_zero()) {
            continue;
        }
        if (!v.is_small()) {
            all_small = false;
            break;
        }
        std::int64_t d = v.denominator().to_int64();
        std::int64_t g = std::gcd(den_lcm, d);
        __int128 l = static_cast<__int128>(den_lcm / g) * d;
        if (l > (static_cast<__int128>(1) << 62)) {
            all_small = false;
            break;
        }
        den_lcm = static_cast<std::int64_t>(l);
    }
    Rational scale;
    if (all_small) {
        std::int64_t num_gcd = 0;
        bool ok = true;
        for (const auto &v : coeffs) {
            if (v.is_zero()) {
                continue;
            }
            __int128 scaled = static_cast<__int128>(v.numerator().to_int64()) * (den_lcm / v.denominator().to_int64());
            if (scaled > (static_cast<__int128>(1) << 62) || scaled < -(static_cast<__int128>(1) << 62)) {
                ok = false;
                break;
            }
            num_gcd = std::gcd(num_gcd, static_cast<std::int64_t>(scaled < 0 ? -scaled : scaled));
        }
        if (num_gcd == 0) {
            return;
        }
        if (ok) {
            scale = Rational(den_lcm, num_gcd);
        } else {
            all_small = false;
        }
    }
    if (!all_small) {
        mpz_class l = 1;
        for (const auto &v : coeffs) {
            if (!v.is_zero()) {
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.to_mpq().get_den_mpz_t());
            }
        }
        mpz_class g = 0;
        for (const auto &v : coeffs) {
            if (!v.is_zero()) {
                mpq_class s = v.to_mpq() * l;
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), s.get_num_mpz_t());
            }
        }
        if (g == 0) {
            return;
        }
        scale = Rational(mpq_class(l, g));
    }
    if (scale == Rational(1)) {
        return;
    }
    for (auto &v : coeffs) {
        if (!v.is_zero()) {
            v *= scale;
        }
    }
    bound *= scale;
}

std::vector<LinearInequality> eliminate(std::vector<LinearInequality> input, std::size_t width,
                                        std::vector<std::size_t> columns, bool &empty) {
    empty = false;
    const std::size_t nwords = std::max<std::size_t>(1, (input.size() + 63) / 64);
    std::vector<Row> rows;
    rows.reserve(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        Row r{std::move(input[i]), History{std::vector<std::uint64_t>(nwords, 0)}};
        r.c.coeffs.resize(width);
        r.hist.set(i);
        rows.push_back(std::move(r));
    }
    dedupe(rows, empty);
    if (empty) {
        return {};
    }

    std::size_t fm_steps = 0;
    while (!columns.empty()) {
        // Equality substitution first, otherwise the column with the fewest
        // generated combinations.
        std::size_t pick = columns.size();
        std::size_t eq_row = rows.size();
        for (std::size_t ci = 0; ci < columns.size() && eq_row == rows.size(); ++ci) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r].c.rel == Rel::eq && !rows[r].c.coeffs[columns[ci]].is_zero()) {
                    pick = ci;
                    eq_row = r;
                    break;
                }
            }
        }
        if (eq_row == rows.size()) {
            long best_cost = -1;
            for (std::size_t ci = 0; ci < columns.size(); ++ci) {
                long pos = 0;
                long neg = 0;
                for (const auto &r : rows) {
                    int s = r.c.coeffs[columns[ci]].sign();
                    pos += s > 0;
                    neg += s < 0;
                }
                long cost = pos * neg - pos - neg;
                if (best_cost == -1 || cost < best_cost) {
                    best_cost = cost;
                    pick = ci;
                }
            }
        }
        const std::size_t col = columns[pick];
        columns.erase(columns.begin() + static_cast<long>(pick));

        if (eq_row != rows.size()) {
            Row e = std::move(rows[eq_row]);
            rows.erase(rows.begin() + static_cast<long>(eq_row));
            const Rational pivot = e.c.coeffs[col];
            for (auto &r : rows) {
                const Rational f = r.c.coeffs[col];
                if (f.is_zero()) {
                    continue;
                }
                const Rational m = f / pivot;
                for (std::size_t j = 0; j < width; ++j) {
                    if (!e.c.coeffs[j].is_zero()) {
                        r.c.coeffs[j] -= m * e.c.coeffs[j];
                    }
                }
                r.c.bound -= m * e.c.bound;
            }
            dedupe(rows, empty);
            if (empty) {
                return {};
            }
            continue;
        }

        std::vector<Row> pos;
        std::vector<Row> neg;
        std::vector<Row> next;
        for (auto &r : rows) {
            int s = r.c.coeffs[col].sign();
            if (s > 0) {
                pos.push_back(std::move(r));
            } else if (s < 0) {
                neg.push_back(std::move(r));
            } else {
                next.push_back(std::move(r));
            }
        }
        ++fm_steps;
        for (const auto &p : pos) {
            for (const auto &n : neg) {
                History h = p.hist | n.hist;
                const bool strict = p.c.rel == Rel::lt || n.c.rel == Rel::lt;
                // Chernikov pruning is only sound for strictness when the row
                // itself is non-strict.
                if (!strict && h.count() > fm_steps + 1) {
                    continue;
                }
                const Rational mp = -n.c.coeffs[col];
                const Rational mn = p.c.coeffs[col];
                LinearInequality c;
                c.coeffs.resize(width);
                for (std::size_t j = 0; j < width; ++j) {
                    if (j == col) {
                        continue;
                    }
                    const Rational &a = p.c.coeffs[j];
                    const Rational &b = n.c.coeffs[j];
                    if (a.is_zero() && b.is_zero()) {
                        continue;
                    }
                    c.coeffs[j] = a * mp + b * mn;
                }
                c.bound = p.c.bound * mp + n.c.bound * mn;
                c.rel = strict ? Rel::lt : Rel::le;
                next.push_back(Row{std::move(c), std::move(h)});
            }
        }
        rows = std::move(next);
        dedupe(rows, empty);
        if (empty) {
            return {};
        }
    }

    std::vector<LinearInequality> out;
    out.reserve(rows.size());
    for (auto &r : rows) {
        out.push_back(std::move(r.c));
    }
    return out;
}

}  // namespace rtpta::geometry::fm
