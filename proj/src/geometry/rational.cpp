#include "rtpta/rational.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace rtpta {

namespace {

using u128 = unsigned __int128;

constexpr std::int64_t kSmallMax = std::numeric_limits<std::int64_t>::max();

u128 abs128(__int128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits_small(__int128 v) { return v <= kSmallMax && v >= -kSmallMax; }

mpz_class to_mpz(__int128 v) {
    bool neg = v < 0;
    u128 mag = abs128(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
    mpz_class out = (hi << 64) + lo;
    return neg ? mpz_class(-out) : out;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    assign_wide(num, den);
}

Rational::Rational(const mpq_class &q) { assign_mpq(q); }

void Rational::assign_wide(__int128 num, __int128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    u128 g = gcd128(abs128(num), static_cast<u128>(den));
    if (g > 1) {
        num /= static_cast<__int128>(g);
        den /= static_cast<__int128>(g);
    }
    if (fits_small(num) && fits_small(den)) {
        num_ = static_cast<std::int64_t>(num);
        den_ = static_cast<std::int64_t>(den);
        big_.reset();
        return;
    }
    mpq_class q(to_mpz(num), to_mpz(den));
    q.canonicalize();
    num_ = 0;
    den_ = 1;
    big_ = std::make_shared<const mpq_class>(std::move(q));
}

void Rational::assign_mpq(mpq_class q) {
    q.canonicalize();
    const mpz_class &n = q.get_num();
    const mpz_class &d = q.get_den();
    if (n.fits_slong_p() && d.fits_slong_p()) {
        long nl = n.get_si();
        long dl = d.get_si();
        if (nl <= kSmallMax && nl >= -kSmallMax && dl <= kSmallMax) {
            num_ = nl;
            den_ = dl;
            big_.reset();
            return;
        }
    }
    num_ = 0;
    den_ = 1;
    big_ = std::make_shared<const mpq_class>(std::move(q));
}

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string &v) {
        auto b = v.find_first_not_of(" \t");
        auto e = v.find_last_not_of(" \t");
        v = b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    trim(s);
    if (s.empty()) {
        throw std::invalid_argument("empty rational literal");
    }
    auto check_digits = [&](const std::string &part, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) {
            i = 1;
        }
        if (i >= part.size()) {
            throw std::invalid_argument("malformed rational literal: " + s);
        }
        for (; i < part.size(); ++i) {
            if (part[i] < '0' || part[i] > '9') {
                throw std::invalid_argument("malformed rational literal: " + s);
            }
        }
    };
    mpq_class q;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string n = s.substr(0, slash);
        std::string d = s.substr(slash + 1);
        trim(n);
        trim(d);
        check_digits(n, true);
        check_digits(d, false);
        mpz_class dz(d);
        if (dz == 0) {
            throw std::domain_error("rational with zero denominator: " + s);
        }
        q = mpq_class(mpz_class(n[0] == '+' ? n.substr(1) : n), dz);
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string ip = s.substr(0, dot);
        std::string fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) {
            ip = ip.substr(1);
        }
        if (ip.empty()) {
            ip = "0";
        }
        check_digits(ip, false);
        if (!fp.empty()) {
            check_digits(fp, false);
        }
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
        mpz_class n = mpz_class(ip) * scale + (fp.empty() ? mpz_class(0) : mpz_class(fp));
        q = mpq_class(neg ? mpz_class(-n) : n, scale);
    } else {
        check_digits(s, true);
        q = mpq_class(mpz_class(s[0] == '+' ? s.substr(1) : s));
    }
    return Rational(q);
}

mpq_class Rational::to_mpq() const {
    if (big_) {
        return *big_;
    }
    return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

std::string Rational::to_string() const {
    if (big_) {
        return big_->get_str();
    }
    if (den_ == 1) {
        return std::to_string(num_);
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
    if (big_) {
        return big_->get_d();
    }
    return static_cast<double>(num_) / static_cast<double>(den_);
}

int Rational::sign() const {
    if (big_) {
        return sgn(*big_);
    }
    return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const {
    if (big_) {
        return big_->get_den() == 1;
    }
    return den_ == 1;
}

Rational Rational::floor() const {
    if (big_) {
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
        return Rational(mpq_class(f));
    }
    std::int64_t q = num_ / den_;
    if ((num_ % den_ != 0) && (num_ < 0)) {
        --q;
    }
    return Rational(q);
}

Rational Rational::ceil() const { return -((-*this).floor()); }

Rational Rational::numerator() const {
    if (big_) {
        return Rational(mpq_class(big_->get_num()));
    }
    return Rational(num_);
}

Rational Rational::denominator() const {
    if (big_) {
        return Rational(mpq_class(big_->get_den()));
    }
    return Rational(den_);
}

std::int64_t Rational::to_int64() const {
    if (!is_integer() || big_) {
        throw std::range_error("rational is not a small integer: " + to_string());
    }
    return num_;
}

Rational Rational::operator-() const {
    Rational r;
    if (big_) {
        r.assign_mpq(-*big_);
    } else {
        r.num_ = -num_;
        r.den_ = den_;
    }
    return r;
}

Rational &Rational::operator+=(const Rational &o) {
    if (!big_ && !o.big_) {
        if (den_ == 1 && o.den_ == 1) {
            assign_wide(static_cast<__int128>(num_) + o.num_, 1);
        } else {
            assign_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                        static_cast<__int128>(den_) * o.den_);
        }
        return *this;
    }
    assign_mpq(to_mpq() + o.to_mpq());
    return *this;
}

Rational &Rational::operator-=(const Rational &o) {
    if (!big_ && !o.big_) {
        if (den_ == 1 && o.den_ == 1) {
            assign_wide(static_cast<__int128>(num_) - o.num_, 1);
        } else {
            assign_wide(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                        static_cast<__int128>(den_) * o.den_);
        }
        return *this;
    }
    assign_mpq(to_mpq() - o.to_mpq());
    return *this;
}

Rational &Rational::operator*=(const Rational &o) {
    if (!big_ && !o.big_) {
        assign_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
        return *this;
    }
    assign_mpq(to_mpq() * o.to_mpq());
    return *this;
}

Rational &Rational::operator/=(const Rational &o) {
    if (o.is_zero()) {
        throw std::domain_error("division by zero");
    }
    if (!big_ && !o.big_) {
        assign_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
        return *this;
    }
    assign_mpq(to_mpq() / o.to_mpq());
    return *this;
}

bool operator==(const Rational &a, const Rational &b) {
    if (!a.big_ && !b.big_) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    if (a.big_ && b.big_) {
        return *a.big_ == *b.big_;
    }
    // canonical forms: a promoted value never equals an inline one
    return false;
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
    if (!a.big_ && !b.big_) {
        if (a.den_ == b.den_) {
            return a.num_ <=> b.num_;
        }
        __int128 l = static_cast<__int128>(a.num_) * b.den_;
        __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less
                     : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::size_t Rational::hash() const {
    if (big_) {
        return std::hash<std::string>()(big_->get_str());
    }
    std::size_t h = std::hash<std::int64_t>()(num_);
    return h ^ (std::hash<std::int64_t>()(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.to_string(); }

Rational gcd(const Rational &a, const Rational &b) {
    if (!a.is_integer() || !b.is_integer()) {
        throw std::domain_error("gcd of non-integers");
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.to_mpq().get_num_mpz_t(), b.to_mpq().get_num_mpz_t());
    return Rational(mpq_class(g));
}

Rational lcm(const Rational &a, const Rational &b) {
    if (!a.is_integer() || !b.is_integer()) {
        throw std::domain_error("lcm of non-integers");
    }
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), a.to_mpq().get_num_mpz_t(), b.to_mpq().get_num_mpz_t());
    return Rational(mpq_class(l));
}

}  // namespace rtpta
