#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rtpta {

// Exact rational number. Values that fit in 64-bit numerator/denominator are
// kept inline; anything larger is promoted to a GMP rational. Always in lowest
// terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(int n) : num_(n) {}           // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(const mpq_class &q);

    // Accepts "12", "-3/4", "2.25", "-0.5".
    static Rational parse(std::string_view text);

    [[nodiscard]] mpq_class to_mpq() const;
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] double to_double() const;

    [[nodiscard]] int sign() const;
    [[nodiscard]] bool is_zero() const { return sign() == 0; }
    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] Rational floor() const;
    [[nodiscard]] Rational ceil() const;
    [[nodiscard]] Rational abs() const { return sign() < 0 ? -*this : *this; }
    [[nodiscard]] Rational numerator() const;
    [[nodiscard]] Rational denominator() const;
    // Only valid when the value is an integer that fits in 64 bits.
    [[nodiscard]] std::int64_t to_int64() const;
    [[nodiscard]] bool is_small() const { return !big_; }

    Rational operator-() const;
    Rational &operator+=(const Rational &o);
    Rational &operator-=(const Rational &o);
    Rational &operator*=(const Rational &o);
    Rational &operator/=(const Rational &o);

    friend Rational operator+(Rational a, const Rational &b) { return a += b; }
    friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational &b) { return a /= b; }

    friend bool operator==(const Rational &a, const Rational &b);
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

    [[nodiscard]] std::size_t hash() const;

private:
    void assign_wide(__int128 num, __int128 den);
    void assign_mpq(mpq_class q);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::shared_ptr<const mpq_class> big_;
};

std::ostream &operator<<(std::ostream &os, const Rational &r);

Rational gcd(const Rational &a, const Rational &b);  // integers only
Rational lcm(const Rational &a, const Rational &b);  // integers only

}  // namespace rtpta

template <>
struct std::hash<rtpta::Rational> {
    std::size_t operator()(const rtpta::Rational &r) const noexcept { return r.hash(); }
};
