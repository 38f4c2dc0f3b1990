#include <catch_amalgamated.hpp>

#include <limits>

#include "rtpta/rational.hpp"

using rtpta::Rational;

TEST_CASE("rational parsing and printing") {
    CHECK(Rational::parse("12") == Rational(12));
    CHECK(Rational::parse("-3/4") == Rational(-3, 4));
    CHECK(Rational::parse("2.25") == Rational(9, 4));
    CHECK(Rational::parse("-0.5") == Rational(-1, 2));
    CHECK(Rational(6, -4).to_string() == "-3/2");
    CHECK(Rational(10, 5).to_string() == "2");
    CHECK_THROWS(Rational::parse("abc"));
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("rational arithmetic and ordering") {
    Rational a(1, 3);
    Rational b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == b);
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(b < a);
    CHECK(Rational(-7, 2).floor() == Rational(-4));
    CHECK(Rational(-7, 2).ceil() == Rational(-3));
    CHECK(Rational(7, 2).floor() == Rational(3));
    CHECK(rtpta::lcm(Rational(4), Rational(6)) == Rational(12));
    CHECK(rtpta::gcd(Rational(4), Rational(6)) == Rational(2));
}

TEST_CASE("rational overflow promotes to big values and back") {
    const std::int64_t big = std::numeric_limits<std::int64_t>::max();
    Rational x(big);
    Rational y = x * x;
    CHECK_FALSE(y.is_small());
    Rational z = y / x;
    CHECK(z == x);
    CHECK(z.is_small());
    Rational m = Rational(std::numeric_limits<std::int64_t>::min());
    CHECK(-(-m) == m);
    CHECK((m - Rational(1)) < m);
    CHECK(Rational(big, 3) + Rational(big, 5) == Rational(8) * Rational(big, 15));
}
