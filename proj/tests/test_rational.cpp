#include <catch_amalgamated.hpp>

#include "toroidalkit/rational.hpp"

#include <limits>

using toroidalkit::Rational;

TEST_CASE("rational normalizes to lowest terms") {
    Rational a(6, -4);
    CHECK(a.str() == "-3/2");
    CHECK(Rational(0, 7) == Rational());
    CHECK(Rational(0, 7).str() == "0");
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("rational parse") {
    CHECK(Rational::parse("2/3") == Rational(2, 3));
    CHECK(Rational::parse(" -5 ") == Rational(-5));
    CHECK(Rational::parse("+4/6") == Rational(2, 3));
    CHECK_THROWS(Rational::parse("4/-2"));
    CHECK_THROWS(Rational::parse("1/0"));
    CHECK_THROWS(Rational::parse("x"));
    CHECK_THROWS(Rational::parse(""));
}

TEST_CASE("rational spills past int64 and demotes back") {
    Rational big(std::numeric_limits<std::int64_t>::max());
    Rational sq = big * big;
    CHECK(sq.str() == "85070591730234615847396907784232501249");  // (2^63-1)^2
    Rational back = sq / big;
    CHECK(back == big);
    CHECK(back.to_int64() == std::numeric_limits<std::int64_t>::max());
    CHECK((sq - sq).is_zero());
    Rational lo(std::numeric_limits<std::int64_t>::min());
    CHECK((-lo).str() == "9223372036854775808");
    CHECK(-(-lo) == lo);
}

TEST_CASE("rational arithmetic and ordering") {
    Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == b);
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(b < a);
    CHECK(Rational(-1, 2) < Rational());
    CHECK_THROWS(a / Rational());
    CHECK_THROWS(a.to_int64());
}
