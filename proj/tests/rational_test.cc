#include "rational.h"

#include "doctest.h"

#include <stdexcept>
#include <string>

using namespace nplan;

TEST_CASE("construction always reduces to canonical form") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(1, -2));
    CHECK(Rational(0, 5) == Rational(0));
    CHECK(Rational(6, 3).is_integer());
    CHECK(Rational(2, 4).to_string() == "1/2");
    CHECK(Rational(-6, 4).to_string() == "-3/2");
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("parse handles integers, decimals, fractions") {
    CHECK(Rational::parse("42") == Rational(42));
    CHECK(Rational::parse("-17") == Rational(-17));
    CHECK(Rational::parse("-3.5") == Rational(-7, 2));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("7/2") == Rational(7, 2));
    CHECK(Rational::parse("-6/4") == Rational(-3, 2));
    CHECK(Rational::parse("0") == Rational(0));
    CHECK(Rational::parse("10.10") == Rational(101, 10));
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1.2.3"), std::invalid_argument);
}

TEST_CASE("arithmetic is exact, no drift") {
    Rational third(1, 3);
    CHECK(third + third + third == Rational(1));
    CHECK(Rational::parse("0.1") + Rational::parse("0.2") ==
          Rational::parse("0.3"));
    CHECK(Rational(7, 2) * Rational(2, 7) == Rational(1));
    CHECK(Rational(1) / Rational(3) == third);
    CHECK(Rational(5) - Rational(8) == Rational(-3));

    Rational x(1);
    for (int i = 0; i < 50; ++i)
        x = x / Rational(2);
    for (int i = 0; i < 50; ++i)
        x = x * Rational(2);
    CHECK(x == Rational(1));

    Rational acc;
    acc += Rational(5, 6);
    acc -= Rational(1, 6);
    acc *= Rational(3);
    acc = acc / Rational(2);
    CHECK(acc == Rational(1));
}

TEST_CASE("comparisons and sign") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(0));
    CHECK(Rational(3, 2) > Rational(1));
    CHECK(Rational(2, 4) <= Rational(1, 2));
    CHECK(Rational(2, 4) >= Rational(1, 2));
    CHECK(Rational(-5).sign() == -1);
    CHECK(Rational(0).sign() == 0);
    CHECK(Rational(1, 7).sign() == 1);
    CHECK(Rational(0).is_zero());
    CHECK_FALSE(Rational(1, 1000000).is_zero());
}

TEST_CASE("equal values hash equally regardless of construction") {
    CHECK(Rational(1, 2).hash() == Rational(2, 4).hash());
    CHECK(Rational::parse("0.5").hash() == Rational(1, 2).hash());
    CHECK((Rational(1, 3) + Rational(1, 6)).hash() == Rational(1, 2).hash());
}

TEST_CASE("to_string round-trips through parse") {
    for (const char *text : {"0", "3", "-7/2", "1/3", "-12", "1000001/7"}) {
        Rational r = Rational::parse(text);
        CHECK(Rational::parse(r.to_string()) == r);
        CHECK(r.to_string() == text);
    }
}

TEST_CASE("to_double approximates") {
    CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5));
    CHECK(Rational(-7, 4).to_double() == doctest::Approx(-1.75));
}
