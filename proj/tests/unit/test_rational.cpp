#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "formslab/errors.hpp"
#include "formslab/rational.hpp"

using formslab::OverflowError;
using formslab::Rational;

TEST_CASE("normal form") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6).num() == -1);
    CHECK(Rational(3, -6).den() == 2);
    CHECK(Rational(0, -5) == Rational(0));
    CHECK(Rational(0, -5).den() == 1);
    CHECK_THROWS_AS(Rational(1, 0), formslab::InputError);
    CHECK(Rational(-3, 2).str() == "-3/2");
    CHECK(Rational(4).str() == "4");
    std::ostringstream os;
    os << Rational(2, 6);
    CHECK(os.str() == "1/3");
}

TEST_CASE("arithmetic and order") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
    CHECK(-Rational(1, 2) == Rational(-1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(7, 3).to_double() == doctest::Approx(7.0 / 3.0));
    CHECK_THROWS_AS(Rational(1) / Rational(0), formslab::InputError);
}

TEST_CASE("overflow is reported") {
    const auto big = Rational(std::numeric_limits<std::int64_t>::max());
    CHECK_THROWS_AS(big + Rational(1), OverflowError);
    CHECK_THROWS_AS(big * Rational(2), OverflowError);
    CHECK_THROWS_AS(-Rational(std::numeric_limits<std::int64_t>::min()), OverflowError);
    // comparison of large values must not overflow
    CHECK(Rational(std::numeric_limits<std::int64_t>::max() - 1, std::numeric_limits<std::int64_t>::max()) < Rational(1));
}

TEST_CASE("property: field axioms on small rationals") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> num(-50, 50), den(1, 30);
    for (int trial = 0; trial < 2000; ++trial) {
        const Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == Rational(0));
        if (!(b == Rational(0))) CHECK((a / b) * b == a);
        CHECK(((a < b) + (b < a) + (a == b)) == 1);
        if (a < b) CHECK(a.to_double() < b.to_double());
    }
}
