#include <random>

#include "doctest.h"
#include "ratsum/rational.hpp"

using namespace ratsum;

namespace {

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<long> den(1, 30);
    return Rational(num(rng), den(rng));
}

}  // namespace

TEST_CASE("basic arithmetic on exact rationals") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(2, 3) * Rational(3, 2) == Rational(1));
    CHECK(Rational(7, 8) / Rational(-1, 8) == Rational(-7));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK_THROWS_AS(Rational(1) / Rational(0), DivisionByZero);
    CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), DivisionByZero);
}

TEST_CASE("canonical form: lowest terms, positive denominator") {
    Rational r(BigInt(-4), BigInt(-6));
    CHECK(r.num() == 2);
    CHECK(r.den() == 3);
    Rational s(BigInt(3), BigInt(-9));
    CHECK(s.num() == -1);
    CHECK(s.den() == 3);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        Rational a = random_rational(rng);
        Rational b = random_rational(rng);
        for (const Rational& v : {a + b, a - b, a * b}) {
            BigInt g;
            mpz_gcd(g.get_mpz_t(), v.num().get_mpz_t(), v.den().get_mpz_t());
            CHECK(g == 1);
            CHECK(v.den() > 0);
        }
    }
}

TEST_CASE("field axioms hold exactly") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Rational a = random_rational(rng);
        Rational b = random_rational(rng);
        Rational c = random_rational(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        if (!b.is_zero()) CHECK(a / b * b == a);
    }
}

TEST_CASE("integer powers") {
    CHECK(Rational(2, 3).pow(3) == Rational(8, 27));
    CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
    CHECK(Rational(-1).pow(5) == Rational(-1));
    CHECK(Rational(5, 7).pow(0) == Rational(1));
    CHECK(Rational(0).pow(4) == Rational(0));
    CHECK_THROWS_AS(Rational(0).pow(-1), DivisionByZero);
}

TEST_CASE("string round trips") {
    CHECK(Rational::from_string("-7/3") == Rational(-7, 3));
    CHECK(Rational::from_string("42") == Rational(42));
    CHECK(Rational(-7, 3).to_string() == "-7/3");
    CHECK(Rational(6, 3).to_string() == "2");
    CHECK_THROWS_AS(Rational::from_string("x"), SyntaxError);
    CHECK_THROWS_AS(Rational::from_string(""), SyntaxError);
}

TEST_CASE("factorial values and recurrence") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(5) == 120);
    CHECK(factorial(25) == BigInt("15511210043330985984000000"));
    BigInt prev = factorial(0);
    for (std::uint64_t n = 1; n <= 200; ++n) {
        BigInt cur = factorial(n);
        CHECK(cur == BigInt(static_cast<unsigned long>(n)) * prev);
        prev = cur;
    }
    CHECK_THROWS_AS(factorial(3'000'000), CapacityError);
}

TEST_CASE("Gaussian rationals: componentwise arithmetic, no ordering") {
    GaussianRational i(Rational(0), Rational(1));
    GaussianRational z(Rational(1, 2), Rational(-1, 3));
    CHECK(i * i == GaussianRational(Rational(-1)));
    CHECK((z + i) - i == z);
    CHECK(z / z == GaussianRational(Rational(1)));
    CHECK(z * (GaussianRational(Rational(1)) / z) == GaussianRational(Rational(1)));
    CHECK(GaussianRational(Rational(3)).is_real());
    CHECK(!i.is_real());
    CHECK(i != z);
    CHECK_THROWS_AS(z / GaussianRational(Rational(0)), DivisionByZero);
}
