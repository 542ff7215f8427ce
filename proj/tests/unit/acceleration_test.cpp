#include <random>

#include "doctest.h"
#include "ratsum/acceleration.hpp"

using namespace ratsum;

TEST_CASE("wynn epsilon on geometric partial sums") {
    std::vector<Rational> half = {Rational(1, 2), Rational(3, 4), Rational(7, 8)};
    std::vector<Rational> diag = wynn_epsilon(half);
    CHECK(diag.back() == Rational(1));
    // the classic Aitken form of eps_2 agrees
    Rational eps2 = half[2] - (half[2] - half[1]) * (half[2] - half[1]) /
                                  (half[2] - Rational(2) * half[1] + half[0]);
    CHECK(diag.back() == eps2);

    std::vector<Rational> third = {Rational(1, 3), Rational(4, 9), Rational(13, 27)};
    CHECK(wynn_epsilon(third).back() == Rational(1, 2));
}

TEST_CASE("wynn epsilon on a constant sequence") {
    std::vector<Rational> c = {Rational(5, 7), Rational(5, 7), Rational(5, 7)};
    std::vector<Rational> diag = wynn_epsilon(c);
    CHECK(diag.size() == 1);
    CHECK(diag[0] == Rational(5, 7));
}

TEST_CASE("wynn epsilon recovers rank-1 geometric limits exactly from 3 sums") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(2, 12);
    int done = 0;
    while (done < 50) {
        Rational r(num(rng), den(rng));
        if (r.is_zero() || !(r.abs() < Rational(1))) continue;
        ++done;
        Rational s(0), p(1);
        std::vector<Rational> sums;
        for (int j = 1; j <= 3; ++j) {
            p *= r;
            s += p;
            sums.push_back(s);
        }
        CHECK(wynn_epsilon(sums).back() == r / (Rational(1) - r));
    }
}

TEST_CASE("wynn epsilon degenerate inputs") {
    CHECK_THROWS_AS(wynn_epsilon({Rational(1), Rational(2)}), InsufficientData);
    CHECK_THROWS_AS(wynn_epsilon({Rational(1), Rational(1), Rational(2)}), DegenerateTable);
}

TEST_CASE("aitken delta squared") {
    std::vector<Rational> half = {Rational(1, 2), Rational(3, 4), Rational(7, 8), Rational(15, 16)};
    std::vector<Rational> out = aitken_delta_squared(half);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == Rational(1));
    CHECK(out[1] == Rational(1));
    std::vector<Rational> stages = iterated_aitken(half);
    CHECK(stages.back() == Rational(1));
    CHECK_THROWS_AS(aitken_delta_squared({Rational(1), Rational(2), Rational(3)}),
                    DegenerateTable);  // arithmetic progression, zero second difference
}

TEST_CASE("euler transform brackets the Leibniz limit") {
    // terms (-1)^(j-1)/(2j-1)
    std::vector<Rational> terms;
    for (long j = 1; j <= 4; ++j)
        terms.push_back(Rational(j % 2 == 1 ? 1 : -1, 2 * j - 1));
    EulerAccelResult r = euler_transform(terms);
    CHECK(r.accelerated.front() == Rational(76, 105));  // raw S(4)
    Rational s5 = Rational(76, 105) + Rational(1, 9);
    CHECK(Interval::hull(Rational(76, 105), s5).contains(r.bracket));
    // pi/4 is 0.785398...; the bracket from 4 terms must contain it
    CHECK(r.bracket.contains(Rational(785398, 1000000)));
}

TEST_CASE("euler transform narrows fast on alt harmonic") {
    std::vector<Rational> terms;
    for (long j = 1; j <= 24; ++j) terms.push_back(Rational(j % 2 == 1 ? 1 : -1, j));
    EulerAccelResult r = euler_transform(terms);
    CHECK(r.levels_used >= 16);
    CHECK(r.bracket.width() < Rational(BigInt(1), BigInt(1) << 20));
    // ln 2 = 0.693147180559945...
    CHECK(r.bracket.contains(Rational(BigInt("693147180559945"), BigInt("1000000000000000"))));
}

TEST_CASE("euler transform rejects non-alternating input") {
    try {
        euler_transform({Rational(1)});
        FAIL("expected NotAlternating");
    } catch (const NotAlternating& e) {
        CHECK(e.index == 1);
    }
    try {
        euler_transform({Rational(1), Rational(1, 2)});
        FAIL("expected NotAlternating");
    } catch (const NotAlternating& e) {
        CHECK(e.index == 2);
    }
    try {
        euler_transform({Rational(1), Rational(-2)});  // magnitudes increase
        FAIL("expected NotAlternating");
    } catch (const NotAlternating& e) {
        CHECK(e.index == 2);
    }
    CHECK_THROWS_AS(euler_transform({Rational(1), Rational(0), Rational(1)}), NotAlternating);
}

TEST_CASE("wynn epsilon kills two geometric transients exactly from 5 values") {
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<long> num(-5, 5);
    std::uniform_int_distribution<long> den(2, 7);
    int done = 0;
    while (done < 30) {
        Rational limit(num(rng), den(rng));
        Rational a(num(rng), den(rng)), b(num(rng), den(rng));
        Rational r1(num(rng), den(rng)), r2(num(rng), den(rng));
        if (a.is_zero() || b.is_zero() || r1.is_zero() || r2.is_zero()) continue;
        if (r1 == r2 || !(r1.abs() < Rational(1)) || !(r2.abs() < Rational(1))) continue;
        std::vector<Rational> s;
        Rational p1(1), p2(1);
        bool degenerate = false;
        for (int n = 1; n <= 5; ++n) {
            p1 *= r1;
            p2 *= r2;
            s.push_back(limit + a * p1 + b * p2);
            if (n > 1 && s[static_cast<std::size_t>(n - 1)] == s[static_cast<std::size_t>(n - 2)])
                degenerate = true;  // zero divided difference: outside the precondition
        }
        if (degenerate) continue;
        ++done;
        std::vector<Rational> diag = wynn_epsilon(s);
        CHECK(diag.back() == limit);
    }
}
