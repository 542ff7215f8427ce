#include "doctest.h"
#include "ratsum/constants.hpp"

using namespace ratsum;

namespace {

Rational dec(const char* digits) { return Rational::from_string(digits); }

/// enclosure lies inside the known decimal bounds -> correct digits and
/// correct containment at once
void check_within(const char* name, int bits, const Rational& lo, const Rational& hi) {
    Interval iv = enclose_constant(name, bits);
    CHECK(iv.width() <= Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(bits)));
    CHECK(lo <= iv.lo());
    CHECK(iv.hi() <= hi);
}

}  // namespace

TEST_CASE("catalog enclosures match the classical digits") {
    check_within("pi", 64, dec("314159265358979323/100000000000000000"),
                 dec("314159265358979324/100000000000000000"));
    check_within("pi/4", 64, dec("78539816339744830/100000000000000000"),
                 dec("78539816339744831/100000000000000000"));
    check_within("pi^2/6", 64, dec("164493406684822643/100000000000000000"),
                 dec("164493406684822644/100000000000000000"));
    check_within("e", 64, dec("271828182845904523/100000000000000000"),
                 dec("271828182845904524/100000000000000000"));
    check_within("e-1", 64, dec("171828182845904523/100000000000000000"),
                 dec("171828182845904524/100000000000000000"));
    check_within("ln2", 64, dec("69314718055994530/100000000000000000"),
                 dec("69314718055994531/100000000000000000"));
    check_within("sqrt2", 64, dec("141421356237309504/100000000000000000"),
                 dec("141421356237309505/100000000000000000"));
    check_within("euler_gamma", 48, dec("57721566490153286/100000000000000000"),
                 dec("57721566490153287/100000000000000000"));
}

TEST_CASE("sqrt2 enclosure sits just under 577/408") {
    // 577/408 is the Newton iterate from 3/2: (577/408)^2 - 2 == 1/166464
    CHECK(Rational(577, 408) * Rational(577, 408) - Rational(2) == Rational(1, 166464));
    Interval iv = enclose_constant("sqrt2", 20);
    CHECK(iv.width() <= Rational(BigInt(1), BigInt(1) << 20));
    CHECK(iv.hi() <= Rational(577, 408));
    CHECK(Rational(577, 408) - iv.lo() < Rational(1, 100000));
}

TEST_CASE("rational literals enclose as points") {
    Interval half = enclose_constant("1/2", 64);
    CHECK(half == Interval(Rational(1, 2)));
    CHECK(enclose_constant("-7/3", 16) == Interval(Rational(-7, 3)));
    CHECK(enclose_constant("42", 16) == Interval(Rational(42)));
    CHECK(constant_classification("1/2") == ConstantClass::Rational);
}

TEST_CASE("classification and provenance live in the catalog") {
    CHECK(constant_classification("pi") == ConstantClass::Transcendental);
    CHECK(constant_classification("sqrt2") == ConstantClass::AlgebraicIrrational);
    CHECK(constant_classification("euler_gamma") == ConstantClass::Open);
    CHECK(find_constant("ln2")->provenance.find("Hermite-Lindemann") != std::string::npos);
    CHECK(find_constant("e")->provenance.find("Hermite") != std::string::npos);
    CHECK_THROWS_AS(enclose_constant("tau", 32), UnknownConstant);
    CHECK_THROWS_AS(constant_classification("tau"), UnknownConstant);
}

TEST_CASE("nestedness: higher precision stays inside lower") {
    for (const char* name : {"pi", "pi/4", "pi^2/6", "e", "e-1", "ln2", "sqrt2"}) {
        for (int p : {32, 64, 96}) {
            Interval coarse = enclose_constant(name, p);
            Interval fine = enclose_constant(name, p + 8);
            CHECK(coarse.contains(fine));
        }
    }
    for (int p : {16, 32, 40}) {
        Interval coarse = enclose_constant("euler_gamma", p);
        Interval fine = enclose_constant("euler_gamma", p + 8);
        CHECK(coarse.contains(fine));
    }
}

TEST_CASE("gamma precision is capped") {
    CHECK_THROWS_AS(enclose_constant("euler_gamma", kGammaPrecisionCap + 1),
                    PrecisionUnachievable);
    CHECK_NOTHROW(enclose_constant("euler_gamma", kGammaPrecisionCap));
}

TEST_CASE("high-precision enclosures are attainable for the closed catalog") {
    Interval pi256 = enclose_constant("pi", 256);
    CHECK(pi256.width() <= Rational(BigInt(1), BigInt(1) << 256));
    Interval s = enclose_constant("sqrt2", 200);
    Rational mid = s.mid();
    CHECK((mid * mid - Rational(2)).abs() < Rational(BigInt(1), BigInt(1) << 190));
}
