#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>

#include "ratsum/rational.hpp"

namespace ratsum {

/**
 * Closed interval with exact rational endpoints. All arithmetic is outward
 * correct: the result contains the exact image of the operand sets. Since
 * endpoints stay in Q there is no rounding; widening happens only when
 * round_outward() is asked for explicitly (denominator capping).
 */
class Interval {
  public:
    Interval() : lo_(0), hi_(0) {}
    Interval(Rational point) : lo_(point), hi_(std::move(point)) {}  // NOLINT
    Interval(long point) : Interval(Rational(point)) {}              // NOLINT

    Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (hi_ < lo_) throw Error("interval endpoints out of order");
    }

    static Interval hull(const Rational& a, const Rational& b) {
        return a <= b ? Interval(a, b) : Interval(b, a);
    }
    static Interval hull(const Interval& a, const Interval& b) {
        return {std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_)};
    }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    Rational mid() const { return (lo_ + hi_) / Rational(2); }
    bool is_point() const { return lo_ == hi_; }

    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_zero() const { return contains(Rational(0)); }
    bool intersects(const Interval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

    std::optional<Interval> intersect(const Interval& o) const {
        Rational l = std::max(lo_, o.lo_);
        Rational h = std::min(hi_, o.hi_);
        if (h < l) return std::nullopt;
        return Interval(l, h);
    }

    /// [min |x|, max |x|] over the interval.
    Interval abs() const {
        if (lo_.sign() >= 0) return *this;
        if (hi_.sign() <= 0) return {-hi_, -lo_};
        return {Rational(0), std::max(-lo_, hi_)};
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return {a.lo_ + b.lo_, a.hi_ + b.hi_};
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        return {a.lo_ - b.hi_, a.hi_ - b.lo_};
    }
    Interval operator-() const { return {-hi_, -lo_}; }

    friend Interval operator*(const Interval& a, const Interval& b) {
        Rational p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
        return {std::min(std::min(p1, p2), std::min(p3, p4)),
                std::max(std::max(p1, p2), std::max(p3, p4))};
    }

    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.contains_zero())
            throw DivisionByZeroInterval("interval division by an interval containing zero");
        return a * Interval(b.hi_.reciprocal(), b.lo_.reciprocal());
    }

    Interval& operator+=(const Interval& o) {
        lo_ += o.lo_;
        hi_ += o.hi_;
        return *this;
    }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }
    friend bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

    /// Certain order: every point of *this is below every point of `o`.
    bool strictly_below(const Interval& o) const { return hi_ < o.lo_; }
    bool below_or_equal(const Interval& o) const { return hi_ <= o.lo_; }

    /// Widens endpoints outward to multiples of 2^-fraction_bits, capping
    /// denominator growth at the cost of at most 2^(1-fraction_bits) width.
    Interval round_outward(unsigned fraction_bits) const {
        return {round_down(lo_, fraction_bits), round_up(hi_, fraction_bits)};
    }

    std::string to_string() const { return "[" + lo_.to_string() + ", " + hi_.to_string() + "]"; }

    friend std::ostream& operator<<(std::ostream& os, const Interval& iv) {
        return os << iv.to_string();
    }

    static Rational round_down(const Rational& x, unsigned fraction_bits) {
        BigInt scaled = floor_div(x.num() << fraction_bits, x.den());
        return Rational(scaled, BigInt(1) << fraction_bits);
    }
    static Rational round_up(const Rational& x, unsigned fraction_bits) {
        BigInt scaled = -floor_div(-(x.num() << fraction_bits), x.den());
        return Rational(scaled, BigInt(1) << fraction_bits);
    }

  private:
    static BigInt floor_div(const BigInt& a, const BigInt& b) {
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return q;
    }

    Rational lo_;
    Rational hi_;
};

/// Decimal rendering with correct bracketed trailing digits, e.g.
/// "0.69314718[0,1]" for an enclosure of ln 2. `digits` counts fractional
/// decimal digits; endpoints are rounded outward.
inline std::string decimal_enclosure(const Interval& iv, unsigned digits) {
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    auto scaled_floor = [&](const Rational& x) {
        BigInt q;
        BigInt n = x.num() * scale;
        BigInt d = x.den();
        mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        return q;
    };
    auto scaled_ceil = [&](const Rational& x) {
        BigInt q;
        BigInt n = x.num() * scale;
        BigInt d = x.den();
        mpz_cdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        return q;
    };
    BigInt lo = scaled_floor(iv.lo());
    BigInt hi = scaled_ceil(iv.hi());

    auto render = [&](const BigInt& v) {
        bool neg = v < 0;
        BigInt a = neg ? BigInt(-v) : v;
        std::string s = a.get_str();
        if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
        s.insert(s.size() - digits, ".");
        return (neg ? "-" : "") + s;
    };

    std::string slo = render(lo);
    std::string shi = render(hi);
    if (slo == shi) return slo;
    if (slo.size() == shi.size()) {
        std::size_t common = 0;
        while (common < slo.size() && slo[common] == shi[common]) ++common;
        if (common > 0 && slo.find('.') < common) {
            return slo.substr(0, common) + "[" + slo.substr(common) + "," + shi.substr(common) + "]";
        }
    }
    return "[" + slo + ", " + shi + "]";
}

}  // namespace ratsum
