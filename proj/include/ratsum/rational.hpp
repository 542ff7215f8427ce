#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "ratsum/errors.hpp"

namespace ratsum {

using BigInt = mpz_class;

/**
 * Arbitrary-precision rational number, always stored in lowest terms with a
 * positive denominator. The universal scalar of the engine: every sequence
 * term, partial sum and interval endpoint is one of these.
 */
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(int n) : q_(n) {}            // NOLINT: implicit by design
    Rational(long n) : q_(n) {}           // NOLINT
    Rational(const BigInt& n) : q_(n) {}  // NOLINT

    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw DivisionByZero("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    Rational(long num, long den) : Rational(BigInt(num), BigInt(den)) {}

    /// Parses "p", "-p" or "p/q" (no whitespace). Throws SyntaxError.
    static Rational from_string(std::string_view text) {
        if (text.empty()) throw SyntaxError(0, "rational literal");
        mpq_class q;
        if (q.set_str(std::string(text), 10) != 0) throw SyntaxError(0, "rational literal");
        if (q.get_den() == 0) throw DivisionByZero("rational literal with zero denominator");
        q.canonicalize();
        Rational r;
        r.q_ = std::move(q);
        return r;
    }

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }

    bool is_zero() const { return q_ == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    bool is_negative() const { return q_ < 0; }
    int sign() const { return sgn(q_); }

    Rational abs() const {
        Rational r;
        r.q_ = ::abs(q_);
        return r;
    }

    Rational reciprocal() const {
        if (is_zero()) throw DivisionByZero("reciprocal of zero");
        Rational r;
        r.q_ = 1 / q_;
        return r;
    }

    /// Integer power; negative exponents invert (zero base then throws).
    Rational pow(long e) const {
        if (e == 0) return Rational(1);
        bool invert = e < 0;
        if (invert && is_zero()) throw DivisionByZero("zero raised to a negative power");
        unsigned long mag = invert ? static_cast<unsigned long>(-(e + 1)) + 1UL
                                   : static_cast<unsigned long>(e);
        Rational r;
        mpz_pow_ui(r.q_.get_num_mpz_t(), q_.get_num_mpz_t(), mag);
        mpz_pow_ui(r.q_.get_den_mpz_t(), q_.get_den_mpz_t(), mag);
        if (invert) r.q_ = 1 / r.q_;
        // num/den were already coprime, so powers are too; sign lives in num.
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.q_ + b.q_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.q_ - b.q_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.q_ * b.q_); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw DivisionByZero("rational division by zero");
        return Rational(a.q_ / b.q_);
    }
    Rational operator-() const { return Rational(-q_); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    /// Canonical text form: "p" when the denominator is 1, else "p/q".
    std::string to_string() const { return q_.get_str(); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.q_; }

    /// Total bits across numerator and denominator; the feasibility measure
    /// used by bit budgets.
    std::size_t bit_size() const {
        return mpz_sizeinbase(q_.get_num_mpz_t(), 2) + mpz_sizeinbase(q_.get_den_mpz_t(), 2);
    }

    const mpq_class& raw() const { return q_; }

  private:
    explicit Rational(mpq_class q) : q_(std::move(q)) {}

    mpq_class q_;
};

inline Rational operator+(long a, const Rational& b) { return Rational(a) + b; }
inline Rational operator-(long a, const Rational& b) { return Rational(a) - b; }
inline Rational operator*(long a, const Rational& b) { return Rational(a) * b; }

/// Exact n!. Arguments past the capacity limit raise CapacityError rather
/// than exhausting memory.
inline BigInt factorial(std::uint64_t n) {
    constexpr std::uint64_t kMaxFactorialArg = 2'000'000;
    if (n > kMaxFactorialArg)
        throw CapacityError("factorial(" + std::to_string(n) + ") exceeds the capacity limit");
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

/// Gaussian rational, an element of Q[i]. Componentwise equality and field
/// arithmetic; no ordering. Appears in verdict wording only; traces are real.
class GaussianRational {
  public:
    GaussianRational() = default;
    GaussianRational(Rational re, Rational im = Rational(0))
        : re_(std::move(re)), im_(std::move(im)) {}

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }
    bool is_real() const { return im_.is_zero(); }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        if (b.is_zero()) throw DivisionByZero("Gaussian rational division by zero");
        Rational n = b.re_ * b.re_ + b.im_ * b.im_;
        return {(a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n};
    }
    GaussianRational operator-() const { return {-re_, -im_}; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    std::string to_string() const {
        if (is_real()) return re_.to_string();
        return re_.to_string() + (im_.is_negative() ? "" : "+") + im_.to_string() + "i";
    }

  private:
    Rational re_;
    Rational im_;
};

}  // namespace ratsum
