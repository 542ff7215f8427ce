#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ratsum/errors.hpp"
#include "ratsum/interval.hpp"
#include "ratsum/rational.hpp"

namespace ratsum {

enum class ConstantClass { Rational, AlgebraicIrrational, Transcendental, Open };

inline const char* to_string(ConstantClass c) {
    switch (c) {
        case ConstantClass::Rational: return "Rational";
        case ConstantClass::AlgebraicIrrational: return "AlgebraicIrrational";
        case ConstantClass::Transcendental: return "Transcendental";
        case ConstantClass::Open: return "Open";
    }
    return "?";
}

/**
 * A catalog constant: a limit candidate with its arithmetic classification
 * and the citation backing that classification. Enclosures are produced by
 * enclose_constant(); `precision_cap` bounds the achievable precision
 * (0 means the general cap).
 */
struct ConstantEntry {
    std::string name;
    ConstantClass classification;
    std::string provenance;
    int precision_cap = 0;
};

inline constexpr int kMaxEnclosureBits = 256;
inline constexpr int kGammaPrecisionCap = 48;

inline const std::vector<ConstantEntry>& constant_catalog() {
    static const std::vector<ConstantEntry> entries = {
        {"pi", ConstantClass::Transcendental, "transcendental by the Lindemann theorem (1882)", 0},
        {"pi/4", ConstantClass::Transcendental,
         "transcendental: pi is (Lindemann theorem), and dividing by 4 preserves transcendence", 0},
        {"pi^2/6", ConstantClass::Transcendental,
         "transcendental: pi is (Lindemann theorem), and pi^2/6 is a nonzero rational multiple of "
         "a power of pi",
         0},
        {"e", ConstantClass::Transcendental, "transcendental by the Hermite theorem (1873)", 0},
        {"e-1", ConstantClass::Transcendental,
         "transcendental: e is (Hermite theorem), and shifting by a rational preserves "
         "transcendence",
         0},
        {"ln2", ConstantClass::Transcendental,
         "transcendental by the Hermite-Lindemann theorem (log of a rational != 0, 1)", 0},
        {"sqrt2", ConstantClass::AlgebraicIrrational,
         "algebraic irrational: root of x^2 - 2, irrational by the classical descent argument", 0},
        {"euler_gamma", ConstantClass::Open,
         "Euler's constant (1734); not proven transcendental or even irrational "
         "(cf. Sondow 2002 irrationality criteria)",
         kGammaPrecisionCap},
    };
    return entries;
}

inline const ConstantEntry* find_constant(std::string_view name) {
    for (const auto& e : constant_catalog())
        if (e.name == name) return &e;
    return nullptr;
}

/// True when `name` spells a rational literal ("p", "-p", "p/q").
inline bool is_rational_literal(std::string_view name) {
    if (name.empty()) return false;
    std::size_t i = (name[0] == '-' || name[0] == '+') ? 1 : 0;
    if (i >= name.size()) return false;
    bool seen_slash = false;
    bool digit_before = false, digit_after = false;
    for (; i < name.size(); ++i) {
        char c = name[i];
        if (c == '/') {
            if (seen_slash || !digit_before) return false;
            seen_slash = true;
        } else if (c >= '0' && c <= '9') {
            (seen_slash ? digit_after : digit_before) = true;
        } else {
            return false;
        }
    }
    return digit_before && (!seen_slash || digit_after);
}

namespace detail {

inline Rational pow2_inv(int bits) {
    return Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(bits));
}

// Alternating series sum(k>=0) (-1)^k / ((2k+1) u^(2k+1)); consecutive
// partial sums bracket the value.
inline Interval atan_inv_enclosure(unsigned long u, int bits) {
    Rational target = pow2_inv(bits + 2);
    Rational inv_u(BigInt(1), BigInt(u));
    Rational inv_u2 = inv_u * inv_u;
    Rational power = inv_u;  // u^-(2k+1)
    Rational sum(0);
    int sign = 1;
    for (unsigned long k = 0;; ++k) {
        Rational term = power / Rational(BigInt(2 * k + 1));
        if (term <= target) {
            Rational next = sign > 0 ? term : -term;
            return Interval::hull(sum, sum + next);
        }
        sum += sign > 0 ? term : -term;
        sign = -sign;
        power *= inv_u2;
    }
}

// atanh(t) for rational 0 <= t < 1/2: positive terms with ratio <= t^2.
inline Interval atanh_enclosure(const Rational& t, int bits) {
    if (t.is_zero()) return Interval(Rational(0));
    Rational target = pow2_inv(bits + 2);
    Rational t2 = t * t;
    Rational tail_factor = t2 / (Rational(1) - t2);
    Rational power = t;
    Rational sum(0);
    for (unsigned long k = 0;; ++k) {
        Rational term = power / Rational(BigInt(2 * k + 1));
        sum += term;
        if (term * tail_factor <= target) return {sum, sum + term * tail_factor};
        power *= t2;
    }
}

inline Interval ln2_enclosure(int bits) {
    Interval a = atanh_enclosure(Rational(1, 3), bits + 2);
    return a + a;
}

/// ln x for rational x > 0, via x = m * 2^e with m in [1,2) and
/// ln m = 2 atanh((m-1)/(m+1)).
inline Interval ln_enclosure(const Rational& x, int bits) {
    if (x.sign() <= 0) throw Error("ln of a non-positive value");
    Rational m = x;
    long e = 0;
    while (m >= Rational(2)) {
        m = m / Rational(2);
        ++e;
    }
    while (m < Rational(1)) {
        m = m * Rational(2);
        --e;
    }
    Interval at = atanh_enclosure((m - Rational(1)) / (m + Rational(1)), bits + 4);
    Interval ln_m = at + at;
    if (e == 0) return ln_m;
    int extra = 2;
    for (long a = e < 0 ? -e : e; a > 0; a >>= 1) ++extra;
    Interval l2 = ln2_enclosure(bits + extra);
    Interval scaled = l2 * Interval(Rational(e));
    return ln_m + scaled;
}

inline Interval pi_enclosure(int bits) {
    Interval a5 = atan_inv_enclosure(5, bits + 7);
    Interval a239 = atan_inv_enclosure(239, bits + 5);
    return a5 * Interval(Rational(16)) - a239 * Interval(Rational(4));
}

inline Interval e_enclosure(int bits) {
    Rational target = pow2_inv(bits + 2);
    Rational term(1);  // 1/k!
    Rational sum(1);   // k = 0 term
    for (unsigned long k = 1;; ++k) {
        term = term / Rational(BigInt(k));
        sum += term;
        // tail < term * (k+2)/((k+1)^2 - stays below term/k for k >= 2
        Rational bound = term * Rational(BigInt(k + 2), BigInt(k + 1)) / Rational(BigInt(k + 1));
        if (bound <= target) return {sum, sum + bound};
    }
}

/// Newton from 3/2; u >= sqrt(2) >= 2/u at every step, so [2/u, u] encloses.
inline Interval sqrt2_enclosure(int bits) {
    Rational target = pow2_inv(bits);
    Rational x(3, 2);
    for (;;) {
        Rational lo = Rational(2) / x;
        if (x - lo <= target) return {lo, x};
        x = (x + lo) / Rational(2);
    }
}

/// Euler-Maclaurin refinement of H_n - ln n at n = 256; remainder bounded by
/// the first omitted Bernoulli term. Precision capped at kGammaPrecisionCap.
inline Interval gamma_enclosure(int bits) {
    if (bits > kGammaPrecisionCap)
        throw PrecisionUnachievable("euler_gamma enclosure is capped at " +
                                    std::to_string(kGammaPrecisionCap) + " bits");
    constexpr unsigned long n = 256;
    Rational h(0);
    for (unsigned long j = 1; j <= n; ++j) h += Rational(BigInt(1), BigInt(j));
    Interval ln_n = ln_enclosure(Rational(BigInt(n)), 120);
    Rational n2 = Rational(BigInt(n)) * Rational(BigInt(n));
    // B_2.. B_10 terms of gamma = H_n - ln n - 1/(2n) + sum B_2k/(2k n^2k) +- R
    const Rational bernoulli[] = {Rational(1, 6), Rational(-1, 30), Rational(1, 42),
                                  Rational(-1, 30), Rational(5, 66)};
    Rational correction = -Rational(1) / (Rational(2) * Rational(BigInt(n)));
    Rational npow = n2;
    for (int k = 1; k <= 5; ++k) {
        correction += bernoulli[k - 1] / (Rational(2 * k) * npow);
        npow *= n2;
    }
    Rational remainder = Rational(691, 2730).abs() / (Rational(12) * npow);
    Interval est = Interval(h + correction) - ln_n;
    return {est.lo() - remainder, est.hi() + remainder};
}

struct ConstantCacheEntry {
    Interval best;
    bool present = false;
};

inline Interval compute_constant(const std::string& name, int bits) {
    if (name == "pi") return pi_enclosure(bits);
    if (name == "pi/4") return pi_enclosure(bits + 2) * Interval(Rational(1, 4));
    if (name == "pi^2/6") {
        Interval p = pi_enclosure(bits + 4);
        return p * p / Interval(Rational(6));
    }
    if (name == "e") return e_enclosure(bits);
    if (name == "e-1") return e_enclosure(bits + 1) - Interval(Rational(1));
    if (name == "ln2") return ln2_enclosure(bits);
    if (name == "sqrt2") return sqrt2_enclosure(bits);
    if (name == "euler_gamma") return gamma_enclosure(bits);
    throw UnknownConstant(name);
}

}  // namespace detail

/**
 * Rigorous enclosure of a catalog constant (or of a rational literal, as a
 * point interval). Guarantees width <= 2^-precision_bits and nesting:
 * within one process, later enclosures of the same name are contained in
 * earlier ones (the cache keeps the running intersection).
 */
inline Interval enclose_constant(std::string_view name, int precision_bits) {
    std::string key(name);
    if (is_rational_literal(key)) return Interval(Rational::from_string(key));
    const ConstantEntry* entry = find_constant(key);
    if (entry == nullptr) throw UnknownConstant(key);
    int cap = entry->precision_cap > 0 ? entry->precision_cap : kMaxEnclosureBits;
    if (precision_bits > cap)
        throw PrecisionUnachievable("'" + key + "' enclosure is capped at " + std::to_string(cap) +
                                    " bits");
    if (precision_bits < 1) precision_bits = 1;

    static std::mutex mu;
    static std::map<std::string, detail::ConstantCacheEntry> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[key];
    if (slot.present && slot.best.width() <= detail::pow2_inv(precision_bits)) return slot.best;
    Interval fresh = detail::compute_constant(key, precision_bits);
    if (slot.present) {
        auto merged = slot.best.intersect(fresh);
        slot.best = merged ? *merged : fresh;
    } else {
        slot.best = fresh;
        slot.present = true;
    }
    return slot.best;
}

/// Classification of a catalog name or rational literal.
inline ConstantClass constant_classification(std::string_view name) {
    if (is_rational_literal(name)) return ConstantClass::Rational;
    const ConstantEntry* entry = find_constant(name);
    if (entry == nullptr) throw UnknownConstant(std::string(name));
    return entry->classification;
}

}  // namespace ratsum
