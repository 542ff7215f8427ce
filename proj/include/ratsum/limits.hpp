#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratsum/acceleration.hpp"
#include "ratsum/errors.hpp"
#include "ratsum/interval.hpp"
#include "ratsum/rational.hpp"
#include "ratsum/summation.hpp"

namespace ratsum {

enum class Tendency { DivergesToInfinity, TendsToZero, ConvergesNonzero, Oscillates, Unknown };

inline const char* to_string(Tendency t) {
    switch (t) {
        case Tendency::DivergesToInfinity: return "DivergesToInfinity";
        case Tendency::TendsToZero: return "TendsToZero";
        case Tendency::ConvergesNonzero: return "ConvergesNonzero";
        case Tendency::Oscillates: return "Oscillates";
        case Tendency::Unknown: return "Unknown";
    }
    return "?";
}

/**
 * Grid-scale growth judgment. Tendencies are evidence from exact trend
 * analysis of the trace tail, never proofs; the thresholds below are the
 * explicit knobs that make the judgment reproducible.
 */
struct GrowthVerdict {
    Tendency tendency = Tendency::Unknown;
    std::optional<bool> sublinear;        // set only with DivergesToInfinity
    std::optional<bool> superreciprocal;  // set only with TendsToZero
    std::optional<Rational> exponent_estimate;
    std::vector<std::string> notes;
};

struct GrowthOptions {
    std::size_t trend_window = 5;
    Rational diverge_magnitude{1024};      // 2^10
    Rational zero_magnitude{1, 1024};      // 2^-10
    Rational diverge_ratio{15, 16};        // increment ratios >= this: not summable at grid scale
    Rational converge_ratio{3, 4};         // increment ratios <= this: geometric-like convergence
};

namespace detail {

inline bool certainly_less(const Interval& a, const Interval& b) { return a.hi() < b.lo(); }
inline bool certainly_leq(const Interval& a, const Interval& b) { return a.hi() <= b.lo(); }

inline int certain_sign(const Interval& v) {
    if (v.lo().sign() > 0) return 1;
    if (v.hi().sign() < 0) return -1;
    return 0;  // zero or undecided
}

/// Exact dyadic approximation of log2|x| (53-bit mantissa), for the
/// advisory exponent fit only.
inline std::optional<Rational> dyadic_log2_abs(const Rational& x) {
    if (x.is_zero()) return std::nullopt;
    long num_exp = 0, den_exp = 0;
    double num_m = mpz_get_d_2exp(&num_exp, x.num().get_mpz_t());
    double den_m = mpz_get_d_2exp(&den_exp, x.den().get_mpz_t());
    double log2_mant = std::log2(std::fabs(num_m) / den_m);
    mpq_class approx(log2_mant + static_cast<double>(num_exp - den_exp));
    return Rational::from_string(approx.get_str());
}

}  // namespace detail

inline GrowthVerdict growth_classify(const SumTrace& trace, const GrowthOptions& opt = {}) {
    const auto& values = trace.values;
    if (values.size() < 8) throw InsufficientData("growth_classify needs at least 8 trace points");
    std::size_t window = opt.trend_window + 1;
    if (window > values.size()) window = values.size();
    std::size_t start = values.size() - window;

    GrowthVerdict verdict;
    auto note = [&verdict](std::string s) { verdict.notes.push_back(std::move(s)); };

    std::vector<Interval> tail(values.begin() + static_cast<std::ptrdiff_t>(start), values.end());
    std::vector<Interval> diffs;
    for (std::size_t i = 0; i + 1 < tail.size(); ++i) diffs.push_back(tail[i + 1] - tail[i]);

    bool increasing = true, decreasing = true;
    for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
        increasing = increasing && detail::certainly_less(tail[i], tail[i + 1]);
        decreasing = decreasing && detail::certainly_less(tail[i + 1], tail[i]);
    }

    bool ratios_ge_diverge = true;   // |D_k| >= diverge_ratio * |D_{k-1}|
    bool ratios_le_converge = true;  // |D_k| <= converge_ratio * |D_{k-1}|
    for (std::size_t i = 1; i < diffs.size(); ++i) {
        Interval prev = diffs[i - 1].abs();
        Interval cur = diffs[i].abs();
        ratios_ge_diverge =
            ratios_ge_diverge && cur.lo() >= opt.diverge_ratio * prev.hi();
        ratios_le_converge =
            ratios_le_converge && cur.hi() <= opt.converge_ratio * prev.lo();
    }

    bool diff_alternating = !diffs.empty();
    {
        int prev_sign = 0;
        for (const auto& d : diffs) {
            int s = detail::certain_sign(d);
            if (s == 0 || (prev_sign != 0 && s != -prev_sign)) {
                diff_alternating = false;
                break;
            }
            prev_sign = s;
        }
    }
    bool diff_abs_decreasing = true;
    for (std::size_t i = 1; i < diffs.size(); ++i)
        diff_abs_decreasing =
            diff_abs_decreasing && detail::certainly_less(diffs[i].abs(), diffs[i - 1].abs());

    bool all_small = true;
    for (const auto& v : tail) all_small = all_small && v.abs().hi() < opt.zero_magnitude;
    bool magnitude_increasing = true;
    for (std::size_t i = 0; i + 1 < tail.size(); ++i)
        magnitude_increasing =
            magnitude_increasing && detail::certainly_less(tail[i].abs(), tail[i + 1].abs());
    bool final_above_zero_mag = tail.back().abs().lo() > opt.zero_magnitude;

    if ((increasing || decreasing) && ratios_ge_diverge) {
        verdict.tendency = Tendency::DivergesToInfinity;
        note("monotone tail with increment ratios >= " + opt.diverge_ratio.to_string() +
             " over " + std::to_string(diffs.size()) + " steps: not summable at grid scale");
    } else if (all_small && !magnitude_increasing) {
        verdict.tendency = Tendency::TendsToZero;
        note("tail magnitudes stay below " + opt.zero_magnitude.to_string() +
             " and do not grow: vanishing at grid scale");
    } else if ((ratios_le_converge || (diff_alternating && diff_abs_decreasing)) &&
               final_above_zero_mag) {
        verdict.tendency = Tendency::ConvergesNonzero;
        note("tail increments shrink geometrically (ratio <= " + opt.converge_ratio.to_string() +
             " or alternating with decreasing magnitude): converging at grid scale");
    } else if (diff_alternating) {
        verdict.tendency = Tendency::Oscillates;
        note("tail increments alternate without shrinking: oscillation at grid scale");
    } else {
        verdict.tendency = Tendency::Unknown;
        note("tail trend matches no registered pattern");
    }

    // Criterion flags of the not-a-rational-function tests: S(n)/n -> 0
    // alongside divergence, n*S(n) -> infinity alongside vanishing.
    if (verdict.tendency == Tendency::DivergesToInfinity) {
        bool dec = true;
        for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
            Interval a = tail[i].abs() / Interval(Rational(BigInt(
                             static_cast<unsigned long>(trace.grid.indices[start + i]))));
            Interval b = tail[i + 1].abs() / Interval(Rational(BigInt(
                             static_cast<unsigned long>(trace.grid.indices[start + i + 1]))));
            dec = dec && detail::certainly_less(b, a);
        }
        Interval final_q = tail.back().abs() /
                           Interval(Rational(BigInt(static_cast<unsigned long>(trace.grid.max_index()))));
        verdict.sublinear = dec && final_q.hi() < opt.zero_magnitude;
        note(*verdict.sublinear
                 ? "S(n)/n decreases across the tail and ends below " + opt.zero_magnitude.to_string()
                 : "S(n)/n does not decrease below " + opt.zero_magnitude.to_string() +
                       " across the tail");
    }
    if (verdict.tendency == Tendency::TendsToZero) {
        bool inc = true;
        for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
            Interval a = tail[i].abs() * Interval(Rational(BigInt(
                             static_cast<unsigned long>(trace.grid.indices[start + i]))));
            Interval b = tail[i + 1].abs() * Interval(Rational(BigInt(
                             static_cast<unsigned long>(trace.grid.indices[start + i + 1]))));
            inc = inc && detail::certainly_less(a, b);
        }
        Interval final_p = tail.back().abs() *
                           Interval(Rational(BigInt(static_cast<unsigned long>(trace.grid.max_index()))));
        verdict.superreciprocal = inc && final_p.lo() > opt.diverge_magnitude;
        note(*verdict.superreciprocal
                 ? "n*S(n) increases across the tail and ends above " +
                       opt.diverge_magnitude.to_string()
                 : "n*S(n) does not increase above " + opt.diverge_magnitude.to_string() +
                       " across the tail");
    }

    // Advisory only: least-squares slope of log2|S| against log2 n.
    {
        std::vector<Rational> xs, ys;
        bool usable = true;
        for (std::size_t i = 0; i < tail.size(); ++i) {
            auto y = detail::dyadic_log2_abs(tail[i].mid());
            auto x = detail::dyadic_log2_abs(
                Rational(BigInt(static_cast<unsigned long>(trace.grid.indices[start + i]))));
            if (!y || !x) {
                usable = false;
                break;
            }
            xs.push_back(*x);
            ys.push_back(*y);
        }
        if (usable && xs.size() >= 2) {
            Rational n(static_cast<long>(xs.size()));
            Rational xbar(0), ybar(0);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                xbar += xs[i];
                ybar += ys[i];
            }
            xbar /= n;
            ybar /= n;
            Rational sxy(0), sxx(0);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxy += (xs[i] - xbar) * (ys[i] - ybar);
                sxx += (xs[i] - xbar) * (xs[i] - xbar);
            }
            if (!sxx.is_zero()) verdict.exponent_estimate = sxy / sxx;
        }
    }

    return verdict;
}

// ---------------------------------------------------------------------------
// Limit estimation
// ---------------------------------------------------------------------------

enum class LimitMethod { Tail, Aitken, WynnEpsilon, EulerTransform };

inline const char* to_string(LimitMethod m) {
    switch (m) {
        case LimitMethod::Tail: return "tail";
        case LimitMethod::Aitken: return "aitken";
        case LimitMethod::WynnEpsilon: return "wynn_epsilon";
        case LimitMethod::EulerTransform: return "euler_transform";
    }
    return "?";
}

enum class ErrorModel { Rigorous, Heuristic };

inline const char* to_string(ErrorModel m) {
    return m == ErrorModel::Rigorous ? "rigorous" : "heuristic";
}

/**
 * Limit estimate with a hard rigor distinction: `Rigorous` means the true
 * limit provably lies in `value` (alternating-series or geometric-tail
 * bound, granted the observed term discipline continues); `Heuristic` means
 * `value` is the hull of the last two accelerated iterates with no
 * containment guarantee.
 */
struct LimitEstimate {
    Interval value;
    LimitMethod method = LimitMethod::WynnEpsilon;
    std::size_t terms_used = 0;
    ErrorModel error_model = ErrorModel::Heuristic;
};

struct EstimateOptions {
    std::size_t max_dense_terms = 64;
    std::optional<LimitMethod> hint;
    TraceOptions trace_options;
};

namespace detail {

struct DenseData {
    std::vector<Rational> terms;   // term family: u_j; direct: value differences
    std::vector<Rational> sums;    // term family: S(1..L); direct: v(1..L)
};

/// Dense consecutive prefix of the sequence, exact values only; nullopt for
/// domain-restricted or interval-valued families.
inline std::optional<DenseData> dense_prefix(const SequenceSpec& spec, std::size_t length) {
    if (length < 4) return std::nullopt;
    try {
        SessionOptions sopt;
        sopt.allow_capping = false;
        sopt.exact_bit_budget = 1u << 22;
        SequenceSession session(spec, sopt);
        DenseData d;
        if (spec.direct()) {
            std::vector<Rational> vals;
            for (std::uint64_t n = 1; n <= length; ++n) {
                Interval v = session.value_at(n);
                if (!v.is_point()) return std::nullopt;
                vals.push_back(v.lo());
            }
            d.sums = vals;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i)
                d.terms.push_back(vals[i + 1] - vals[i]);
        } else {
            Rational sum(0);
            for (std::uint64_t j = 1; j <= length; ++j) {
                Interval t = session.next_term();
                if (!t.is_point()) return std::nullopt;
                d.terms.push_back(t.lo());
                sum += t.lo();
                d.sums.push_back(sum);
            }
        }
        return d;
    } catch (const Error&) {
        return std::nullopt;
    }
}

/// Longest strictly alternating-and-decreasing suffix of `terms`; returns
/// its starting position (terms.size() when none).
inline std::size_t alternating_suffix_start(const std::vector<Rational>& terms) {
    if (terms.empty()) return 0;
    std::size_t start = terms.size() - 1;
    if (terms.back().is_zero()) return terms.size();
    while (start > 0) {
        const Rational& prev = terms[start - 1];
        const Rational& cur = terms[start];
        if (prev.is_zero() || prev.sign() == cur.sign() || !(cur.abs() < prev.abs())) break;
        --start;
    }
    return start;
}

}  // namespace detail

inline LimitEstimate estimate_limit(const SumTrace& trace, EstimateOptions opt = {}) {
    if (trace.values.size() < 4)
        throw InsufficientData("estimate_limit needs at least 4 trace values");

    std::size_t dense_len =
        std::min<std::uint64_t>(opt.max_dense_terms, trace.grid.max_index());
    auto dense = detail::dense_prefix(trace.spec, dense_len);

    auto epsilon_fallback = [&trace]() {
        std::vector<Rational> vals;
        vals.reserve(trace.values.size());
        for (const auto& v : trace.values) vals.push_back(v.is_point() ? v.lo() : v.mid());
        LimitEstimate est;
        est.method = LimitMethod::WynnEpsilon;
        est.error_model = ErrorModel::Heuristic;
        est.terms_used = static_cast<std::size_t>(trace.grid.max_index());
        try {
            std::vector<Rational> diag = wynn_epsilon(vals);
            est.value = diag.size() >= 2 ? Interval::hull(diag[diag.size() - 2], diag.back())
                                         : Interval(diag.back());
        } catch (const Error&) {
            est.value = Interval::hull(vals[vals.size() - 2], vals.back());
        }
        return est;
    };

    auto try_euler = [&]() -> std::optional<LimitEstimate> {
        if (!dense) return std::nullopt;
        const auto& terms = dense->terms;
        std::size_t start = detail::alternating_suffix_start(terms);
        std::size_t len = terms.size() - start;
        if (len < 6 || len < terms.size() / 2) return std::nullopt;
        std::vector<Rational> window(terms.begin() + static_cast<std::ptrdiff_t>(start),
                                     terms.end());
        Rational offset(0);
        if (!trace.spec.direct()) {
            for (std::size_t i = 0; i < start; ++i) offset += terms[i];
        } else {
            offset = dense->sums[start];  // v at the window anchor
        }
        EulerAccelResult acc = euler_transform(window);
        LimitEstimate est;
        est.value = Interval(offset + acc.bracket.lo(), offset + acc.bracket.hi());
        est.method = LimitMethod::EulerTransform;
        est.error_model = ErrorModel::Rigorous;
        est.terms_used = dense->sums.size();
        return est;
    };

    auto try_tail = [&]() -> std::optional<LimitEstimate> {
        if (!dense || dense->terms.size() < 6) return std::nullopt;
        const auto& terms = dense->terms;
        std::size_t window_start = terms.size() / 2;
        int sign = 0;
        for (std::size_t i = window_start; i < terms.size(); ++i) {
            int s = terms[i].sign();
            if (s == 0) return std::nullopt;
            if (sign == 0) sign = s;
            if (s != sign) return std::nullopt;
        }
        std::vector<Rational> ratios;
        for (std::size_t i = window_start; i + 1 < terms.size(); ++i)
            ratios.push_back((terms[i + 1] / terms[i]).abs());
        if (ratios.size() < 3) return std::nullopt;
        bool all_below_one = true, all_equal = true, nonincreasing = true;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            all_below_one = all_below_one && ratios[i] < Rational(1);
            if (i > 0) {
                all_equal = all_equal && ratios[i] == ratios[i - 1];
                nonincreasing = nonincreasing && ratios[i] <= ratios[i - 1];
            }
        }
        if (!all_below_one || !(all_equal || nonincreasing)) return std::nullopt;

        const Rational& last_value = dense->sums.back();
        const Rational& last_term = terms.back();
        LimitEstimate est;
        est.method = LimitMethod::Tail;
        est.error_model = ErrorModel::Rigorous;
        est.terms_used = dense->sums.size();
        if (all_equal) {
            // exactly geometric on the whole window: closed-form tail
            Rational r = terms.back() / terms[terms.size() - 2];
            est.value = Interval(last_value + last_term * r / (Rational(1) - r));
        } else {
            Rational q = ratios.back();
            Rational bound = last_term.abs() * q / (Rational(1) - q);
            est.value = sign > 0 ? Interval(last_value, last_value + bound)
                                 : Interval(last_value - bound, last_value);
        }
        return est;
    };

    if (opt.hint) {
        switch (*opt.hint) {
            case LimitMethod::EulerTransform: {
                auto est = try_euler();
                if (!est) throw NotAlternating(1);
                return *est;
            }
            case LimitMethod::Tail: {
                auto est = try_tail();
                if (!est)
                    throw InsufficientData("tail method needs a one-signed ratio-bounded window");
                return *est;
            }
            case LimitMethod::Aitken: {
                std::vector<Rational> vals;
                for (const auto& v : trace.values) vals.push_back(v.is_point() ? v.lo() : v.mid());
                std::vector<Rational> stages = iterated_aitken(vals);
                LimitEstimate est;
                est.method = LimitMethod::Aitken;
                est.error_model = ErrorModel::Heuristic;
                est.terms_used = static_cast<std::size_t>(trace.grid.max_index());
                est.value = stages.size() >= 2
                                ? Interval::hull(stages[stages.size() - 2], stages.back())
                                : Interval(stages.back());
                return est;
            }
            case LimitMethod::WynnEpsilon: return epsilon_fallback();
        }
    }

    if (auto est = try_euler()) return *est;
    if (auto est = try_tail()) return *est;
    return epsilon_fallback();
}

}  // namespace ratsum
