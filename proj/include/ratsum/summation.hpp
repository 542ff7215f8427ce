#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ratsum/errors.hpp"
#include "ratsum/interval.hpp"
#include "ratsum/rational.hpp"
#include "ratsum/sequence.hpp"
#include "ratsum/term.hpp"

namespace ratsum {

/// Strictly increasing positive sampling indices. Geometric grids are the
/// default discretization of "n -> infinity" (log-scale leverage).
struct SampleGrid {
    enum class Kind { Geometric, Linear, Explicit };

    Kind kind = Kind::Explicit;
    std::vector<std::uint64_t> indices;

    static SampleGrid geometric(unsigned max_exponent, std::uint64_t scale = 1) {
        if (scale < 1) throw Error("geometric grid scale must be >= 1");
        SampleGrid g;
        g.kind = Kind::Geometric;
        for (unsigned k = 0; k <= max_exponent; ++k) {
            std::uint64_t idx = scale << k;
            if (g.indices.empty() || idx > g.indices.back()) g.indices.push_back(idx);
        }
        return g;
    }

    static SampleGrid linear(std::uint64_t lo, std::uint64_t hi, std::uint64_t step = 1) {
        if (lo < 1 || hi < lo || step < 1) throw Error("bad linear grid bounds");
        SampleGrid g;
        g.kind = Kind::Linear;
        for (std::uint64_t i = lo; i <= hi; i += step) g.indices.push_back(i);
        return g;
    }

    static SampleGrid explicit_indices(std::vector<std::uint64_t> idx) {
        if (idx.empty()) throw Error("grid must be non-empty");
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] < 1) throw Error("grid indices must be positive");
            if (i > 0 && idx[i] <= idx[i - 1]) throw Error("grid indices must strictly increase");
        }
        SampleGrid g;
        g.kind = Kind::Explicit;
        g.indices = std::move(idx);
        return g;
    }

    std::uint64_t max_index() const { return indices.back(); }
    std::size_t size() const { return indices.size(); }

    /// True when each index doubles the previous one (the growth rules that
    /// speak about "doublings" require this).
    bool doubling() const {
        for (std::size_t i = 1; i < indices.size(); ++i)
            if (indices[i] != 2 * indices[i - 1]) return false;
        return indices.size() >= 2;
    }
};

struct TraceOptions {
    std::uint64_t exact_index_cutoff = 1ull << 14;
    std::size_t exact_bit_budget = 1u << 20;
    std::size_t term_integer_budget = 1u << 16;
    unsigned dyadic_bits = 192;
    bool want_terms = true;
    bool allow_truncation = true;  // shrink the grid instead of failing on capacity
};

/**
 * Sampled values of the studied function on a grid: exact prefix sums
 * S(n) = u_1 + ... + u_n for term families, or f(n) itself for direct
 * families. Values are intervals; they are exact points until the
 * exact-arithmetic cutoff, outward-rounded enclosures of width < 2^-128
 * beyond it.
 */
struct SumTrace {
    SequenceSpec spec;
    SampleGrid grid;
    std::vector<Interval> values;
    std::vector<Interval> term_values;  // u at grid indices (term families only)
    bool direct = false;
    bool truncated = false;          // grid shrunk by a capacity limit
    std::uint64_t exact_through = 0;  // all values at indices <= this are exact points

    bool all_exact() const {
        for (const auto& v : values)
            if (!v.is_point()) return false;
        return true;
    }

    /// Exact samples (index, value) from the exact prefix of the trace.
    std::vector<std::pair<std::uint64_t, Rational>> exact_samples() const {
        std::vector<std::pair<std::uint64_t, Rational>> out;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i].is_point()) out.emplace_back(grid.indices[i], values[i].lo());
        return out;
    }
};

inline SumTrace partial_sum_trace(const SequenceSpec& spec, const SampleGrid& grid,
                                  TraceOptions opt = {}) {
    SessionOptions sopt{.exact_index_cutoff = opt.exact_index_cutoff,
                        .exact_bit_budget = opt.exact_bit_budget,
                        .term_integer_budget = opt.term_integer_budget,
                        .dyadic_bits = opt.dyadic_bits,
                        .allow_capping = true};
    SequenceSession session(spec, sopt);

    SumTrace trace;
    trace.spec = spec;
    trace.grid = grid;
    trace.direct = spec.direct();
    trace.exact_through = grid.max_index();

    auto note_exactness = [&trace](std::uint64_t idx, const Interval& v) {
        if (!v.is_point() && idx <= trace.exact_through) trace.exact_through = idx - 1;
    };

    try {
        if (trace.direct) {
            for (std::uint64_t idx : grid.indices) {
                Interval v = session.value_at(idx);
                note_exactness(idx, v);
                trace.values.push_back(std::move(v));
            }
        } else {
            Interval sum{Rational(0)};
            bool capped = false;
            std::size_t next_grid = 0;
            for (std::uint64_t j = 1; j <= grid.max_index(); ++j) {
                Interval term = session.next_term();
                if (!capped && (!term.is_point() || j > opt.exact_index_cutoff ||
                                sum.lo().bit_size() > opt.exact_bit_budget))
                    capped = true;
                sum += term;
                if (capped) sum = sum.round_outward(opt.dyadic_bits);
                if (j == grid.indices[next_grid]) {
                    note_exactness(j, sum);
                    trace.values.push_back(sum);
                    if (opt.want_terms) trace.term_values.push_back(term);
                    ++next_grid;
                }
            }
        }
    } catch (const CapacityError&) {
        if (!opt.allow_truncation || trace.values.size() < 8) throw;
        trace.truncated = true;
        trace.grid.indices.resize(trace.values.size());
        trace.term_values.resize(std::min(trace.term_values.size(), trace.values.size()));
    }
    return trace;
}

/// Trace export: indices plus "p/q" strings for exact values, ["lo","hi"]
/// pairs past the exact cutoff.
inline nlohmann::ordered_json trace_to_json(const SumTrace& trace) {
    nlohmann::ordered_json j;
    j["sequence"] = to_json(trace.spec);
    j["direct"] = trace.direct;
    j["indices"] = trace.grid.indices;
    nlohmann::ordered_json vals = nlohmann::ordered_json::array();
    for (const auto& v : trace.values) {
        if (v.is_point())
            vals.push_back(v.lo().to_string());
        else
            vals.push_back(nlohmann::ordered_json::array({v.lo().to_string(), v.hi().to_string()}));
    }
    j["values"] = std::move(vals);
    if (!trace.term_values.empty()) {
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& v : trace.term_values) {
            if (v.is_point())
                terms.push_back(v.lo().to_string());
            else
                terms.push_back(
                    nlohmann::ordered_json::array({v.lo().to_string(), v.hi().to_string()}));
        }
        j["terms"] = std::move(terms);
    }
    if (trace.truncated) j["truncated"] = true;
    return j;
}

// ---------------------------------------------------------------------------
// Closed-form verification and exact inequality checks
// ---------------------------------------------------------------------------

struct ClosedFormReport {
    bool verified = false;
    std::uint64_t n_max = 0;
    std::uint64_t first_mismatch = 0;  // valid when !verified
    Rational lhs, rhs;                 // values at the first mismatch

    std::string summary() const {
        if (verified) return "verified up to n = " + std::to_string(n_max);
        return "first mismatch at n = " + std::to_string(first_mismatch) + ": S(n) = " +
               lhs.to_string() + " but closed form gives " + rhs.to_string();
    }
};

/// Compares exact S(n) against closed_form(n) for n = 1..n_max; reports the
/// first mismatch, if any. The closed form is a term over the variable `n`.
inline ClosedFormReport verify_closed_form(const SequenceSpec& spec, const TermExpr& closed_form,
                                           std::uint64_t n_max) {
    SequenceSession session(spec, {.exact_bit_budget = 1u << 22, .allow_capping = false});
    ClosedFormReport report;
    report.n_max = n_max;
    Rational sum(0);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        Rational s;
        if (spec.direct()) {
            Interval v = session.value_at(n);
            if (!v.is_point())
                throw Error("verify_closed_form needs exact values (index " + std::to_string(n) +
                            " is an interval)");
            s = v.lo();
        } else {
            sum += session.next_term().lo();
            s = sum;
        }
        EvalContext ctx;
        ctx.vars.emplace("n", Rational(BigInt(static_cast<unsigned long>(n))));
        ctx.index = n;
        Rational cf = eval_term(closed_form, ctx);
        if (s != cf) {
            report.verified = false;
            report.first_mismatch = n;
            report.lhs = s;
            report.rhs = cf;
            return report;
        }
    }
    report.verified = true;
    return report;
}

inline ClosedFormReport verify_closed_form(const SequenceSpec& spec, std::string_view closed_form,
                                           std::uint64_t n_max) {
    return verify_closed_form(spec, *parse_term(closed_form, {"n"}), n_max);
}

enum class Relation { Less, LessEq };

struct InequalityReport {
    bool holds = false;
    std::uint64_t first_violation = 0;
    std::size_t checked = 0;

    std::string summary() const {
        if (holds) return "holds on all " + std::to_string(checked) + " tested indices";
        return "first violation at n = " + std::to_string(first_violation);
    }
};

/**
 * Exact pointwise check of S(n) rel rhs(n) over the trace grid. With
 * square_compare the right side denotes sqrt(radicand(n)) and the
 * comparison is done exactly as S(n)^2 rel radicand(n) (valid since both
 * sides are nonnegative; a negative S(n) is below any square root).
 */
inline InequalityReport check_inequality(const SumTrace& trace, const TermExpr& rhs, Relation rel,
                                         bool square_compare) {
    InequalityReport report;
    report.checked = trace.values.size();
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        std::uint64_t n = trace.grid.indices[i];
        if (!trace.values[i].is_point())
            throw Error("check_inequality needs exact trace values (index " + std::to_string(n) +
                        " is an interval)");
        const Rational& lhs = trace.values[i].lo();
        EvalContext ctx;
        ctx.vars.emplace("n", Rational(BigInt(static_cast<unsigned long>(n))));
        ctx.index = n;
        Rational r = eval_term(rhs, ctx);
        bool ok;
        if (square_compare) {
            if (r.is_negative()) {
                ok = false;  // rhs radicand negative: sqrt undefined, treat as violation
            } else if (lhs.is_negative()) {
                ok = true;  // negative left side is below any square root
            } else {
                Rational lhs2 = lhs * lhs;
                ok = rel == Relation::Less ? lhs2 < r : lhs2 <= r;
            }
        } else {
            ok = rel == Relation::Less ? lhs < r : lhs <= r;
        }
        if (!ok) {
            report.holds = false;
            report.first_violation = n;
            return report;
        }
    }
    report.holds = true;
    return report;
}

inline InequalityReport check_inequality(const SumTrace& trace, std::string_view rhs, Relation rel,
                                         bool square_compare) {
    return check_inequality(trace, *parse_term(rhs, {"n"}), rel, square_compare);
}

}  // namespace ratsum
