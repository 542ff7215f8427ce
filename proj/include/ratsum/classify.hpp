#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ratsum/config.hpp"
#include "ratsum/constants.hpp"
#include "ratsum/limits.hpp"
#include "ratsum/polyfit.hpp"
#include "ratsum/summation.hpp"

namespace ratsum {

enum class Conclusion {
    NotRationalFunction,
    TranscendentalFunction,
    ConsistentWithRationalFunction,
    Inconclusive
};

inline const char* to_string(Conclusion c) {
    switch (c) {
        case Conclusion::NotRationalFunction: return "NotRationalFunction";
        case Conclusion::TranscendentalFunction: return "TranscendentalFunction";
        case Conclusion::ConsistentWithRationalFunction: return "ConsistentWithRationalFunction";
        case Conclusion::Inconclusive: return "Inconclusive";
    }
    return "?";
}

enum class Criterion { Thm21i, Thm21ii, Thm21iii, Cor24Catalog, RationalFitRecovered, None };

inline const char* to_string(Criterion c) {
    switch (c) {
        case Criterion::Thm21i: return "Thm2.1(i)";
        case Criterion::Thm21ii: return "Thm2.1(ii)";
        case Criterion::Thm21iii: return "Thm2.1(iii)";
        case Criterion::Cor24Catalog: return "Cor2.4-catalog";
        case Criterion::RationalFitRecovered: return "RationalFitRecovered";
        case Criterion::None: return "none";
    }
    return "?";
}

/// Conclusion line printed with each criterion, so a verdict is traceable
/// without overclaiming.
inline std::string criterion_citation(Criterion c) {
    switch (c) {
        case Criterion::Thm21i:
            return "Theorem 2.1(i): S(n) -> infinity while S(n)/n -> 0, so S(n) is not a "
                   "rational function of n over C";
        case Criterion::Thm21ii:
            return "Theorem 2.1(ii): S(n) -> 0 while n*S(n) -> infinity, so S(n) is not a "
                   "rational function of n over C";
        case Criterion::Thm21iii:
            return "Theorem 2.1(iii): the limit of S(n) is an irrational number, so S(n) is not "
                   "a rational function of n over Q[i]";
        case Criterion::Cor24Catalog:
            return "Corollary 2.4 (catalog): the limit of S(n) is a transcendental number, so "
                   "S(n) is a transcendental function of n over the algebraic numbers";
        case Criterion::RationalFitRecovered:
            return "an exact rational function reproduces every sample including the holdouts";
        case Criterion::None:
            return "no criterion fired; refutation evidence only";
    }
    return "";
}

// ---------------------------------------------------------------------------
// Catalog matching
// ---------------------------------------------------------------------------

struct ConstantMatch {
    std::string name;
    ConstantClass classification = ConstantClass::Open;
    std::string provenance;
    Rational distance;  // |mid(estimate) - mid(enclosure)|
    std::string rule;   // "rigorous-containment" or "heuristic-proximity"
};

/**
 * Matches a limit estimate against every catalog constant. A rigorous
 * estimate matches by interval intersection (estimate width <= 2^-32); a
 * heuristic one must sit within 2^-40 of the enclosure midpoint with both
 * widths below 2^-48. All matches are returned, closest first.
 */
inline std::vector<ConstantMatch> transcendence_verdict(const LimitEstimate& est,
                                                        int precision_bits) {
    static const Rational kRigorousWidth(BigInt(1), BigInt(1) << 32);
    static const Rational kHeuristicDistance(BigInt(1), BigInt(1) << 40);
    static const Rational kHeuristicWidth(BigInt(1), BigInt(1) << 48);

    std::vector<ConstantMatch> matches;
    for (const ConstantEntry& entry : constant_catalog()) {
        int bits = precision_bits;
        if (entry.precision_cap > 0) bits = std::min(bits, entry.precision_cap);
        Interval enc = enclose_constant(entry.name, bits);
        bool matched = false;
        std::string rule;
        if (est.error_model == ErrorModel::Rigorous) {
            matched = est.value.width() <= kRigorousWidth && est.value.intersects(enc);
            rule = "rigorous-containment";
        } else {
            matched = (est.value.mid() - enc.mid()).abs() < kHeuristicDistance &&
                      est.value.width() < kHeuristicWidth && enc.width() < kHeuristicWidth;
            rule = "heuristic-proximity";
        }
        if (matched) {
            ConstantMatch m;
            m.name = entry.name;
            m.classification = entry.classification;
            m.provenance = entry.provenance;
            m.distance = (est.value.mid() - enc.mid()).abs();
            m.rule = rule;
            matches.push_back(std::move(m));
        }
    }
    std::stable_sort(matches.begin(), matches.end(),
                     [](const ConstantMatch& a, const ConstantMatch& b) {
                         return a.distance < b.distance;
                     });
    return matches;
}

/// Simplest rational (smallest denominator, then smallest numerator) in a
/// closed interval, by the Stern-Brocot walk.
inline Rational simplest_rational_in(const Interval& iv) {
    const Rational& lo = iv.lo();
    const Rational& hi = iv.hi();
    if (lo <= Rational(0) && Rational(0) <= hi) return Rational(0);
    if (hi < Rational(0)) return -simplest_rational_in(Interval(-hi, -lo));
    // 0 < lo <= hi
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), lo.num().get_mpz_t(), lo.den().get_mpz_t());
    Rational floor_lo(fl);
    if (floor_lo == lo) return lo;
    if (floor_lo + Rational(1) <= hi) return floor_lo + Rational(1);
    Rational inner =
        simplest_rational_in(Interval((hi - floor_lo).reciprocal(), (lo - floor_lo).reciprocal()));
    return floor_lo + inner.reciprocal();
}

// ---------------------------------------------------------------------------
// Refutation sweep
// ---------------------------------------------------------------------------

struct FitOutcome {
    enum class Kind { NoFit, FitButHoldoutMismatch, FitAndHoldoutConsistent };
    int m = 0;
    int d = 0;
    Kind kind = Kind::NoFit;
    std::optional<std::uint64_t> first_bad_index;
    std::optional<RationalFunction> function;
};

inline const char* to_string(FitOutcome::Kind k) {
    switch (k) {
        case FitOutcome::Kind::NoFit: return "NoFit";
        case FitOutcome::Kind::FitButHoldoutMismatch: return "FitButHoldoutMismatch";
        case FitOutcome::Kind::FitAndHoldoutConsistent: return "FitAndHoldoutConsistent";
    }
    return "?";
}

struct RefutationReport {
    int degree_bound = 0;
    std::size_t sample_count = 0;
    bool refuted = false;
    std::vector<FitOutcome> outcomes;  // ordered by (m, d)
    std::optional<RationalFunction> recovered;
};

/**
 * Sweeps every (m, d) with m, d <= degree_bound: fits on the first m+d+2
 * exact samples and tests the candidate on every later sample, requiring at
 * least 4 holdout points at index >= twice the largest fit index. Refuted
 * means no pair survives its holdouts.
 */
inline RefutationReport refute_rational(const SumTrace& trace, int degree_bound) {
    auto samples = trace.exact_samples();
    const std::size_t worst_fit = 2 * static_cast<std::size_t>(degree_bound) + 2;
    if (samples.size() < worst_fit + 4)
        throw InsufficientSamples("refutation needs at least 2*degree_bound + 6 exact samples");
    {
        std::uint64_t worst_max = samples[worst_fit - 1].first;
        std::size_t holdouts = 0;
        for (const auto& [n, v] : samples)
            if (n >= 2 * worst_max) ++holdouts;
        if (holdouts < 4)
            throw InsufficientSamples(
                "refutation needs >= 4 holdout samples at twice the largest fit index");
    }

    RefutationReport report;
    report.degree_bound = degree_bound;
    report.sample_count = samples.size();
    report.refuted = true;
    for (int m = 0; m <= degree_bound; ++m) {
        for (int d = 0; d <= degree_bound; ++d) {
            FitOutcome out;
            out.m = m;
            out.d = d;
            const std::size_t need = static_cast<std::size_t>(m + d) + 2;
            std::vector<std::pair<std::uint64_t, Rational>> fit_set(samples.begin(),
                                                                    samples.begin() + need);
            std::optional<RationalFunction> fit;
            try {
                fit = rational_fit(fit_set, m, d);
            } catch (const DegenerateSystem&) {
                fit.reset();
            }
            if (!fit) {
                out.kind = FitOutcome::Kind::NoFit;
            } else {
                out.kind = FitOutcome::Kind::FitAndHoldoutConsistent;
                for (std::size_t i = need; i < samples.size(); ++i) {
                    auto v = fit->eval(Rational(BigInt(static_cast<unsigned long>(samples[i].first))));
                    if (!v || *v != samples[i].second) {
                        out.kind = FitOutcome::Kind::FitButHoldoutMismatch;
                        out.first_bad_index = samples[i].first;
                        break;
                    }
                }
                if (out.kind == FitOutcome::Kind::FitAndHoldoutConsistent) {
                    out.function = *fit;
                    report.refuted = false;
                    if (!report.recovered) report.recovered = *fit;
                }
            }
            report.outcomes.push_back(std::move(out));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// The classification pipeline
// ---------------------------------------------------------------------------

struct Verdict {
    std::string sequence;
    Conclusion conclusion = Conclusion::Inconclusive;
    Criterion criterion = Criterion::None;
    std::string field = "none";  // "C", "Q[i]", "Q-bar" or "none"
    GrowthVerdict growth;
    std::optional<LimitEstimate> limit;
    std::vector<ConstantMatch> matches;
    std::optional<Rational> rational_limit;
    std::optional<RefutationReport> refutation;
    std::vector<std::string> caveats;
    std::vector<std::string> annotations;
    std::string citation;
};

namespace detail {

/// Default sampling grid for a spec: direct families live on their natural
/// index sets, recurrence orbits on short linear prefixes, everything else
/// on the geometric grid.
inline SampleGrid default_grid(const SequenceSpec& spec, const AnalysisConfig& config) {
    auto powers_grid = [&](unsigned long p) {
        std::vector<std::uint64_t> idx;
        for (std::uint64_t k = 1;; ++k) {
            std::uint64_t n = 1;
            for (unsigned long t = 0; t < p; ++t) n *= k;
            if (k > 1 && n > (1ull << static_cast<unsigned>(config.grid_max_exponent)) &&
                idx.size() >= 10)
                break;
            idx.push_back(n);
            if (idx.size() >= 24) break;
        }
        return SampleGrid::explicit_indices(std::move(idx));
    };
    if (spec.kind() == SequenceSpec::Kind::Builtin) {
        const std::string& name = spec.builtin_name();
        if (name == "pow_n_4_3") return powers_grid(3);
        if (name == "pow_n_neg_5_4") return powers_grid(4);
        if (name == "pow_n_neg_1_2") {
            std::vector<std::uint64_t> idx;
            for (unsigned k = 0; k <= 16; ++k) idx.push_back(1ull << (2 * k));
            return SampleGrid::explicit_indices(std::move(idx));
        }
        if (name == "newton_sqrt2") return SampleGrid::linear(1, 12);
    }
    if (spec.kind() == SequenceSpec::Kind::Recurrence) return SampleGrid::linear(1, 12);
    return SampleGrid::geometric(static_cast<unsigned>(config.grid_max_exponent));
}

/// Exact small-index trace used by the refutation sweep; holdout indices sit
/// at least twice past the fit pool.
inline SampleGrid refutation_grid(const SequenceSpec& spec, int degree_bound) {
    const std::uint64_t fit_pool = 2 * static_cast<std::uint64_t>(degree_bound) + 2;
    auto powers = [&](unsigned long p) {
        std::vector<std::uint64_t> idx;
        std::uint64_t k = 1;
        std::uint64_t fit_max = 1;
        for (; k <= fit_pool + 2; ++k) {
            std::uint64_t n = 1;
            for (unsigned long t = 0; t < p; ++t) n *= k;
            idx.push_back(n);
            if (k == fit_pool) fit_max = n;
        }
        std::size_t holdouts = 0;
        for (; holdouts < 6; ++k) {
            std::uint64_t n = 1;
            for (unsigned long t = 0; t < p; ++t) n *= k;
            if (n >= 2 * fit_max) {
                idx.push_back(n);
                ++holdouts;
            }
        }
        return SampleGrid::explicit_indices(std::move(idx));
    };
    if (spec.kind() == SequenceSpec::Kind::Builtin) {
        const std::string& name = spec.builtin_name();
        if (name == "pow_n_4_3") return powers(3);
        if (name == "pow_n_neg_5_4") return powers(4);
        if (name == "pow_n_neg_1_2") return powers(2);
    }
    // 30 samples for the default bound of 4: 1..22 plus holdouts 44,46,..,58
    std::vector<std::uint64_t> idx;
    const std::uint64_t dense_top = fit_pool + 12;
    for (std::uint64_t n = 1; n <= dense_top; ++n) idx.push_back(n);
    for (std::uint64_t n = 2 * dense_top; idx.size() < dense_top + 8; n += 2) idx.push_back(n);
    return SampleGrid::explicit_indices(std::move(idx));
}

inline constexpr const char* kGridScaleCaveat =
    "growth tendencies and limit matches are grid-scale evidence, not proofs";
inline constexpr const char* kRealOnlyCaveat =
    "growth analysis and catalog matching are restricted to real-valued traces";

}  // namespace detail

/// The exact small-index grid classify() uses for its refutation sweeps.
inline SampleGrid default_refutation_grid(const SequenceSpec& spec, int degree_bound) {
    return detail::refutation_grid(spec, degree_bound);
}

/// The sampling grid classify() uses when the caller does not supply one.
inline SampleGrid default_analysis_grid(const SequenceSpec& spec, const AnalysisConfig& config) {
    return detail::default_grid(spec, config);
}

struct ClassifyOptions {
    std::size_t accel_terms = 64;
    std::optional<SampleGrid> grid;  // overrides the default grid
    TraceOptions trace_options;
};

inline Verdict classify(const SequenceSpec& spec, const AnalysisConfig& config,
                        ClassifyOptions opt = {}) {
    config.validate();
    Verdict verdict;
    verdict.sequence = spec.display();

    SampleGrid grid = opt.grid ? *opt.grid : detail::default_grid(spec, config);
    SumTrace trace = partial_sum_trace(spec, grid, opt.trace_options);
    if (trace.truncated)
        verdict.caveats.push_back("trace truncated by a capacity limit at index " +
                                  std::to_string(trace.grid.max_index()));

    GrowthOptions gopt;
    gopt.trend_window = static_cast<std::size_t>(config.trend_window);
    verdict.growth = growth_classify(trace, gopt);

    auto run_refutation = [&]() {
        try {
            SumTrace rt = partial_sum_trace(spec, detail::refutation_grid(spec, config.degree_bound),
                                            opt.trace_options);
            verdict.refutation = refute_rational(rt, config.degree_bound);
        } catch (const Error& e) {
            verdict.caveats.push_back(std::string("refutation unavailable: ") + e.what());
        }
    };

    const Tendency tendency = verdict.growth.tendency;
    if (tendency == Tendency::DivergesToInfinity && verdict.growth.sublinear.value_or(false)) {
        verdict.conclusion = Conclusion::NotRationalFunction;
        verdict.criterion = Criterion::Thm21i;
        verdict.field = "C";
    } else if (tendency == Tendency::TendsToZero &&
               verdict.growth.superreciprocal.value_or(false)) {
        verdict.conclusion = Conclusion::NotRationalFunction;
        verdict.criterion = Criterion::Thm21ii;
        verdict.field = "C";
    } else {
        bool estimated = false;
        if (tendency == Tendency::ConvergesNonzero || tendency == Tendency::TendsToZero) {
            try {
                EstimateOptions eopt;
                eopt.max_dense_terms = opt.accel_terms;
                eopt.trace_options = opt.trace_options;
                verdict.limit = estimate_limit(trace, eopt);
                estimated = true;
            } catch (const Error& e) {
                verdict.caveats.push_back(std::string("limit estimation unavailable: ") + e.what());
            }
        }
        if (estimated) {
            verdict.matches = transcendence_verdict(*verdict.limit, config.precision_bits);
            static const Rational kRationalDetectWidth(BigInt(1), BigInt(1) << 32);
            static const BigInt kSimpleDenominatorCap = BigInt(1) << 20;
            if (verdict.limit->value.width() <= kRationalDetectWidth) {
                Rational simplest = simplest_rational_in(verdict.limit->value);
                if (simplest.den() <= kSimpleDenominatorCap) verdict.rational_limit = simplest;
            }
        }
        const ConstantMatch* best = verdict.matches.empty() ? nullptr : &verdict.matches.front();
        if (best != nullptr && best->classification == ConstantClass::Transcendental) {
            verdict.conclusion = Conclusion::TranscendentalFunction;
            verdict.criterion = Criterion::Cor24Catalog;
            verdict.field = "Q-bar";
        } else if (best != nullptr && best->classification == ConstantClass::AlgebraicIrrational) {
            verdict.conclusion = Conclusion::NotRationalFunction;
            verdict.criterion = Criterion::Thm21iii;
            verdict.field = "Q[i]";
        } else {
            if (best != nullptr && best->classification == ConstantClass::Open)
                verdict.annotations.push_back(
                    "matched constant '" + best->name +
                    "' has open arithmetic status; no transcendence conclusion is available");
            run_refutation();
            if (verdict.refutation && verdict.refutation->recovered) {
                verdict.conclusion = Conclusion::ConsistentWithRationalFunction;
                verdict.criterion = Criterion::RationalFitRecovered;
                verdict.field = "Q[i]";
            } else {
                verdict.conclusion = Conclusion::Inconclusive;
                verdict.criterion = Criterion::None;
                verdict.field = "none";
            }
        }
    }

    if (spec.kind() == SequenceSpec::Kind::Builtin && spec.builtin_name() == "h_minus_ln")
        verdict.annotations.push_back(
            "whether H_n is a transcendental function of n is an open conjecture; this tool "
            "cannot decide it");

    verdict.caveats.push_back(detail::kGridScaleCaveat);
    verdict.caveats.push_back(detail::kRealOnlyCaveat);
    verdict.citation = criterion_citation(verdict.criterion);
    return verdict;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json verdict_to_json(const Verdict& v) {
    nlohmann::ordered_json j;
    j["sequence"] = v.sequence;
    j["conclusion"] = to_string(v.conclusion);
    j["criterion"] = to_string(v.criterion);
    j["field"] = v.field;

    nlohmann::ordered_json growth;
    growth["tendency"] = to_string(v.growth.tendency);
    growth["sublinear"] =
        v.growth.sublinear ? nlohmann::ordered_json(*v.growth.sublinear) : nullptr;
    growth["superreciprocal"] =
        v.growth.superreciprocal ? nlohmann::ordered_json(*v.growth.superreciprocal) : nullptr;
    growth["exponent_estimate"] =
        v.growth.exponent_estimate ? nlohmann::ordered_json(v.growth.exponent_estimate->to_string())
                                   : nullptr;
    growth["notes"] = v.growth.notes;

    nlohmann::ordered_json evidence;
    evidence["growth"] = std::move(growth);
    if (v.limit) {
        nlohmann::ordered_json limit;
        limit["interval"] = nlohmann::ordered_json::array(
            {v.limit->value.lo().to_string(), v.limit->value.hi().to_string()});
        limit["approx"] = decimal_enclosure(v.limit->value, 18);
        limit["method"] = to_string(v.limit->method);
        limit["rigor"] = to_string(v.limit->error_model);
        limit["terms_used"] = v.limit->terms_used;
        evidence["limit"] = std::move(limit);
    } else {
        evidence["limit"] = nullptr;
    }
    nlohmann::ordered_json matched = nlohmann::ordered_json::array();
    for (const auto& m : v.matches) {
        nlohmann::ordered_json e;
        e["name"] = m.name;
        e["classification"] = to_string(m.classification);
        e["distance"] = m.distance.to_string();
        e["rule"] = m.rule;
        e["provenance"] = m.provenance;
        matched.push_back(std::move(e));
    }
    evidence["matched_constants"] = std::move(matched);
    evidence["rational_limit"] =
        v.rational_limit ? nlohmann::ordered_json(v.rational_limit->to_string()) : nullptr;
    if (v.refutation) {
        nlohmann::ordered_json r;
        r["degree_bound"] = v.refutation->degree_bound;
        r["samples"] = v.refutation->sample_count;
        r["refuted"] = v.refutation->refuted;
        nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
        for (const auto& o : v.refutation->outcomes) {
            nlohmann::ordered_json e;
            e["m"] = o.m;
            e["d"] = o.d;
            e["outcome"] = to_string(o.kind);
            if (o.first_bad_index) e["first_bad_index"] = *o.first_bad_index;
            if (o.function) e["function"] = o.function->to_string();
            outcomes.push_back(std::move(e));
        }
        r["outcomes"] = std::move(outcomes);
        if (v.refutation->recovered) r["recovered"] = v.refutation->recovered->to_string();
        evidence["refutation"] = std::move(r);
    } else {
        evidence["refutation"] = nullptr;
    }
    j["evidence"] = std::move(evidence);
    j["caveats"] = v.caveats;
    j["annotations"] = v.annotations;
    j["citation"] = v.citation;
    return j;
}

inline std::string verdict_to_text(const Verdict& v) {
    std::string out;
    out += "sequence:   " + v.sequence + "\n";
    out += "conclusion: " + std::string(to_string(v.conclusion));
    if (v.field != "none") out += " (over " + v.field + ")";
    out += "\n";
    out += "criterion:  " + std::string(to_string(v.criterion)) + " - " + v.citation + "\n";
    out += "growth:     " + std::string(to_string(v.growth.tendency));
    if (v.growth.sublinear) out += std::string(", sublinear=") + (*v.growth.sublinear ? "yes" : "no");
    if (v.growth.superreciprocal)
        out += std::string(", superreciprocal=") + (*v.growth.superreciprocal ? "yes" : "no");
    if (v.growth.exponent_estimate)
        out += ", slope~" + decimal_enclosure(Interval(*v.growth.exponent_estimate), 3);
    out += "\n";
    if (v.limit) {
        out += "limit:      " + decimal_enclosure(v.limit->value, 18) + "  method=" +
               to_string(v.limit->method) + " rigor=" + to_string(v.limit->error_model) +
               " terms=" + std::to_string(v.limit->terms_used) + "\n";
    }
    for (const auto& m : v.matches)
        out += "matched:    " + m.name + " [" + to_string(m.classification) + "] via " + m.rule +
               " (" + m.provenance + ")\n";
    if (v.rational_limit)
        out += "near-limit: simplest rational in the estimate is " + v.rational_limit->to_string() +
               "\n";
    if (v.refutation) {
        out += "refutation: degrees <= " + std::to_string(v.refutation->degree_bound) + " on " +
               std::to_string(v.refutation->sample_count) + " samples: ";
        if (v.refutation->recovered)
            out += "recovered " + v.refutation->recovered->to_string() + "\n";
        else if (v.refutation->refuted)
            out += "no rational function fits\n";
        else
            out += "inconsistent outcomes\n";
    }
    for (const auto& a : v.annotations) out += "note:       " + a + "\n";
    for (const auto& c : v.caveats) out += "caveat:     " + c + "\n";
    return out;
}

}  // namespace ratsum
