#pragma once

#include <algorithm>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "ratsum/classify.hpp"

namespace ratsum {

/**
 * One fixture: a sequence, the expected verdict skeleton, and the citation
 * that ties it back to its source. Grids and acceleration budgets are
 * per-case so that factorial-type divergence stays cheap.
 */
struct CorpusCase {
    std::string id;
    SequenceSpec spec;
    Conclusion expected_conclusion;
    Criterion expected_criterion;
    std::optional<std::string> expected_constant;  // must appear among the matches
    std::string citation;
    std::optional<SampleGrid> grid;
    std::size_t accel_terms = 64;
};

inline const std::vector<CorpusCase>& paper_corpus() {
    static const std::vector<CorpusCase> cases = [] {
        std::vector<CorpusCase> v;
        auto harmonic_case = [](std::string id, long a, long b, std::string cite) {
            CorpusCase c{std::move(id),
                         SequenceSpec::builtin("harmonic_shifted",
                                               {{"a", Rational(a)}, {"b", Rational(b)}}),
                         Conclusion::NotRationalFunction,
                         Criterion::Thm21i,
                         std::nullopt,
                         std::move(cite),
                         std::nullopt,
                         64};
            return c;
        };
        v.push_back(harmonic_case("example-3.1-harmonic", 1, 0,
                                  "Example 3.1 with (a,b)=(1,0): the harmonic numbers"));
        v.push_back(harmonic_case("example-3.1-shifted-2-3", 2, 3,
                                  "Example 3.1 with (a,b)=(2,3)"));
        v.push_back(harmonic_case("example-3.1-shifted-3-1", 3, 1,
                                  "Example 3.1 with (a,b)=(3,1)"));

        v.push_back({"example-3.2-newton-sqrt2", SequenceSpec::builtin("newton_sqrt2"),
                     Conclusion::NotRationalFunction, Criterion::Thm21iii, "sqrt2",
                     "Example 3.2: Newton orbit for sqrt(2)", SampleGrid::linear(1, 12), 64});

        v.push_back({"example-3.3-alt-harmonic", SequenceSpec::builtin("alt_harmonic"),
                     Conclusion::TranscendentalFunction, Criterion::Cor24Catalog, "ln2",
                     "Example 3.3: alternating harmonic series, limit ln 2",
                     SampleGrid::geometric(10), 64});
        v.push_back({"example-3.3-leibniz", SequenceSpec::builtin("leibniz"),
                     Conclusion::TranscendentalFunction, Criterion::Cor24Catalog, "pi/4",
                     "Example 3.3: Leibniz series, limit pi/4", SampleGrid::geometric(10), 64});
        v.push_back({"example-3.3-inv-factorial", SequenceSpec::builtin("inv_factorial"),
                     Conclusion::TranscendentalFunction, Criterion::Cor24Catalog, "e-1",
                     "Example 3.3: sum of 1/j!, limit e - 1", SampleGrid::geometric(10), 25});

        v.push_back({"example-3.4-basel", SequenceSpec::builtin("inv_square"),
                     Conclusion::TranscendentalFunction, Criterion::Cor24Catalog, "pi^2/6",
                     "Example 3.4: the Basel series, limit pi^2/6", SampleGrid::geometric(13), 64});

        v.push_back({"remark-2.2-i-pow-4-3", SequenceSpec::builtin("pow_n_4_3"),
                     Conclusion::Inconclusive, Criterion::None, std::nullopt,
                     "Remark 2.2(i): n^(4/3) diverges superlinearly, criterion (i) must not fire",
                     std::nullopt, 64});
        v.push_back({"remark-2.2-ii-pow-neg-5-4", SequenceSpec::builtin("pow_n_neg_5_4"),
                     Conclusion::Inconclusive, Criterion::None, std::nullopt,
                     "Remark 2.2(ii): n^(-5/4) vanishes sub-reciprocally, criterion (ii) must "
                     "not fire",
                     std::nullopt, 64});
        v.push_back({"remark-2.2-iii-2-pow-neg-n", SequenceSpec::builtin("pow_2_neg_n"),
                     Conclusion::Inconclusive, Criterion::None, std::nullopt,
                     "Remark 2.2(iii): 2^-n has the rational limit 0, criterion (iii) must not "
                     "fire",
                     SampleGrid::geometric(12), 64});

        v.push_back({"remark-2.4-i-factorial-sum", SequenceSpec::builtin("i_times_ifact"),
                     Conclusion::Inconclusive, Criterion::None, std::nullopt,
                     "Remark 2.4(i): sum of i*i! = (n+1)!-1 diverges superlinearly",
                     SampleGrid::geometric(12), 64});
        {
            SequenceSpec remark_ii = SequenceSpec::builtin("i_over_succ_fact");
            remark_ii.with_override(1, Rational(-1, 2));
            v.push_back({"remark-2.4-ii-succ-fact-override", std::move(remark_ii),
                         Conclusion::Inconclusive, Criterion::None, std::nullopt,
                         "Remark 2.4(ii): u_1 = -1/2 makes the sum -1/(n+1)!, which vanishes "
                         "sub-reciprocally",
                         SampleGrid::geometric(10), 64});
        }
        v.push_back({"remark-2.4-iii-geometric-half",
                     SequenceSpec::builtin("geometric", {{"r", Rational(1, 2)}}),
                     Conclusion::Inconclusive, Criterion::None, std::nullopt,
                     "Remark 2.4(iii): sum of 2^-i = 1 - 2^-n has the rational limit 1",
                     SampleGrid::geometric(16), 64});

        v.push_back({"remark-2.6-one-plus-3-pow", SequenceSpec::builtin("one_plus_pow3_neg_n"),
                     Conclusion::Inconclusive, Criterion::None, std::nullopt,
                     "Remark after Corollary 2.6: 1 + 3^-n is transcendental as a function but "
                     "tends to the algebraic 1; the tool must not overclaim",
                     SampleGrid::geometric(12), 64});
        v.push_back({"remark-2.8-geometric-third",
                     SequenceSpec::builtin("geometric", {{"r", Rational(1, 3)}}),
                     Conclusion::Inconclusive, Criterion::None, std::nullopt,
                     "Remark after Corollary 2.7: sum of 3^-i tends to the algebraic 1/2; the "
                     "reverse direction fails and no transcendence may be claimed",
                     SampleGrid::geometric(16), 64});

        v.push_back({"note-1-gamma", SequenceSpec::builtin("h_minus_ln"),
                     Conclusion::Inconclusive, Criterion::None, "euler_gamma",
                     "Note 1: H_n - ln n tends to Euler's gamma, whose status is open",
                     SampleGrid::geometric(20), 64});
        return v;
    }();
    return cases;
}

/// Minimal glob: '*' matches any run of characters, '?' one character.
inline bool glob_match(std::string_view pattern, std::string_view text) {
    if (pattern.empty()) return text.empty();
    if (pattern[0] == '*')
        return glob_match(pattern.substr(1), text) ||
               (!text.empty() && glob_match(pattern, text.substr(1)));
    if (text.empty()) return false;
    if (pattern[0] != '?' && pattern[0] != text[0]) return false;
    return glob_match(pattern.substr(1), text.substr(1));
}

struct CorpusResult {
    std::string id;
    std::string expected;
    std::string got;
    bool pass = false;
    std::string citation;
    Verdict verdict;
};

inline CorpusResult run_corpus_case(const CorpusCase& c, const AnalysisConfig& config) {
    CorpusResult r;
    r.id = c.id;
    r.citation = c.citation;
    r.expected = std::string(to_string(c.expected_conclusion)) + "/" +
                 to_string(c.expected_criterion);
    ClassifyOptions opt;
    opt.accel_terms = c.accel_terms;
    opt.grid = c.grid;
    r.verdict = classify(c.spec, config, opt);
    r.got = std::string(to_string(r.verdict.conclusion)) + "/" + to_string(r.verdict.criterion);
    r.pass = r.verdict.conclusion == c.expected_conclusion &&
             r.verdict.criterion == c.expected_criterion;
    if (c.expected_constant) {
        bool found = false;
        for (const auto& m : r.verdict.matches) found = found || m.name == *c.expected_constant;
        r.pass = r.pass && found;
        if (!found) r.got += " (missing constant " + *c.expected_constant + ")";
    }
    return r;
}

/// Runs the (filtered) corpus with a bounded worker pool; results come back
/// in corpus order regardless of scheduling.
inline std::vector<CorpusResult> run_corpus(std::string_view filter, const AnalysisConfig& config,
                                            unsigned max_workers = 0) {
    std::vector<const CorpusCase*> selected;
    for (const auto& c : paper_corpus())
        if (filter.empty() || glob_match(filter, c.id)) selected.push_back(&c);

    if (max_workers == 0) {
        max_workers = std::thread::hardware_concurrency();
        if (max_workers == 0) max_workers = 1;
        if (max_workers > 8) max_workers = 8;
    }

    std::vector<CorpusResult> results(selected.size());
    std::size_t next = 0;
    while (next < selected.size()) {
        std::size_t batch = std::min<std::size_t>(max_workers, selected.size() - next);
        std::vector<std::future<CorpusResult>> futures;
        for (std::size_t i = 0; i < batch; ++i) {
            const CorpusCase* c = selected[next + i];
            futures.push_back(std::async(std::launch::async,
                                         [c, &config]() { return run_corpus_case(*c, config); }));
        }
        for (std::size_t i = 0; i < batch; ++i) results[next + i] = futures[i].get();
        next += batch;
    }
    return results;
}

inline nlohmann::ordered_json corpus_results_to_json(const std::vector<CorpusResult>& results) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json e;
        e["id"] = r.id;
        e["expected"] = r.expected;
        e["got"] = r.got;
        e["pass"] = r.pass;
        e["citation"] = r.citation;
        e["verdict"] = verdict_to_json(r.verdict);
        arr.push_back(std::move(e));
    }
    return arr;
}

}  // namespace ratsum
