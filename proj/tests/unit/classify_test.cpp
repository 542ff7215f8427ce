#include <random>

#include "doctest.h"
#include "ratsum/corpus.hpp"

using namespace ratsum;

namespace {

TermPtr poly_over(const Polynomial& p, const TermPtr& base) {
    TermPtr sum = TermExpr::integer(0);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        TermPtr c = TermExpr::div(TermExpr::integer(p.coeffs()[k].num()),
                                  TermExpr::integer(p.coeffs()[k].den()));
        sum = TermExpr::add(
            sum, TermExpr::mul(c, TermExpr::pow(base, TermExpr::integer(static_cast<long>(k)))));
    }
    return sum;
}

/// Telescoped sequence whose partial sums are exactly f(n): u_1 = f(1) via
/// override, u_j = f(j) - f(j-1) for j >= 2.
SequenceSpec telescoped(const RationalFunction& f) {
    TermPtr j_var = TermExpr::variable("j");
    TermPtr j_prev = TermExpr::sub(TermExpr::variable("j"), TermExpr::integer(1));
    TermPtr at_j = TermExpr::div(poly_over(f.num, j_var), poly_over(f.den, j_var));
    TermPtr at_prev = TermExpr::div(poly_over(f.num, j_prev), poly_over(f.den, j_prev));
    SequenceSpec spec = SequenceSpec::closed_term(TermExpr::sub(at_j, at_prev));
    auto f1 = f.eval(Rational(1));
    REQUIRE(f1.has_value());
    spec.with_override(1, *f1);
    return spec;
}

AnalysisConfig quick_config(int grid_exp = 10) {
    AnalysisConfig c;
    c.grid_max_exponent = grid_exp;
    return c;
}

const CorpusCase& corpus_case(const std::string& id) {
    for (const auto& c : paper_corpus())
        if (c.id == id) return c;
    throw Error("no corpus case " + id);
}

}  // namespace

TEST_CASE("simplest rational in an interval") {
    CHECK(simplest_rational_in(Interval(Rational(32, 100), Rational(34, 100))) == Rational(1, 3));
    CHECK(simplest_rational_in(Interval(Rational(-1, 10), Rational(1, 10))) == Rational(0));
    CHECK(simplest_rational_in(Interval(Rational(21, 10), Rational(29, 10))) == Rational(5, 2));
    CHECK(simplest_rational_in(Interval(Rational(1, 2))) == Rational(1, 2));
    CHECK(simplest_rational_in(Interval(Rational(-34, 100), Rational(-32, 100))) ==
          Rational(-1, 3));
}

TEST_CASE("refutation: harmonic partial sums admit no low-degree fit") {
    SequenceSpec spec = SequenceSpec::builtin("harmonic");
    SumTrace t = partial_sum_trace(spec, default_refutation_grid(spec, 4));
    RefutationReport r = refute_rational(t, 4);
    CHECK(r.refuted);
    CHECK(r.outcomes.size() == 25);
    for (const auto& o : r.outcomes)
        CHECK(o.kind != FitOutcome::Kind::FitAndHoldoutConsistent);
}

TEST_CASE("refutation: an exact rational function is recovered, not refuted") {
    RationalFunction f = RationalFunction::canonical(Polynomial({Rational(1), Rational(3)}),
                                                     Polynomial({Rational(2), Rational(1)}));
    SequenceSpec spec = telescoped(f);
    SumTrace t = partial_sum_trace(spec, default_refutation_grid(spec, 4));
    RefutationReport r = refute_rational(t, 4);
    CHECK(!r.refuted);
    REQUIRE(r.recovered.has_value());
    CHECK(*r.recovered == f);
}

TEST_CASE("refutation: 1 - 2^-n admits no low-degree fit") {
    SequenceSpec spec = SequenceSpec::builtin("geometric", {{"r", Rational(1, 2)}});
    SumTrace t = partial_sum_trace(spec, default_refutation_grid(spec, 4));
    RefutationReport r = refute_rational(t, 4);
    CHECK(r.refuted);
}

TEST_CASE("refutation preconditions") {
    SumTrace t = partial_sum_trace(SequenceSpec::builtin("harmonic"), SampleGrid::linear(1, 12));
    CHECK_THROWS_AS(refute_rational(t, 4), InsufficientSamples);
}

TEST_CASE("classify: harmonic family fires Theorem 2.1(i)") {
    Verdict v = classify(SequenceSpec::builtin("harmonic"), quick_config(14));
    CHECK(v.conclusion == Conclusion::NotRationalFunction);
    CHECK(v.criterion == Criterion::Thm21i);
    CHECK(v.field == "C");
    bool has_grid_caveat = false;
    for (const auto& c : v.caveats)
        has_grid_caveat = has_grid_caveat || c.find("grid-scale") != std::string::npos;
    CHECK(has_grid_caveat);
}

TEST_CASE("classify: n^(-1/2) fires Theorem 2.1(ii)") {
    Verdict v = classify(SequenceSpec::builtin("pow_n_neg_1_2"), quick_config(10));
    CHECK(v.conclusion == Conclusion::NotRationalFunction);
    CHECK(v.criterion == Criterion::Thm21ii);
    CHECK(v.field == "C");
}

TEST_CASE("classify: Newton orbit fires Theorem 2.1(iii) via sqrt2") {
    Verdict v = classify(SequenceSpec::builtin("newton_sqrt2"), quick_config(10));
    CHECK(v.conclusion == Conclusion::NotRationalFunction);
    CHECK(v.criterion == Criterion::Thm21iii);
    CHECK(v.field == "Q[i]");
    REQUIRE(!v.matches.empty());
    CHECK(v.matches.front().name == "sqrt2");
    CHECK(v.matches.front().classification == ConstantClass::AlgebraicIrrational);
}

TEST_CASE("classify: Leibniz series is a transcendental function via pi/4") {
    Verdict v = classify(SequenceSpec::builtin("leibniz"), quick_config(10));
    CHECK(v.conclusion == Conclusion::TranscendentalFunction);
    CHECK(v.criterion == Criterion::Cor24Catalog);
    CHECK(v.field == "Q-bar");
    REQUIRE(!v.matches.empty());
    CHECK(v.matches.front().name == "pi/4");
}

TEST_CASE("classify: geometric(1/3) is rational-limited, never a theorem conclusion") {
    Verdict v =
        classify(SequenceSpec::builtin("geometric", {{"r", Rational(1, 3)}}), quick_config(10));
    CHECK(v.conclusion == Conclusion::Inconclusive);
    CHECK(v.criterion == Criterion::None);
    REQUIRE(v.rational_limit.has_value());
    CHECK(*v.rational_limit == Rational(1, 2));
    REQUIRE(v.refutation.has_value());
    CHECK(v.refutation->refuted);
}

TEST_CASE("classify: a rational function is recovered consistent") {
    RationalFunction f = RationalFunction::canonical(Polynomial({Rational(1), Rational(3)}),
                                                     Polynomial({Rational(2), Rational(1)}));
    Verdict v = classify(telescoped(f), quick_config(10));
    CHECK(v.conclusion == Conclusion::ConsistentWithRationalFunction);
    CHECK(v.criterion == Criterion::RationalFitRecovered);
    REQUIRE(v.refutation.has_value());
    REQUIRE(v.refutation->recovered.has_value());
    CHECK(*v.refutation->recovered == f);
}

TEST_CASE("soundness: random rational functions are never called not-rational") {
    std::mt19937_64 rng(616);
    std::uniform_int_distribution<long> coeff(-9, 9);
    std::uniform_int_distribution<int> deg(0, 3);
    AnalysisConfig config = quick_config(10);
    int done = 0;
    while (done < 25) {
        int m = deg(rng), d = deg(rng);
        std::vector<Rational> pc, qc;
        for (int k = 0; k < m; ++k) pc.emplace_back(coeff(rng));
        for (int k = 0; k < d; ++k) qc.emplace_back(coeff(rng));
        long lp = coeff(rng), lq = coeff(rng);
        if (lp == 0 || lq == 0) continue;
        pc.emplace_back(lp);
        qc.emplace_back(lq);
        Polynomial p{pc}, q{qc};
        bool pole = false;
        for (std::uint64_t n = 1; n <= 1024 && !pole; ++n)
            pole = q.eval(Rational(BigInt(static_cast<unsigned long>(n)))).is_zero();
        if (pole) continue;
        ++done;
        RationalFunction f = RationalFunction::canonical(p, q);
        Verdict v = classify(telescoped(f), config);
        if (v.growth.tendency == Tendency::DivergesToInfinity) CHECK(!*v.growth.sublinear);
        if (v.growth.tendency == Tendency::TendsToZero) CHECK(!*v.growth.superreciprocal);
        CHECK(v.conclusion == Conclusion::ConsistentWithRationalFunction);
        REQUIRE(v.refutation.has_value());
        REQUIRE(v.refutation->recovered.has_value());
        CHECK(*v.refutation->recovered == f);
    }
}

TEST_CASE("corpus: filtering and the gamma case") {
    AnalysisConfig config;
    std::size_t remark24 = 0;
    for (const auto& c : paper_corpus())
        if (glob_match("remark-2.4-*", c.id)) ++remark24;
    CHECK(remark24 == 3);
    CHECK(paper_corpus().size() >= 14);

    CorpusResult gamma = run_corpus_case(corpus_case("note-1-gamma"), config);
    CHECK(gamma.pass);
    CHECK(gamma.verdict.conclusion == Conclusion::Inconclusive);
    bool open_match = false;
    for (const auto& m : gamma.verdict.matches)
        open_match =
            open_match || (m.name == "euler_gamma" && m.classification == ConstantClass::Open);
    CHECK(open_match);
    CHECK(!gamma.verdict.annotations.empty());
}

TEST_CASE("corpus: remark cases stay inconclusive") {
    AnalysisConfig config;
    for (const char* id : {"remark-2.2-i-pow-4-3", "remark-2.2-ii-pow-neg-5-4",
                           "remark-2.2-iii-2-pow-neg-n", "remark-2.4-ii-succ-fact-override",
                           "remark-2.6-one-plus-3-pow", "remark-2.8-geometric-third"}) {
        CorpusResult r = run_corpus_case(corpus_case(id), config);
        CHECK_MESSAGE(r.pass, r.id, ": expected ", r.expected, " got ", r.got);
    }
}

TEST_CASE("verdict JSON is deterministic and carries the schema keys") {
    Verdict v1 = classify(SequenceSpec::builtin("leibniz"), quick_config(10));
    Verdict v2 = classify(SequenceSpec::builtin("leibniz"), quick_config(10));
    std::string a = verdict_to_json(v1).dump();
    std::string b = verdict_to_json(v2).dump();
    CHECK(a == b);
    nlohmann::ordered_json j = verdict_to_json(v1);
    for (const char* key : {"sequence", "conclusion", "criterion", "field", "evidence", "caveats",
                            "annotations", "citation"})
        CHECK(j.contains(key));
    CHECK(j["evidence"].contains("growth"));
    CHECK(j["evidence"].contains("limit"));
    CHECK(j["evidence"].contains("matched_constants"));
    CHECK(j["evidence"].contains("refutation"));
    std::string text = verdict_to_text(v1);
    CHECK(text.find("TranscendentalFunction") != std::string::npos);
    CHECK(text.find("pi/4") != std::string::npos);
}

TEST_CASE("verdict monotonicity: a larger grid keeps the Thm 2.1(iii) conclusion") {
    ClassifyOptions small, large;
    small.grid = SampleGrid::linear(1, 10);
    large.grid = SampleGrid::linear(1, 14);
    AnalysisConfig config;
    Verdict a = classify(SequenceSpec::builtin("newton_sqrt2"), config, small);
    Verdict b = classify(SequenceSpec::builtin("newton_sqrt2"), config, large);
    CHECK(a.criterion == Criterion::Thm21iii);
    CHECK(b.criterion == Criterion::Thm21iii);
}

TEST_CASE("simplest rational search never overshoots the true denominator") {
    std::mt19937_64 rng(512);
    std::uniform_int_distribution<long> num(-40, 40);
    std::uniform_int_distribution<long> den(1, 60);
    for (int trial = 0; trial < 200; ++trial) {
        Rational target(num(rng), den(rng));
        Rational eps(1, 1000000);
        Interval iv(target - eps, target + eps);
        Rational got = simplest_rational_in(iv);
        CHECK(iv.contains(got));
        CHECK(got.den() <= target.den());
    }
}

TEST_CASE("classify: a bounded oscillator lands in refutation, inconclusive") {
    Verdict v = classify(SequenceSpec::closed_term("(-1)^(j-1)"), quick_config(10),
                         {.grid = SampleGrid::linear(1, 12)});
    CHECK(v.growth.tendency == Tendency::Oscillates);
    CHECK(v.conclusion == Conclusion::Inconclusive);
    REQUIRE(v.refutation.has_value());
    CHECK(v.refutation->refuted);
}
