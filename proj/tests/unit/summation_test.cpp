#include <random>

#include "doctest.h"
#include "ratsum/summation.hpp"

using namespace ratsum;

namespace {

SumTrace trace_of(const SequenceSpec& spec, std::vector<std::uint64_t> indices,
                  TraceOptions opt = {}) {
    return partial_sum_trace(spec, SampleGrid::explicit_indices(std::move(indices)), opt);
}

/// Polynomial with rational coefficients as a term AST over `base`
/// (independent oracle helper for the telescoping test).
TermPtr poly_ast(const std::vector<Rational>& coeffs, const TermPtr& base) {
    TermPtr sum = TermExpr::integer(0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        TermPtr c =
            TermExpr::div(TermExpr::integer(coeffs[k].num()), TermExpr::integer(coeffs[k].den()));
        TermPtr pw = TermExpr::pow(base, TermExpr::integer(static_cast<long>(k)));
        sum = TermExpr::add(sum, TermExpr::mul(c, pw));
    }
    return sum;
}

Rational eval_poly(const std::vector<Rational>& coeffs, const Rational& x) {
    Rational acc(0);
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
}

}  // namespace

TEST_CASE("grids validate and build") {
    SampleGrid g = SampleGrid::geometric(4);
    CHECK(g.indices == std::vector<std::uint64_t>{1, 2, 4, 8, 16});
    CHECK(g.doubling());
    CHECK(SampleGrid::linear(1, 5).indices == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK_THROWS_AS(SampleGrid::explicit_indices({}), Error);
    CHECK_THROWS_AS(SampleGrid::explicit_indices({3, 2}), Error);
    CHECK_THROWS_AS(SampleGrid::explicit_indices({0, 2}), Error);
    CHECK(!SampleGrid::explicit_indices({1, 3, 9}).doubling());
}

TEST_CASE("partial sums at grid indices (worked examples)") {
    SumTrace h = trace_of(SequenceSpec::builtin("harmonic"), {1, 2, 3});
    REQUIRE(h.values.size() == 3);
    CHECK(h.values[0] == Interval(Rational(1)));
    CHECK(h.values[1] == Interval(Rational(3, 2)));
    CHECK(h.values[2] == Interval(Rational(11, 6)));

    SumTrace f = trace_of(SequenceSpec::builtin("i_times_ifact"), {3});
    CHECK(f.values[0] == Interval(Rational(23)));

    SumTrace g = trace_of(SequenceSpec::builtin("geometric", {{"r", Rational(1, 2)}}), {4});
    CHECK(g.values[0] == Interval(Rational(15, 16)));
}

TEST_CASE("direct traces sample the function, not prefix sums") {
    SumTrace t = trace_of(SequenceSpec::builtin("newton_sqrt2"), {1, 2, 3, 4});
    CHECK(t.direct);
    CHECK(t.values[3] == Interval(Rational(577, 408)));
    SumTrace c = trace_of(SequenceSpec::builtin("pow_n_4_3"), {1, 8, 27});
    CHECK(c.values[2] == Interval(Rational(81)));
}

TEST_CASE("prefix consistency across grids") {
    SequenceSpec spec = SequenceSpec::builtin("inv_square");
    SumTrace a = trace_of(spec, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    SumTrace b = trace_of(spec, {2, 4, 8});
    CHECK(a.values[1] == b.values[0]);
    CHECK(a.values[3] == b.values[1]);
    CHECK(a.values[7] == b.values[2]);
}

TEST_CASE("additivity: S(m) - S(n) equals the exact segment sum") {
    std::mt19937_64 rng(5);
    SequenceSpec spec = SequenceSpec::builtin("alt_harmonic");
    std::vector<std::uint64_t> all;
    for (std::uint64_t i = 1; i <= 100; ++i) all.push_back(i);
    SumTrace full = trace_of(spec, all);
    std::uniform_int_distribution<std::uint64_t> pick(1, 100);
    for (int trial = 0; trial < 40; ++trial) {
        std::uint64_t n = pick(rng), m = pick(rng);
        if (n > m) std::swap(n, m);
        if (n == m) continue;
        Rational segment(0);
        SequenceSession session(spec);
        for (std::uint64_t j = 1; j <= m; ++j) {
            Rational u = session.next_term().lo();
            if (j > n) segment += u;
        }
        CHECK(full.values[m - 1].lo() - full.values[n - 1].lo() == segment);
    }
}

TEST_CASE("telescoping oracle: sums of f(i+1)-f(i) equal f(n+1)-f(1)") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> coeff(-9, 9);
    std::uniform_int_distribution<long> den(1, 5);
    std::uniform_int_distribution<int> deg(0, 4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rational> f;
        int d = deg(rng);
        for (int k = 0; k <= d; ++k) f.emplace_back(coeff(rng), den(rng));
        TermPtr j_var = TermExpr::variable("j");
        TermPtr jp1 = TermExpr::add(TermExpr::variable("j"), TermExpr::integer(1));
        TermPtr u = TermExpr::sub(poly_ast(f, jp1), poly_ast(f, j_var));
        SequenceSpec spec = SequenceSpec::closed_term(u);
        SumTrace t = trace_of(spec, {1, 7, 23, 50});
        for (std::size_t i = 0; i < t.values.size(); ++i) {
            Rational n(BigInt(static_cast<unsigned long>(t.grid.indices[i])));
            CHECK(t.values[i].lo() == eval_poly(f, n + Rational(1)) - eval_poly(f, Rational(1)));
        }
    }
}

TEST_CASE("interval mode past the cutoff keeps tight, correct enclosures") {
    TraceOptions opt;
    opt.exact_index_cutoff = 64;
    SumTrace t =
        partial_sum_trace(SequenceSpec::builtin("harmonic"), SampleGrid::geometric(8), opt);
    REQUIRE(t.values.size() == 9);
    CHECK(t.values[6].is_point());   // index 64 still exact
    CHECK(!t.values[8].is_point());  // index 256 capped
    CHECK(t.exact_through >= 64);
    CHECK(t.values[8].width() < Rational(BigInt(1), BigInt(1) << 128));
    Rational h(0);
    for (unsigned long j = 1; j <= 256; ++j) h += Rational(BigInt(1), BigInt(j));
    CHECK(t.values[8].contains(h));
}

TEST_CASE("capacity truncation keeps a usable prefix") {
    TraceOptions opt;
    opt.term_integer_budget = 1u << 12;
    SumTrace t =
        partial_sum_trace(SequenceSpec::builtin("i_times_ifact"), SampleGrid::geometric(12), opt);
    CHECK(t.truncated);
    CHECK(t.values.size() >= 8);
    CHECK(t.grid.indices.size() == t.values.size());
}

TEST_CASE("evaluation errors propagate with the failing index") {
    SequenceSpec bad = SequenceSpec::closed_term("1/(j-3)");
    try {
        trace_of(bad, {1, 2, 3, 4});
        FAIL("expected EvalDivisionByZero");
    } catch (const EvalDivisionByZero& e) {
        CHECK(e.index == 3);
    }
}

TEST_CASE("closed-form verification (worked examples)") {
    CHECK(verify_closed_form(SequenceSpec::builtin("i_times_ifact"), "(n+1)!-1", 20).verified);

    SequenceSpec remark = SequenceSpec::builtin("i_over_succ_fact");
    remark.with_override(1, Rational(-1, 2));
    CHECK(verify_closed_form(remark, "-1/((n+1)!)", 20).verified);

    CHECK(verify_closed_form(SequenceSpec::builtin("geometric", {{"r", Rational(1, 2)}}),
                             "1-2^(-n)", 20)
              .verified);

    ClosedFormReport bad = verify_closed_form(SequenceSpec::builtin("harmonic"), "n/2", 20);
    CHECK(!bad.verified);
    CHECK(bad.first_mismatch == 1);  // S(1) = 1 but n/2 gives 1/2
    CHECK(bad.lhs == Rational(1));
    CHECK(bad.rhs == Rational(1, 2));
}

TEST_CASE("closed forms hold exactly to n = 120") {
    CHECK(verify_closed_form(SequenceSpec::builtin("i_times_ifact"), "(n+1)!-1", 120).verified);
    SequenceSpec remark = SequenceSpec::builtin("i_over_succ_fact");
    remark.with_override(1, Rational(-1, 2));
    CHECK(verify_closed_form(remark, "-1/((n+1)!)", 120).verified);
    CHECK(verify_closed_form(SequenceSpec::builtin("geometric", {{"r", Rational(1, 2)}}),
                             "1-2^(-n)", 120)
              .verified);
}

TEST_CASE("exact inequality checks with square compare") {
    SumTrace h = partial_sum_trace(SequenceSpec::builtin("harmonic"), SampleGrid::linear(1, 100));
    InequalityReport r = check_inequality(h, "2*n+1", Relation::Less, true);
    CHECK(r.holds);
    CHECK(r.checked == 100);

    SumTrace h1 = trace_of(SequenceSpec::builtin("harmonic"), {1});
    CHECK(check_inequality(h1, "2*n+1", Relation::Less, true).holds);  // 1 < sqrt(3)

    SumTrace sn = trace_of(SequenceSpec::closed_term("1"), {1, 2, 3});  // S(n) = n
    InequalityReport v = check_inequality(sn, "2*n+1", Relation::Less, true);
    CHECK(!v.holds);
    CHECK(v.first_violation == 3);  // 9 > 7
}

TEST_CASE("trace JSON export") {
    TraceOptions opt;
    opt.exact_index_cutoff = 4;
    SumTrace t = partial_sum_trace(SequenceSpec::builtin("harmonic"),
                                   SampleGrid::explicit_indices({1, 2, 8}), opt);
    nlohmann::ordered_json j = trace_to_json(t);
    CHECK(j["indices"] == nlohmann::ordered_json::array({1, 2, 8}));
    CHECK(j["values"][0] == "1");
    CHECK(j["values"][1] == "3/2");
    CHECK(j["values"][2].is_array());  // capped past index 4: ["lo","hi"]
}
