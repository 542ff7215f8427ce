#include <random>

#include "doctest.h"
#include "ratsum/term.hpp"

using namespace ratsum;

namespace {

TermPtr random_ast(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> leaf(0, 1);
    std::uniform_int_distribution<int> node(0, 7);
    std::uniform_int_distribution<long> lit(0, 12);
    if (depth <= 0 || node(rng) == 7) {
        return leaf(rng) == 0 ? TermExpr::integer(lit(rng)) : TermExpr::variable("j");
    }
    switch (node(rng)) {
        case 0: return TermExpr::add(random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 1: return TermExpr::sub(random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 2: return TermExpr::mul(random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 3: return TermExpr::div(random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 4: return TermExpr::pow(random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 5: return TermExpr::negate(random_ast(rng, depth - 1));
        default: return TermExpr::factorial(random_ast(rng, depth - 1));
    }
}

}  // namespace

TEST_CASE("parse shapes match the grammar") {
    TermPtr e = parse_term("1/(2*j+3)");
    REQUIRE(e->op() == TermExpr::Op::Div);
    CHECK(e->left()->op() == TermExpr::Op::Integer);
    REQUIRE(e->right()->op() == TermExpr::Op::Add);
    CHECK(e->right()->left()->op() == TermExpr::Op::Mul);
    CHECK(e->right()->right()->value() == 3);

    TermPtr leib = parse_term("(-1)^(j-1)/(2*j-1)");
    REQUIRE(leib->op() == TermExpr::Op::Div);
    REQUIRE(leib->left()->op() == TermExpr::Op::Pow);
    CHECK(leib->left()->left()->op() == TermExpr::Op::Negate);
    CHECK(leib->left()->right()->op() == TermExpr::Op::Sub);

    TermPtr f = parse_term("j/(j+1)!");
    REQUIRE(f->op() == TermExpr::Op::Div);
    REQUIRE(f->right()->op() == TermExpr::Op::Factorial);
    CHECK(f->right()->operand()->op() == TermExpr::Op::Add);
}

TEST_CASE("precedence: factorial > unary minus > power > muldiv > addsub") {
    TermPtr a = parse_term("-j^2");
    REQUIRE(a->op() == TermExpr::Op::Pow);  // (-j)^2 under this grammar
    CHECK(a->left()->op() == TermExpr::Op::Negate);

    TermPtr b = parse_term("-j!");
    REQUIRE(b->op() == TermExpr::Op::Negate);  // -(j!)
    CHECK(b->operand()->op() == TermExpr::Op::Factorial);

    TermPtr c = parse_term("j!^2");
    REQUIRE(c->op() == TermExpr::Op::Pow);
    CHECK(c->left()->op() == TermExpr::Op::Factorial);

    TermPtr d = parse_term("2^3^2");  // right associative
    REQUIRE(d->op() == TermExpr::Op::Pow);
    CHECK(d->left()->value() == 2);
    CHECK(d->right()->op() == TermExpr::Op::Pow);
    CHECK(eval_term_at(*d, 1) == Rational(512));

    CHECK(eval_term_at(*parse_term("2+3*4"), 1) == Rational(14));
    CHECK(eval_term_at(*parse_term("2*3-4/2"), 1) == Rational(4));
}

TEST_CASE("evaluation of the worked examples") {
    CHECK(eval_term_at(*parse_term("1/(2*j+3)"), 1) == Rational(1, 5));
    CHECK(eval_term_at(*parse_term("j*j!"), 3) == Rational(18));
    CHECK(eval_term_at(*parse_term("(-1)^(j-1)/(2*j-1)"), 2) == Rational(-1, 3));
    CHECK(eval_term_at(*parse_term("(-1)^(j-1)/(2*j-1)"), 1) == Rational(1));
    CHECK(eval_term_at(*parse_term("j/(j+1)!"), 4) == Rational(4, 120));
}

TEST_CASE("evaluation errors carry the failing index") {
    try {
        eval_term_at(*parse_term("1/(j-3)"), 3);
        FAIL("expected EvalDivisionByZero");
    } catch (const EvalDivisionByZero& e) {
        CHECK(e.index == 3);
    }
    CHECK_THROWS_AS(eval_term_at(*parse_term("(j-5)!"), 2), FactorialDomainError);
    CHECK_THROWS_AS(eval_term_at(*parse_term("(1/2)!"), 1), FactorialDomainError);
    CHECK_THROWS_AS(eval_term_at(*parse_term("2^(1/(j+1))"), 1), ExponentNotInteger);
    CHECK_THROWS_AS(eval_term_at(*parse_term("0^(-1)"), 1), EvalDivisionByZero);
}

TEST_CASE("parse errors: position and expectation") {
    try {
        parse_term("1/(2*j+");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position == 7);
    }
    CHECK_THROWS_AS(parse_term(""), SyntaxError);
    CHECK_THROWS_AS(parse_term("1+*2"), SyntaxError);
    CHECK_THROWS_AS(parse_term("(1+2"), SyntaxError);

    try {
        parse_term("1/k");
        FAIL("expected UnknownIdentifier");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name == "k");
        CHECK(e.position == 2);
    }
    CHECK_NOTHROW(parse_term("u + 2/u", {"u", "i"}));
    CHECK_THROWS_AS(parse_term("u + j", {"u", "i"}), UnknownIdentifier);
}

TEST_CASE("round trip: parse(print(parse(s))) equals parse(s)") {
    for (const char* src : {"1/(2*j+3)", "(-1)^(j-1)/(2*j-1)", "j/(j+1)!", "-j^2", "-(j^2)",
                            "j!!", "--j", "2^3^2", "(j+1)*(j-1)", "1-2-3", "8/4/2", "j*(3/j)"}) {
        TermPtr once = parse_term(src);
        TermPtr twice = parse_term(to_string(once));
        CHECK(once->equals(*twice));
    }
}

TEST_CASE("printer-parser identity over 500 random ASTs") {
    std::mt19937_64 rng(2026);
    for (int i = 0; i < 500; ++i) {
        TermPtr ast = random_ast(rng, 4);
        TermPtr reparsed = parse_term(to_string(ast));
        CHECK(ast->equals(*reparsed));
    }
}

TEST_CASE("eval is a pure function of (expr, j)") {
    TermPtr e = parse_term("(j^2-1)/(j+2)");
    for (std::uint64_t j : {1ull, 2ull, 9ull}) CHECK(eval_term_at(*e, j) == eval_term_at(*e, j));
}
