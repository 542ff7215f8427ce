#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ratsum/errors.hpp"
#include "ratsum/rational.hpp"

namespace ratsum {

class TermExpr;
using TermPtr = std::shared_ptr<const TermExpr>;

/**
 * Immutable AST for closed-form sequence terms: integer literals, named
 * variables, unary minus, + - * / ^ and postfix factorial. Exponents are
 * arbitrary subexpressions that must evaluate to integers at every index.
 */
class TermExpr {
  public:
    enum class Op { Integer, Variable, Negate, Add, Sub, Mul, Div, Pow, Factorial };

    static TermPtr integer(BigInt v) {
        TermExpr e(Op::Integer);
        e.value_ = std::move(v);
        return wrap(std::move(e));
    }
    static TermPtr integer(long v) { return integer(BigInt(v)); }
    static TermPtr variable(std::string name) {
        TermExpr e(Op::Variable);
        e.name_ = std::move(name);
        return wrap(std::move(e));
    }
    static TermPtr negate(TermPtr x) { return unary(Op::Negate, std::move(x)); }
    static TermPtr factorial(TermPtr x) { return unary(Op::Factorial, std::move(x)); }
    static TermPtr add(TermPtr a, TermPtr b) { return binary(Op::Add, std::move(a), std::move(b)); }
    static TermPtr sub(TermPtr a, TermPtr b) { return binary(Op::Sub, std::move(a), std::move(b)); }
    static TermPtr mul(TermPtr a, TermPtr b) { return binary(Op::Mul, std::move(a), std::move(b)); }
    static TermPtr div(TermPtr a, TermPtr b) { return binary(Op::Div, std::move(a), std::move(b)); }
    static TermPtr pow(TermPtr base, TermPtr expo) {
        return binary(Op::Pow, std::move(base), std::move(expo));
    }

    Op op() const { return op_; }
    const BigInt& value() const { return value_; }
    const std::string& name() const { return name_; }
    const TermPtr& left() const { return left_; }
    const TermPtr& right() const { return right_; }
    const TermPtr& operand() const { return left_; }

    bool equals(const TermExpr& o) const {
        if (op_ != o.op_) return false;
        switch (op_) {
            case Op::Integer: return value_ == o.value_;
            case Op::Variable: return name_ == o.name_;
            case Op::Negate:
            case Op::Factorial: return left_->equals(*o.left_);
            default: return left_->equals(*o.left_) && right_->equals(*o.right_);
        }
    }

  private:
    explicit TermExpr(Op op) : op_(op) {}

    static TermPtr wrap(TermExpr&& e) { return std::make_shared<const TermExpr>(std::move(e)); }
    static TermPtr unary(Op op, TermPtr x) {
        TermExpr e(op);
        e.left_ = std::move(x);
        return wrap(std::move(e));
    }
    static TermPtr binary(Op op, TermPtr a, TermPtr b) {
        TermExpr e(op);
        e.left_ = std::move(a);
        e.right_ = std::move(b);
        return wrap(std::move(e));
    }

    Op op_;
    BigInt value_;
    std::string name_;
    TermPtr left_;
    TermPtr right_;
};

// ---------------------------------------------------------------------------
// Parsing
//
// Grammar (precedence low to high):
//   expr    := muldiv (('+' | '-') muldiv)*
//   muldiv  := power (('*' | '/') power)*
//   power   := unary ('^' power)?           right associative
//   unary   := '-' unary | postfix
//   postfix := primary '!'*
//   primary := integer | identifier | '(' expr ')'
//
// '!' binds tighter than unary minus, which binds tighter than '^', so
// "-j^2" is (-j)^2 and "-j!" is -(j!). Integer literals are non-negative;
// negative constants come out as Negate nodes.
// ---------------------------------------------------------------------------

namespace detail {

class TermParser {
  public:
    TermParser(std::string_view text, std::vector<std::string> allowed_vars)
        : text_(text), vars_(std::move(allowed_vars)) {}

    TermPtr parse() {
        if (text_.empty()) throw SyntaxError(0, "an expression");
        skip_ws();
        TermPtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError(pos_, "end of input or an operator");
        return e;
    }

  private:
    TermPtr parse_expr() {
        TermPtr lhs = parse_muldiv();
        for (;;) {
            skip_ws();
            if (accept('+')) {
                lhs = TermExpr::add(std::move(lhs), parse_muldiv());
            } else if (accept('-')) {
                lhs = TermExpr::sub(std::move(lhs), parse_muldiv());
            } else {
                return lhs;
            }
        }
    }

    TermPtr parse_muldiv() {
        TermPtr lhs = parse_power();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                lhs = TermExpr::mul(std::move(lhs), parse_power());
            } else if (accept('/')) {
                lhs = TermExpr::div(std::move(lhs), parse_power());
            } else {
                return lhs;
            }
        }
    }

    TermPtr parse_power() {
        TermPtr base = parse_unary();
        skip_ws();
        if (accept('^')) return TermExpr::pow(std::move(base), parse_power());
        return base;
    }

    TermPtr parse_unary() {
        skip_ws();
        if (accept('-')) return TermExpr::negate(parse_unary());
        return parse_postfix();
    }

    TermPtr parse_postfix() {
        TermPtr e = parse_primary();
        for (;;) {
            skip_ws();
            if (accept('!')) {
                e = TermExpr::factorial(std::move(e));
            } else {
                return e;
            }
        }
    }

    TermPtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "an integer, a variable or '('");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            TermPtr e = parse_expr();
            skip_ws();
            if (!accept(')')) throw SyntaxError(pos_, "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            return TermExpr::integer(BigInt(std::string(text_.substr(start, pos_ - start)), 10));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            for (const auto& v : vars_)
                if (v == name) return TermExpr::variable(name);
            throw UnknownIdentifier(name, start);
        }
        throw SyntaxError(pos_, "an integer, a variable or '('");
    }

    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string_view text_;
    std::vector<std::string> vars_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a term over the index variable `j` (the default), or over the
/// caller's variable set (`u`,`i` for recurrence updates; `n` for closed
/// forms). Round-trip stable with to_string().
inline TermPtr parse_term(std::string_view text, std::vector<std::string> allowed_vars = {"j"}) {
    return detail::TermParser(text, std::move(allowed_vars)).parse();
}

// ---------------------------------------------------------------------------
// Printing (minimal parentheses, inverse of the grammar above)
// ---------------------------------------------------------------------------

namespace detail {

inline int print_precedence(TermExpr::Op op) {
    switch (op) {
        case TermExpr::Op::Integer:
        case TermExpr::Op::Variable: return 100;
        case TermExpr::Op::Factorial: return 90;
        case TermExpr::Op::Negate: return 80;
        case TermExpr::Op::Pow: return 70;
        case TermExpr::Op::Mul:
        case TermExpr::Op::Div: return 60;
        case TermExpr::Op::Add:
        case TermExpr::Op::Sub: return 50;
    }
    return 0;
}

inline void print_expr(const TermExpr& e, std::string& out) {
    auto child = [&out](const TermExpr& c, int min_prec) {
        bool parens = print_precedence(c.op()) < min_prec;
        if (parens) out += '(';
        print_expr(c, out);
        if (parens) out += ')';
    };
    switch (e.op()) {
        case TermExpr::Op::Integer: out += e.value().get_str(); break;
        case TermExpr::Op::Variable: out += e.name(); break;
        case TermExpr::Op::Negate:
            out += '-';
            child(*e.operand(), 80);
            break;
        case TermExpr::Op::Factorial:
            child(*e.operand(), 90);
            out += '!';
            break;
        case TermExpr::Op::Pow:
            child(*e.left(), 80);   // base must sit at unary level or above
            out += '^';
            child(*e.right(), 70);  // right associative
            break;
        case TermExpr::Op::Mul:
            child(*e.left(), 60);
            out += '*';
            child(*e.right(), 61);
            break;
        case TermExpr::Op::Div:
            child(*e.left(), 60);
            out += '/';
            child(*e.right(), 61);
            break;
        case TermExpr::Op::Add:
            child(*e.left(), 50);
            out += '+';
            child(*e.right(), 51);
            break;
        case TermExpr::Op::Sub:
            child(*e.left(), 50);
            out += '-';
            child(*e.right(), 51);
            break;
    }
}

}  // namespace detail

inline std::string to_string(const TermExpr& e) {
    std::string out;
    detail::print_expr(e, out);
    return out;
}

inline std::string to_string(const TermPtr& e) { return to_string(*e); }

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Variable bindings plus the sequence index used in error reports.
struct EvalContext {
    std::map<std::string, Rational> vars;
    std::uint64_t index = 0;

    static EvalContext at(std::uint64_t j) {
        EvalContext c;
        c.vars.emplace("j", Rational(BigInt(static_cast<unsigned long>(j))));
        c.index = j;
        return c;
    }
};

namespace detail {

// Exponent and factorial-argument magnitudes past these raise CapacityError;
// exact powers/factorials beyond them are never needed by sane inputs.
constexpr unsigned long kMaxExponentMagnitude = 1UL << 26;
constexpr unsigned long kMaxFactorialOperand = 2'000'000;

}  // namespace detail

inline Rational eval_term(const TermExpr& e, const EvalContext& ctx) {
    using Op = TermExpr::Op;
    switch (e.op()) {
        case Op::Integer: return Rational(e.value());
        case Op::Variable: {
            auto it = ctx.vars.find(e.name());
            if (it == ctx.vars.end()) throw UnknownIdentifier(e.name(), 0);
            return it->second;
        }
        case Op::Negate: return -eval_term(*e.operand(), ctx);
        case Op::Add: return eval_term(*e.left(), ctx) + eval_term(*e.right(), ctx);
        case Op::Sub: return eval_term(*e.left(), ctx) - eval_term(*e.right(), ctx);
        case Op::Mul: return eval_term(*e.left(), ctx) * eval_term(*e.right(), ctx);
        case Op::Div: {
            Rational den = eval_term(*e.right(), ctx);
            if (den.is_zero()) throw EvalDivisionByZero(ctx.index);
            return eval_term(*e.left(), ctx) / den;
        }
        case Op::Pow: {
            Rational base = eval_term(*e.left(), ctx);
            Rational expo = eval_term(*e.right(), ctx);
            if (!expo.is_integer()) throw ExponentNotInteger(ctx.index);
            BigInt ei = expo.num();
            if (::abs(ei) > detail::kMaxExponentMagnitude)
                throw CapacityError("exponent magnitude exceeds the capacity limit");
            long el = static_cast<long>(ei.get_si());
            if (el < 0 && base.is_zero()) throw EvalDivisionByZero(ctx.index);
            // Cheap parity shortcut keeps (-1)^(j-1) fast at large j.
            if (base.abs() == Rational(1)) {
                bool odd = mpz_odd_p(ei.get_mpz_t()) != 0;
                return (base.is_negative() && odd) ? Rational(-1) : Rational(1);
            }
            return base.pow(el);
        }
        case Op::Factorial: {
            Rational v = eval_term(*e.operand(), ctx);
            if (!v.is_integer() || v.is_negative()) throw FactorialDomainError(ctx.index);
            BigInt n = v.num();
            if (n > detail::kMaxFactorialOperand)
                throw CapacityError("factorial operand exceeds the capacity limit");
            return Rational(factorial(n.get_ui()));
        }
    }
    throw Error("unreachable term op");
}

inline Rational eval_term_at(const TermExpr& e, std::uint64_t j) {
    return eval_term(e, EvalContext::at(j));
}

}  // namespace ratsum
