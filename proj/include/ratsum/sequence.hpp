#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ratsum/constants.hpp"
#include "ratsum/errors.hpp"
#include "ratsum/interval.hpp"
#include "ratsum/rational.hpp"
#include "ratsum/term.hpp"

namespace ratsum {

/**
 * First-order recurrence u_{i+1} = update(u_i, i) with explicit initial
 * values at consecutive indices starting at 1. The update expression is a
 * term over the variables `u` (previous value) and `i` (previous index).
 */
struct RecurrenceSpec {
    std::vector<std::pair<std::uint64_t, Rational>> initial_values;
    TermPtr update;

    static RecurrenceSpec parse(const std::map<std::uint64_t, Rational>& initial,
                                std::string_view update_text) {
        RecurrenceSpec r;
        std::uint64_t expect = 1;
        for (const auto& [idx, v] : initial) {
            if (idx != expect)
                throw Error("recurrence initial indices must be consecutive starting at 1");
            r.initial_values.emplace_back(idx, v);
            ++expect;
        }
        if (r.initial_values.empty()) throw Error("recurrence needs at least one initial value");
        r.update = parse_term(update_text, {"u", "i"});
        return r;
    }
};

/// Registered sequence family. Direct families trace the function value
/// f(n) itself; the others are term families whose prefix sums are studied.
struct BuiltinInfo {
    std::string name;
    std::vector<std::string> params;
    bool direct;
    bool interval_valued;
    std::string description;
};

inline const std::vector<BuiltinInfo>& builtin_families() {
    static const std::vector<BuiltinInfo> families = {
        {"harmonic", {}, false, false, "u_j = 1/j"},
        {"harmonic_shifted", {"a", "b"}, false, false, "u_j = 1/(a*j+b), integers a>=1, b>=0"},
        {"alt_harmonic", {}, false, false, "u_j = (-1)^(j-1)/j"},
        {"leibniz", {}, false, false, "u_j = (-1)^(j-1)/(2*j-1)"},
        {"inv_factorial", {}, false, false, "u_j = 1/j!"},
        {"inv_square", {}, false, false, "u_j = 1/j^2"},
        {"i_times_ifact", {}, false, false, "u_j = j*j!"},
        {"i_over_succ_fact", {}, false, false, "u_j = j/(j+1)!"},
        {"geometric", {"r"}, false, false, "u_j = r^j"},
        {"newton_sqrt2", {}, true, false, "orbit u_1=1, u_{i+1}=(u_i+2/u_i)/2"},
        {"pow_n_4_3", {}, true, false, "f(n) = n^(4/3), defined at perfect cubes"},
        {"pow_n_neg_5_4", {}, true, false, "f(n) = n^(-5/4), defined at perfect fourth powers"},
        {"pow_2_neg_n", {}, true, false, "f(n) = 2^-n"},
        {"one_plus_pow3_neg_n", {}, true, false, "f(n) = 1 + 3^-n"},
        {"h_minus_ln", {}, true, true, "f(n) = H_n - ln n (interval valued)"},
        {"pow_n_neg_1_2", {}, true, false, "f(n) = n^(-1/2), defined at perfect squares"},
    };
    return families;
}

inline const BuiltinInfo* find_builtin(std::string_view name) {
    for (const auto& f : builtin_families())
        if (f.name == name) return &f;
    return nullptr;
}

/**
 * A sequence definition: a registered builtin family, a parsed closed-form
 * term in `j`, or a first-order recurrence. Optional term overrides replace
 * individual values after evaluation.
 */
class SequenceSpec {
  public:
    enum class Kind { Builtin, ClosedTerm, Recurrence };

    static SequenceSpec builtin(std::string name, std::map<std::string, Rational> params = {}) {
        const BuiltinInfo* info = find_builtin(name);
        if (info == nullptr) throw Error("unknown builtin sequence family '" + name + "'");
        for (const auto& p : info->params)
            if (!params.count(p))
                throw Error("builtin '" + name + "' requires parameter '" + p + "'");
        for (const auto& [k, v] : params) {
            bool known = false;
            for (const auto& p : info->params) known = known || p == k;
            if (!known) throw Error("builtin '" + name + "' has no parameter '" + k + "'");
        }
        if (name == "harmonic_shifted") {
            const Rational& a = params.at("a");
            const Rational& b = params.at("b");
            if (!a.is_integer() || !b.is_integer() || a < Rational(1) || b.is_negative())
                throw Error("harmonic_shifted needs integers a >= 1, b >= 0");
        }
        SequenceSpec s;
        s.kind_ = Kind::Builtin;
        s.name_ = std::move(name);
        s.params_ = std::move(params);
        return s;
    }

    static SequenceSpec closed_term(std::string_view expr_text) {
        SequenceSpec s;
        s.kind_ = Kind::ClosedTerm;
        s.term_ = parse_term(expr_text, {"j"});
        return s;
    }

    static SequenceSpec closed_term(TermPtr expr) {
        SequenceSpec s;
        s.kind_ = Kind::ClosedTerm;
        s.term_ = std::move(expr);
        return s;
    }

    static SequenceSpec recurrence(RecurrenceSpec rec) {
        SequenceSpec s;
        s.kind_ = Kind::Recurrence;
        s.rec_ = std::move(rec);
        return s;
    }

    SequenceSpec& with_override(std::uint64_t index, Rational value) {
        overrides_[index] = std::move(value);
        return *this;
    }

    Kind kind() const { return kind_; }
    const std::string& builtin_name() const { return name_; }
    const std::map<std::string, Rational>& params() const { return params_; }
    const TermPtr& term() const { return term_; }
    const RecurrenceSpec& rec() const { return rec_; }
    const std::map<std::uint64_t, Rational>& overrides() const { return overrides_; }

    /// Direct-trace semantics: values are f(n) rather than prefix sums.
    bool direct() const {
        if (kind_ == Kind::Recurrence) return true;
        if (kind_ == Kind::Builtin) return find_builtin(name_)->direct;
        return false;
    }

    bool interval_valued() const {
        return kind_ == Kind::Builtin && find_builtin(name_)->interval_valued;
    }

    std::string display() const {
        switch (kind_) {
            case Kind::Builtin: {
                std::string s = name_;
                if (!params_.empty()) {
                    s += "(";
                    bool first = true;
                    for (const auto& p : find_builtin(name_)->params) {
                        if (!first) s += ", ";
                        s += p + "=" + params_.at(p).to_string();
                        first = false;
                    }
                    s += ")";
                }
                return s;
            }
            case Kind::ClosedTerm: return "term " + to_string(term_);
            case Kind::Recurrence: {
                std::string s = "recurrence u(" + std::to_string(rec_.initial_values[0].first) +
                                ")=" + rec_.initial_values[0].second.to_string();
                for (std::size_t i = 1; i < rec_.initial_values.size(); ++i)
                    s += ", u(" + std::to_string(rec_.initial_values[i].first) +
                         ")=" + rec_.initial_values[i].second.to_string();
                return s + ", next=" + to_string(rec_.update);
            }
        }
        return "?";
    }

  private:
    Kind kind_ = Kind::ClosedTerm;
    std::string name_;
    std::map<std::string, Rational> params_;
    TermPtr term_;
    RecurrenceSpec rec_;
    std::map<std::uint64_t, Rational> overrides_;
};

// ---------------------------------------------------------------------------
// JSON serialization (canonical ordering; "p/q" strings; bit-exact round
// trip for canonical documents)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const SequenceSpec& spec) {
    nlohmann::ordered_json j;
    switch (spec.kind()) {
        case SequenceSpec::Kind::Builtin: {
            j["kind"] = "builtin";
            j["name"] = spec.builtin_name();
            if (!spec.params().empty()) {
                nlohmann::ordered_json p;
                for (const auto& name : find_builtin(spec.builtin_name())->params)
                    p[name] = spec.params().at(name).to_string();
                j["params"] = std::move(p);
            }
            break;
        }
        case SequenceSpec::Kind::ClosedTerm:
            j["kind"] = "term";
            j["expr"] = to_string(spec.term());
            break;
        case SequenceSpec::Kind::Recurrence: {
            j["kind"] = "recurrence";
            nlohmann::ordered_json init;
            for (const auto& [idx, v] : spec.rec().initial_values)
                init[std::to_string(idx)] = v.to_string();
            j["initial"] = std::move(init);
            j["update"] = to_string(spec.rec().update);
            break;
        }
    }
    if (!spec.overrides().empty()) {
        nlohmann::ordered_json ov;
        for (const auto& [idx, v] : spec.overrides()) ov[std::to_string(idx)] = v.to_string();
        j["overrides"] = std::move(ov);
    }
    return j;
}

inline SequenceSpec spec_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw SyntaxError(0, "a sequence spec object with a \"kind\" field");
    auto parse_index = [](const std::string& key) -> std::uint64_t {
        if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
            throw SyntaxError(0, "a positive integer index key");
        return std::stoull(key);
    };
    std::string kind = j.at("kind").get<std::string>();
    SequenceSpec spec = [&]() {
        if (kind == "builtin") {
            std::map<std::string, Rational> params;
            if (j.contains("params"))
                for (const auto& [k, v] : j.at("params").items())
                    params.emplace(k, Rational::from_string(v.get<std::string>()));
            return SequenceSpec::builtin(j.at("name").get<std::string>(), std::move(params));
        }
        if (kind == "term") return SequenceSpec::closed_term(j.at("expr").get<std::string>());
        if (kind == "recurrence") {
            std::map<std::uint64_t, Rational> initial;
            for (const auto& [k, v] : j.at("initial").items())
                initial.emplace(parse_index(k), Rational::from_string(v.get<std::string>()));
            return SequenceSpec::recurrence(
                RecurrenceSpec::parse(initial, j.at("update").get<std::string>()));
        }
        throw SyntaxError(0, "kind \"builtin\", \"term\" or \"recurrence\"");
    }();
    if (j.contains("overrides"))
        for (const auto& [k, v] : j.at("overrides").items())
            spec.with_override(parse_index(k), Rational::from_string(v.get<std::string>()));
    return spec;
}

// ---------------------------------------------------------------------------
// Evaluation sessions
// ---------------------------------------------------------------------------

struct SessionOptions {
    std::uint64_t exact_index_cutoff = 1ull << 14;
    std::size_t exact_bit_budget = 1u << 20;
    // Outward rounding can only shrink fractional parts, so integer growth
    // gets a much smaller budget; past it the value is a capacity error.
    std::size_t term_integer_budget = 1u << 16;
    unsigned dyadic_bits = 192;
    bool allow_capping = true;
};

namespace detail {

/// Running H_n, exact until the cutoff/bit budget, then outward-rounded on a
/// dyadic grid. Total capping drift stays far below 2^-128 for n <= 2^30.
class HarmonicAccumulator {
  public:
    explicit HarmonicAccumulator(const SessionOptions& opt) : opt_(opt) {}

    const Interval& advance_to(std::uint64_t n) {
        if (n < n_) throw Error("harmonic accumulator indices must be nondecreasing");
        while (n_ < n) {
            ++n_;
            Rational term(BigInt(1), BigInt(static_cast<unsigned long>(n_)));
            value_ += Interval(term);
            if (!capped_ && (n_ >= opt_.exact_index_cutoff ||
                             value_.lo().bit_size() > opt_.exact_bit_budget)) {
                if (!opt_.allow_capping)
                    throw CapacityError("exact harmonic accumulation past feasible size");
                capped_ = true;
            }
            if (capped_) value_ = value_.round_outward(opt_.dyadic_bits);
        }
        return value_;
    }

    bool capped() const { return capped_; }

  private:
    SessionOptions opt_;
    Interval value_{Rational(0)};
    std::uint64_t n_ = 0;
    bool capped_ = false;
};

/// Interval evaluation of a term expression (used for capped recurrence
/// orbits). Mirrors eval_term; factorial requires a point integer.
inline Interval interval_eval_term(const TermExpr& e, const std::map<std::string, Interval>& vars,
                                   std::uint64_t index) {
    using Op = TermExpr::Op;
    switch (e.op()) {
        case Op::Integer: return Interval(Rational(e.value()));
        case Op::Variable: {
            auto it = vars.find(e.name());
            if (it == vars.end()) throw UnknownIdentifier(e.name(), 0);
            return it->second;
        }
        case Op::Negate: return -interval_eval_term(*e.operand(), vars, index);
        case Op::Add:
            return interval_eval_term(*e.left(), vars, index) +
                   interval_eval_term(*e.right(), vars, index);
        case Op::Sub:
            return interval_eval_term(*e.left(), vars, index) -
                   interval_eval_term(*e.right(), vars, index);
        case Op::Mul:
            return interval_eval_term(*e.left(), vars, index) *
                   interval_eval_term(*e.right(), vars, index);
        case Op::Div: {
            Interval den = interval_eval_term(*e.right(), vars, index);
            if (den.contains_zero()) throw EvalDivisionByZero(index);
            return interval_eval_term(*e.left(), vars, index) / den;
        }
        case Op::Pow: {
            Interval base = interval_eval_term(*e.left(), vars, index);
            Interval expo = interval_eval_term(*e.right(), vars, index);
            if (!expo.is_point() || !expo.lo().is_integer()) throw ExponentNotInteger(index);
            long el = static_cast<long>(expo.lo().num().get_si());
            bool invert = el < 0;
            unsigned long mag = invert ? static_cast<unsigned long>(-el) : static_cast<unsigned long>(el);
            if (mag > (1u << 20))
                throw CapacityError("interval exponent magnitude exceeds the capacity limit");
            Interval acc{Rational(1)};
            for (unsigned long k = 0; k < mag; ++k) acc = acc * base;
            if (invert) {
                if (acc.contains_zero()) throw EvalDivisionByZero(index);
                acc = Interval(Rational(1)) / acc;
            }
            return acc;
        }
        case Op::Factorial: {
            Interval v = interval_eval_term(*e.operand(), vars, index);
            if (!v.is_point() || !v.lo().is_integer() || v.lo().is_negative())
                throw FactorialDomainError(index);
            return Interval(Rational(factorial(v.lo().num().get_ui())));
        }
    }
    throw Error("unreachable term op");
}

inline bool is_perfect_power(std::uint64_t n, unsigned long k, BigInt& root) {
    BigInt nn(static_cast<unsigned long>(n));
    BigInt r;
    int exactp = mpz_root(r.get_mpz_t(), nn.get_mpz_t(), k);
    root = r;
    return exactp != 0;
}

}  // namespace detail

/**
 * One evaluation session over a SequenceSpec: a stateful, sequential term or
 * value source. Recurrence orbits are memoized for the session lifetime;
 * running products/factorials are maintained incrementally. Values switch
 * from exact points to outward-rounded intervals when exact representations
 * pass the configured budgets.
 */
class SequenceSession {
  public:
    explicit SequenceSession(const SequenceSpec& spec, SessionOptions opt = {})
        : spec_(spec), opt_(opt) {
        if (spec_.kind() == SequenceSpec::Kind::Builtin) {
            family_ = spec_.builtin_name();
            if (family_ == "geometric") ratio_ = spec_.params().at("r");
            if (family_ == "harmonic_shifted") {
                shift_a_ = spec_.params().at("a").num();
                shift_b_ = spec_.params().at("b").num();
            }
            if (family_ == "h_minus_ln") harmonic_.emplace(opt_);
        } else if (spec_.kind() == SequenceSpec::Kind::Recurrence) {
            for (const auto& [idx, v] : spec_.rec().initial_values) orbit_.emplace_back(Interval(v));
        }
        if (family_ == "newton_sqrt2") orbit_.emplace_back(Interval(Rational(1)));
    }

    bool direct() const { return spec_.direct(); }

    /// Next term u_j of a summed family; j advances 1, 2, 3, ...
    Interval next_term() {
        std::uint64_t j = ++index_;
        auto it = spec_.overrides().find(j);
        if (it != spec_.overrides().end()) return Interval(it->second);
        return raw_term(j);
    }

    std::uint64_t current_index() const { return index_; }

    /// Direct value f(n); n must be nondecreasing across calls.
    Interval value_at(std::uint64_t n) {
        auto it = spec_.overrides().find(n);
        if (it != spec_.overrides().end()) return Interval(it->second);
        return raw_value(n);
    }

  private:
    Interval capped(Rational exact) const {
        Interval v{std::move(exact)};
        if (v.lo().bit_size() > opt_.exact_bit_budget) {
            if (!opt_.allow_capping) throw CapacityError("exact value past the bit budget");
            BigInt integer_part = v.abs().hi().num() / v.abs().hi().den();
            guard_integer_growth(mpz_sizeinbase(integer_part.get_mpz_t(), 2), index_);
            return v.round_outward(opt_.dyadic_bits);
        }
        return v;
    }

    void guard_integer_growth(std::size_t bits, std::uint64_t at) const {
        if (bits > opt_.term_integer_budget)
            throw CapacityError("value at index " + std::to_string(at) +
                                " exceeds the exact bit budget");
    }

    Interval raw_term(std::uint64_t j) {
        unsigned long ju = static_cast<unsigned long>(j);
        if (family_.empty()) {
            // closed-form term
            Rational v = eval_term_at(*spec_.term(), j);
            return capped(std::move(v));
        }
        if (family_ == "harmonic") return Interval(Rational(BigInt(1), BigInt(ju)));
        if (family_ == "harmonic_shifted")
            return Interval(Rational(BigInt(1), shift_a_ * BigInt(ju) + shift_b_));
        if (family_ == "alt_harmonic") {
            Rational v(BigInt(1), BigInt(ju));
            return Interval(j % 2 == 1 ? v : -v);
        }
        if (family_ == "leibniz") {
            Rational v(BigInt(1), BigInt(2 * ju - 1));
            return Interval(j % 2 == 1 ? v : -v);
        }
        if (family_ == "inv_square") return Interval(Rational(BigInt(1), BigInt(BigInt(ju) * BigInt(ju))));
        if (family_ == "inv_factorial") return running_inv_factorial(j, 0);
        if (family_ == "i_over_succ_fact") return running_inv_factorial(j, 1) * Interval(Rational(BigInt(ju)));
        if (family_ == "i_times_ifact") {
            if (running_fact_ == 0) running_fact_ = 1;
            running_fact_ *= BigInt(ju);
            guard_integer_growth(mpz_sizeinbase(running_fact_.get_mpz_t(), 2), j);
            return Interval(Rational(BigInt(BigInt(ju) * running_fact_)));
        }
        if (family_ == "geometric") {
            power_ = power_ * Interval(ratio_);
            std::size_t bits = std::max(power_.lo().bit_size(), power_.hi().bit_size());
            if (power_capped_ || bits > opt_.exact_bit_budget) {
                if (!opt_.allow_capping) throw CapacityError("geometric power past the bit budget");
                BigInt magnitude = power_.abs().hi().num() / power_.abs().hi().den();
                guard_integer_growth(mpz_sizeinbase(magnitude.get_mpz_t(), 2), j);
                power_ = power_.round_outward(opt_.dyadic_bits + 64);
                power_capped_ = true;
            }
            return power_;
        }
        throw Error("family '" + family_ + "' is a direct-trace family, not a term family");
    }

    /// 1/(j+shift)! maintained incrementally; capped once past the budget.
    Interval running_inv_factorial(std::uint64_t j, unsigned shift) {
        if (inv_fact_index_ == 0) {
            inv_fact_ = Interval(Rational(BigInt(1), factorial(1 + shift)));
            inv_fact_index_ = 1;
        }
        while (inv_fact_index_ < j) {
            ++inv_fact_index_;
            Rational inv(BigInt(1), BigInt(static_cast<unsigned long>(inv_fact_index_ + shift)));
            inv_fact_ = inv_fact_ * Interval(inv);
            if (inv_fact_.lo().bit_size() > opt_.exact_bit_budget) {
                if (!opt_.allow_capping) throw CapacityError("factorial term past the bit budget");
                inv_fact_ = inv_fact_.round_outward(opt_.dyadic_bits + 64);
            }
        }
        return inv_fact_;
    }

    Interval raw_value(std::uint64_t n) {
        unsigned long nu = static_cast<unsigned long>(n);
        if (spec_.kind() == SequenceSpec::Kind::Recurrence || family_ == "newton_sqrt2")
            return orbit_value(n);
        if (family_ == "pow_n_4_3") {
            BigInt root;
            if (!detail::is_perfect_power(n, 3, root))
                throw DomainError("pow_n_4_3 is defined at perfect cubes only", n);
            BigInt r4 = root * root;
            r4 = r4 * r4;
            return Interval(Rational(r4));
        }
        if (family_ == "pow_n_neg_5_4") {
            BigInt root;
            if (!detail::is_perfect_power(n, 4, root))
                throw DomainError("pow_n_neg_5_4 is defined at perfect fourth powers only", n);
            BigInt r2 = root * root;
            BigInt r5 = r2 * r2;
            r5 = r5 * root;
            return Interval(Rational(BigInt(1), r5));
        }
        if (family_ == "pow_2_neg_n") {
            if (n > opt_.exact_bit_budget) {
                if (!opt_.allow_capping) throw CapacityError("2^-n past the bit budget");
                return Interval(Rational(0), Rational(BigInt(1), BigInt(1) << opt_.dyadic_bits));
            }
            return Interval(Rational(BigInt(1), BigInt(1) << nu));
        }
        if (family_ == "one_plus_pow3_neg_n") {
            BigInt p;
            if (static_cast<double>(n) * 1.585 > static_cast<double>(opt_.exact_bit_budget)) {
                if (!opt_.allow_capping) throw CapacityError("3^-n past the bit budget");
                return Interval(Rational(1), Rational(1) + Rational(BigInt(1), BigInt(1) << opt_.dyadic_bits));
            }
            mpz_ui_pow_ui(p.get_mpz_t(), 3, nu);
            return Interval(Rational(1) + Rational(BigInt(1), p));
        }
        if (family_ == "h_minus_ln") {
            Interval h = harmonic_->advance_to(n);
            Interval ln_n = n == 1 ? Interval(Rational(0))
                                   : detail::ln_enclosure(Rational(BigInt(nu)), 160);
            return h - ln_n;
        }
        if (family_ == "pow_n_neg_1_2") {
            BigInt root;
            if (!detail::is_perfect_power(n, 2, root))
                throw DomainError("pow_n_neg_1_2 is defined at perfect squares only", n);
            return Interval(Rational(BigInt(1), root));
        }
        throw Error("family '" + family_ + "' is a term family, not a direct-trace family");
    }

    Interval orbit_value(std::uint64_t n) {
        if (n < 1) throw Error("orbit index must be positive");
        while (orbit_.size() < n) {
            std::uint64_t prev_index = orbit_.size();
            const Interval& u = orbit_.back();
            Interval next;
            if (family_ == "newton_sqrt2") {
                if (u.contains_zero()) throw EvalDivisionByZero(prev_index);
                next = (u + Interval(Rational(2)) / u) / Interval(Rational(2));
            } else {
                std::map<std::string, Interval> vars{
                    {"u", u}, {"i", Interval(Rational(BigInt(static_cast<unsigned long>(prev_index))))}};
                next = detail::interval_eval_term(*spec_.rec().update, vars, prev_index);
            }
            if (next.lo().bit_size() > opt_.exact_bit_budget ||
                next.hi().bit_size() > opt_.exact_bit_budget) {
                if (!opt_.allow_capping) throw CapacityError("orbit value past the exact bit budget");
                next = next.round_outward(opt_.dyadic_bits * 4);
            }
            orbit_.push_back(std::move(next));
        }
        return orbit_[n - 1];
    }

    SequenceSpec spec_;
    SessionOptions opt_;
    std::string family_;
    std::uint64_t index_ = 0;

    Rational ratio_;
    BigInt shift_a_, shift_b_;
    Interval power_{Rational(1)};
    bool power_capped_ = false;
    BigInt running_fact_{0};
    Interval inv_fact_{Rational(0)};
    std::uint64_t inv_fact_index_ = 0;
    std::vector<Interval> orbit_;
    std::optional<detail::HarmonicAccumulator> harmonic_;
};

/// Exact u_n of a recurrence: iterates the update from the initial values,
/// memoizing the whole orbit in one session.
inline Rational eval_recurrence(const RecurrenceSpec& rec, std::uint64_t n) {
    SequenceSession session(SequenceSpec::recurrence(rec),
                            {.exact_bit_budget = 1u << 24, .allow_capping = false});
    Interval v = session.value_at(n);
    return v.lo();
}

}  // namespace ratsum
