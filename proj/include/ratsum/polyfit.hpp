#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ratsum/errors.hpp"
#include "ratsum/linsys.hpp"
#include "ratsum/rational.hpp"

namespace ratsum {

/// Dense univariate polynomial over Q, ascending coefficients, no trailing
/// zeros (the zero polynomial has an empty coefficient vector).
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }
    static Polynomial constant(Rational v) { return Polynomial({std::move(v)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
    const Rational& leading() const { return c_.back(); }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
        return acc;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }
    Polynomial operator*(const Rational& s) const {
        std::vector<Rational> c = c_;
        for (auto& x : c) x *= s;
        return Polynomial(std::move(c));
    }

    /// Euclidean remainder (this mod d); d must be nonzero.
    Polynomial mod(const Polynomial& d) const {
        if (d.is_zero()) throw DivisionByZero("polynomial modulo zero");
        Polynomial r = *this;
        while (!r.is_zero() && r.degree() >= d.degree()) {
            Rational factor = r.leading() / d.leading();
            std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
            std::vector<Rational> c = r.c_;
            for (std::size_t i = 0; i < d.c_.size(); ++i) c[i + shift] -= factor * d.c_[i];
            c.pop_back();  // leading term cancels exactly
            r = Polynomial(std::move(c));
        }
        return r;
    }

    /// Exact quotient; remainder must vanish.
    Polynomial divexact(const Polynomial& d) const {
        if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
        Polynomial r = *this;
        std::vector<Rational> q(r.is_zero() ? 0 : static_cast<std::size_t>(std::max(0, r.degree() - d.degree() + 1)),
                                Rational(0));
        while (!r.is_zero() && r.degree() >= d.degree()) {
            Rational factor = r.leading() / d.leading();
            std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
            q[shift] = factor;
            std::vector<Rational> c = r.c_;
            for (std::size_t i = 0; i < d.c_.size(); ++i) c[i + shift] -= factor * d.c_[i];
            c.pop_back();
            r = Polynomial(std::move(c));
        }
        if (!r.is_zero()) throw Error("polynomial division is not exact");
        return Polynomial(std::move(q));
    }

    Polynomial monic() const {
        if (is_zero()) return {};
        return *this * leading().reciprocal();
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    std::string to_string(const std::string& var = "n") const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t k = c_.size(); k-- > 0;) {
            if (c_[k].is_zero()) continue;
            Rational v = c_[k];
            if (out.empty()) {
                if (v.is_negative()) out += "-";
            } else {
                out += v.is_negative() ? " - " : " + ";
            }
            Rational a = v.abs();
            bool unit = a == Rational(1) && k > 0;
            if (!unit) out += a.to_string();
            if (k > 0) {
                if (!unit) out += "*";
                out += var;
                if (k > 1) out += "^" + std::to_string(k);
            }
        }
        return out;
    }

  private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Rational> c_;
};

/// Monic polynomial gcd over Q (Euclid; degrees here are tiny).
inline Polynomial poly_gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
        Polynomial r = a.mod(b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return {};
    return a.monic();
}

/**
 * Detects the unique polynomial of degree <= max_degree through samples at
 * consecutive integer indices, iff the (degree+1)-th finite differences
 * vanish on the whole window. Returns the (degree, coefficients) pair or
 * nothing; absence is not an error.
 */
inline std::optional<std::pair<int, Polynomial>> poly_detect(
    const std::vector<std::pair<std::uint64_t, Rational>>& samples, int max_degree) {
    if (max_degree < 0) throw Error("max_degree must be nonnegative");
    if (samples.size() < static_cast<std::size_t>(max_degree) + 2)
        throw InsufficientSamples("poly_detect needs at least max_degree + 2 samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].first != samples[i - 1].first + 1)
            throw Error("poly_detect needs consecutive integer indices");

    std::vector<std::vector<Rational>> diff_rows;
    diff_rows.emplace_back();
    for (const auto& [n, v] : samples) diff_rows.back().push_back(v);

    int degree = -1;
    for (int k = 0; k <= max_degree; ++k) {
        std::vector<Rational> next;
        const auto& row = diff_rows.back();
        for (std::size_t i = 0; i + 1 < row.size(); ++i) next.push_back(row[i + 1] - row[i]);
        bool all_zero = !next.empty();
        for (const auto& v : next) all_zero = all_zero && v.is_zero();
        diff_rows.push_back(std::move(next));
        if (all_zero) {
            degree = k;
            break;
        }
    }
    if (degree < 0) return std::nullopt;

    // Newton forward form around the first index.
    Rational n0(BigInt(static_cast<unsigned long>(samples[0].first)));
    Polynomial result = Polynomial::constant(diff_rows[0][0]);
    Polynomial basis = Polynomial::constant(Rational(1));
    BigInt kfact = 1;
    for (int k = 1; k <= degree; ++k) {
        basis = basis * Polynomial({-(n0 + Rational(k - 1)), Rational(1)});
        kfact *= k;
        result = result + basis * (diff_rows[static_cast<std::size_t>(k)][0] / Rational(kfact));
    }
    for (const auto& [n, v] : samples)
        if (result.eval(Rational(BigInt(static_cast<unsigned long>(n)))) != v)
            return std::nullopt;  // non-polynomial data sneaking past the window
    return std::make_pair(result.degree() < 0 ? 0 : result.degree(), result);
}

/**
 * Rational function P/Q in canonical form: reduced by the polynomial gcd,
 * monic denominator, nonzero leading coefficients.
 */
struct RationalFunction {
    Polynomial num;
    Polynomial den{Polynomial::constant(Rational(1))};

    static RationalFunction canonical(Polynomial p, Polynomial q) {
        if (q.is_zero()) throw DivisionByZero("rational function with zero denominator");
        Polynomial g = poly_gcd(p, q);
        if (!g.is_zero() && g.degree() > 0) {
            p = p.divexact(g);
            q = q.divexact(g);
        }
        Rational lead = q.leading();
        RationalFunction f;
        f.num = p * lead.reciprocal();
        f.den = q * lead.reciprocal();
        return f;
    }

    std::optional<Rational> eval(const Rational& x) const {
        Rational q = den.eval(x);
        if (q.is_zero()) return std::nullopt;
        return num.eval(x) / q;
    }

    bool is_polynomial() const { return den.degree() == 0; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num == b.num && a.den == b.den;
    }

    std::string to_string(const std::string& var = "n") const {
        if (is_polynomial()) return num.to_string(var);
        return "(" + num.to_string(var) + ") / (" + den.to_string(var) + ")";
    }
};

/**
 * Exact Cauchy-style fit of a rational function with numerator degree <= m
 * and denominator degree <= d: solves the homogeneous system
 * P(n_k) - S_k Q(n_k) = 0 over all samples by fraction-free elimination and
 * keeps a candidate only if it reproduces every sample with a nonvanishing
 * denominator (spurious solutions with Q(n_k) = 0 are filtered out).
 * Throws DegenerateSystem when the solution space forces Q == 0.
 */
inline std::optional<RationalFunction> rational_fit(
    const std::vector<std::pair<std::uint64_t, Rational>>& samples, int m, int d) {
    if (m < 0 || d < 0) throw Error("degrees must be nonnegative");
    const std::size_t unknowns = static_cast<std::size_t>(m) + static_cast<std::size_t>(d) + 2;
    if (samples.size() < unknowns)
        throw InsufficientSamples("rational_fit needs at least m + d + 2 samples");
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            if (samples[i].first == samples[j].first)
                throw Error("rational_fit needs distinct sample indices");

    std::vector<std::vector<BigInt>> mat;
    mat.reserve(samples.size());
    for (const auto& [n, s] : samples) {
        std::vector<BigInt> row(unknowns);
        BigInt np = 1;
        BigInt nb(static_cast<unsigned long>(n));
        for (int i = 0; i <= m; ++i) {
            row[static_cast<std::size_t>(i)] = s.den() * np;
            np *= nb;
        }
        np = 1;
        for (int i = 0; i <= d; ++i) {
            row[static_cast<std::size_t>(m) + 1 + static_cast<std::size_t>(i)] = -(s.num() * np);
            np *= nb;
        }
        mat.push_back(std::move(row));
    }

    std::vector<std::vector<BigInt>> basis = integer_nullspace(std::move(mat));
    if (basis.empty()) return std::nullopt;

    bool saw_zero_den_only = true;
    for (const auto& v : basis) {
        std::vector<Rational> pc, qc;
        for (int i = 0; i <= m; ++i) pc.emplace_back(v[static_cast<std::size_t>(i)]);
        for (int i = 0; i <= d; ++i)
            qc.emplace_back(v[static_cast<std::size_t>(m) + 1 + static_cast<std::size_t>(i)]);
        Polynomial p{std::move(pc)}, q{std::move(qc)};
        if (q.is_zero()) continue;
        saw_zero_den_only = false;
        bool ok = true;
        for (const auto& [n, s] : samples) {
            Rational x(BigInt(static_cast<unsigned long>(n)));
            Rational qv = q.eval(x);
            if (qv.is_zero() || p.eval(x) != s * qv) {
                ok = false;
                break;
            }
        }
        if (ok) return RationalFunction::canonical(std::move(p), std::move(q));
    }
    if (saw_zero_den_only)
        throw DegenerateSystem("every nullspace candidate has an identically zero denominator");
    return std::nullopt;
}

}  // namespace ratsum
