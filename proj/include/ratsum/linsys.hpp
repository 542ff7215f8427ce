#pragma once

#include <cstddef>
#include <vector>

#include "ratsum/errors.hpp"
#include "ratsum/rational.hpp"

namespace ratsum {

/**
 * Fraction-free (Bareiss) row echelon reduction of an integer matrix and
 * exact right-nullspace extraction. Intermediate entries stay integral; the
 * returned basis vectors are integer, content-reduced, with the first
 * nonzero entry positive. Deterministic for a given input.
 */
inline std::vector<std::vector<BigInt>> integer_nullspace(std::vector<std::vector<BigInt>> m) {
    if (m.empty()) return {};
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    for (const auto& r : m)
        if (r.size() != cols) throw Error("ragged matrix");

    std::vector<std::size_t> pivot_col;  // pivot column of echelon row k
    BigInt prev_pivot = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        // smallest nonzero entry as pivot keeps Bareiss growth down
        std::size_t best = rows;
        for (std::size_t i = row; i < rows; ++i) {
            if (m[i][col] == 0) continue;
            if (best == rows ||
                mpz_cmpabs(m[i][col].get_mpz_t(), m[best][col].get_mpz_t()) < 0)
                best = i;
        }
        if (best == rows) continue;
        std::swap(m[row], m[best]);
        const BigInt pivot = m[row][col];
        for (std::size_t i = row + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                BigInt t = m[i][j] * pivot - m[i][col] * m[row][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev_pivot.get_mpz_t());
                m[i][j] = t;
            }
            m[i][col] = 0;
        }
        prev_pivot = pivot;
        pivot_col.push_back(col);
        ++row;
    }
    const std::size_t rank = row;

    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;

    std::vector<std::vector<BigInt>> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        // back-substitute over rationals with x[free_col] = 1
        std::vector<Rational> x(cols, Rational(0));
        x[free_col] = Rational(1);
        for (std::size_t k = rank; k-- > 0;) {
            Rational acc(0);
            for (std::size_t j = pivot_col[k] + 1; j < cols; ++j)
                if (!x[j].is_zero()) acc += Rational(m[k][j]) * x[j];
            x[pivot_col[k]] = -acc / Rational(m[k][pivot_col[k]]);
        }
        // clear denominators, reduce content, fix sign
        BigInt lcm_den = 1;
        for (const auto& xi : x) {
            BigInt l;
            mpz_lcm(l.get_mpz_t(), lcm_den.get_mpz_t(), xi.den().get_mpz_t());
            lcm_den = l;
        }
        std::vector<BigInt> v(cols);
        BigInt content = 0;
        for (std::size_t j = 0; j < cols; ++j) {
            v[j] = x[j].num() * (lcm_den / x[j].den());
            BigInt g;
            mpz_gcd(g.get_mpz_t(), content.get_mpz_t(), v[j].get_mpz_t());
            content = g;
        }
        if (content > 1)
            for (auto& vj : v) mpz_divexact(vj.get_mpz_t(), vj.get_mpz_t(), content.get_mpz_t());
        for (const auto& vj : v) {
            if (vj == 0) continue;
            if (vj < 0)
                for (auto& w : v) w = -w;
            break;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace ratsum
