#pragma once

#include <cstddef>
#include <vector>

#include "ratsum/errors.hpp"
#include "ratsum/interval.hpp"
#include "ratsum/rational.hpp"

namespace ratsum {

/**
 * Wynn epsilon algorithm in exact rational arithmetic. Returns the even
 * column diagonal: eps_0 at the last input, then eps_2, eps_4, ... each
 * taken at its deepest available entry. Columns truncate at the first exact
 * zero difference; a zero difference inside an even column means two equal
 * accelerated estimates, which is taken as an exact fixed point and ends
 * the diagonal there.
 */
inline std::vector<Rational> wynn_epsilon(const std::vector<Rational>& values) {
    if (values.size() < 3) throw InsufficientData("wynn_epsilon needs at least 3 values");
    std::vector<Rational> diagonal;
    diagonal.push_back(values.back());

    std::vector<Rational> older(values.size() + 1, Rational(0));  // eps_{-1} = 0
    std::vector<Rational> cur = values;                           // eps_0
    std::size_t column = 0;

    while (cur.size() >= 2) {
        std::vector<Rational> next;
        next.reserve(cur.size() - 1);
        bool stop = false;
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            Rational diff = cur[i + 1] - cur[i];
            if (diff.is_zero()) {
                // Two equal entries deep in an even column are an exact
                // accelerated limit; anywhere else the column is singular.
                if (column >= 2 && column % 2 == 0) {
                    if (diagonal.back() != cur[i]) diagonal.push_back(cur[i]);
                }
                stop = true;
                break;
            }
            next.push_back(older[i + 1] + diff.reciprocal());
        }
        if (stop || next.empty()) break;
        older = std::move(cur);
        cur = std::move(next);
        ++column;
        if (column % 2 == 0) diagonal.push_back(cur.back());
    }

    if (diagonal.size() == 1) {
        bool constant_input = true;
        for (const auto& v : values) constant_input = constant_input && v == values.front();
        if (!constant_input)
            throw DegenerateTable("all usable epsilon columns collapsed");
    }
    return diagonal;
}

/// Single Aitken delta-squared pass; entries with a vanishing second
/// difference are skipped. Throws DegenerateTable when nothing survives.
inline std::vector<Rational> aitken_delta_squared(const std::vector<Rational>& values) {
    if (values.size() < 3) throw InsufficientData("aitken needs at least 3 values");
    std::vector<Rational> out;
    for (std::size_t i = 0; i + 2 < values.size(); ++i) {
        Rational d1 = values[i + 1] - values[i];
        Rational d2 = values[i + 2] - Rational(2) * values[i + 1] + values[i];
        if (d2.is_zero()) {
            if (d1.is_zero()) out.push_back(values[i]);  // locally constant
            continue;
        }
        out.push_back(values[i] - d1 * d1 / d2);
    }
    if (out.empty()) throw DegenerateTable("aitken pass produced no entries");
    return out;
}

/// Iterated Aitken: repeats passes while possible, collecting the last entry
/// of each stage (stage 0 is the raw tail value).
inline std::vector<Rational> iterated_aitken(const std::vector<Rational>& values) {
    if (values.size() < 3) throw InsufficientData("aitken needs at least 3 values");
    std::vector<Rational> stages;
    stages.push_back(values.back());
    std::vector<Rational> cur = values;
    while (cur.size() >= 3) {
        std::vector<Rational> next;
        try {
            next = aitken_delta_squared(cur);
        } catch (const DegenerateTable&) {
            break;
        }
        stages.push_back(next.back());
        cur = std::move(next);
    }
    return stages;
}

/**
 * Euler-style acceleration of an alternating series by repeated averaging of
 * the partial sums. The terms must strictly alternate in sign with strictly
 * decreasing magnitudes (checked exactly; NotAlternating otherwise, carrying
 * the 1-based position of the first offender).
 *
 * The raw partial sums bracket the limit by the alternating series theorem;
 * every averaged row whose consecutive differences still alternate in sign
 * brackets it too, so the returned enclosure is the intersection of the
 * last-two-entry hulls of all rows that pass the exact alternation check.
 */
struct EulerAccelResult {
    std::vector<Rational> accelerated;  // last entry of each averaging level
    Interval bracket;
    std::size_t levels_used = 0;
    std::size_t terms_used = 0;
};

inline EulerAccelResult euler_transform(const std::vector<Rational>& terms) {
    if (terms.size() < 2) throw NotAlternating(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].is_zero()) throw NotAlternating(i + 1);
        if (i > 0 && (terms[i].sign() == terms[i - 1].sign() ||
                      !(terms[i].abs() < terms[i - 1].abs())))
            throw NotAlternating(i + 1);
    }

    // Window certificate for deep averaging: the k-th forward differences of
    // the term magnitudes must keep the sign (-1)^k (total monotonicity on
    // the window). Level m of the averaging table brackets the limit as long
    // as the certificate holds through order m.
    std::size_t certified_depth = 0;
    {
        std::vector<Rational> mags;
        mags.reserve(terms.size());
        for (const auto& t : terms) mags.push_back(t.abs());
        int expected_sign = -1;
        while (mags.size() >= 2) {
            std::vector<Rational> next;
            next.reserve(mags.size() - 1);
            bool ok = true;
            for (std::size_t i = 0; i + 1 < mags.size(); ++i) {
                Rational d = mags[i + 1] - mags[i];
                ok = ok && d.sign() == expected_sign;
                next.push_back(std::move(d));
            }
            if (!ok) break;
            ++certified_depth;
            expected_sign = -expected_sign;
            mags = std::move(next);
        }
    }

    std::vector<Rational> row;
    row.reserve(terms.size());
    Rational sum(0);
    for (const auto& t : terms) {
        sum += t;
        row.push_back(sum);
    }

    EulerAccelResult res;
    res.terms_used = terms.size();
    res.accelerated.push_back(row.back());
    res.bracket = Interval::hull(row[row.size() - 2], row.back());

    while (row.size() >= 3 && res.levels_used < certified_depth) {
        std::vector<Rational> next;
        next.reserve(row.size() - 1);
        for (std::size_t i = 0; i + 1 < row.size(); ++i)
            next.push_back((row[i] + row[i + 1]) / Rational(2));
        row = std::move(next);
        ++res.levels_used;
        res.accelerated.push_back(row.back());
        Interval level_hull = Interval::hull(row[row.size() - 2], row.back());
        auto tightened = res.bracket.intersect(level_hull);
        if (!tightened) break;
        res.bracket = *tightened;
    }
    return res;
}

}  // namespace ratsum
