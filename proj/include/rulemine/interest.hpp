#pragma once

// Post-mining interestingness screening. A rule can clear minimum support
// and confidence while its sides are negatively correlated; the 2x2
// presence/absence table exposes that through lift and the chi-squared
// statistic.

#include <cmath>

#include "rulemine/core.hpp"
#include "rulemine/rulegen.hpp"

namespace rulemine {

struct ContingencyTable {
    // Antecedent present/absent x consequent present/absent counts.
    std::int64_t n11{0};
    std::int64_t n10{0};
    std::int64_t n01{0};
    std::int64_t n00{0};

    std::int64_t total() const { return n11 + n10 + n01 + n00; }
    std::int64_t antecedent_count() const { return n11 + n10; }
    std::int64_t consequent_count() const { return n11 + n01; }
};

/// Exact cell counts for a rule by a single scan.
inline ContingencyTable contingency(const TransactionDatabase& db, const Rule& rule) {
    ContingencyTable ct;
    for (const Transaction& t : db.transactions()) {
        const bool a = t.contains(rule.antecedent);
        const bool c = t.contains(rule.consequent);
        ++(a ? (c ? ct.n11 : ct.n10) : (c ? ct.n01 : ct.n00));
    }
    return ct;
}

/// Observed co-occurrence over the independence expectation,
/// n11 * total / (rowsum * colsum). Below 1 flags negative correlation.
inline Fraction lift(const ContingencyTable& ct) {
    const std::int64_t row = ct.antecedent_count();
    const std::int64_t col = ct.consequent_count();
    if (row == 0 || col == 0) throw Error("lift undefined: zero marginal");
    // Keep within 64 bits before constructing the fraction.
    const __int128 num = static_cast<__int128>(ct.n11) * ct.total();
    const __int128 den = static_cast<__int128>(row) * col;
    const __int128 g = [](__int128 a, __int128 b) {
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }(num, den);
    return Fraction(static_cast<std::int64_t>(num / g), static_cast<std::int64_t>(den / g));
}

inline bool negatively_correlated(const ContingencyTable& ct) {
    return lift(ct) < Fraction(1, 1);
}

/// Chi-squared statistic of the 2x2 table with expectations from the
/// marginal products. Unavailable (nullopt) when a marginal is zero, which
/// would make an expected cell zero.
inline std::optional<double> chi_squared(const ContingencyTable& ct) {
    const std::int64_t r1 = ct.n11 + ct.n10;
    const std::int64_t r0 = ct.n01 + ct.n00;
    const std::int64_t c1 = ct.n11 + ct.n01;
    const std::int64_t c0 = ct.n10 + ct.n00;
    if (r1 == 0 || r0 == 0 || c1 == 0 || c0 == 0) return std::nullopt;
    // Closed form: total * (n11 n00 - n10 n01)^2 / (r1 r0 c1 c0).
    const double det = static_cast<double>(ct.n11) * static_cast<double>(ct.n00) -
                       static_cast<double>(ct.n10) * static_cast<double>(ct.n01);
    const double denom = static_cast<double>(r1) * static_cast<double>(r0) *
                         static_cast<double>(c1) * static_cast<double>(c0);
    return static_cast<double>(ct.total()) * det * det / denom;
}

/// 5% critical value of the chi-squared distribution at one degree of
/// freedom; the default significance threshold.
inline constexpr double kChiSquaredCritical5pc = 3.84;

}  // namespace rulemine
