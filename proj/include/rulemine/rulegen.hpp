#pragma once

// Association rule extraction from frequent itemsets by consequent growing:
// 1-item consequents first, failing consequents dropped, survivors joined
// into larger consequents. Sound because moving items from the antecedent to
// the consequent can only lower confidence.

#include "rulemine/apriori.hpp"
#include "rulemine/core.hpp"

namespace rulemine {

struct Rule {
    Itemset antecedent;
    Itemset consequent;
    Support support;      // of antecedent ∪ consequent
    Fraction confidence;  // kept as the raw count ratio, e.g. 2/4

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.antecedent == b.antecedent && a.consequent == b.consequent &&
               a.support == b.support && a.confidence == b.confidence;
    }
};

/// confidence(X -> Y) = support(X ∪ Y) / support(X), exact.
inline Fraction confidence(const Support& supp_union, const Support& supp_antecedent) {
    if (supp_antecedent.count <= 0) throw Error("zero antecedent support");
    if (supp_union.count > supp_antecedent.count)
        throw Error("union support exceeds antecedent support");
    return Fraction(supp_union.count, supp_antecedent.count);
}

/// Ordering: generating itemset size, then antecedent, then consequent.
inline bool rule_order(const Rule& a, const Rule& b) {
    const std::size_t sa = a.antecedent.size() + a.consequent.size();
    const std::size_t sb = b.antecedent.size() + b.consequent.size();
    if (sa != sb) return sa < sb;
    if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
    return a.consequent < b.consequent;
}

/// All rules X -> Y with X ∪ Y frequent and confidence >= min_conf. Both
/// sides are non-empty and partition the generating itemset.
inline std::vector<Rule> generate_rules(const FrequentItemsets& frequent,
                                        const Fraction& min_conf) {
    if (!(Fraction(0, 1) < min_conf) || Fraction(1, 1) < min_conf)
        throw Error("minimum confidence must be in (0, 1]");

    std::vector<Rule> rules;
    for (std::size_t k = 2; k <= frequent.max_size(); ++k) {
        for (const CountedItemset& entry : frequent.level(k)) {
            const Itemset& whole = entry.items;
            const Support supp_whole{entry.count, frequent.total_transactions()};

            // H_1: single-item consequents.
            std::vector<Itemset> consequents;
            consequents.reserve(whole.size());
            for (ItemId id : whole) consequents.push_back(Itemset{id});

            for (std::size_t m = 1; k > m && !consequents.empty(); ++m) {
                std::vector<Itemset> survivors;
                survivors.reserve(consequents.size());
                for (Itemset& h : consequents) {
                    const Itemset antecedent = set_difference(whole, h);
                    const Fraction conf =
                        confidence(supp_whole, frequent.support_of(antecedent));
                    if (conf >= min_conf) {
                        rules.push_back(Rule{antecedent, h, supp_whole, conf});
                        survivors.push_back(std::move(h));
                    }
                }
                consequents = apriori_gen(survivors);
            }
        }
    }
    std::sort(rules.begin(), rules.end(), rule_order);
    return rules;
}

}  // namespace rulemine
