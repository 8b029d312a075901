#pragma once

// Brute-force reference implementations. These exist for differential
// testing: they enumerate instead of pruning and are deliberately kept free
// of the optimized code paths they check. Shipped so downstream users can
// cross-examine custom configurations; not meant for real data sizes.

#include "rulemine/apriori.hpp"
#include "rulemine/core.hpp"
#include "rulemine/quantitative.hpp"
#include "rulemine/rulegen.hpp"
#include "rulemine/taxonomy.hpp"

namespace rulemine::oracle {

/// Every one of the 2^n - 1 itemsets counted by direct scan, filtered by
/// minimum support. Guarded to small dictionaries.
inline FrequentItemsets bf_frequent_itemsets(const TransactionDatabase& db,
                                             const Fraction& min_support) {
    const std::size_t n = db.items().size();
    if (n > 16) throw Error("brute-force oracle limited to 16 items");
    if (db.size() == 0) throw Error("cannot mine an empty database");

    std::vector<std::vector<CountedItemset>> levels(n);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        Itemset s;
        for (std::uint32_t b = 0; b < n; ++b)
            if (mask & (1u << b)) s.push_back(b);
        const Support supp = db.support(s);
        if (supp >= min_support) {
            const std::size_t k = s.size();
            levels[k - 1].push_back(CountedItemset{std::move(s), supp.count});
        }
    }

    FrequentItemsets out(db.size());
    for (auto& level : levels) {
        if (level.empty()) break;
        std::sort(level.begin(), level.end(),
                  [](const CountedItemset& a, const CountedItemset& b) {
                      return a.items < b.items;
                  });
        out.add_level(std::move(level));
    }
    return out;
}

/// Every split of every frequent itemset into non-empty antecedent and
/// consequent, filtered by minimum confidence only.
inline std::vector<Rule> bf_rules(const FrequentItemsets& frequent, const Fraction& min_conf) {
    std::vector<Rule> rules;
    for (std::size_t k = 2; k <= frequent.max_size(); ++k) {
        for (const CountedItemset& entry : frequent.level(k)) {
            const Itemset& whole = entry.items;
            const Support supp_whole{entry.count, frequent.total_transactions()};
            // Subsets via bitmasks over positions; skip empty and full.
            for (std::uint32_t mask = 1; mask + 1 < (1u << whole.size()); ++mask) {
                Itemset antecedent, consequent;
                for (std::size_t i = 0; i < whole.size(); ++i)
                    ((mask >> i) & 1 ? antecedent : consequent).push_back(whole[i]);
                const Fraction conf = confidence(supp_whole, frequent.support_of(antecedent));
                if (conf >= min_conf)
                    rules.push_back(Rule{std::move(antecedent), std::move(consequent),
                                         supp_whole, conf});
            }
        }
    }
    std::sort(rules.begin(), rules.end(), rule_order);
    return rules;
}

/// Plain containment filter, the reference for HashTree::subset.
inline std::vector<Itemset> naive_subset(const std::vector<Itemset>& candidates,
                                         const Itemset& transaction) {
    std::vector<Itemset> out;
    for (const Itemset& c : candidates)
        if (c.size() <= transaction.size() &&
            std::includes(transaction.begin(), transaction.end(), c.begin(), c.end()))
            out.push_back(c);
    return out;
}

// ---------------------------------------------------------------------------
// Name-keyed views for cross-pipeline comparisons. The optimized generalized
// miner works in node-id space, the naive pipeline rebuilds a database whose
// ids differ; names are the common currency.
// ---------------------------------------------------------------------------

struct NamedItemset {
    std::vector<std::string> items;  // sorted by name
    std::int64_t count{0};

    friend bool operator==(const NamedItemset& a, const NamedItemset& b) {
        return a.items == b.items && a.count == b.count;
    }
    friend bool operator<(const NamedItemset& a, const NamedItemset& b) {
        return a.items != b.items ? a.items < b.items : a.count < b.count;
    }
};

struct NamedRule {
    std::vector<std::string> antecedent;  // sorted by name
    std::vector<std::string> consequent;
    Support support;
    Fraction confidence;

    friend bool operator==(const NamedRule& a, const NamedRule& b) {
        return a.antecedent == b.antecedent && a.consequent == b.consequent &&
               a.support == b.support && a.confidence == b.confidence;
    }
    friend bool operator<(const NamedRule& a, const NamedRule& b) {
        if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
        return a.consequent < b.consequent;
    }
};

template <class NameFn>
std::vector<std::string> sorted_names(const Itemset& s, NameFn&& name_of) {
    std::vector<std::string> out;
    out.reserve(s.size());
    for (ItemId id : s) out.push_back(name_of(id));
    std::sort(out.begin(), out.end());
    return out;
}

template <class NameFn>
std::vector<NamedItemset> to_named_itemsets(const FrequentItemsets& frequent, NameFn&& name_of) {
    std::vector<NamedItemset> out;
    for (std::size_t k = 1; k <= frequent.max_size(); ++k)
        for (const CountedItemset& c : frequent.level(k))
            out.push_back(NamedItemset{sorted_names(c.items, name_of), c.count});
    std::sort(out.begin(), out.end());
    return out;
}

template <class NameFn>
std::vector<NamedRule> to_named_rules(const std::vector<Rule>& rules, NameFn&& name_of) {
    std::vector<NamedRule> out;
    out.reserve(rules.size());
    for (const Rule& r : rules)
        out.push_back(NamedRule{sorted_names(r.antecedent, name_of),
                                sorted_names(r.consequent, name_of), r.support, r.confidence});
    std::sort(out.begin(), out.end());
    return out;
}

/// Unoptimized generalized mining: extend everything up front, run the plain
/// pipeline, then drop itemsets pairing an item with its own ancestor.
struct NaiveGeneralized {
    std::vector<NamedItemset> itemsets;
    std::vector<NamedRule> rules;
};

inline NaiveGeneralized naive_generalized(const TransactionDatabase& db,
                                          const TaxonomyGraph& tax,
                                          const Fraction& min_support,
                                          const Fraction& min_confidence) {
    const TransactionDatabase ext = extend_database(db, tax);
    const FrequentItemsets frequent = apriori(ext, min_support);
    const std::vector<Rule> rules = generate_rules(frequent, min_confidence);

    auto node_ids = [&](const std::vector<std::string>& names) {
        Itemset ids;
        for (const std::string& n : names) ids.push_back(*tax.find(n));
        std::sort(ids.begin(), ids.end());
        return ids;
    };
    auto name_of = [&](ItemId id) { return ext.items().name(id); };

    NaiveGeneralized out;
    for (const NamedItemset& ns : to_named_itemsets(frequent, name_of))
        if (!has_item_ancestor_pair(node_ids(ns.items), tax)) out.itemsets.push_back(ns);
    for (const NamedRule& nr : to_named_rules(rules, name_of)) {
        std::vector<std::string> whole = nr.antecedent;
        whole.insert(whole.end(), nr.consequent.begin(), nr.consequent.end());
        if (!has_item_ancestor_pair(node_ids(whole), tax)) out.rules.push_back(nr);
    }
    return out;
}

/// Every consecutive union of base intervals, filtered by maximum support
/// alone (no scan, no early stop); the reference for merge_adjacent.
inline std::vector<Interval> bf_merged_intervals(const Partitioning& p,
                                                 const QuantitativeAttribute& attr,
                                                 std::int64_t n_transactions,
                                                 const Fraction& max_support) {
    std::vector<Interval> out;
    const auto& base = p.intervals;
    for (std::size_t i = 0; i < base.size(); ++i) {
        for (std::size_t j = i; j < base.size(); ++j) {
            const Interval u{base[i].lo, base[j].hi};
            if (j == i || Support{attr.interval_count(u), n_transactions} <= max_support)
                out.push_back(u);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace rulemine::oracle
