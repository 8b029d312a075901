#pragma once

// Generalized rule mining over an is-a DAG. Database items are the leaves;
// synthetic category nodes extend the item id space. Mining extends each
// transaction by the ancestors of its items, restricted per level to the
// ancestors that still matter, and prunes candidates pairing an item with
// one of its own ancestors.

#include "rulemine/apriori.hpp"
#include "rulemine/core.hpp"
#include "rulemine/rulegen.hpp"

namespace rulemine {

// Node ids: database items keep their ids, categories follow at
// n_items..n_items+c-1 in lexicographic name order, preserving one global
// total order over the extended universe. Holds a reference to the
// database's dictionary; the database must outlive the graph.
class TaxonomyGraph {
public:
    std::size_t item_count() const { return n_items_; }
    std::size_t category_count() const { return category_names_.size(); }
    std::size_t node_count() const { return n_items_ + category_names_.size(); }
    bool has_edges() const { return n_edges_ > 0; }

    const std::string& name(ItemId node) const {
        if (node < n_items_) return item_names_->at(node);
        if (node < node_count()) return category_names_[node - n_items_];
        throw Error("unknown taxonomy node id " + std::to_string(node));
    }

    std::optional<ItemId> find(std::string_view node_name) const {
        auto it = ids_.find(std::string(node_name));
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<ItemId>& children(ItemId node) const { return children_.at(node); }
    const std::vector<ItemId>& parents(ItemId node) const { return parents_.at(node); }
    /// All generalizations of the node, sorted; precomputed at load.
    const std::vector<ItemId>& ancestors(ItemId node) const { return ancestors_.at(node); }

    friend TaxonomyGraph load_taxonomy(std::istream&, const TransactionDatabase&);

private:
    std::size_t n_items_{0};
    std::size_t n_edges_{0};
    std::vector<std::string> category_names_;
    const std::vector<std::string>* item_names_{nullptr};
    std::unordered_map<std::string, ItemId> ids_;
    std::vector<std::vector<ItemId>> children_;
    std::vector<std::vector<ItemId>> parents_;
    std::vector<std::vector<ItemId>> ancestors_;
};

/// Reads "parent child" edges ('#' comments allowed), validates the DAG
/// against the database (acyclic, items are leaves, category sinks are
/// illegal) and precomputes the ancestor closure.
inline TaxonomyGraph load_taxonomy(std::istream& in, const TransactionDatabase& db) {
    std::vector<std::pair<std::string, std::string>> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream row(line);
        std::string parent, child, extra;
        if (!(row >> parent)) continue;  // blank
        if (parent[0] == '#') continue;
        if (!(row >> child) || (row >> extra))
            throw ParseError(line_no, "expected 'parent child'");
        if (parent == child) throw ParseError(line_no, "self edge '" + parent + "'");
        edges.emplace_back(std::move(parent), std::move(child));
    }

    TaxonomyGraph g;
    g.n_items_ = db.items().size();
    g.item_names_ = &db.items().names();
    g.n_edges_ = edges.size();
    for (std::size_t i = 0; i < g.n_items_; ++i)
        g.ids_.emplace(db.items().names()[i], static_cast<ItemId>(i));

    for (const auto& [parent, child] : edges) {
        for (const std::string* name : {&parent, &child})
            if (!g.ids_.count(*name)) g.category_names_.push_back(*name);
    }
    std::sort(g.category_names_.begin(), g.category_names_.end());
    g.category_names_.erase(std::unique(g.category_names_.begin(), g.category_names_.end()),
                            g.category_names_.end());
    for (std::size_t i = 0; i < g.category_names_.size(); ++i)
        g.ids_.emplace(g.category_names_[i], static_cast<ItemId>(g.n_items_ + i));

    const std::size_t n = g.node_count();
    g.children_.assign(n, {});
    g.parents_.assign(n, {});
    for (const auto& [parent, child] : edges) {
        const ItemId p = g.ids_.at(parent);
        const ItemId c = g.ids_.at(child);
        g.children_[p].push_back(c);
        g.parents_[c].push_back(p);
    }
    for (auto& v : g.children_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (auto& v : g.parents_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    // Cycle check: iterative DFS with colors.
    std::vector<int> color(n, 0);  // 0 new, 1 on stack, 2 done
    for (ItemId start = 0; start < n; ++start) {
        if (color[start] != 0) continue;
        std::vector<std::pair<ItemId, std::size_t>> stack{{start, 0}};
        color[start] = 1;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < g.children_[node].size()) {
                const ItemId c = g.children_[node][next++];
                if (color[c] == 1) throw Error("taxonomy contains a cycle through '" +
                                               g.name(c) + "'");
                if (color[c] == 0) {
                    color[c] = 1;
                    stack.emplace_back(c, 0);
                }
            } else {
                color[node] = 2;
                stack.pop_back();
            }
        }
    }

    for (ItemId node = 0; node < g.n_items_; ++node)
        if (!g.children_[node].empty())
            throw Error("database item '" + g.name(node) + "' cannot have specializations");
    for (ItemId node = g.n_items_; node < n; ++node)
        if (g.children_[node].empty())
            throw Error("taxonomy node '" + g.name(node) +
                        "' has no specializations and is not a database item");

    // Ancestor closure, bottom-up along the acyclic parent relation.
    g.ancestors_.assign(n, {});
    std::vector<char> done(n, 0);
    for (ItemId start = 0; start < n; ++start) {
        if (done[start]) continue;
        std::vector<std::pair<ItemId, std::size_t>> stack{{start, 0}};
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < g.parents_[node].size()) {
                const ItemId p = g.parents_[node][next++];
                if (!done[p]) stack.emplace_back(p, 0);
            } else {
                if (!done[node]) {
                    done[node] = 1;
                    std::vector<ItemId> acc;
                    for (ItemId p : g.parents_[node]) {
                        acc.push_back(p);
                        acc.insert(acc.end(), g.ancestors_[p].begin(), g.ancestors_[p].end());
                    }
                    std::sort(acc.begin(), acc.end());
                    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
                    g.ancestors_[node] = std::move(acc);
                }
                stack.pop_back();
            }
        }
    }
    return g;
}

inline TaxonomyGraph load_taxonomy(const std::string& text, const TransactionDatabase& db) {
    std::istringstream in(text);
    return load_taxonomy(in, db);
}

/// t extended by its items' ancestors. With a filter (indexed by node id)
/// only ancestors marked true are added; original items always remain.
inline Transaction extend_transaction(const Transaction& t, const TaxonomyGraph& tax,
                                      const std::vector<bool>* candidate_filter = nullptr) {
    Transaction out;
    out.tid = t.tid;
    out.quantities = t.quantities;
    out.items = t.items;
    for (ItemId id : t.items)
        for (ItemId anc : tax.ancestors(id))
            if (!candidate_filter || (*candidate_filter)[anc]) out.items.push_back(anc);
    std::sort(out.items.begin(), out.items.end());
    out.items.erase(std::unique(out.items.begin(), out.items.end()), out.items.end());
    return out;
}

/// True iff the itemset pairs some member with one of its own ancestors.
/// Such sets are tautological: the ancestor never lowers the support.
inline bool has_item_ancestor_pair(const Itemset& s, const TaxonomyGraph& tax) {
    for (ItemId id : s) {
        const auto& anc = tax.ancestors(id);
        if (anc.empty()) continue;
        // Both sorted: single merge pass.
        auto a = anc.begin();
        auto b = s.begin();
        while (a != anc.end() && b != s.end()) {
            if (*a == *b) return true;
            (*a < *b) ? ++a : ++b;
        }
    }
    return false;
}

/// Full ancestor extension of every transaction, rebuilt as a database over
/// item and category names. The unoptimized route of generalized mining;
/// also the basis for per-rule statistics over category items.
inline TransactionDatabase extend_database(const TransactionDatabase& db,
                                           const TaxonomyGraph& tax) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(db.transactions().size());
    for (const Transaction& t : db.transactions()) {
        const Transaction ext = extend_transaction(t, tax);
        std::vector<std::string> row;
        row.reserve(ext.items.size());
        for (ItemId id : ext.items) row.push_back(tax.name(id));
        rows.push_back(std::move(row));
    }
    return database_from_names(rows);
}

struct GeneralizedMining {
    FrequentItemsets frequent;  // over node ids (items + categories)
    std::vector<Rule> rules;
};

/// Generalized mining: level-wise apriori over ancestor-extended
/// transactions. Candidates with item/ancestor pairs are pruned after the
/// join; the per-level extension carries only ancestors still present in
/// some candidate.
inline GeneralizedMining mine_generalized(const TransactionDatabase& db,
                                          const TaxonomyGraph& tax,
                                          const Fraction& min_support,
                                          const Fraction& min_confidence,
                                          const AprioriOptions& opts = {}) {
    if (db.size() == 0) throw Error("cannot mine an empty database");
    if (!(Fraction(0, 1) < min_support) || Fraction(1, 1) < min_support)
        throw Error("minimum support must be in (0, 1]");
    const std::size_t n_nodes = tax.node_count();

    FrequentItemsets frequent(db.size());

    // L1 over the full extension; every node is still a candidate here.
    std::vector<std::int64_t> tally(n_nodes, 0);
    for (const Transaction& t : db.transactions()) {
        const Transaction ext = extend_transaction(t, tax);
        for (ItemId id : ext.items) ++tally[id];
    }
    std::vector<CountedItemset> level;
    for (ItemId id = 0; id < n_nodes; ++id)
        if (Support{tally[id], db.size()} >= min_support)
            level.push_back(CountedItemset{Itemset{id}, tally[id]});

    while (!level.empty()) {
        std::vector<Itemset> prev;
        prev.reserve(level.size());
        for (const CountedItemset& c : level) prev.push_back(c.items);
        frequent.add_level(std::move(level));

        std::vector<Itemset> candidates;
        for (Itemset& c : apriori_gen(prev))
            if (!has_item_ancestor_pair(c, tax)) candidates.push_back(std::move(c));
        if (candidates.empty()) break;

        // Ancestors worth carrying into the extension this pass.
        std::vector<bool> in_candidates(n_nodes, false);
        for (const Itemset& c : candidates)
            for (ItemId id : c) in_candidates[id] = true;

        auto extended_view = [&](const Transaction& t, Itemset& buf) -> const Itemset& {
            buf = t.items;
            for (ItemId id : t.items)
                for (ItemId anc : tax.ancestors(id))
                    if (in_candidates[anc]) buf.push_back(anc);
            std::sort(buf.begin(), buf.end());
            buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
            return buf;
        };
        std::vector<std::int64_t> counts =
            detail::count_candidates(db, candidates, opts, extended_view);

        level.clear();
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (Support{counts[i], db.size()} >= min_support)
                level.push_back(CountedItemset{std::move(candidates[i]), counts[i]});
    }

    GeneralizedMining out{std::move(frequent), {}};
    out.rules = generate_rules(out.frequent, min_confidence);
    return out;
}

}  // namespace rulemine
