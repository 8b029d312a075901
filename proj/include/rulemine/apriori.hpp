#pragma once

// Level-wise frequent itemset generation: candidate join/prune, hash-tree
// subset counting, and the support filter.

#include <cstdint>
#include <functional>
#include <optional>
#include <thread>

#include "rulemine/core.hpp"

namespace rulemine {

struct CountedItemset {
    Itemset items;
    std::int64_t count{0};

    friend bool operator==(const CountedItemset& a, const CountedItemset& b) {
        return a.items == b.items && a.count == b.count;
    }
};

// All frequent itemsets of one mining run, grouped by size. Supports stay
// attached so rule confidence never touches the database again.
class FrequentItemsets {
public:
    FrequentItemsets() = default;
    explicit FrequentItemsets(std::int64_t total_transactions) : total_(total_transactions) {}

    void add_level(std::vector<CountedItemset> level) {
        for (const CountedItemset& c : level) index_.emplace(c.items, c.count);
        levels_.push_back(std::move(level));
    }

    std::size_t max_size() const { return levels_.size(); }

    /// Frequent k-itemsets in lexicographic order; empty past the last level.
    const std::vector<CountedItemset>& level(std::size_t k) const {
        static const std::vector<CountedItemset> kEmpty;
        if (k == 0 || k > levels_.size()) return kEmpty;
        return levels_[k - 1];
    }

    std::int64_t total_transactions() const { return total_; }

    std::optional<std::int64_t> count_of(const Itemset& s) const {
        auto it = index_.find(s);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    Support support_of(const Itemset& s) const {
        auto c = count_of(s);
        if (!c) throw Error("itemset not frequent: no stored support");
        return Support{*c, total_};
    }

    std::size_t total_itemsets() const { return index_.size(); }

    friend bool operator==(const FrequentItemsets& a, const FrequentItemsets& b) {
        // Trailing empty levels are irrelevant.
        auto depth = [](const FrequentItemsets& f) {
            std::size_t d = f.levels_.size();
            while (d > 0 && f.levels_[d - 1].empty()) --d;
            return d;
        };
        if (a.total_ != b.total_ || depth(a) != depth(b)) return false;
        for (std::size_t k = 0; k < depth(a); ++k)
            if (a.levels_[k] != b.levels_[k]) return false;
        return true;
    }

private:
    std::int64_t total_{0};
    std::vector<std::vector<CountedItemset>> levels_;
    std::unordered_map<Itemset, std::int64_t, ItemsetHash> index_;
};

// ---------------------------------------------------------------------------
// Candidate generation (join + prune)
// ---------------------------------------------------------------------------

// Joins pairs of (k-1)-itemsets that agree on their first k-2 items, smaller
// last item first, then prunes candidates with an infrequent (k-1)-subset.
// Each candidate is constructed exactly once. Input must be sorted and
// duplicate-free; output is sorted.
inline std::vector<Itemset> apriori_gen(const std::vector<Itemset>& prev) {
    std::vector<Itemset> candidates;
    if (prev.empty()) return candidates;
    const std::size_t k1 = prev[0].size();

    std::size_t group = 0;
    while (group < prev.size()) {
        std::size_t end = group + 1;
        while (end < prev.size() &&
               std::equal(prev[group].begin(), prev[group].end() - 1, prev[end].begin(),
                          prev[end].end() - 1))
            ++end;
        for (std::size_t i = group; i < end; ++i) {
            for (std::size_t j = i + 1; j < end; ++j) {
                Itemset c = prev[i];
                c.push_back(prev[j].back());
                candidates.push_back(std::move(c));
            }
        }
        group = end;
    }

    std::vector<Itemset> pruned;
    pruned.reserve(candidates.size());
    Itemset sub(k1);
    for (Itemset& c : candidates) {
        bool keep = true;
        for (std::size_t skip = 0; skip < c.size() && keep; ++skip) {
            sub.clear();
            for (std::size_t i = 0; i < c.size(); ++i)
                if (i != skip) sub.push_back(c[i]);
            if (!std::binary_search(prev.begin(), prev.end(), sub)) keep = false;
        }
        if (keep) pruned.push_back(std::move(c));
    }
    return pruned;
}

// ---------------------------------------------------------------------------
// Hash tree
// ---------------------------------------------------------------------------

// Candidates of one size k, indexed by hashing the item at each node's depth
// (item id modulo bucket_count). Leaves overflowing leaf_split_threshold at
// depth < k split into interior nodes. Buckets over-approximate: distinct
// items may collide, so reaching a leaf never implies containment and every
// leaf candidate is verified against the transaction.
class HashTree {
public:
    HashTree(std::vector<Itemset> candidates, std::size_t bucket_count = 8,
             std::size_t leaf_split_threshold = 16)
        : candidates_(std::move(candidates)),
          buckets_(bucket_count < 1 ? 1 : bucket_count),
          split_at_(leaf_split_threshold < 1 ? 1 : leaf_split_threshold) {
        k_ = candidates_.empty() ? 0 : candidates_[0].size();
        nodes_.push_back(Node{});  // root leaf
        for (std::uint32_t idx = 0; idx < candidates_.size(); ++idx) insert(0, 0, idx);
    }

    std::size_t size() const { return candidates_.size(); }
    std::size_t candidate_size() const { return k_; }
    const std::vector<Itemset>& candidates() const { return candidates_; }

    /// Invokes fn(candidate index) for every candidate contained in t.
    /// A candidate may be reported more than once when bucket collisions
    /// let several descent paths reach its leaf; callers deduplicate.
    template <class Fn>
    void for_each_contained(const Itemset& t, Fn&& fn) const {
        if (candidates_.empty() || t.size() < k_) return;
        descend(0, 0, t, 0, fn);
    }

    /// Exactly the candidates contained in t, each reported once.
    std::vector<Itemset> subset(const Itemset& t) const {
        std::vector<std::uint32_t> hits;
        for_each_contained(t, [&](std::uint32_t idx) { hits.push_back(idx); });
        std::sort(hits.begin(), hits.end());
        hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
        std::vector<Itemset> out;
        out.reserve(hits.size());
        for (std::uint32_t idx : hits) out.push_back(candidates_[idx]);
        return out;
    }

    std::vector<Itemset> flatten() const { return candidates_; }

    /// Largest leaf below candidate depth, for structural checks.
    std::size_t max_splittable_leaf() const {
        std::size_t m = 0;
        for (const Node& n : nodes_)
            if (n.is_leaf() && n.depth < k_) m = std::max(m, n.entries.size());
        return m;
    }

private:
    struct Node {
        std::vector<std::int32_t> children;   // interior: bucket -> node index, -1 empty
        std::vector<std::uint32_t> entries;   // leaf: candidate indices
        std::size_t depth{0};

        bool is_leaf() const { return children.empty(); }
    };

    std::size_t hash(ItemId id) const { return id % buckets_; }

    void insert(std::size_t node_idx, std::size_t depth, std::uint32_t cand) {
        Node& node = nodes_[node_idx];
        if (node.is_leaf()) {
            node.entries.push_back(cand);
            if (node.entries.size() > split_at_ && depth < k_) split(node_idx, depth);
            return;
        }
        const std::size_t b = hash(candidates_[cand][depth]);
        std::int32_t child = node.children[b];
        if (child < 0) {
            child = static_cast<std::int32_t>(nodes_.size());
            nodes_.push_back(Node{{}, {}, depth + 1});
            nodes_[node_idx].children[b] = child;  // re-index: push_back may reallocate
        }
        insert(static_cast<std::size_t>(child), depth + 1, cand);
    }

    void split(std::size_t node_idx, std::size_t depth) {
        std::vector<std::uint32_t> entries = std::move(nodes_[node_idx].entries);
        nodes_[node_idx].entries.clear();
        nodes_[node_idx].children.assign(buckets_, -1);
        for (std::uint32_t cand : entries) insert(node_idx, depth, cand);
    }

    template <class Fn>
    void descend(std::size_t node_idx, std::size_t depth, const Itemset& t, std::size_t from,
                 Fn& fn) const {
        const Node& node = nodes_[node_idx];
        if (node.is_leaf()) {
            for (std::uint32_t idx : node.entries)
                if (std::includes(t.begin(), t.end(), candidates_[idx].begin(),
                                  candidates_[idx].end()))
                    fn(idx);
            return;
        }
        // Hash every remaining item as the next path step; stop once too few
        // items remain to complete a k-item candidate.
        const std::size_t needed = k_ - depth;
        for (std::size_t i = from; i + needed <= t.size(); ++i) {
            const std::int32_t child = node.children[hash(t[i])];
            if (child >= 0) descend(static_cast<std::size_t>(child), depth + 1, t, i + 1, fn);
        }
    }

    std::vector<Itemset> candidates_;
    std::vector<Node> nodes_;
    std::size_t buckets_;
    std::size_t split_at_;
    std::size_t k_{0};
};

inline HashTree build_hash_tree(std::vector<Itemset> candidates, std::size_t bucket_count = 8,
                                std::size_t leaf_split_threshold = 16) {
    return HashTree(std::move(candidates), bucket_count, leaf_split_threshold);
}

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

struct AprioriOptions {
    std::size_t bucket_count = 8;
    std::size_t leaf_split_threshold = 16;
    bool use_hash_tree = true;  // false: naive per-candidate scan, the differential baseline
    unsigned threads = 1;       // 0 = hardware concurrency
};

namespace detail {

inline unsigned effective_threads(unsigned requested, std::size_t work_items) {
    unsigned t = requested == 0 ? std::thread::hardware_concurrency() : requested;
    if (t < 1) t = 1;
    if (work_items < t) t = static_cast<unsigned>(work_items ? work_items : 1);
    return t;
}

// Counts, for every candidate, the number of transactions containing it.
// `view` maps a transaction to the item sequence to probe (identity for plain
// mining, ancestor extension for generalized mining). Transactions are
// partitioned across workers; per-worker tallies merge by addition, so the
// result is independent of the thread count.
template <class ViewFn>
std::vector<std::int64_t> count_candidates(const TransactionDatabase& db,
                                           const std::vector<Itemset>& candidates,
                                           const AprioriOptions& opts, ViewFn&& view) {
    std::vector<std::int64_t> counts(candidates.size(), 0);
    if (candidates.empty() || db.size() == 0) return counts;

    const auto& transactions = db.transactions();
    const unsigned n_threads = effective_threads(opts.threads, transactions.size());

    std::optional<HashTree> tree;
    if (opts.use_hash_tree)
        tree.emplace(candidates, opts.bucket_count, opts.leaf_split_threshold);

    std::vector<std::vector<std::int64_t>> tallies(
        n_threads, std::vector<std::int64_t>(candidates.size(), 0));

    auto worker = [&](unsigned w, std::size_t begin, std::size_t end) {
        std::vector<std::int64_t>& tally = tallies[w];
        // Stamps deduplicate multi-path leaf hits within one transaction.
        std::vector<std::uint32_t> stamp(candidates.size(), 0);
        std::uint32_t token = 0;
        Itemset probed;
        for (std::size_t i = begin; i < end; ++i) {
            const Itemset& items = view(transactions[i], probed);
            if (tree) {
                ++token;
                tree->for_each_contained(items, [&](std::uint32_t idx) {
                    if (stamp[idx] != token) {
                        stamp[idx] = token;
                        ++tally[idx];
                    }
                });
            } else {
                for (std::size_t c = 0; c < candidates.size(); ++c)
                    if (candidates[c].size() <= items.size() &&
                        std::includes(items.begin(), items.end(), candidates[c].begin(),
                                      candidates[c].end()))
                        ++tally[c];
            }
        }
    };

    if (n_threads == 1) {
        worker(0, 0, transactions.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (transactions.size() + n_threads - 1) / n_threads;
        for (unsigned w = 0; w < n_threads; ++w) {
            const std::size_t begin = std::min<std::size_t>(w * chunk, transactions.size());
            const std::size_t end = std::min<std::size_t>(begin + chunk, transactions.size());
            pool.emplace_back(worker, w, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& tally : tallies)
        for (std::size_t c = 0; c < counts.size(); ++c) counts[c] += tally[c];
    return counts;
}

inline const Itemset& identity_view(const Transaction& t, Itemset&) { return t.items; }

}  // namespace detail

/// Single-scan frequent 1-itemsets, ascending by item id.
inline std::vector<CountedItemset> frequent_1_itemsets(const TransactionDatabase& db,
                                                       const Fraction& min_support) {
    std::vector<std::int64_t> tally(db.items().size(), 0);
    for (const Transaction& t : db.transactions())
        for (ItemId id : t.items) ++tally[id];
    std::vector<CountedItemset> out;
    for (ItemId id = 0; id < tally.size(); ++id)
        if (Support{tally[id], db.size()} >= min_support)
            out.push_back(CountedItemset{Itemset{id}, tally[id]});
    return out;
}

/// Apriori frequent itemset generation. Levels are produced until L_k is
/// empty; every stored itemset carries its exact support count.
inline FrequentItemsets apriori(const TransactionDatabase& db, const Fraction& min_support,
                                const AprioriOptions& opts = {}) {
    if (db.size() == 0) throw Error("cannot mine an empty database");
    if (!(Fraction(0, 1) < min_support) || Fraction(1, 1) < min_support)
        throw Error("minimum support must be in (0, 1]");

    FrequentItemsets result(db.size());
    std::vector<CountedItemset> level = frequent_1_itemsets(db, min_support);

    while (!level.empty()) {
        std::vector<Itemset> prev;
        prev.reserve(level.size());
        for (const CountedItemset& c : level) prev.push_back(c.items);
        result.add_level(std::move(level));

        std::vector<Itemset> candidates = apriori_gen(prev);
        if (candidates.empty()) break;

        std::vector<std::int64_t> counts =
            detail::count_candidates(db, candidates, opts, detail::identity_view);

        level.clear();
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (Support{counts[i], db.size()} >= min_support)
                level.push_back(CountedItemset{std::move(candidates[i]), counts[i]});
    }
    return result;
}

}  // namespace rulemine
