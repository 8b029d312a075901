#pragma once

// Intertransformation between quantitative attributes and taxonomies:
// interval partitionings become generalization trees, and tree taxonomies
// become left-to-right leaf numberings minable as quantities.

#include "rulemine/core.hpp"
#include "rulemine/quantitative.hpp"
#include "rulemine/taxonomy.hpp"

namespace rulemine {

/// Name order with digit runs compared numerically ("Q[2,2]" < "Q[10,10]"),
/// so interval-labelled nodes sort by value, not by digit count.
inline bool natural_less(std::string_view a, std::string_view b) {
    std::size_t i = 0, j = 0;
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    while (i < a.size() && j < b.size()) {
        if (digit(a[i]) && digit(b[j])) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && digit(a[ie])) ++ie;
            while (je < b.size() && digit(b[je])) ++je;
            std::string_view ra = a.substr(i, ie - i), rb = b.substr(j, je - j);
            ra.remove_prefix(std::min(ra.find_first_not_of('0'), ra.size()));
            rb.remove_prefix(std::min(rb.find_first_not_of('0'), rb.size()));
            if (ra.size() != rb.size()) return ra.size() < rb.size();
            if (ra != rb) return ra < rb;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
    return a < b;  // tie-break leading-zero variants deterministically
}

// ---------------------------------------------------------------------------
// Quantitative -> taxonomy
// ---------------------------------------------------------------------------

// Tree over one attribute's rank intervals: leaves are rank singletons,
// interior nodes the base partitions, the root the full range. Interval
// nodes equal to their only child collapse into it, so a singleton
// partitioning yields the two-level tree directly.
struct IntervalTaxonomy {
    std::string attribute;
    std::string root;
    std::vector<std::string> leaves;  // rank order
    std::vector<std::pair<std::string, std::string>> edges;

    std::string edge_list() const {
        std::string out;
        for (const auto& [parent, child] : edges) out += parent + " " + child + "\n";
        return out;
    }
};

inline IntervalTaxonomy quantitative_to_taxonomy(const std::string& name,
                                                 const QuantitativeAttribute& attr,
                                                 const Partitioning& partitioning,
                                                 bool recursive_bisection = false) {
    const std::int64_t v = static_cast<std::int64_t>(attr.rank_count());
    if (v == 0) throw Error("attribute '" + name + "' has no observed values");

    IntervalTaxonomy tax;
    tax.attribute = name;
    for (std::int64_t r = 0; r < v; ++r)
        tax.leaves.push_back(interval_item_name(name, attr, Interval{r, r}));

    const Interval full{0, v - 1};
    tax.root = interval_item_name(name, attr, full);
    if (v == 1) return tax;  // single value: the leaf is the whole range

    // Attaches the subtree of an interval under `parent`: either the leaves
    // directly, or halving steps down to singletons when bisecting.
    auto attach = [&](auto&& self, const std::string& parent, const Interval& iv) -> void {
        if (!recursive_bisection || iv.width() <= 2) {
            for (std::int64_t r = iv.lo; r <= iv.hi; ++r)
                tax.edges.emplace_back(parent, tax.leaves[r]);
            return;
        }
        const std::int64_t mid = iv.lo + (iv.width() - 1) / 2;
        for (const Interval half : {Interval{iv.lo, mid}, Interval{mid + 1, iv.hi}}) {
            if (half.width() == 1) {
                tax.edges.emplace_back(parent, tax.leaves[half.lo]);
            } else {
                const std::string node = interval_item_name(name, attr, half);
                tax.edges.emplace_back(parent, node);
                self(self, node, half);
            }
        }
    };

    for (const Interval& part : partitioning.intervals) {
        if (part.width() >= 2 && !(part == full)) {
            const std::string mid = interval_item_name(name, attr, part);
            tax.edges.emplace_back(tax.root, mid);
            attach(attach, mid, part);
        } else {
            attach(attach, tax.root, part);
        }
    }
    return tax;
}

// ---------------------------------------------------------------------------
// Taxonomy -> quantitative
// ---------------------------------------------------------------------------

/// Left-to-right numbering of one tree's leaves; interior nodes keep their
/// consecutive leaf span so interval hits can be reported by category name.
struct LeafNumbering {
    std::string attribute;            // root node name
    std::vector<std::string> leaves;  // index = leaf number
    std::vector<std::pair<std::string, Interval>> category_spans;

    std::optional<std::int64_t> number_of(std::string_view leaf) const {
        for (std::size_t i = 0; i < leaves.size(); ++i)
            if (leaves[i] == leaf) return static_cast<std::int64_t>(i);
        return std::nullopt;
    }

    /// Category whose leaf span equals the interval exactly, if any.
    std::optional<std::string> span_category(const Interval& iv) const {
        for (const auto& [cat, span] : category_spans)
            if (span == iv) return cat;
        return std::nullopt;
    }
};

/// Numbers each tree root's leaves from left to right, children in natural
/// name order. Rejects non-tree DAGs: a shared descendant would make
/// non-overlapping, monotone intervals impossible.
inline std::vector<LeafNumbering> taxonomy_to_quantitative(const TaxonomyGraph& tax) {
    for (ItemId node = 0; node < tax.node_count(); ++node)
        if (tax.parents(node).size() > 1)
            throw Error("non-tree taxonomy: node '" + tax.name(node) +
                        "' has multiple parents");

    std::vector<ItemId> roots;
    for (ItemId node = tax.item_count(); node < tax.node_count(); ++node)
        if (tax.parents(node).empty()) roots.push_back(node);
    std::sort(roots.begin(), roots.end(), [&](ItemId a, ItemId b) {
        return natural_less(tax.name(a), tax.name(b));
    });

    std::vector<LeafNumbering> out;
    for (ItemId root : roots) {
        LeafNumbering numbering;
        numbering.attribute = tax.name(root);

        // Recursive descent, children in natural name order.
        auto walk = [&](auto&& self, ItemId node) -> std::pair<std::int64_t, std::int64_t> {
            if (tax.children(node).empty()) {
                numbering.leaves.push_back(tax.name(node));
                const auto idx = static_cast<std::int64_t>(numbering.leaves.size()) - 1;
                return {idx, idx};
            }
            std::vector<ItemId> kids = tax.children(node);
            std::sort(kids.begin(), kids.end(), [&](ItemId a, ItemId b) {
                return natural_less(tax.name(a), tax.name(b));
            });
            std::int64_t first = -1, last = -1;
            for (ItemId kid : kids) {
                auto [lo, hi] = self(self, kid);
                if (first < 0) first = lo;
                last = hi;
            }
            numbering.category_spans.emplace_back(tax.name(node), Interval{first, last});
            return {first, last};
        };
        walk(walk, root);
        out.push_back(std::move(numbering));
    }
    return out;
}

/// Applies numberings to a database: each leaf item turns into the synthetic
/// interval items of its root attribute that cover the leaf's number. A
/// transaction holding several leaves of one root covers each of their
/// numbers. Items outside every numbering pass through. Defaults to all
/// consecutive number intervals.
inline TransactionDatabase numbered_to_boolean(
    const TransactionDatabase& db, const std::vector<LeafNumbering>& numberings,
    const std::map<std::string, std::vector<Interval>>* intervals_by_root = nullptr) {
    struct LeafSlot {
        const LeafNumbering* numbering;
        std::int64_t number;
    };
    std::unordered_map<ItemId, LeafSlot> slots;
    for (const LeafNumbering& numbering : numberings) {
        for (std::size_t i = 0; i < numbering.leaves.size(); ++i) {
            auto id = db.items().find(numbering.leaves[i]);
            if (id) slots.emplace(*id, LeafSlot{&numbering, static_cast<std::int64_t>(i)});
        }
    }

    auto intervals_for = [&](const LeafNumbering& numbering) -> std::vector<Interval> {
        if (intervals_by_root) {
            auto it = intervals_by_root->find(numbering.attribute);
            return it == intervals_by_root->end() ? std::vector<Interval>{} : it->second;
        }
        std::vector<Interval> all;
        const auto v = static_cast<std::int64_t>(numbering.leaves.size());
        for (std::int64_t i = 0; i < v; ++i)
            for (std::int64_t j = i; j < v; ++j) all.push_back(Interval{i, j});
        return all;
    };

    std::vector<std::vector<std::string>> rows;
    rows.reserve(db.transactions().size());
    for (const Transaction& t : db.transactions()) {
        std::vector<std::string> row;
        for (ItemId id : t.items) {
            auto slot = slots.find(id);
            if (slot == slots.end()) {
                row.push_back(db.items().name(id));
                continue;
            }
            const LeafNumbering& numbering = *slot->second.numbering;
            for (const Interval& iv : intervals_for(numbering))
                if (iv.contains(slot->second.number))
                    row.push_back(numbering.attribute + "[" + std::to_string(iv.lo) + "," +
                                  std::to_string(iv.hi) + "]");
        }
        rows.push_back(std::move(row));
    }
    return database_from_names(rows);
}

}  // namespace rulemine
