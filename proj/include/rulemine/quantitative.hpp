#pragma once

// Quantitative attributes: raw values map to consecutive integer ranks, the
// rank range is partitioned, adjacent intervals merge under a maximum
// support, and every admitted interval becomes a synthetic boolean item.

#include <cstdint>
#include <map>

#include "rulemine/core.hpp"

namespace rulemine {

/// Inclusive rank interval of one attribute.
struct Interval {
    std::int64_t lo{0};
    std::int64_t hi{0};

    bool contains(std::int64_t rank) const { return lo <= rank && rank <= hi; }
    std::int64_t width() const { return hi - lo + 1; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
    friend bool operator<(const Interval& a, const Interval& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    }
};

// Observed values of one quantified item. rank_of is the order-preserving
// map from raw values to 0..v-1; counts[r] is the number of transactions
// carrying the item at that value.
struct QuantitativeAttribute {
    ItemId item{0};
    std::vector<std::int64_t> values;  // sorted distinct raw values
    std::vector<std::int64_t> counts;  // per rank

    std::size_t rank_count() const { return values.size(); }

    std::optional<std::int64_t> rank_of(std::int64_t raw) const {
        auto it = std::lower_bound(values.begin(), values.end(), raw);
        if (it == values.end() || *it != raw) return std::nullopt;
        return it - values.begin();
    }

    /// Transactions whose value rank falls inside the interval.
    std::int64_t interval_count(const Interval& iv) const {
        std::int64_t n = 0;
        for (std::int64_t r = iv.lo; r <= iv.hi && r < static_cast<std::int64_t>(counts.size());
             ++r)
            n += counts[r];
        return n;
    }
};

inline QuantitativeAttribute quantitative_attribute(const TransactionDatabase& db, ItemId item) {
    std::map<std::int64_t, std::int64_t> tally;
    for (const Transaction& t : db.transactions())
        if (auto q = t.quantity(item)) ++tally[*q];
    QuantitativeAttribute attr;
    attr.item = item;
    for (const auto& [value, count] : tally) {
        attr.values.push_back(value);
        attr.counts.push_back(count);
    }
    return attr;
}

/// All quantified attributes of the database, ascending by item id.
inline std::vector<QuantitativeAttribute> quantitative_attributes(const TransactionDatabase& db) {
    std::vector<QuantitativeAttribute> out;
    for (ItemId id : db.quantified_items()) out.push_back(quantitative_attribute(db, id));
    return out;
}

struct Partitioning {
    ItemId item{0};
    std::vector<Interval> intervals;  // adjacent, covering all ranks
};

// ---------------------------------------------------------------------------
// Partition count and partitioning schemes
// ---------------------------------------------------------------------------

/// Partitions needed for K-partial completeness over n quantitative
/// attributes at the given minimum support: ceil(2n / (m (K - 1))).
inline std::int64_t num_partitions(std::size_t n_quant_attributes, const Fraction& min_support,
                                   const Fraction& partial_completeness) {
    const Fraction& k = partial_completeness;
    if (k.num <= k.den) throw Error("partial-completeness level K must exceed 1");
    if (!(Fraction(0, 1) < min_support) || !(min_support < Fraction(1, 1)))
        throw Error("minimum support must be in (0, 1) for partitioning");
    if (n_quant_attributes == 0) return 1;

    // 2n / (m (K-1)) with m = a/b and K-1 = c/d equals 2n b d / (a c).
    const __int128 numerator = static_cast<__int128>(2) * n_quant_attributes * min_support.den *
                               k.den;
    const __int128 denominator =
        static_cast<__int128>(min_support.num) * (k.num - k.den);
    const __int128 n = (numerator + denominator - 1) / denominator;
    if (n > std::numeric_limits<std::int64_t>::max())
        throw Error("partition count out of range");
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

/// N contiguous rank intervals whose widths differ by at most one; interval
/// i ends at ceil(v (i+1) / N) - 1, the same boundary rule equi-depth
/// reduces to on uniform data. N saturates at the number of distinct values.
inline Partitioning equi_width_partition(const QuantitativeAttribute& attr, std::int64_t n) {
    const std::int64_t v = static_cast<std::int64_t>(attr.rank_count());
    Partitioning p{attr.item, {}};
    if (v == 0) return p;
    n = std::clamp<std::int64_t>(n, 1, v);
    std::int64_t lo = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t hi = (v * (i + 1) + n - 1) / n - 1;
        p.intervals.push_back(Interval{lo, hi});
        lo = hi + 1;
    }
    return p;
}

/// Interval boundaries chosen so occurrence counts per interval are as even
/// as possible without splitting a rank: bucket b closes at the first rank
/// where the cumulative count reaches b/N of the total.
inline Partitioning equi_depth_partition(const QuantitativeAttribute& attr, std::int64_t n) {
    const std::int64_t v = static_cast<std::int64_t>(attr.rank_count());
    Partitioning p{attr.item, {}};
    if (v == 0) return p;
    n = std::clamp<std::int64_t>(n, 1, v);

    std::int64_t total = 0;
    for (std::int64_t c : attr.counts) total += c;

    std::int64_t lo = 0;
    std::int64_t cum = 0;
    std::int64_t bucket = 1;
    for (std::int64_t r = 0; r < v; ++r) {
        cum += attr.counts[r];
        const bool last_rank = (r == v - 1);
        if (last_rank || (bucket < n && static_cast<__int128>(cum) * n >=
                                            static_cast<__int128>(bucket) * total)) {
            p.intervals.push_back(Interval{lo, r});
            lo = r + 1;
            ++bucket;
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Interval admission
// ---------------------------------------------------------------------------

// The base intervals plus every union of consecutive base intervals whose
// support stays within max_support. Interval support grows with width, so a
// left-to-right scan can stop extending as soon as the cap is exceeded.
// min_support plays no role in admission: infrequent synthetic items fall
// out during mining, and dropping them here would only mask the cover
// structure. Output sorted by (lo, hi).
inline std::vector<Interval> merge_adjacent(const Partitioning& p,
                                            const QuantitativeAttribute& attr,
                                            std::int64_t n_transactions,
                                            const Fraction& min_support,
                                            const Fraction& max_support) {
    if (max_support < min_support) throw Error("maximum support below minimum support");
    std::vector<Interval> out;
    const auto& base = p.intervals;
    for (std::size_t i = 0; i < base.size(); ++i) {
        out.push_back(base[i]);
        std::int64_t count = attr.interval_count(base[i]);
        for (std::size_t j = i + 1; j < base.size(); ++j) {
            count += attr.interval_count(base[j]);
            if (!(Support{count, n_transactions} <= max_support)) break;
            out.push_back(Interval{base[i].lo, base[j].hi});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// One singleton interval per rank.
inline std::vector<Interval> singleton_intervals(const QuantitativeAttribute& attr) {
    std::vector<Interval> out;
    out.reserve(attr.rank_count());
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(attr.rank_count()); ++r)
        out.push_back(Interval{r, r});
    return out;
}

/// Every consecutive rank interval [i, j]: the lossless all-subranges mode.
inline std::vector<Interval> all_consecutive_intervals(const QuantitativeAttribute& attr) {
    const std::int64_t v = static_cast<std::int64_t>(attr.rank_count());
    std::vector<Interval> out;
    out.reserve(static_cast<std::size_t>(v * (v + 1) / 2));
    for (std::int64_t i = 0; i < v; ++i)
        for (std::int64_t j = i; j < v; ++j) out.push_back(Interval{i, j});
    return out;
}

// ---------------------------------------------------------------------------
// Booleanization
// ---------------------------------------------------------------------------

/// Synthetic item label; bounds are raw values, e.g. "Beer[1,2]".
inline std::string interval_item_name(const std::string& base, const QuantitativeAttribute& attr,
                                      const Interval& iv) {
    return base + "[" + std::to_string(attr.values[iv.lo]) + "," +
           std::to_string(attr.values[iv.hi]) + "]";
}

struct AttributeIntervals {
    QuantitativeAttribute attr;
    std::vector<Interval> intervals;
};

/// Replaces every quantified item occurrence by the synthetic items of all
/// admitted intervals containing the value's rank. Unquantified items pass
/// through; the new dictionary is rebuilt deterministically.
inline TransactionDatabase booleanize(const TransactionDatabase& db,
                                      const std::vector<AttributeIntervals>& specs) {
    std::unordered_map<ItemId, const AttributeIntervals*> by_item;
    for (const AttributeIntervals& s : specs) by_item.emplace(s.attr.item, &s);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(db.transactions().size());
    for (const Transaction& t : db.transactions()) {
        std::vector<std::string> row;
        for (ItemId id : t.items) {
            const auto q = t.quantity(id);
            if (!q) {
                row.push_back(db.items().name(id));
                continue;
            }
            auto spec = by_item.find(id);
            if (spec == by_item.end())
                throw Error("no partitioning for quantified item '" + db.items().name(id) + "'");
            const QuantitativeAttribute& attr = spec->second->attr;
            const auto rank = attr.rank_of(*q);
            if (!rank)
                throw Error("quantity " + std::to_string(*q) + " of item '" +
                            db.items().name(id) + "' outside the partitioned value range");
            for (const Interval& iv : spec->second->intervals)
                if (iv.contains(*rank)) row.push_back(interval_item_name(db.items().name(id), attr, iv));
        }
        rows.push_back(std::move(row));
    }
    return database_from_names(rows);
}

// ---------------------------------------------------------------------------
// Partitioning text format: one line per interval,
// "attr lo hi raw_lo raw_hi count".
// ---------------------------------------------------------------------------

inline void write_partitioning(std::ostream& out, const std::string& name,
                               const QuantitativeAttribute& attr, const Partitioning& p) {
    for (const Interval& iv : p.intervals)
        out << name << ' ' << iv.lo << ' ' << iv.hi << ' ' << attr.values[iv.lo] << ' '
            << attr.values[iv.hi] << ' ' << attr.interval_count(iv) << '\n';
}

/// Parses the partitioning text format back into rank intervals per
/// attribute name. Raw bounds and counts are informational on input.
inline std::map<std::string, std::vector<Interval>> parse_partitioning(std::istream& in) {
    std::map<std::string, std::vector<Interval>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream row(line);
        std::string name;
        if (!(row >> name)) continue;
        if (name[0] == '#') continue;
        std::int64_t lo, hi, raw_lo, raw_hi, count;
        if (!(row >> lo >> hi >> raw_lo >> raw_hi >> count))
            throw ParseError(line_no, "malformed partitioning line");
        out[name].push_back(Interval{lo, hi});
    }
    return out;
}

}  // namespace rulemine
