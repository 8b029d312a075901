#pragma once

// Item dictionary, itemsets, transactions and exact support arithmetic.
// Everything downstream (candidate generation, rule extraction, the
// quantitative and taxonomy extensions) works in terms of these types.

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rulemine {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad configuration, as opposed to bad input data.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input error carrying the 1-based line it was detected on.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// ---------------------------------------------------------------------------
// Exact rational arithmetic
// ---------------------------------------------------------------------------

// Numerator/denominator pair compared by cross-multiplication in 128-bit,
// so threshold checks like "2/5 >= 30%" are exact. The pair is kept as
// constructed (2/4 stays 2/4); reduce() gives the canonical form when the
// raw counts are not themselves of interest.
struct Fraction {
    std::int64_t num{0};
    std::int64_t den{1};

    constexpr Fraction() = default;
    constexpr Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (d <= 0) throw Error("fraction denominator must be positive");
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    Fraction reduced() const {
        const std::int64_t g = std::gcd(num, den);
        return g == 0 ? Fraction(0, 1) : Fraction(num / g, den / g);
    }

    friend bool operator==(const Fraction& a, const Fraction& b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator!=(const Fraction& a, const Fraction& b) { return !(a == b); }
    friend bool operator<(const Fraction& a, const Fraction& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator>(const Fraction& a, const Fraction& b) { return b < a; }
    friend bool operator<=(const Fraction& a, const Fraction& b) { return !(b < a); }
    friend bool operator>=(const Fraction& a, const Fraction& b) { return !(a < b); }
};

inline Fraction operator*(const Fraction& a, const Fraction& b) {
    // Reduce cross-wise first so products of database-scale counts stay in range.
    const std::int64_t g1 = std::max<std::int64_t>(std::gcd(a.num, b.den), 1);
    const std::int64_t g2 = std::max<std::int64_t>(std::gcd(b.num, a.den), 1);
    return Fraction((a.num / g1) * (b.num / g2), (a.den / g2) * (b.den / g1));
}

inline std::string to_string(const Fraction& f) {
    return std::to_string(f.num) + "/" + std::to_string(f.den);
}

/// Parses a threshold given as a decimal ("0.3"), an integer ("1") or a
/// percentage ("30%") into an exact fraction.
inline Fraction parse_fraction(std::string_view text) {
    std::string_view s = text;
    bool percent = false;
    if (!s.empty() && s.back() == '%') {
        percent = true;
        s.remove_suffix(1);
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool any_digit = false;
    bool seen_dot = false;
    for (char c : s) {
        if (c == '.') {
            if (seen_dot) throw Error("malformed number: '" + std::string(text) + "'");
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            if (num > (std::numeric_limits<std::int64_t>::max() - 9) / 10)
                throw Error("number out of range: '" + std::string(text) + "'");
            num = num * 10 + (c - '0');
            if (seen_dot) den *= 10;
            any_digit = true;
        } else {
            throw Error("malformed number: '" + std::string(text) + "'");
        }
        if (den > 1000000000000000000LL / 100)
            throw Error("number out of range: '" + std::string(text) + "'");
    }
    if (!any_digit) throw Error("malformed number: '" + std::string(text) + "'");
    if (percent) den *= 100;
    return Fraction(num, den);
}

// ---------------------------------------------------------------------------
// Items and itemsets
// ---------------------------------------------------------------------------

using ItemId = std::uint32_t;

// Itemsets are strictly increasing id sequences; the vector's lexicographic
// ordering is the itemset ordering used everywhere.
using Itemset = std::vector<ItemId>;

struct ItemsetHash {
    std::size_t operator()(const Itemset& s) const {
        std::size_t h = 1469598103934665603ull;
        for (ItemId id : s) {
            h ^= id;
            h *= 1099511628211ull;
        }
        return h;
    }
};

inline bool is_canonical(const Itemset& s) {
    return std::adjacent_find(s.begin(), s.end(),
                              [](ItemId a, ItemId b) { return a >= b; }) == s.end();
}

inline Itemset make_itemset(std::initializer_list<ItemId> ids) {
    Itemset s(ids);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

/// True iff needle is a subset of haystack; both strictly ordered.
inline bool is_subset(const Itemset& needle, const Itemset& haystack) {
    if (needle.empty()) throw Error("itemsets of size 0 are not valid queries");
    return std::includes(haystack.begin(), haystack.end(), needle.begin(), needle.end());
}

inline Itemset set_union(const Itemset& a, const Itemset& b) {
    Itemset out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline Itemset set_difference(const Itemset& a, const Itemset& b) {
    Itemset out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// ---------------------------------------------------------------------------
// Dictionary, transactions, database
// ---------------------------------------------------------------------------

// Ids are assigned 0..n-1 in ascending lexicographic name order, fixing the
// total item order once per database. Outputs stay deterministic and the id
// order doubles as the name order.
class ItemDictionary {
public:
    ItemDictionary() = default;

    /// Builds the dictionary from a set of names (sorted internally).
    static ItemDictionary from_names(std::vector<std::string> names) {
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        ItemDictionary d;
        d.names_ = std::move(names);
        for (std::size_t i = 0; i < d.names_.size(); ++i)
            d.ids_.emplace(d.names_[i], static_cast<ItemId>(i));
        return d;
    }

    std::size_t size() const { return names_.size(); }

    const std::string& name(ItemId id) const {
        if (id >= names_.size()) throw Error("unknown item id " + std::to_string(id));
        return names_[id];
    }

    std::optional<ItemId> find(std::string_view name) const {
        auto it = ids_.find(std::string(name));
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    ItemId id(std::string_view name) const {
        auto found = find(name);
        if (!found) throw Error("unknown item '" + std::string(name) + "'");
        return *found;
    }

    const std::vector<std::string>& names() const { return names_; }

    friend bool operator==(const ItemDictionary& a, const ItemDictionary& b) {
        return a.names_ == b.names_;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, ItemId> ids_;
};

struct Transaction {
    std::size_t tid{0};
    Itemset items;  // sorted, duplicate-free
    // Quantities for the items that carry one, sorted by item id.
    std::vector<std::pair<ItemId, std::int64_t>> quantities;

    bool contains(const Itemset& s) const { return is_subset(s, items); }

    std::optional<std::int64_t> quantity(ItemId id) const {
        auto it = std::lower_bound(quantities.begin(), quantities.end(), id,
                                   [](const auto& p, ItemId v) { return p.first < v; });
        if (it == quantities.end() || it->first != id) return std::nullopt;
        return it->second;
    }

    friend bool operator==(const Transaction& a, const Transaction& b) {
        return a.items == b.items && a.quantities == b.quantities;
    }
};

/// Support as an exact count over the transaction total.
struct Support {
    std::int64_t count{0};
    std::int64_t total{0};

    Fraction fraction() const { return Fraction(count, total); }
    double value() const { return fraction().value(); }

    friend bool operator==(const Support& a, const Support& b) {
        return a.fraction() == b.fraction();
    }
    friend bool operator>=(const Support& a, const Fraction& f) { return a.fraction() >= f; }
    friend bool operator<=(const Support& a, const Fraction& f) { return a.fraction() <= f; }
};

inline std::string to_string(const Support& s) {
    return std::to_string(s.count) + "/" + std::to_string(s.total);
}

class TransactionDatabase {
public:
    TransactionDatabase() = default;
    TransactionDatabase(ItemDictionary dict, std::vector<Transaction> transactions)
        : dict_(std::move(dict)), transactions_(std::move(transactions)) {}

    const ItemDictionary& items() const { return dict_; }
    const std::vector<Transaction>& transactions() const { return transactions_; }
    std::int64_t size() const { return static_cast<std::int64_t>(transactions_.size()); }

    /// Exact support of an itemset: the number of containing transactions.
    Support support(const Itemset& s) const {
        for (ItemId id : s)
            if (id >= dict_.size()) throw Error("unknown item id " + std::to_string(id));
        std::int64_t n = 0;
        for (const Transaction& t : transactions_)
            if (t.contains(s)) ++n;
        return Support{n, size()};
    }

    /// Item ids that carry a quantity somewhere in the database.
    std::vector<ItemId> quantified_items() const {
        std::vector<bool> seen(dict_.size(), false);
        for (const Transaction& t : transactions_)
            for (const auto& [id, q] : t.quantities) seen[id] = true;
        std::vector<ItemId> out;
        for (ItemId id = 0; id < seen.size(); ++id)
            if (seen[id]) out.push_back(id);
        return out;
    }

    friend bool operator==(const TransactionDatabase& a, const TransactionDatabase& b) {
        return a.dict_ == b.dict_ && a.transactions_ == b.transactions_;
    }

private:
    ItemDictionary dict_;
    std::vector<Transaction> transactions_;
};

// ---------------------------------------------------------------------------
// Basket format
// ---------------------------------------------------------------------------
//
// One transaction per line, items separated by whitespace or commas. An
// optional ":<integer>" suffix carries the item's quantity. Lines starting
// with '#' are comments; blank lines are empty transactions and still count
// toward the support denominator.

namespace detail {

struct RawItem {
    std::string name;
    std::optional<std::int64_t> quantity;
};

inline std::optional<std::vector<RawItem>> parse_basket_line(const std::string& line,
                                                             std::size_t line_no) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] == '#') return std::nullopt;  // comment

    std::vector<RawItem> items;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        while (i < n && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r'))
            ++i;
        if (i >= n) break;
        std::size_t start = i;
        while (i < n && line[i] != ' ' && line[i] != '\t' && line[i] != ',' && line[i] != '\r')
            ++i;
        std::string token = line.substr(start, i - start);
        std::size_t colon = token.rfind(':');
        if (colon == std::string::npos) {
            items.push_back(RawItem{token, std::nullopt});
            continue;
        }
        std::string name = token.substr(0, colon);
        std::string qty = token.substr(colon + 1);
        if (name.empty())
            throw ParseError(line_no, "item name missing before ':' in '" + token + "'");
        if (qty.empty() || !std::all_of(qty.begin(), qty.end(),
                                        [](unsigned char c) { return std::isdigit(c); }))
            throw ParseError(line_no, "malformed quantity in '" + token + "'");
        errno = 0;
        const long long value = std::strtoll(qty.c_str(), nullptr, 10);
        if (errno != 0)
            throw ParseError(line_no, "quantity out of range in '" + token + "'");
        items.push_back(RawItem{std::move(name), value});
    }
    return items;
}

}  // namespace detail

inline TransactionDatabase load_basket(std::istream& in) {
    // Two passes over buffered lines: names first (the dictionary fixes the
    // item order), then transactions against the finished dictionary.
    std::vector<std::vector<detail::RawItem>> raw;
    std::vector<std::size_t> line_numbers;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto parsed = detail::parse_basket_line(line, line_no);
        if (!parsed) continue;
        raw.push_back(std::move(*parsed));
        line_numbers.push_back(line_no);
    }
    if (raw.empty()) throw Error("empty basket input: no transactions");

    std::vector<std::string> names;
    for (const auto& t : raw)
        for (const auto& item : t) names.push_back(item.name);
    ItemDictionary dict = ItemDictionary::from_names(std::move(names));

    // An item must be quantified either on all its occurrences or on none;
    // mixing the two leaves q(item) undefined for the quantitative pass.
    std::vector<char> seen_plain(dict.size(), 0), seen_quantified(dict.size(), 0);

    std::vector<Transaction> transactions;
    transactions.reserve(raw.size());
    for (std::size_t ti = 0; ti < raw.size(); ++ti) {
        Transaction t;
        t.tid = ti;
        std::vector<std::pair<ItemId, std::optional<std::int64_t>>> entries;
        for (const auto& item : raw[ti]) {
            const ItemId id = dict.id(item.name);
            entries.emplace_back(id, item.quantity);
            (item.quantity ? seen_quantified : seen_plain)[id] = 1;
        }
        std::sort(entries.begin(), entries.end());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (i > 0 && entries[i].first == entries[i - 1].first) {
                if (entries[i].second != entries[i - 1].second)
                    throw ParseError(line_numbers[ti],
                                     "conflicting quantities for item '" +
                                         dict.name(entries[i].first) + "'");
                continue;  // duplicate raw item, deduplicated
            }
            t.items.push_back(entries[i].first);
            if (entries[i].second) t.quantities.emplace_back(entries[i].first, *entries[i].second);
        }
        transactions.push_back(std::move(t));
    }

    for (ItemId id = 0; id < dict.size(); ++id)
        if (seen_plain[id] && seen_quantified[id])
            throw Error("item '" + dict.name(id) +
                        "' has a quantity on some occurrences but not on others");

    return TransactionDatabase(std::move(dict), std::move(transactions));
}

inline TransactionDatabase load_basket(const std::string& text) {
    std::istringstream in(text);
    return load_basket(in);
}

inline void write_basket(std::ostream& out, const TransactionDatabase& db) {
    for (const Transaction& t : db.transactions()) {
        bool first = true;
        for (ItemId id : t.items) {
            if (!first) out << ' ';
            first = false;
            out << db.items().name(id);
            if (auto q = t.quantity(id)) out << ':' << *q;
        }
        out << '\n';
    }
}

inline std::string to_basket_string(const TransactionDatabase& db) {
    std::ostringstream out;
    write_basket(out, db);
    return out.str();
}

/// Builds a quantity-free database directly from name rows, bypassing the
/// basket text format (names may contain separator characters).
inline TransactionDatabase database_from_names(
    const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) throw Error("empty input: no transactions");
    std::vector<std::string> all;
    for (const auto& row : rows)
        for (const auto& name : row) all.push_back(name);
    ItemDictionary dict = ItemDictionary::from_names(std::move(all));

    std::vector<Transaction> transactions;
    transactions.reserve(rows.size());
    for (std::size_t ti = 0; ti < rows.size(); ++ti) {
        Transaction t;
        t.tid = ti;
        for (const auto& name : rows[ti]) t.items.push_back(dict.id(name));
        std::sort(t.items.begin(), t.items.end());
        t.items.erase(std::unique(t.items.begin(), t.items.end()), t.items.end());
        transactions.push_back(std::move(t));
    }
    return TransactionDatabase(std::move(dict), std::move(transactions));
}

/// Renders an itemset as its space-joined item names.
template <class NameFn>
std::string format_itemset(const Itemset& s, NameFn&& name_of) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0) out += ' ';
        out += name_of(s[i]);
    }
    return out;
}

}  // namespace rulemine
