#pragma once

// Batch-run plumbing behind the CLI: configuration, the mine/discretize/
// transform compositions, report formatting and the self-check runner.
// Everything here is deterministic: identical config and input produce
// byte-identical output regardless of thread count.

#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include "rulemine/apriori.hpp"
#include "rulemine/core.hpp"
#include "rulemine/interest.hpp"
#include "rulemine/oracle.hpp"
#include "rulemine/quantitative.hpp"
#include "rulemine/rulegen.hpp"
#include "rulemine/taxonomy.hpp"
#include "rulemine/transform.hpp"

namespace rulemine {

enum class DiscretizeMode { None, EquiWidth, EquiDepth };
enum class IntervalMode { Merged, AllConsecutive };
enum class InterestMode { None, Lift, Chi2 };
enum class OutputFormat { Table, Csv, Jsonl };

struct RunConfig {
    std::string input_path;
    Fraction min_support{1, 10};
    Fraction min_confidence{1, 2};
    std::optional<Fraction> max_support;     // default: 5 * min_support, capped at 1
    Fraction partial_completeness{3, 2};     // K
    DiscretizeMode discretize = DiscretizeMode::None;
    std::int64_t partitions_override = 0;    // 0: use the partition-count formula
    IntervalMode interval_mode = IntervalMode::Merged;
    std::string taxonomy_path;
    std::string partitioning_path;           // transform input, optional
    InterestMode interest = InterestMode::None;
    double chi2_threshold = kChiSquaredCritical5pc;
    std::size_t bucket_count = 8;
    std::size_t leaf_split_threshold = 16;
    OutputFormat format = OutputFormat::Table;
    bool bisect_taxonomy = false;            // deeper interval trees from transform
    unsigned threads = 1;                    // 0: hardware concurrency
    bool naive_counting = false;
    std::uint64_t seed = 12345;              // synthetic generation in oracle-check
    std::size_t oracle_trials = 200;

    Fraction effective_max_support() const {
        if (max_support) return *max_support;
        const Fraction five{5 * min_support.num, min_support.den};
        return five < Fraction(1, 1) ? five : Fraction(1, 1);
    }

    AprioriOptions apriori_options() const {
        AprioriOptions o;
        o.bucket_count = bucket_count;
        o.leaf_split_threshold = leaf_split_threshold;
        o.use_hash_tree = !naive_counting;
        o.threads = threads;
        return o;
    }

    void validate() const {
        if (!(Fraction(0, 1) < min_support) || Fraction(1, 1) < min_support)
            throw ConfigError("min support must be in (0, 1]");
        if (!(Fraction(0, 1) < min_confidence) || Fraction(1, 1) < min_confidence)
            throw ConfigError("min confidence must be in (0, 1]");
        if (effective_max_support() < min_support)
            throw ConfigError("max support must not be below min support");
        if (partial_completeness.num <= partial_completeness.den)
            throw ConfigError("partial-completeness level K must exceed 1");
        if (partitions_override < 0) throw ConfigError("partition count must be non-negative");
    }
};

namespace detail {

inline std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

inline std::string format_decimal(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Discretization step
// ---------------------------------------------------------------------------

struct DiscretizationResult {
    std::vector<std::string> attribute_names;    // parallel to attributes
    std::vector<QuantitativeAttribute> attributes;
    std::vector<Partitioning> partitionings;
};

/// Partitions every quantified attribute of the database per config: the
/// partition count comes from the override or the completeness formula and
/// saturates at each attribute's distinct-value count.
inline DiscretizationResult discretize_database(const TransactionDatabase& db,
                                                const RunConfig& config) {
    DiscretizationResult out;
    out.attributes = quantitative_attributes(db);
    if (out.attributes.empty()) return out;

    std::int64_t n = config.partitions_override;
    if (n == 0)
        n = num_partitions(out.attributes.size(), config.min_support,
                           config.partial_completeness);

    std::map<std::string, std::vector<Interval>> from_file;
    if (!config.partitioning_path.empty()) {
        auto in = detail::open_or_throw(config.partitioning_path);
        from_file = parse_partitioning(in);
    }

    for (const QuantitativeAttribute& attr : out.attributes) {
        const std::string name = db.items().name(attr.item);
        Partitioning p;
        if (!from_file.empty()) {
            auto it = from_file.find(name);
            if (it == from_file.end())
                throw Error("partitioning file has no entry for attribute '" + name + "'");
            p = Partitioning{attr.item, it->second};
            std::int64_t expect = 0;
            for (const Interval& iv : p.intervals) {
                if (iv.lo != expect || iv.hi < iv.lo ||
                    iv.hi >= static_cast<std::int64_t>(attr.rank_count()))
                    throw Error("partitioning for '" + name +
                                "' does not cover the observed value ranks");
                expect = iv.hi + 1;
            }
            if (expect != static_cast<std::int64_t>(attr.rank_count()))
                throw Error("partitioning for '" + name +
                            "' does not cover the observed value ranks");
        } else if (config.discretize == DiscretizeMode::EquiWidth) {
            p = equi_width_partition(attr, n);
        } else {
            p = equi_depth_partition(attr, n);
        }
        out.attribute_names.push_back(name);
        out.partitionings.push_back(std::move(p));
    }
    return out;
}

inline TransactionDatabase apply_discretization(const TransactionDatabase& db,
                                                const DiscretizationResult& d,
                                                const RunConfig& config) {
    std::vector<AttributeIntervals> specs;
    for (std::size_t i = 0; i < d.attributes.size(); ++i) {
        std::vector<Interval> intervals =
            config.interval_mode == IntervalMode::AllConsecutive
                ? all_consecutive_intervals(d.attributes[i])
                : merge_adjacent(d.partitionings[i], d.attributes[i], db.size(),
                                 config.min_support, config.effective_max_support());
        specs.push_back(AttributeIntervals{d.attributes[i], std::move(intervals)});
    }
    return booleanize(db, specs);
}

// ---------------------------------------------------------------------------
// Mining
// ---------------------------------------------------------------------------

struct RuleRow {
    std::vector<std::string> antecedent;
    std::vector<std::string> consequent;
    Support support;
    Fraction confidence;
    std::optional<Fraction> lift_value;
    std::optional<double> chi2_value;
};

struct MineOutcome {
    std::vector<RuleRow> rows;
    std::int64_t n_transactions{0};
    std::size_t n_frequent_itemsets{0};
};

inline MineOutcome run_mine(const RunConfig& config) {
    config.validate();
    auto in = detail::open_or_throw(config.input_path);
    TransactionDatabase db = load_basket(in);
    if (config.discretize != DiscretizeMode::None || !config.partitioning_path.empty())
        db = apply_discretization(db, discretize_database(db, config), config);

    std::vector<Rule> rules;
    std::vector<std::string> names;       // mining-space id -> name
    TransactionDatabase stats_db;         // rule statistics run against this
    std::size_t n_frequent = 0;

    if (!config.taxonomy_path.empty()) {
        auto tax_in = detail::open_or_throw(config.taxonomy_path);
        const TaxonomyGraph tax = load_taxonomy(tax_in, db);
        GeneralizedMining mined = mine_generalized(db, tax, config.min_support,
                                                   config.min_confidence,
                                                   config.apriori_options());
        rules = std::move(mined.rules);
        n_frequent = mined.frequent.total_itemsets();
        for (ItemId id = 0; id < tax.node_count(); ++id) names.push_back(tax.name(id));
        stats_db = extend_database(db, tax);
    } else {
        const FrequentItemsets frequent =
            apriori(db, config.min_support, config.apriori_options());
        rules = generate_rules(frequent, config.min_confidence);
        n_frequent = frequent.total_itemsets();
        names = db.items().names();
        stats_db = std::move(db);
    }

    MineOutcome out;
    out.n_transactions = stats_db.size();
    out.n_frequent_itemsets = n_frequent;
    for (const Rule& r : rules) {
        RuleRow row;
        for (ItemId id : r.antecedent) row.antecedent.push_back(names[id]);
        for (ItemId id : r.consequent) row.consequent.push_back(names[id]);
        row.support = r.support;
        row.confidence = r.confidence;

        // Statistics live in the stats database's id space.
        Rule mapped;
        for (const auto& n : row.antecedent) mapped.antecedent.push_back(stats_db.items().id(n));
        for (const auto& n : row.consequent) mapped.consequent.push_back(stats_db.items().id(n));
        std::sort(mapped.antecedent.begin(), mapped.antecedent.end());
        std::sort(mapped.consequent.begin(), mapped.consequent.end());
        const ContingencyTable ct = contingency(stats_db, mapped);
        if (ct.antecedent_count() > 0 && ct.consequent_count() > 0)
            row.lift_value = lift(ct);
        row.chi2_value = chi_squared(ct);
        out.rows.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report formats
// ---------------------------------------------------------------------------

inline std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ' ';
        out += names[i];
    }
    return out;
}

inline std::string format_table(const MineOutcome& outcome, const RunConfig& config) {
    std::ostringstream out;
    out << "# " << outcome.rows.size() << " rules, " << outcome.n_transactions
        << " transactions, " << outcome.n_frequent_itemsets << " frequent itemsets, min support "
        << to_string(config.min_support) << ", min confidence "
        << to_string(config.min_confidence) << "\n";
    if (outcome.rows.empty()) return out.str();

    std::vector<std::string> rule_texts;
    std::size_t width = 4;
    for (const RuleRow& r : outcome.rows) {
        rule_texts.push_back(join_names(r.antecedent) + " -> " + join_names(r.consequent));
        width = std::max(width, rule_texts.back().size());
    }

    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(s.size(), w), ' ');
        return s;
    };
    const bool with_lift = config.interest == InterestMode::Lift;
    const bool with_chi2 = config.interest == InterestMode::Chi2;

    out << pad("RULE", width) << "  " << pad("SUPPORT", 16) << "  " << pad("CONFIDENCE", 16);
    if (with_lift) out << "  " << pad("LIFT", 16) << "  FLAG";
    if (with_chi2) out << "  " << pad("CHI2", 10) << "  FLAG";
    out << "\n";

    for (std::size_t i = 0; i < outcome.rows.size(); ++i) {
        const RuleRow& r = outcome.rows[i];
        out << pad(rule_texts[i], width) << "  "
            << pad(to_string(r.support) + " (" + detail::format_decimal(r.support.value()) + ")",
                   16)
            << "  "
            << pad(to_string(r.confidence) + " (" +
                       detail::format_decimal(r.confidence.value()) + ")",
                   16);
        if (with_lift) {
            std::string text = "n/a", flag;
            if (r.lift_value) {
                text = to_string(*r.lift_value) + " (" +
                       detail::format_decimal(r.lift_value->value()) + ")";
                if (*r.lift_value < Fraction(1, 1)) flag = "negative";
            }
            out << "  " << pad(text, 16) << "  " << flag;
        }
        if (with_chi2) {
            std::string text = "n/a", flag;
            if (r.chi2_value) {
                text = detail::format_decimal(*r.chi2_value);
                if (*r.chi2_value >= config.chi2_threshold) flag = "significant";
            }
            out << "  " << pad(text, 10) << "  " << flag;
        }
        out << "\n";
    }
    return out.str();
}

inline std::string format_csv(const MineOutcome& outcome) {
    std::ostringstream out;
    out << "antecedent,consequent,support_num,support_den,conf_num,conf_den,lift,chi2\n";
    for (const RuleRow& r : outcome.rows) {
        out << join_names(r.antecedent) << ',' << join_names(r.consequent) << ','
            << r.support.count << ',' << r.support.total << ',' << r.confidence.num << ','
            << r.confidence.den << ',';
        if (r.lift_value) out << to_string(*r.lift_value);
        out << ',';
        if (r.chi2_value) out << detail::format_decimal(*r.chi2_value, 6);
        out << '\n';
    }
    return out.str();
}

inline std::string format_jsonl(const MineOutcome& outcome) {
    std::ostringstream out;
    for (const RuleRow& r : outcome.rows) {
        nlohmann::ordered_json row;
        row["antecedent"] = r.antecedent;
        row["consequent"] = r.consequent;
        row["support_num"] = r.support.count;
        row["support_den"] = r.support.total;
        row["conf_num"] = r.confidence.num;
        row["conf_den"] = r.confidence.den;
        // Lift stays exact as a fraction string, matching the csv column.
        if (r.lift_value)
            row["lift"] = to_string(*r.lift_value);
        else
            row["lift"] = nullptr;
        if (r.chi2_value)
            row["chi2"] = *r.chi2_value;
        else
            row["chi2"] = nullptr;
        out << row.dump() << '\n';
    }
    return out.str();
}

inline std::string format_report(const MineOutcome& outcome, const RunConfig& config) {
    switch (config.format) {
        case OutputFormat::Csv: return format_csv(outcome);
        case OutputFormat::Jsonl: return format_jsonl(outcome);
        default: return format_table(outcome, config);
    }
}

/// Parses format_csv output back into rows (exact fields only).
inline std::vector<RuleRow> parse_csv_rules(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::vector<RuleRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 8) throw Error("malformed csv row: '" + line + "'");
        RuleRow row;
        auto split_names = [](const std::string& s) {
            std::vector<std::string> names;
            std::istringstream ss(s);
            std::string n;
            while (ss >> n) names.push_back(n);
            return names;
        };
        row.antecedent = split_names(fields[0]);
        row.consequent = split_names(fields[1]);
        row.support = Support{std::stoll(fields[2]), std::stoll(fields[3])};
        row.confidence = Fraction(std::stoll(fields[4]), std::stoll(fields[5]));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string mine_report(const RunConfig& config) {
    return format_report(run_mine(config), config);
}

// ---------------------------------------------------------------------------
// Discretize and transform commands
// ---------------------------------------------------------------------------

/// Partitioning text for every quantified attribute; empty when none exist.
inline std::string discretize_report(const RunConfig& config) {
    config.validate();
    auto in = detail::open_or_throw(config.input_path);
    const TransactionDatabase db = load_basket(in);
    const DiscretizationResult d = discretize_database(db, config);
    std::ostringstream out;
    for (std::size_t i = 0; i < d.attributes.size(); ++i)
        write_partitioning(out, d.attribute_names[i], d.attributes[i], d.partitionings[i]);
    return out.str();
}

enum class TransformDirection { ToTaxonomy, ToQuantitative };

inline std::string transform_report(const RunConfig& config, TransformDirection direction) {
    config.validate();
    auto in = detail::open_or_throw(config.input_path);
    const TransactionDatabase db = load_basket(in);

    std::ostringstream out;
    if (direction == TransformDirection::ToTaxonomy) {
        const DiscretizationResult d = discretize_database(db, config);
        for (std::size_t i = 0; i < d.attributes.size(); ++i) {
            const IntervalTaxonomy tax =
                quantitative_to_taxonomy(d.attribute_names[i], d.attributes[i],
                                         d.partitionings[i], config.bisect_taxonomy);
            out << "# attribute " << d.attribute_names[i] << "\n" << tax.edge_list();
        }
        return out.str();
    }

    if (config.taxonomy_path.empty())
        throw ConfigError("transform to-quantitative requires --taxonomy");
    auto tax_in = detail::open_or_throw(config.taxonomy_path);
    const TaxonomyGraph tax = load_taxonomy(tax_in, db);
    for (const LeafNumbering& numbering : taxonomy_to_quantitative(tax)) {
        out << "# attribute " << numbering.attribute << "\n";
        for (std::size_t i = 0; i < numbering.leaves.size(); ++i)
            out << numbering.attribute << ' ' << numbering.leaves[i] << ' ' << i << "\n";
        for (const auto& [cat, span] : numbering.category_spans)
            out << "# span " << cat << " " << span.lo << " " << span.hi << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Differential self-check
// ---------------------------------------------------------------------------

struct OracleCheckResult {
    std::string report;
    bool ok{true};
};

/// Differential checks of the optimized paths against the brute-force
/// references, on the given input.
inline OracleCheckResult oracle_check(const RunConfig& config) {
    config.validate();
    auto in = detail::open_or_throw(config.input_path);
    const TransactionDatabase db = load_basket(in);

    OracleCheckResult result;
    std::ostringstream out;
    auto record = [&](const std::string& name, bool pass) {
        out << (pass ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!pass) result.ok = false;
    };

    std::optional<FrequentItemsets> frequent;
    if (db.items().size() <= 16) {
        frequent = apriori(db, config.min_support, config.apriori_options());
        record("apriori equals brute-force itemset enumeration",
               *frequent == oracle::bf_frequent_itemsets(db, config.min_support));
        record("rule generation equals brute-force rule enumeration",
               generate_rules(*frequent, config.min_confidence) ==
                   oracle::bf_rules(*frequent, config.min_confidence));
    } else {
        out << "[SKIP] brute-force itemset/rule checks (more than 16 items)\n";
    }

    // Random candidate sets and transactions drawn from the database items.
    std::mt19937 rng(static_cast<std::uint32_t>(config.seed));
    const std::size_t n_items = db.items().size();
    bool subset_ok = true;
    if (n_items >= 2) {
        std::uniform_int_distribution<std::size_t> k_dist(1, std::min<std::size_t>(4, n_items));
        std::uniform_int_distribution<ItemId> item(0, static_cast<ItemId>(n_items - 1));
        for (std::size_t trial = 0; trial < config.oracle_trials; ++trial) {
            const std::size_t k = k_dist(rng);
            std::set<Itemset> cset;
            for (int c = 0; c < 20; ++c) {
                std::set<ItemId> s;
                while (s.size() < k) s.insert(item(rng));
                cset.insert(Itemset(s.begin(), s.end()));
            }
            std::vector<Itemset> cands(cset.begin(), cset.end());
            Itemset t;
            for (ItemId id = 0; id < n_items; ++id)
                if (std::bernoulli_distribution(0.5)(rng)) t.push_back(id);
            HashTree tree(cands, config.bucket_count, config.leaf_split_threshold);
            auto got = tree.subset(t);
            auto want = oracle::naive_subset(cands, t);
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            if (got != want) subset_ok = false;
        }
    }
    record("hash-tree subset equals naive containment filter", subset_ok);

    const auto attrs = quantitative_attributes(db);
    if (!attrs.empty()) {
        bool merge_ok = true;
        for (const QuantitativeAttribute& attr : attrs) {
            const std::int64_t n =
                config.partitions_override
                    ? config.partitions_override
                    : num_partitions(attrs.size(), config.min_support,
                                     config.partial_completeness);
            const Partitioning p = config.discretize == DiscretizeMode::EquiWidth
                                       ? equi_width_partition(attr, n)
                                       : equi_depth_partition(attr, n);
            if (merge_adjacent(p, attr, db.size(), config.min_support,
                               config.effective_max_support()) !=
                oracle::bf_merged_intervals(p, attr, db.size(),
                                            config.effective_max_support()))
                merge_ok = false;
        }
        record("adjacent merging equals exhaustive union enumeration", merge_ok);
    }

    if (!config.taxonomy_path.empty()) {
        auto tax_in = detail::open_or_throw(config.taxonomy_path);
        const TaxonomyGraph tax = load_taxonomy(tax_in, db);
        if (tax.node_count() <= 16) {
            const GeneralizedMining mined =
                mine_generalized(db, tax, config.min_support, config.min_confidence,
                                 config.apriori_options());
            const oracle::NaiveGeneralized naive = oracle::naive_generalized(
                db, tax, config.min_support, config.min_confidence);
            auto name_of = [&](ItemId id) { return tax.name(id); };
            record("generalized mining equals naive full extension",
                   oracle::to_named_itemsets(mined.frequent, name_of) == naive.itemsets &&
                       oracle::to_named_rules(mined.rules, name_of) == naive.rules);
        } else {
            out << "[SKIP] generalized mining check (more than 16 nodes)\n";
        }
    }

    result.report = out.str();
    return result;
}

}  // namespace rulemine
