#pragma once

// Shared fixtures and small generators for the test suite.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rulemine/core.hpp"

namespace testutil {

// The five-transaction market database used throughout: items A..E where
// A=Aubergine, B=Beer, C=Charcoal, D=Dijon, E=Edam.
inline const char* kMarketBasket =
    "D\n"
    "A B C\n"
    "A C\n"
    "A D\n"
    "A B C D E\n";

inline rulemine::TransactionDatabase market_db() {
    return rulemine::load_basket(std::string(kMarketBasket));
}

// 100 transactions behind the tea/coffee contingency table:
// 25 {tea,coffee}, 5 {tea}, 65 {coffee}, 5 empty.
inline rulemine::TransactionDatabase tea_coffee_db() {
    std::string text;
    for (int i = 0; i < 25; ++i) text += "Tea Coffee\n";
    for (int i = 0; i < 5; ++i) text += "Tea\n";
    for (int i = 0; i < 65; ++i) text += "Coffee\n";
    for (int i = 0; i < 5; ++i) text += "\n";
    return rulemine::load_basket(text);
}

/// Builds a database from explicit name lists ("Beer:2" carries a quantity).
inline rulemine::TransactionDatabase make_db(const std::vector<std::vector<std::string>>& rows) {
    std::string text;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) text += ' ';
            text += row[i];
        }
        text += '\n';
    }
    return rulemine::load_basket(text);
}

/// Random database over items a..a+n-1 (single-letter names).
inline rulemine::TransactionDatabase random_db(std::mt19937& rng, int max_items = 8,
                                               int max_transactions = 50) {
    std::uniform_int_distribution<int> n_items(1, max_items);
    std::uniform_int_distribution<int> n_rows(1, max_transactions);
    const int items = n_items(rng);
    const int rows = n_rows(rng);
    std::uniform_real_distribution<double> density(0.15, 0.8);
    const double p = density(rng);
    std::bernoulli_distribution pick(p);

    std::string text;
    for (int r = 0; r < rows; ++r) {
        bool any = false;
        std::string line;
        for (int i = 0; i < items; ++i) {
            if (pick(rng)) {
                if (any) line += ' ';
                line += static_cast<char>('a' + i);
                any = true;
            }
        }
        text += line;
        text += '\n';
    }
    return rulemine::load_basket(text);
}

/// Random single-attribute quantified database: every row carries "Q:<v>",
/// some rows add a plain item.
inline rulemine::TransactionDatabase random_quant_db(std::mt19937& rng, int max_rows = 100,
                                                     int max_distinct = 20) {
    std::uniform_int_distribution<int> n_rows(2, max_rows);
    std::uniform_int_distribution<int> n_vals(1, max_distinct);
    const int rows = n_rows(rng);
    const int distinct = n_vals(rng);
    // Skewed draws so some values dominate.
    std::uniform_int_distribution<int> value(0, distinct - 1);
    std::bernoulli_distribution skew(0.3);
    std::bernoulli_distribution extra(0.4);
    std::string text;
    for (int r = 0; r < rows; ++r) {
        int v = value(rng);
        if (skew(rng)) v = v % std::max(1, distinct / 3);
        text += "Q:" + std::to_string(v);
        if (extra(rng)) text += " X";
        text += '\n';
    }
    return rulemine::load_basket(text);
}

/// Random tree-shaped taxonomy (<= 3 levels) over the database's items as an
/// edge-list string. Category names are distinct from item names.
inline std::string random_tree_taxonomy(std::mt19937& rng,
                                        const std::vector<std::string>& item_names) {
    std::uniform_int_distribution<int> n_cats(1, 3);
    const int cats = n_cats(rng);
    std::vector<std::vector<std::string>> members(cats);
    std::uniform_int_distribution<int> assign(0, cats);  // cats == "no parent"
    for (const std::string& item : item_names) {
        const int g = assign(rng);
        if (g < cats) members[g].push_back(item);
    }
    std::string text;
    std::vector<std::string> live;
    for (int g = 0; g < cats; ++g) {
        if (members[g].empty()) continue;
        const std::string cat = "G" + std::to_string(g);
        live.push_back(cat);
        for (const std::string& item : members[g]) text += cat + " " + item + "\n";
    }
    // Optionally a root over some categories.
    if (live.size() >= 2 && std::bernoulli_distribution(0.5)(rng)) {
        for (const std::string& cat : live)
            if (std::bernoulli_distribution(0.7)(rng)) text += "Root " + cat + "\n";
        // Root may end up childless in text; that is fine, it then never appears.
    }
    return text;
}

}  // namespace testutil
