#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "helpers.hpp"
#include "rulemine/oracle.hpp"
#include "rulemine/taxonomy.hpp"

using namespace rulemine;

namespace {

TransactionDatabase veg_db() {
    return load_basket(std::string("Aubergine Charcoal\nCourgette\nAubergine Courgette\n"));
}

}  // namespace

TEST_CASE("taxonomy loads with precomputed ancestors") {
    auto db = veg_db();
    auto tax = load_taxonomy("Vegetables Aubergine\nVegetables Courgette\n", db);
    CHECK(tax.item_count() == 3);
    CHECK(tax.category_count() == 1);

    const ItemId aubergine = *tax.find("Aubergine");
    const ItemId veg = *tax.find("Vegetables");
    CHECK(tax.ancestors(aubergine) == std::vector<ItemId>{veg});
    CHECK(tax.ancestors(*tax.find("Charcoal")).empty());
    CHECK(tax.children(veg).size() == 2);
}

TEST_CASE("a DAG node may have several parents") {
    auto db = veg_db();
    auto tax = load_taxonomy(
        "Vegetables Aubergine\nGrillGoods Aubergine\nGrillGoods Charcoal\n", db);
    const auto& anc = tax.ancestors(*tax.find("Aubergine"));
    CHECK(anc.size() == 2);
    CHECK(std::count(anc.begin(), anc.end(), *tax.find("Vegetables")) == 1);
    CHECK(std::count(anc.begin(), anc.end(), *tax.find("GrillGoods")) == 1);
}

TEST_CASE("taxonomy validation") {
    auto db = veg_db();
    // Cycle between two categories.
    CHECK_THROWS_AS(load_taxonomy("X Y\nY X\nX Aubergine\n", db), Error);
    // Self edge.
    CHECK_THROWS_AS(load_taxonomy("X X\n", db), Error);
    // Database item with children.
    CHECK_THROWS_AS(load_taxonomy("Aubergine Charcoal\n", db), Error);
    // Category sink: child is neither an item nor an interior node.
    CHECK_THROWS_AS(load_taxonomy("Vegetables Tomato\n", db), Error);
    // Malformed line.
    CHECK_THROWS_AS(load_taxonomy("Vegetables\n", db), ParseError);

    // Multi-level closure through a shared root.
    auto deep = load_taxonomy(
        "Food Vegetables\nVegetables Aubergine\nVegetables Courgette\nFood Charcoal\n", db);
    const auto& anc = deep.ancestors(*deep.find("Aubergine"));
    CHECK(anc.size() == 2);
}

TEST_CASE("transaction extension") {
    auto db = veg_db();
    auto tax = load_taxonomy("Vegetables Aubergine\nVegetables Courgette\n", db);
    const ItemId veg = *tax.find("Vegetables");

    const Transaction& t0 = db.transactions()[0];  // {Aubergine, Charcoal}
    auto ext = extend_transaction(t0, tax);
    CHECK(ext.items == set_union(t0.items, {veg}));

    // Empty taxonomy: identity.
    auto none = load_taxonomy(std::string(""), db);
    CHECK(extend_transaction(t0, none).items == t0.items);

    // Filter excluding the category: identity again.
    std::vector<bool> filter(tax.node_count(), false);
    CHECK(extend_transaction(t0, tax, &filter).items == t0.items);
    filter[veg] = true;
    CHECK(extend_transaction(t0, tax, &filter).items == set_union(t0.items, {veg}));
}

TEST_CASE("item/ancestor pairs are detected and pruned") {
    auto db = veg_db();
    auto tax = load_taxonomy("Vegetables Aubergine\nVegetables Courgette\n", db);
    const ItemId aubergine = *tax.find("Aubergine");
    const ItemId charcoal = *tax.find("Charcoal");
    const ItemId veg = *tax.find("Vegetables");

    CHECK(has_item_ancestor_pair(make_itemset({aubergine, veg}), tax));
    CHECK_FALSE(has_item_ancestor_pair(make_itemset({aubergine, charcoal}), tax));
    CHECK_FALSE(has_item_ancestor_pair(make_itemset({charcoal, veg}), tax));

    auto mined = mine_generalized(db, tax, Fraction(1, 100), Fraction(1, 100));
    for (std::size_t k = 1; k <= mined.frequent.max_size(); ++k)
        for (const CountedItemset& c : mined.frequent.level(k))
            CHECK_FALSE(has_item_ancestor_pair(c.items, tax));
}

TEST_CASE("sole-specialization category mirrors its child's support") {
    auto db = testutil::market_db();
    auto tax = load_taxonomy("Vegetables A\n", db);
    auto mined = mine_generalized(db, tax, Fraction(3, 10), Fraction(3, 5));
    const ItemId veg = *tax.find("Vegetables");
    CHECK(mined.frequent.support_of({veg}) == (Support{4, 5}));
    CHECK(mined.frequent.support_of({0}) == (Support{4, 5}));
}

TEST_CASE("category support is not the sum of child supports") {
    auto db = load_basket(std::string("Aubergine Courgette\nCharcoal\n"));
    auto tax = load_taxonomy("Vegetables Aubergine\nVegetables Courgette\n", db);
    auto mined = mine_generalized(db, tax, Fraction(1, 100), Fraction(1, 2));
    const ItemId veg = *tax.find("Vegetables");
    const std::int64_t veg_count = mined.frequent.support_of({veg}).count;
    const std::int64_t sum = mined.frequent.support_of({*tax.find("Aubergine")}).count +
                             mined.frequent.support_of({*tax.find("Courgette")}).count;
    CHECK(veg_count == 1);
    CHECK(veg_count < sum);
}

TEST_CASE("generalization support dominates specialization support") {
    std::mt19937 rng(71);
    for (int round = 0; round < 20; ++round) {
        auto db = testutil::random_db(rng, 6, 30);
        auto tax = load_taxonomy(testutil::random_tree_taxonomy(rng, db.items().names()), db);
        auto mined = mine_generalized(db, tax, Fraction(1, 1000), Fraction(1, 2));
        for (ItemId node = 0; node < tax.node_count(); ++node) {
            for (ItemId anc : tax.ancestors(node)) {
                auto child_count = mined.frequent.count_of({node});
                auto anc_count = mined.frequent.count_of({anc});
                if (child_count && anc_count) CHECK(*anc_count >= *child_count);
            }
        }
    }
}

TEST_CASE("optimized miner equals the naive full-extension pipeline") {
    std::mt19937 rng(73);
    int compared = 0;
    while (compared < 40) {
        auto db = testutil::random_db(rng, 6, 25);
        auto tax = load_taxonomy(testutil::random_tree_taxonomy(rng, db.items().names()), db);
        if (db.items().size() + tax.category_count() > 16) continue;  // oracle guard
        ++compared;
        const Fraction minsup(1 + (compared % 4), 10);
        const Fraction minconf(1, 2);

        auto mined = mine_generalized(db, tax, minsup, minconf);
        auto naive = oracle::naive_generalized(db, tax, minsup, minconf);

        auto name_of = [&](ItemId id) { return tax.name(id); };
        REQUIRE(oracle::to_named_itemsets(mined.frequent, name_of) == naive.itemsets);
        REQUIRE(oracle::to_named_rules(mined.rules, name_of) == naive.rules);
    }
}
