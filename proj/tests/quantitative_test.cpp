#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "helpers.hpp"
#include "rulemine/oracle.hpp"
#include "rulemine/quantitative.hpp"

using namespace rulemine;

namespace {

QuantitativeAttribute uniform_attr(std::int64_t ranks, std::int64_t per_rank = 1) {
    QuantitativeAttribute a;
    a.item = 0;
    for (std::int64_t i = 0; i < ranks; ++i) {
        a.values.push_back(i);
        a.counts.push_back(per_rank);
    }
    return a;
}

std::vector<Interval> intervals_of(const Partitioning& p) { return p.intervals; }

}  // namespace

TEST_CASE("partition count formula") {
    CHECK(num_partitions(1, Fraction(1, 2), Fraction(5, 1)) == 1);
    CHECK(num_partitions(2, Fraction(1, 10), Fraction(3, 1)) == 20);
    CHECK(num_partitions(1, Fraction(1, 100), Fraction(3, 2)) == 400);
    CHECK(num_partitions(1, Fraction(1, 10), Fraction(3, 2)) == 40);
    CHECK_THROWS_AS(num_partitions(1, Fraction(1, 2), Fraction(1, 1)), Error);
    CHECK_THROWS_AS(num_partitions(1, Fraction(1, 2), Fraction(1, 2)), Error);
}

TEST_CASE("equi-width partitioning") {
    auto a = uniform_attr(10);
    CHECK(intervals_of(equi_width_partition(a, 2)) ==
          std::vector<Interval>{{0, 4}, {5, 9}});

    auto thirds = intervals_of(equi_width_partition(a, 3));
    REQUIRE(thirds.size() == 3);
    CHECK(thirds[0].width() == 4);
    CHECK(thirds[1].width() == 3);
    CHECK(thirds[2].width() == 3);

    auto saturated = intervals_of(equi_width_partition(a, 25));
    REQUIRE(saturated.size() == 10);
    for (const Interval& iv : saturated) CHECK(iv.width() == 1);
}

TEST_CASE("equi-depth partitioning") {
    // Value 1 appears 10 times, values 2..11 once each.
    QuantitativeAttribute a;
    a.item = 0;
    a.values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    a.counts = {10, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    auto halves = intervals_of(equi_depth_partition(a, 2));
    REQUIRE(halves.size() == 2);
    CHECK(halves[0] == Interval{0, 0});
    CHECK(halves[1] == Interval{1, 10});
    CHECK(a.interval_count(halves[0]) == 10);
    CHECK(a.interval_count(halves[1]) == 10);

    // Uniform counts reduce to equi-width.
    auto u = uniform_attr(10, 3);
    for (std::int64_t n : {1, 2, 3, 4, 7, 10})
        CHECK(intervals_of(equi_depth_partition(u, n)) ==
              intervals_of(equi_width_partition(u, n)));

    CHECK(intervals_of(equi_depth_partition(a, 1)) == std::vector<Interval>{{0, 10}});
}

TEST_CASE("partitionings are exact covers") {
    std::mt19937 rng(59);
    for (int round = 0; round < 30; ++round) {
        auto db = testutil::random_quant_db(rng, 60, 15);
        auto attrs = quantitative_attributes(db);
        REQUIRE(attrs.size() == 1);
        const auto& attr = attrs[0];
        std::uniform_int_distribution<int> nn(1, 20);
        for (auto scheme : {&equi_width_partition, &equi_depth_partition}) {
            auto p = scheme(attr, nn(rng));
            std::int64_t expected_lo = 0;
            for (const Interval& iv : p.intervals) {
                CHECK(iv.lo == expected_lo);
                CHECK(iv.hi >= iv.lo);
                expected_lo = iv.hi + 1;
            }
            CHECK(expected_lo == static_cast<std::int64_t>(attr.rank_count()));
        }
    }
}

TEST_CASE("adjacent merging under maximum support") {
    // Three ranks, one transaction each, three transactions total.
    auto a = uniform_attr(3);
    Partitioning p{0, {{0, 0}, {1, 1}, {2, 2}}};

    // Every union of two exceeds 1/3: bases only.
    auto none = merge_adjacent(p, a, 3, Fraction(1, 10), Fraction(1, 3));
    CHECK(none == std::vector<Interval>{{0, 0}, {1, 1}, {2, 2}});

    // Cap at 2/3 admits the two-rank unions but not the full range.
    auto some = merge_adjacent(p, a, 3, Fraction(1, 10), Fraction(2, 3));
    CHECK(some == std::vector<Interval>{{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}});

    auto all = merge_adjacent(p, a, 3, Fraction(1, 10), Fraction(1, 1));
    CHECK(all.size() == 6);

    CHECK_THROWS_AS(merge_adjacent(p, a, 3, Fraction(1, 2), Fraction(1, 3)), Error);
}

TEST_CASE("merging equals exhaustive union enumeration") {
    std::mt19937 rng(61);
    for (int round = 0; round < 50; ++round) {
        auto db = testutil::random_quant_db(rng, 80, 18);
        auto attr = quantitative_attributes(db)[0];
        std::uniform_int_distribution<int> nn(1, 12);
        auto p = (round % 2 ? equi_depth_partition : equi_width_partition)(attr, nn(rng));
        std::uniform_int_distribution<int> cap(1, 100);
        const Fraction max_support(cap(rng), 100);
        auto scanned = merge_adjacent(p, attr, db.size(), Fraction(1, 100), max_support);
        auto enumerated = oracle::bf_merged_intervals(p, attr, db.size(), max_support);
        REQUIRE(scanned == enumerated);
    }
}

TEST_CASE("booleanization reproduces the beer interval enumeration") {
    auto db = load_basket(std::string("Beer:1 Charcoal\nBeer:2 Charcoal\nBeer:5\n"));
    auto attr = quantitative_attributes(db)[0];
    REQUIRE(attr.values == std::vector<std::int64_t>{1, 2, 5});

    auto boolean = booleanize(db, {{attr, all_consecutive_intervals(attr)}});
    // The transaction that bought 2 litres.
    const Transaction& t = boolean.transactions()[1];
    std::set<std::string> names;
    for (ItemId id : t.items) names.insert(boolean.items().name(id));
    CHECK(names == std::set<std::string>{"Beer[2,2]", "Beer[1,2]", "Beer[2,5]", "Beer[1,5]",
                                         "Charcoal"});
}

TEST_CASE("booleanization edge cases") {
    auto db = load_basket(std::string("Beer:5 Charcoal\nBeer:5\n"));
    auto attr = quantitative_attributes(db)[0];
    auto p = equi_width_partition(attr, 1);
    auto boolean = booleanize(db, {{attr, p.intervals}});
    // Single distinct value: one synthetic item per occurrence, passthrough intact.
    CHECK(boolean.items().find("Beer[5,5]").has_value());
    CHECK(boolean.items().find("Charcoal").has_value());
    CHECK_FALSE(boolean.items().find("Beer").has_value());
    CHECK(boolean.support({*boolean.items().find("Beer[5,5]")}).count == 2);

    // Stale partitioning: value missing from the attribute's observed range.
    auto other = load_basket(std::string("Beer:7\n"));
    CHECK_THROWS_AS(booleanize(other, {{attr, p.intervals}}), Error);

    // Quantified item without any partitioning.
    CHECK_THROWS_AS(booleanize(db, {}), Error);
}

TEST_CASE("wider intervals never lose support") {
    std::mt19937 rng(67);
    for (int round = 0; round < 15; ++round) {
        auto db = testutil::random_quant_db(rng, 50, 8);
        auto attr = quantitative_attributes(db)[0];
        auto intervals = all_consecutive_intervals(attr);
        auto boolean = booleanize(db, {{attr, intervals}});
        const std::string base = "Q";
        for (const Interval& inner : intervals) {
            for (const Interval& outer : intervals) {
                if (outer.lo <= inner.lo && inner.hi <= outer.hi) {
                    auto in_id = boolean.items().find(interval_item_name(base, attr, inner));
                    auto out_id = boolean.items().find(interval_item_name(base, attr, outer));
                    REQUIRE(in_id.has_value());
                    REQUIRE(out_id.has_value());
                    CHECK(boolean.support({*out_id}).count >= boolean.support({*in_id}).count);
                }
            }
        }
    }
}

TEST_CASE("partitioning text format round-trips intervals") {
    auto db = load_basket(std::string("Beer:1\nBeer:2\nBeer:5\nBeer:5\n"));
    auto attr = quantitative_attributes(db)[0];
    auto p = equi_depth_partition(attr, 2);
    std::ostringstream out;
    write_partitioning(out, "Beer", attr, p);
    std::istringstream in(out.str());
    auto parsed = parse_partitioning(in);
    REQUIRE(parsed.count("Beer") == 1);
    CHECK(parsed["Beer"] == p.intervals);

    std::istringstream bad("Beer 0 1\n");
    CHECK_THROWS_AS(parse_partitioning(bad), ParseError);
}
