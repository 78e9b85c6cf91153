#include <doctest.h>

#include <algorithm>
#include <random>
#include <thread>

#include "prt/oracle.hpp"
#include "prt/prt.hpp"
#include "prt/rank_pq.hpp"
#include "test_util.hpp"

using namespace prt;
using namespace prt::testutil;

TEST_SUITE("prt") {

TEST_CASE("single point") {
    PriorityRangeTree t({{0, 1.0, 2.0, 5}});
    t.audit();
    CHECK(t.size() == 1);
    CHECK(t.switch_depth() == 0);
    const auto got = t.threshold_query({0, 2, 0}, 1);
    REQUIRE(got.size() == 1);
    CHECK(got[0].id == 0);
}

TEST_CASE("canonical build places the heaviest point at the root") {
    PriorityRangeTree t(canonical_points());
    t.audit();  // includes the hybrid depth bound for every point
    const auto top = t.top_k({-10, 10, -10}, 1);
    REQUIRE(top.size() == 1);
    CHECK(top[0].id == 5);  // w=32 point
}

TEST_CASE("canonical threshold queries") {
    PriorityRangeTree t(canonical_points());
    const auto got = t.threshold_query({2, 6, 3}, 4);
    CHECK(ids(got) == std::set<PointId>{3, 6});
    CHECK(t.threshold_query({-10, 10, -10}, 1000).empty());  // w above everything
    const auto all = t.threshold_query({1, 6, -1e9}, 1);
    CHECK(all.size() == 6);
}

TEST_CASE("canonical max-report queries") {
    PriorityRangeTree t(canonical_points());
    const auto a = t.max_report({2, 4, 5});
    REQUIRE(a.has_value());
    CHECK(a->id == 2);
    CHECK_FALSE(t.max_report({10, 11, 0}).has_value());
    const auto b = t.max_report({5, 5, 1});
    REQUIRE(b.has_value());
    CHECK(b->id == 5);
}

TEST_CASE("canonical top-k queries") {
    PriorityRangeTree t(canonical_points());
    const auto two = t.top_k({1, 6, 0}, 2);
    CHECK(ranks(two) == std::multiset<Rank>{5, 4});
    const auto all = t.top_k({-10, 10, -10}, 100);
    CHECK(all.size() == 6);
    for (std::size_t i = 1; i < all.size(); ++i) {
        CHECK(rank_of(all[i].w) <= rank_of(all[i - 1].w));
    }
    const auto one = t.top_k({2, 6, 3}, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].id == 3);
}

TEST_CASE("duplicate ids are a build error") {
    std::vector<WeightedPoint> pts{{1, 0, 0, 1}, {1, 1, 1, 1}};
    CHECK_THROWS_AS(PriorityRangeTree{pts}, std::invalid_argument);
}

TEST_CASE("k and w preconditions") {
    PriorityRangeTree t(canonical_points());
    CHECK_THROWS_AS(t.threshold_query({0, 1, 0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(t.top_k({0, 1, 0}, 0), std::invalid_argument);
}

TEST_CASE("build is deterministic") {
    const auto pts = random_points(700, 55, gen::Distribution::kZipf);
    PriorityRangeTree a(pts), b(pts);
    CHECK(a.structure_signature() == b.structure_signature());
}

TEST_CASE("exhaustive equivalence on small and mid instances") {
    std::mt19937_64 rng(606);
    for (std::uint64_t it = 0; it < 60; ++it) {
        const std::size_t n = 1 + rng() % 300;
        auto pts = random_points(n, it * 13 + 1, dist_cycle(it));
        if (it % 3 == 0) {
            for (auto& p : pts) {
                p.x = std::floor(p.x / 8.0) * 8.0;
                p.y = std::floor(p.y / 8.0) * 8.0;
            }
        }
        PriorityRangeTree t(pts);
        t.audit();
        for (int q = 0; q < 25; ++q) {
            double a = -10 + (rng() % 1300) / 10.0;
            double b = -10 + (rng() % 1300) / 10.0;
            if (a > b) std::swap(a, b);
            const double y = -10 + (rng() % 1300) / 10.0;
            const ThreeSidedRange r{a, b, y};
            const Weight w = 1 + rng() % (2 * n + 1);
            const auto got = t.threshold_query(r, w);
            const auto want = oracle::threshold(pts, r, w);
            CHECK(ids(got) == ids(want));
            CHECK(no_duplicate_ids(got));
            CHECK(got.size() == want.size());

            const auto mr = t.max_report(r);
            const auto omr = oracle::max_rank(pts, r);
            REQUIRE(mr.has_value() == omr.has_value());
            if (mr) {
                CHECK(rank_of(mr->w) == *omr);
                CHECK(contains(r, *mr));
            }

            const std::size_t k = 1 + rng() % (n + 2);
            const auto tk = t.top_k(r, k);
            const auto otk = oracle::top_k(pts, r, k);
            CHECK(ranks(tk) == ranks(otk));
            CHECK(no_duplicate_ids(tk));
            for (const auto& p : tk) CHECK(contains(r, p));
        }
    }
}

TEST_CASE("space census stays near-linear across doublings") {
    std::vector<std::size_t> totals;
    for (std::size_t n = 1 << 10; n <= 1 << 13; n *= 2) {
        gen::GeneratorSpec spec;
        spec.n = n;
        spec.seed = 9 + n;
        spec.dist = gen::Distribution::kZipf;
        spec.zipf_s = 0.7;
        PriorityRangeTree t(gen::generate(spec));
        totals.push_back(t.space_census().total());
    }
    for (std::size_t i = 1; i < totals.size(); ++i) {
        const double ratio = static_cast<double>(totals[i]) / totals[i - 1];
        CHECK(ratio <= 2.2);
    }
}

TEST_CASE("concurrent read-only queries match serial results") {
    const auto pts = random_points(1024, 77, gen::Distribution::kZipf);
    const PriorityRangeTree tree(pts);
    std::vector<ThreeSidedRange> queries;
    std::vector<Weight> weights;
    std::mt19937_64 rng(88);
    for (int i = 0; i < 64; ++i) {
        double a = (rng() % 1000) / 10.0, b = (rng() % 1000) / 10.0;
        if (a > b) std::swap(a, b);
        queries.push_back({a, b, (rng() % 1000) / 10.0});
        weights.push_back(1 + rng() % 1024);
    }
    std::vector<std::set<PointId>> serial;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        serial.push_back(ids(tree.threshold_query(queries[i], weights[i])));
    }
    std::vector<std::set<PointId>> parallel(queries.size());
    {
        std::vector<std::thread> workers;
        for (int t = 0; t < 4; ++t) {
            workers.emplace_back([&, t] {
                for (std::size_t i = static_cast<std::size_t>(t); i < queries.size();
                     i += 4) {
                    parallel[i] = ids(tree.threshold_query(queries[i], weights[i]));
                }
            });
        }
        for (auto& w : workers) w.join();
    }
    CHECK(parallel == serial);
}

TEST_CASE("counters populate per query and reset in between") {
    PriorityRangeTree t(random_points(2048, 3, gen::Distribution::kExpFreq));
    QueryCounters c;
    const auto r1 = t.threshold_query({10, 90, 20}, 4, &c);
    CHECK(c.tree_nodes_visited > 0);
    CHECK(r1.size() > 0);
    const std::uint64_t before = c.total();
    t.threshold_query({5, 6, 99}, 1 << 12, &c);
    CHECK(c.total() < before);  // reset happened, small query counts less
}

}  // TEST_SUITE

TEST_SUITE("rank_pq") {

TEST_CASE("extract-max order against a reference multiset") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        RankPriorityQueue<int> pq(64);
        std::multiset<Rank> reference;
        QueryCounters c;
        // Seed phase: arbitrary inserts.
        for (int i = 0; i < 200; ++i) {
            const Rank r = static_cast<Rank>(rng() % 64);
            pq.insert(r, static_cast<int>(i), &c);
            reference.insert(r);
        }
        CHECK(pq.consistent());
        Rank last = 63;
        // Extraction phase with monotone-bounded inserts.
        while (!pq.empty()) {
            const Rank r = pq.max_rank();
            CHECK(r == *reference.rbegin());
            CHECK(r <= last);
            last = r;
            pq.extract_max(&c);
            reference.erase(std::prev(reference.end()));
            CHECK(pq.consistent());
            if (!pq.empty() && rng() % 3 == 0) {
                const Rank nr = static_cast<Rank>(rng() % (r + 1));
                pq.insert(nr, 0, &c);
                reference.insert(nr);
            }
        }
        // Marches bounded by the rank span under monotone extraction.
        CHECK(pq.marches() <= 2 * 64);
    }
}

TEST_CASE("span-bounded marches in the monotone regime") {
    RankPriorityQueue<int> pq(40);
    Rank lo = 40, hi = 0;
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        const Rank r = 5 + static_cast<Rank>(rng() % 20);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        pq.insert(r, i);
    }
    while (!pq.empty()) pq.extract_max();
    CHECK(pq.marches() <= 2 * (hi - lo + 1));
}

TEST_CASE("empty queue errors") {
    RankPriorityQueue<int> pq(4);
    CHECK_THROWS_AS(pq.extract_max(), std::logic_error);
    CHECK_THROWS_AS(pq.max_rank(), std::logic_error);
    pq.insert(2, 7);
    CHECK(pq.max_rank() == 2);
    CHECK(pq.min_rank() == 2);
    CHECK(pq.extract_max() == 7);
    CHECK(pq.empty());
}

}  // TEST_SUITE
