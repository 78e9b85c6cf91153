#include <doctest.h>

#include <random>
#include <stdexcept>

#include "prt/oracle.hpp"
#include "test_util.hpp"

using namespace prt;
using namespace prt::testutil;

TEST_SUITE("oracle") {

TEST_CASE("threshold referee on the canonical set") {
    const auto pts = canonical_points();
    const auto got = oracle::threshold(pts, ThreeSidedRange{2, 6, 3}, 4);
    CHECK(ids(got) == std::set<PointId>{3, 6});
    CHECK(oracle::threshold(std::vector<WeightedPoint>{}, ThreeSidedRange{0, 1, 0}, 1)
              .empty());
    CHECK(oracle::threshold(pts, ThreeSidedRange{-10, 10, -10}, 1).size() == 6);
}

TEST_CASE("top-k referee sorts by rank then id") {
    const auto pts = canonical_points();
    const auto got = oracle::top_k(pts, ThreeSidedRange{1, 6, 0}, 2);
    REQUIRE(got.size() == 2);
    CHECK(got[0].id == 5);
    CHECK(got[1].id == 1);
    CHECK(oracle::top_k(pts, ThreeSidedRange{-10, 10, -10}, 100).size() == 6);
    CHECK_THROWS_AS(oracle::top_k(pts, ThreeSidedRange{0, 1, 0}, 0),
                    std::invalid_argument);
}

TEST_CASE("layer referee handles the catalog examples") {
    const auto layers =
        oracle::layers({{0, 7.0, 0}, {1, 9.0, 1}, {3, 4.0, 3}, {5, 1.0, 5}});
    REQUIRE(layers.size() == 2);
    CHECK(layers[0].size() == 3);
    CHECK(layers[1].size() == 1);
    CHECK(oracle::layers({}).empty());
    // An antichain is a single layer.
    const auto anti = oracle::layers({{0, 9.0, 0}, {1, 5.0, 1}, {2, 1.0, 2}});
    CHECK(anti.size() == 1);
    CHECK(anti[0].size() == 3);
}

TEST_CASE("baseline agrees with the referee everywhere") {
    std::mt19937_64 rng(515);
    for (std::uint64_t it = 0; it < 40; ++it) {
        const std::size_t n = 1 + rng() % 200;
        const auto pts = random_points(n, it + 400, dist_cycle(it));
        const oracle::SuffixPstBaseline baseline(pts);
        for (int q = 0; q < 25; ++q) {
            double a = -10 + (rng() % 1200) / 10.0;
            double b = -10 + (rng() % 1200) / 10.0;
            if (a > b) std::swap(a, b);
            const double y = -10 + (rng() % 1200) / 10.0;
            const Weight w = 1 + rng() % (2 * n + 1);
            const ThreeSidedRange r{a, b, y};
            CHECK(ids(baseline.threshold_query(r, w)) == ids(oracle::threshold(pts, r, w)));
        }
    }
}

TEST_CASE("baseline space: near-linear on exp-freq, inflated on uniform-rank inputs") {
    // exp-freq halves the population per rank, so suffix structures sum to O(n).
    const std::size_t n = 1 << 12;
    const oracle::SuffixPstBaseline exp_b(random_points(n, 5, gen::Distribution::kExpFreq));
    CHECK(exp_b.space_nodes() <= 4 * n);
    // zipf spreads ranks nearly uniformly up to log n, so the sum approaches
    // n * log(n) / 2 and the per-point average grows with n.
    const oracle::SuffixPstBaseline zipf_b(random_points(n, 5, gen::Distribution::kZipf));
    CHECK(zipf_b.space_nodes() >= 3 * n);
}

}  // TEST_SUITE
