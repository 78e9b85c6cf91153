#include <doctest.h>

#include <algorithm>
#include <random>

#include "prt/wbpst.hpp"
#include "test_util.hpp"

using namespace prt;
using namespace prt::testutil;

namespace {

std::vector<WeightedPoint> brute_interval(const std::vector<WeightedPoint>& pts,
                                          double a, double b, Weight w) {
    std::vector<WeightedPoint> out;
    for (const auto& p : pts) {
        if (a <= p.x && p.x <= b && p.w >= w) out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_SUITE("wbpst") {

TEST_CASE("max-weight point becomes the root") {
    std::vector<WeightedPoint> pts{{1, 1, 0, 8}, {2, 2, 0, 2}, {3, 3, 0, 4}, {4, 4, 0, 1}};
    WbPst t(pts);
    REQUIRE(t.size() == 4);
    CHECK(t.nodes()[static_cast<std::size_t>(t.root())].point.w == 8);
    int depth_of_root_point = -1;
    t.for_each([&](const WeightedPoint& p, int d) {
        if (p.w == 8) depth_of_root_point = d;
    });
    CHECK(depth_of_root_point == 0);
    t.audit();
}

TEST_CASE("single point sits at depth zero") {
    WbPst t({{7, 5.0, 0, 3}});
    CHECK(t.size() == 1);
    t.for_each([&](const WeightedPoint&, int d) { CHECK(d == 0); });
    t.audit();
}

TEST_CASE("64 equal weights stay within depth six") {
    std::vector<WeightedPoint> pts;
    for (PointId i = 0; i < 64; ++i) pts.push_back({i, static_cast<double>(i), 0, 1});
    WbPst t(pts);
    int max_depth = 0;
    t.for_each([&](const WeightedPoint&, int d) { max_depth = std::max(max_depth, d); });
    CHECK(max_depth <= 6);
    t.audit();
}

TEST_CASE("threshold query on the four-point example") {
    std::vector<WeightedPoint> pts{{1, 1, 0, 8}, {2, 2, 0, 2}, {3, 3, 0, 4}, {4, 4, 0, 1}};
    WbPst t(pts);
    const auto got = t.threshold_query(1, 4, 4);
    CHECK(ids(got) == std::set<PointId>{1, 3});
}

TEST_CASE("query heavier than everything is empty") {
    WbPst t(canonical_points());
    CHECK(t.threshold_query(0, 10, 1000).empty());
}

TEST_CASE("query outside the x-interval is empty") {
    WbPst t({{1, 1.0, 0, 8}});
    CHECK(t.threshold_query(2, 3, 1).empty());
}

TEST_CASE("empty input builds an empty structure") {
    WbPst t(std::vector<WeightedPoint>{});
    CHECK(t.empty());
    CHECK(t.threshold_query(0, 1, 1).empty());
}

TEST_CASE("duplicate ids are a build error") {
    std::vector<WeightedPoint> pts{{1, 1, 0, 1}, {1, 2, 0, 2}};
    CHECK_THROWS_AS(WbPst{pts}, std::invalid_argument);
}

TEST_CASE("build is deterministic") {
    const auto pts = random_points(300, 17, gen::Distribution::kZipf);
    WbPst a(pts), b(pts);
    CHECK(a.structure_signature() == b.structure_signature());
}

TEST_CASE("depth bound holds under adversarial exponential weights") {
    // Geometric weights in x order force a long spine; the bound must still
    // hold exactly.
    std::vector<WeightedPoint> pts;
    Weight w = 1;
    for (PointId i = 0; i < 40; ++i) {
        pts.push_back({i, static_cast<double>(i), 0, w});
        if (i % 1 == 0 && w < (Weight{1} << 50)) w *= 2;
    }
    WbPst t(pts);
    t.audit();
}

TEST_CASE("randomized oracle equivalence with counters") {
    std::mt19937_64 rng(404);
    for (std::uint64_t it = 0; it < 120; ++it) {
        const std::size_t n = 1 + rng() % 150;
        auto pts = random_points(n, it * 31 + 5, dist_cycle(it));
        if (it % 2 == 0) {
            for (auto& p : pts) p.x = std::floor(p.x / 10.0) * 10.0;  // x ties
        }
        WbPst t(pts);
        t.audit();
        CHECK(t.size() == n);  // node count equals point count
        for (int q = 0; q < 20; ++q) {
            double a = -10 + (rng() % 1300) / 10.0;
            double b = -10 + (rng() % 1300) / 10.0;
            if (a > b) std::swap(a, b);
            const Weight w = 1 + rng() % (2 * n);
            QueryCounters c;
            const auto got = t.threshold_query(a, b, w, &c);
            const auto want = brute_interval(pts, a, b, w);
            CHECK(ids(got) == ids(want));
            CHECK(got.size() == want.size());
            CHECK(c.tree_nodes_visited > 0);
        }
    }
}

}  // TEST_SUITE
