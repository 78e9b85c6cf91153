#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "prt/gen.hpp"
#include "test_util.hpp"

using namespace prt;

TEST_SUITE("gen") {

TEST_CASE("generation is deterministic byte for byte") {
    gen::GeneratorSpec spec;
    spec.n = 8;
    spec.seed = 7;
    const auto a = gen::generate(spec);
    const auto b = gen::generate(spec);
    std::ostringstream sa, sb;
    gen::write_points(sa, a, "h");
    gen::write_points(sb, b, "h");
    CHECK(sa.str() == sb.str());
    spec.seed = 8;
    std::ostringstream sc;
    gen::write_points(sc, gen::generate(spec), "h");
    CHECK(sa.str() != sc.str());
}

TEST_CASE("round trip through the text format preserves everything") {
    gen::GeneratorSpec spec;
    spec.n = 100;
    spec.seed = 12;
    spec.dist = gen::Distribution::kZipf;
    const auto pts = gen::generate(spec);
    std::ostringstream os;
    gen::write_points(os, pts, "round trip");
    std::istringstream is(os.str());
    const auto back = gen::parse_points(is);
    REQUIRE(back.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(back[i].id == pts[i].id);
        CHECK(back[i].x == pts[i].x);
        CHECK(back[i].y == pts[i].y);
        CHECK(back[i].w == pts[i].w);
    }
}

TEST_CASE("parser reports line numbers for malformed input") {
    std::istringstream is("# comment\n1 2 3\n4 5\n");
    CHECK_THROWS_WITH_AS(gen::parse_points(is), doctest::Contains("line 3"),
                         std::runtime_error);
    std::istringstream zero("1 2 0\n");
    CHECK_THROWS_WITH_AS(gen::parse_points(zero), doctest::Contains("line 1"),
                         std::runtime_error);
    std::istringstream inf("inf 2 3\n");
    CHECK_THROWS_AS(gen::parse_points(inf), std::runtime_error);
    std::istringstream trailing("1 2 3 junk\n");
    CHECK_THROWS_AS(gen::parse_points(trailing), std::runtime_error);
}

TEST_CASE("exp-freq rank frequencies follow the halving law") {
    gen::GeneratorSpec spec;
    spec.n = 1024;
    spec.seed = 40;
    spec.dist = gen::Distribution::kExpFreq;
    const auto pts = gen::generate(spec);
    std::map<Rank, std::size_t> counts;
    for (const auto& p : pts) counts[rank_of(p.w)]++;
    const double n = static_cast<double>(spec.n);
    for (Rank r = 0; r <= 4; ++r) {
        const double expect = n / std::pow(2.0, r + 1);
        const double sigma = std::sqrt(expect);
        CHECK(std::abs(static_cast<double>(counts[r]) - expect) <= 3.0 * sigma + 3.0);
    }
}

TEST_CASE("zipf value frequencies fall on a -1 log-log slope") {
    gen::GeneratorSpec spec;
    spec.n = 1024;
    spec.seed = 3;
    spec.dist = gen::Distribution::kZipf;
    spec.zipf_s = 1.0;
    const auto pts = gen::generate(spec);
    std::map<Weight, std::size_t> counts;
    for (const auto& p : pts) counts[p.w]++;
    // Least-squares fit of log(count) against log(value) over well-populated
    // values.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& [v, c] : counts) {
        if (c < 8) continue;
        const double lx = std::log(static_cast<double>(v));
        const double ly = std::log(static_cast<double>(c));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    REQUIRE(m >= 4);
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("weights stay positive and polynomial in n") {
    for (auto dist : {gen::Distribution::kUniform, gen::Distribution::kExpFreq,
                      gen::Distribution::kZipf}) {
        gen::GeneratorSpec spec;
        spec.n = 512;
        spec.seed = 9;
        spec.dist = dist;
        for (const auto& p : gen::generate(spec)) {
            CHECK(p.w >= 1);
            CHECK(p.w <= 2 * spec.n);
        }
    }
}

TEST_CASE("unknown distribution name is an error") {
    CHECK_THROWS_AS(gen::parse_distribution("gauss"), std::invalid_argument);
}

}  // TEST_SUITE
