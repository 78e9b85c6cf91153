#include "prt/gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace prt::gen {
namespace {

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return lo + rng() % (hi - lo + 1);
}

}  // namespace

Distribution parse_distribution(const std::string& name) {
    if (name == "uniform") return Distribution::kUniform;
    if (name == "exp-freq") return Distribution::kExpFreq;
    if (name == "zipf") return Distribution::kZipf;
    throw std::invalid_argument("unknown distribution: " + name);
}

std::string distribution_name(Distribution d) {
    switch (d) {
        case Distribution::kUniform: return "uniform";
        case Distribution::kExpFreq: return "exp-freq";
        case Distribution::kZipf: return "zipf";
    }
    return "?";
}

std::vector<WeightedPoint> generate(const GeneratorSpec& spec) {
    if (spec.x_lo > spec.x_hi || spec.y_lo > spec.y_hi) {
        throw std::invalid_argument("generate: empty coordinate range");
    }
    std::mt19937_64 rng(spec.seed);
    const std::size_t n = spec.n;
    std::vector<WeightedPoint> pts;
    pts.reserve(n);

    // Per-rank probabilities for exp-freq; value CDF for zipf.
    const Rank rank_cap = n >= 2 ? rank_of(static_cast<Weight>(n)) : 0;
    std::vector<double> zipf_cdf;
    if (spec.dist == Distribution::kZipf) {
        zipf_cdf.resize(std::max<std::size_t>(n, 1));
        double acc = 0.0;
        for (std::size_t v = 1; v <= zipf_cdf.size(); ++v) {
            acc += std::pow(static_cast<double>(v), -spec.zipf_s);
            zipf_cdf[v - 1] = acc;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        WeightedPoint p;
        p.id = static_cast<PointId>(i);
        p.x = spec.x_lo + unit_double(rng) * (spec.x_hi - spec.x_lo);
        p.y = spec.y_lo + unit_double(rng) * (spec.y_hi - spec.y_lo);
        switch (spec.dist) {
            case Distribution::kUniform:
                p.w = uniform_u64(rng, 1, std::max<std::uint64_t>(n, 1));
                break;
            case Distribution::kExpFreq: {
                // P(rank = r) ~ 2^-r for r in [0, rank_cap].
                const double z = 2.0 - std::pow(0.5, static_cast<double>(rank_cap));
                double u = unit_double(rng) * z;
                Rank r = 0;
                double mass = 1.0;
                while (r < rank_cap && u > mass) {
                    u -= mass;
                    mass *= 0.5;
                    ++r;
                }
                const Weight lo = Weight{1} << r;
                p.w = uniform_u64(rng, lo, 2 * lo - 1);
                break;
            }
            case Distribution::kZipf: {
                const double u = unit_double(rng) * zipf_cdf.back();
                const auto it = std::lower_bound(zipf_cdf.begin(), zipf_cdf.end(), u);
                p.w = static_cast<Weight>(it - zipf_cdf.begin()) + 1;
                break;
            }
        }
        pts.push_back(p);
    }
    return pts;
}

void write_points(std::ostream& os, const std::vector<WeightedPoint>& pts,
                  const std::string& header_comment) {
    if (!header_comment.empty()) os << "# " << header_comment << "\n";
    char buf[96];
    for (const WeightedPoint& p : pts) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %llu\n", p.x, p.y,
                      static_cast<unsigned long long>(p.w));
        os << buf;
    }
}

void write_points_file(const std::string& path, const std::vector<WeightedPoint>& pts,
                       const std::string& header_comment) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_points(os, pts, header_comment);
    if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<WeightedPoint> parse_points(std::istream& is) {
    std::vector<WeightedPoint> pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        double x, y;
        long long w;
        if (!(ls >> x >> y >> w)) {
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": expected 'x y w'");
        }
        std::string trailing;
        if (ls >> trailing) {
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": trailing content '" + trailing + "'");
        }
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": coordinates must be finite");
        }
        if (w < 1) {
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": weight must be >= 1");
        }
        WeightedPoint p;
        p.id = static_cast<PointId>(pts.size());
        p.x = x;
        p.y = y;
        p.w = static_cast<Weight>(w);
        pts.push_back(p);
    }
    return pts;
}

std::vector<WeightedPoint> read_points_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return parse_points(is);
}

}  // namespace prt::gen
