#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "prt/core.hpp"

namespace prt::gen {

enum class Distribution { kUniform, kExpFreq, kZipf };

Distribution parse_distribution(const std::string& name);  // throws on unknown
std::string distribution_name(Distribution d);

/// Deterministic synthetic workloads. Weights are polynomial in n:
///  uniform   -- weight uniform in [1, n]
///  exp-freq  -- rank r drawn with probability ~ 2^-r (capped at floor(log2 n)),
///               then weight uniform in [2^r, 2^(r+1))
///  zipf(s)   -- weight value v in [1, n] with probability ~ v^-s
struct GeneratorSpec {
    std::size_t n = 0;
    Distribution dist = Distribution::kUniform;
    double zipf_s = 1.0;
    std::uint64_t seed = 0;
    double x_lo = 0.0, x_hi = 1000.0;
    double y_lo = 0.0, y_hi = 1000.0;
};

std::vector<WeightedPoint> generate(const GeneratorSpec& spec);

/// Point file: one "x y w" line per point, '#' lines ignored, ids assigned by
/// line order from 0. Writing uses %.17g so doubles round-trip.
void write_points(std::ostream& os, const std::vector<WeightedPoint>& pts,
                  const std::string& header_comment = "");
void write_points_file(const std::string& path, const std::vector<WeightedPoint>& pts,
                       const std::string& header_comment = "");

/// Throws std::runtime_error with a 1-based line number on malformed lines,
/// non-finite coordinates, or zero weights.
std::vector<WeightedPoint> parse_points(std::istream& is);
std::vector<WeightedPoint> read_points_file(const std::string& path);

}  // namespace prt::gen
