#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

namespace prt {

using PointId = std::uint32_t;
using Weight = std::uint64_t;   // positive; zero is rejected everywhere
using Rank = std::uint32_t;     // floor(log2 w), in [0, 63]
using TotalWeight = std::uint64_t;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// A planar point with a positive integer weight. Ranks are derived, never stored.
struct WeightedPoint {
    PointId id = 0;
    double x = 0.0;
    double y = 0.0;
    Weight w = 1;
};

/// floor(log2 w) via bit operations. Throws std::invalid_argument for w == 0.
Rank rank_of(Weight w);

/// Rank cutoff for a threshold query with weight `query_weight`.
/// Same function as rank_of; spelled separately so query call sites read as intent.
Rank rank_threshold(Weight query_weight);

/// [x1, x2] x [y, inf), all boundaries closed.
struct ThreeSidedRange {
    double x1 = 0.0;
    double x2 = 0.0;
    double y = 0.0;
};

/// [x1, x2] x [y1, y2], all boundaries closed.
struct FourSidedRange {
    double x1 = 0.0;
    double x2 = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
};

bool range_valid(const ThreeSidedRange& r);
bool range_valid(const FourSidedRange& r);

bool contains(const ThreeSidedRange& r, const WeightedPoint& p);
bool contains(const FourSidedRange& r, const WeightedPoint& p);

/// Per-query instrumentation. Owned by the caller, reset at query entry,
/// never stored inside a shared structure.
struct QueryCounters {
    std::uint64_t tree_nodes_visited = 0;
    std::uint64_t catalog_entries_scanned = 0;
    std::uint64_t heap_nodes_visited = 0;
    std::uint64_t pq_operations = 0;

    void reset() { *this = QueryCounters{}; }
    std::uint64_t total() const {
        return tree_nodes_visited + catalog_entries_scanned + heap_nodes_visited +
               pq_operations;
    }
};

/// Sum of weights. Throws if any weight is zero.
TotalWeight total_weight(const std::vector<WeightedPoint>& pts);

/// Throws std::invalid_argument if two points share an id.
void require_unique_ids(const std::vector<WeightedPoint>& pts);

/// Copy sorted by (x, id). Equal x is legal; id breaks the tie.
std::vector<WeightedPoint> sorted_by_x(std::vector<WeightedPoint> pts);

}  // namespace prt
