#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prt/core.hpp"

namespace prt::oracle {

/// Linear-scan referees. These are the semantics every indexed structure is
/// tested against; obviousness beats speed here.

std::vector<WeightedPoint> threshold(const std::vector<WeightedPoint>& pts,
                                     const ThreeSidedRange& range, Weight w);
std::vector<WeightedPoint> threshold(const std::vector<WeightedPoint>& pts,
                                     const FourSidedRange& range, Weight w);

/// Filter by range, sort rank descending (ties by id ascending), take k.
std::vector<WeightedPoint> top_k(const std::vector<WeightedPoint>& pts,
                                 const ThreeSidedRange& range, std::size_t k);
std::vector<WeightedPoint> top_k(const std::vector<WeightedPoint>& pts,
                                 const FourSidedRange& range, std::size_t k);

std::optional<Rank> max_rank(const std::vector<WeightedPoint>& pts,
                             const ThreeSidedRange& range);

/// Iterated maxima peeling by repeated quadratic dominance scans.
/// Dominance matches the catalog module: strict in rank, non-strict in y.
struct LayerPoint {
    Rank rank = 0;
    double y = 0.0;
    std::uint64_t origin = 0;
};
std::vector<std::vector<LayerPoint>> layers(std::vector<LayerPoint> pts);

/// The trivial per-rank structure: for each rank i, a classical (split-by-size,
/// max-y-at-root) priority search tree over all points with rank >= i.
/// Correct for every distribution; its space is what the benchmark contrasts.
class SuffixPstBaseline {
public:
    SuffixPstBaseline() = default;
    explicit SuffixPstBaseline(const std::vector<WeightedPoint>& pts);

    std::vector<WeightedPoint> threshold_query(const ThreeSidedRange& range, Weight w,
                                               QueryCounters* counters = nullptr) const;

    /// Allocated nodes across all per-rank trees.
    std::size_t space_nodes() const;
    std::size_t size() const { return n_; }

private:
    struct PstNode {
        WeightedPoint point;
        double split_key = kNegInf;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };
    struct Pst {
        std::vector<PstNode> nodes;
        std::int32_t root = -1;
    };
    static std::int32_t build_pst(Pst& t, std::vector<WeightedPoint>& work,
                                  std::size_t lo, std::size_t hi);
    static void query_pst(const Pst& t, std::int32_t idx, const ThreeSidedRange& range,
                          std::vector<WeightedPoint>& out, QueryCounters* counters);

    std::vector<Pst> per_rank_;
    std::size_t n_ = 0;
};

}  // namespace prt::oracle
