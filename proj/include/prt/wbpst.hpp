#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "prt/core.hpp"

namespace prt {

/// Weight-balanced priority search tree over 1-D weighted points (only x and w
/// are used). Heap-ordered on weight, search-ordered on x, and weight balanced:
/// every point p sits at depth d with 2^d * w(p) <= W. Static after build.
class WbPst {
public:
    struct Node {
        WeightedPoint point;
        double split_key = kNegInf;  // max x of the left companion set, -inf if empty
        std::int32_t left = -1;
        std::int32_t right = -1;
        Weight subtree_weight = 0;
    };

    WbPst() = default;
    explicit WbPst(std::vector<WeightedPoint> points);

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    TotalWeight total_weight() const { return total_weight_; }

    /// All stored points p with a <= p.x <= b and p.w >= w.
    std::vector<WeightedPoint> threshold_query(double a, double b, Weight w,
                                               QueryCounters* counters = nullptr) const;

    /// Visits every point with its depth, in preorder.
    void for_each(const std::function<void(const WeightedPoint&, int depth)>& fn) const;

    /// Throws std::logic_error if any structural invariant is violated:
    /// exact depth bound, heap order on weights, x-sorted in-order, node count.
    void audit() const;

    std::uint64_t structure_signature() const;

    const std::vector<Node>& nodes() const { return nodes_; }
    std::int32_t root() const { return root_; }

private:
    std::int32_t build_range(std::vector<WeightedPoint>& pts, std::size_t lo,
                             std::size_t hi);
    void query_rec(std::int32_t idx, double a, double b, Weight w,
                   std::vector<WeightedPoint>& out, QueryCounters* counters) const;

    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
    TotalWeight total_weight_ = 0;
};

}  // namespace prt
