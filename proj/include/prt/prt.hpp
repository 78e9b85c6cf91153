#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "prt/core.hpp"
#include "prt/maxima.hpp"
#include "prt/pheap.hpp"
#include "prt/rank_pq.hpp"

namespace prt {

/// Allocation census across the tree, buckets, per-rank persistent heaps and
/// layers-of-maxima catalogs.
struct SpaceCensus {
    std::size_t tree_nodes = 0;
    std::size_t bucket_points = 0;
    std::size_t heap_nodes = 0;
    std::size_t catalog_slots = 0;
    std::size_t total() const {
        return tree_nodes + bucket_points + heap_nodes + catalog_slots;
    }
};

/// Three-sided priority range tree: split-by-weight above the switch depth,
/// complete split-by-size below it, buckets of Theta(log n) points at the
/// bottom, one persistent heap per rank over each split-by-size subtree
/// (contracted at bucket boundaries), and a layers-of-maxima catalog at every
/// non-bucket node.
///
/// Immutable after build; queries are pure reads with query-local scratch and
/// are safe to run concurrently.
class PriorityRangeTree {
public:
    PriorityRangeTree() = default;
    explicit PriorityRangeTree(std::vector<WeightedPoint> points);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    TotalWeight total_weight() const { return W_; }
    int switch_depth() const { return switch_depth_; }
    Rank max_rank() const { return max_rank_; }
    Rank rank_domain() const { return points_.empty() ? 0 : max_rank_ + 1; }

    /// Points in the range with rank >= floor(log2 w). Order unspecified.
    std::vector<WeightedPoint> threshold_query(const ThreeSidedRange& range, Weight w,
                                               QueryCounters* counters = nullptr) const;

    /// Some point of maximum rank inside the range, if any.
    std::optional<WeightedPoint> max_report(const ThreeSidedRange& range,
                                            QueryCounters* counters = nullptr) const;

    /// min(k, matches) points whose rank multiset is the top-k rank multiset
    /// of the in-range points; ties within a rank broken arbitrarily.
    std::vector<WeightedPoint> top_k(const ThreeSidedRange& range, std::size_t k,
                                     QueryCounters* counters = nullptr) const;

    SpaceCensus space_census() const;

    /// Throws std::logic_error on any structural invariant violation: depth
    /// bounds (exact above the switch depth, hybrid overall), weight heap
    /// order, x order, bucket sizing, node conservation.
    void audit() const;

    std::uint64_t structure_signature() const;

    /// Search depth that cannot exclude any point of rank >= r.
    double depth_limit(Rank r) const { return 3.0 * (log2_w_ - r) + 3.0 + 1e-9; }

    class TopKSearch;

private:
    friend class TopKSearch;
    friend class FourSidedIndex;

    enum class Strategy : std::uint8_t { kByWeight, kBySize };

    // Child reference: >= 0 tree node index, -1 none, <= -2 bucket index.
    using Ref = std::int32_t;
    static bool is_node(Ref r) { return r >= 0; }
    static bool is_bucket(Ref r) { return r <= -2; }
    static std::int32_t bucket_index(Ref r) { return -r - 2; }
    static Ref make_bucket_ref(std::int32_t idx) { return -idx - 2; }

    struct Node {
        WeightedPoint point;
        double split_key = kNegInf;
        Ref left = -1;
        Ref right = -1;
        std::int32_t depth = 0;
        Strategy strategy = Strategy::kByWeight;
        std::int32_t subtree = -1;   // BY_SIZE only
        std::int32_t heap_pos = -1;  // BY_SIZE only
        MaximaCatalog catalog;
    };

    struct Bucket {
        std::vector<WeightedPoint> points;  // x ascending
        MaximaCatalog catalog;              // chains; origins index into points
        std::int32_t depth = 0;
    };

    // A split-by-size subtree with a tree part: contracted heap base over its
    // tree nodes and bucket leaves, plus one persistent heap per present rank.
    struct SizeSubtree {
        Ref root = -1;
        PersistentHeap::BaseTree shape;  // keys unset; per-rank copies get keys
        std::vector<Ref> pos_owner;
        std::vector<Rank> present_ranks;
        std::unordered_map<Rank, PersistentHeap> heaps;
    };

    // payload encoding inside heaps
    static std::int64_t point_payload(std::size_t internal_idx) {
        return static_cast<std::int64_t>(internal_idx);
    }
    static std::int64_t bucket_payload(std::int32_t bucket_idx) {
        return -static_cast<std::int64_t>(bucket_idx) - 2;
    }
    static bool payload_is_point(std::int64_t p) { return p >= 0; }
    static std::int32_t payload_bucket(std::int64_t p) {
        return static_cast<std::int32_t>(-p - 2);
    }

    Ref build_range(std::vector<WeightedPoint>& work, std::size_t lo, std::size_t hi,
                    std::int32_t depth);
    void collect_subtree_positions(Ref ref, std::int32_t subtree_idx,
                                   std::int32_t parent_pos, bool left_child);
    void build_subtree_heaps(SizeSubtree& st);
    void build_node_catalogs();
    std::unordered_map<Rank, double> build_weight_catalogs(Ref ref);

    const Bucket& bucket_at(Ref ref) const {
        return buckets_[static_cast<std::size_t>(bucket_index(ref))];
    }
    std::int32_t ref_depth(Ref ref) const {
        return is_node(ref) ? nodes_[static_cast<std::size_t>(ref)].depth
                            : bucket_at(ref).depth;
    }

    // ---- query machinery ----
    struct ReportCtx {
        const ThreeSidedRange* range = nullptr;
        Rank rth = 0;
        std::vector<WeightedPoint>* out = nullptr;
        std::unordered_set<PointId>* marked = nullptr;
        QueryCounters* counters = nullptr;
    };
    void report(const ReportCtx& ctx, const WeightedPoint& p) const;
    bool matches(const ReportCtx& ctx, const WeightedPoint& p) const;

    void threshold_descend(Ref ref, bool lower_side, bool shared, double limit,
                           const ReportCtx& ctx) const;
    void threshold_inside(Ref ref, const ReportCtx& ctx) const;
    void drain_heap_rank(const SizeSubtree& st, Rank r, std::int32_t heap_pos,
                         const ReportCtx& ctx) const;
    void weight_enumerate(Ref ref, const ReportCtx& ctx) const;

    std::vector<WeightedPoint> points_;  // x ascending; heap payloads index here
    std::unordered_map<PointId, std::size_t> index_by_id_;
    std::vector<Node> nodes_;
    std::vector<Bucket> buckets_;
    std::vector<SizeSubtree> subtrees_;
    Ref root_ = -1;
    TotalWeight W_ = 0;
    double log2_w_ = 0.0;
    Rank max_rank_ = 0;
    std::int32_t switch_depth_ = 0;
    double bucket_cap_ = 0.0;
};

/// Four-sided range reporting: weight-balanced x-tree with points at leaves;
/// every internal non-root node carries a PriorityRangeTree over its subtree
/// in swapped coordinates (left children answer [a,inf) x [c,d] via y' = x,
/// right children answer (-inf,b] x [c,d] via y' = -x).
class FourSidedIndex {
public:
    FourSidedIndex() = default;
    explicit FourSidedIndex(std::vector<WeightedPoint> points);

    std::size_t size() const { return points_.size(); }
    TotalWeight total_weight() const { return W_; }

    std::vector<WeightedPoint> threshold_query4(const FourSidedRange& range, Weight w,
                                                QueryCounters* counters = nullptr) const;
    std::vector<WeightedPoint> top_k4(const FourSidedRange& range, std::size_t k,
                                      QueryCounters* counters = nullptr) const;

    SpaceCensus space_census() const;
    void audit() const;
    std::uint64_t structure_signature() const;

private:
    struct XNode {
        double split_key = 0.0;
        double x_lo = 0.0, x_hi = 0.0;
        std::int32_t left = -1, right = -1;
        std::int32_t leaf_point = -1;  // >= 0 for leaves (index into points_)
        std::int32_t depth = 0;
        std::unique_ptr<PriorityRangeTree> side_tree;  // internal non-root only
    };

    std::int32_t build_range(std::vector<WeightedPoint>& work, std::size_t lo,
                             std::size_t hi, std::int32_t depth);
    void attach_side_trees(std::int32_t idx, bool is_root, bool left_child);
    void collect_points(std::int32_t idx, std::vector<WeightedPoint>& out) const;
    const WeightedPoint& original(PointId id) const;

    std::vector<WeightedPoint> points_;
    std::unordered_map<PointId, std::size_t> index_by_id_;
    std::vector<XNode> xnodes_;
    std::int32_t root_ = -1;
    TotalWeight W_ = 0;
};

}  // namespace prt
