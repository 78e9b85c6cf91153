#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "prt/prt.hpp"
#include "topk_search.hpp"

namespace prt {

FourSidedIndex::FourSidedIndex(std::vector<WeightedPoint> points) {
    require_unique_ids(points);
    points_ = sorted_by_x(std::move(points));
    if (points_.empty()) return;
    W_ = prt::total_weight(points_);
    for (std::size_t i = 0; i < points_.size(); ++i) index_by_id_.emplace(points_[i].id, i);
    std::vector<WeightedPoint> work = points_;
    root_ = build_range(work, 0, work.size(), 0);
    attach_side_trees(root_, true, false);
}

std::int32_t FourSidedIndex::build_range(std::vector<WeightedPoint>& work,
                                         std::size_t lo, std::size_t hi,
                                         std::int32_t depth) {
    XNode node;
    node.depth = depth;
    node.x_lo = work[lo].x;
    node.x_hi = work[hi - 1].x;
    if (hi - lo == 1) {
        node.leaf_point = static_cast<std::int32_t>(index_by_id_.at(work[lo].id));
        node.split_key = work[lo].x;
        xnodes_.push_back(std::move(node));
        return static_cast<std::int32_t>(xnodes_.size() - 1);
    }
    // Split by weight: contiguous halves with minimal weight imbalance, both
    // non-empty; ties toward the smaller prefix.
    Weight total = 0;
    for (std::size_t i = lo; i < hi; ++i) total += work[i].w;
    std::size_t split = lo + 1;
    Weight prefix = work[lo].w;
    Weight best_diff = prefix > total - prefix ? prefix - (total - prefix)
                                               : (total - prefix) - prefix;
    for (std::size_t i = lo + 1; i + 1 < hi; ++i) {
        prefix += work[i].w;
        const Weight suffix = total - prefix;
        const Weight diff = prefix > suffix ? prefix - suffix : suffix - prefix;
        if (diff < best_diff) {
            best_diff = diff;
            split = i + 1;
        }
    }
    node.split_key = work[split - 1].x;
    const std::int32_t idx = static_cast<std::int32_t>(xnodes_.size());
    xnodes_.push_back(std::move(node));
    const std::int32_t l = build_range(work, lo, split, depth + 1);
    const std::int32_t r = build_range(work, split, hi, depth + 1);
    xnodes_[static_cast<std::size_t>(idx)].left = l;
    xnodes_[static_cast<std::size_t>(idx)].right = r;
    return idx;
}

void FourSidedIndex::collect_points(std::int32_t idx, std::vector<WeightedPoint>& out) const {
    const XNode& v = xnodes_[static_cast<std::size_t>(idx)];
    if (v.leaf_point >= 0) {
        out.push_back(points_[static_cast<std::size_t>(v.leaf_point)]);
        return;
    }
    collect_points(v.left, out);
    collect_points(v.right, out);
}

void FourSidedIndex::attach_side_trees(std::int32_t idx, bool is_root, bool left_child) {
    if (idx < 0) return;
    XNode& v = xnodes_[static_cast<std::size_t>(idx)];
    if (v.leaf_point >= 0) return;
    if (!is_root) {
        // Swapped axes: the two-sided y interval becomes the search dimension,
        // the half-open x side becomes the heap dimension (negated on the
        // right so one implementation serves both orientations).
        std::vector<WeightedPoint> pts;
        collect_points(idx, pts);
        for (WeightedPoint& p : pts) {
            const double tx = p.y;
            const double ty = left_child ? p.x : -p.x;
            p.x = tx;
            p.y = ty;
        }
        v.side_tree = std::make_unique<PriorityRangeTree>(std::move(pts));
    }
    attach_side_trees(v.left, false, true);
    attach_side_trees(v.right, false, false);
}

const WeightedPoint& FourSidedIndex::original(PointId id) const {
    return points_[index_by_id_.at(id)];
}

std::vector<WeightedPoint> FourSidedIndex::threshold_query4(const FourSidedRange& range,
                                                            Weight w,
                                                            QueryCounters* counters) const {
    if (counters) counters->reset();
    if (w == 0) throw std::invalid_argument("threshold_query4: weight must be >= 1");
    std::vector<WeightedPoint> out;
    if (points_.empty() || !range_valid(range)) return out;
    const Rank rth = rank_threshold(w);

    std::int32_t cur = root_;
    while (xnodes_[static_cast<std::size_t>(cur)].leaf_point < 0) {
        const XNode& v = xnodes_[static_cast<std::size_t>(cur)];
        if (counters) ++counters->tree_nodes_visited;
        if (range.x2 < v.split_key) {
            cur = v.left;
        } else if (range.x1 > v.split_key) {
            cur = v.right;
        } else {
            break;
        }
    }
    const XNode& s = xnodes_[static_cast<std::size_t>(cur)];
    if (s.leaf_point >= 0) {
        const WeightedPoint& p = points_[static_cast<std::size_t>(s.leaf_point)];
        if (contains(range, p) && rank_of(p.w) >= rth) out.push_back(p);
        return out;
    }

    auto side_query = [&](std::int32_t ref, bool left_side) {
        const XNode& c = xnodes_[static_cast<std::size_t>(ref)];
        if (c.leaf_point >= 0) {
            const WeightedPoint& p = points_[static_cast<std::size_t>(c.leaf_point)];
            if (contains(range, p) && rank_of(p.w) >= rth) out.push_back(p);
            return;
        }
        const ThreeSidedRange tr{range.y1, range.y2, left_side ? range.x1 : -range.x2};
        QueryCounters local;
        const auto found = c.side_tree->threshold_query(tr, w, counters ? &local : nullptr);
        if (counters) {
            counters->tree_nodes_visited += local.tree_nodes_visited;
            counters->catalog_entries_scanned += local.catalog_entries_scanned;
            counters->heap_nodes_visited += local.heap_nodes_visited;
            counters->pq_operations += local.pq_operations;
        }
        for (const WeightedPoint& t : found) out.push_back(original(t.id));
    };
    side_query(s.left, true);
    side_query(s.right, false);
    return out;
}

std::vector<WeightedPoint> FourSidedIndex::top_k4(const FourSidedRange& range,
                                                  std::size_t k,
                                                  QueryCounters* counters) const {
    if (counters) counters->reset();
    if (k == 0) throw std::invalid_argument("top_k4: k must be >= 1");
    std::vector<WeightedPoint> out;
    if (points_.empty() || !range_valid(range)) return out;

    std::int32_t cur = root_;
    while (xnodes_[static_cast<std::size_t>(cur)].leaf_point < 0) {
        const XNode& v = xnodes_[static_cast<std::size_t>(cur)];
        if (counters) ++counters->tree_nodes_visited;
        if (range.x2 < v.split_key) {
            cur = v.left;
        } else if (range.x1 > v.split_key) {
            cur = v.right;
        } else {
            break;
        }
    }
    const XNode& s = xnodes_[static_cast<std::size_t>(cur)];
    if (s.leaf_point >= 0) {
        const WeightedPoint& p = points_[static_cast<std::size_t>(s.leaf_point)];
        if (contains(range, p)) out.push_back(p);
        return out;
    }

    Rank domain = 1;
    for (const WeightedPoint& p : points_) domain = std::max(domain, rank_of(p.w) + 1);
    PriorityRangeTree::TopKSearch::Shared shared(domain, k, counters);
    std::vector<PriorityRangeTree::TopKSearch> engines;

    // Both half-open searches share one queue, mark set, and watermark so
    // neither side outruns the other's depth budget.
    for (const bool left_side : {true, false}) {
        const std::int32_t ref = left_side ? s.left : s.right;
        const XNode& c = xnodes_[static_cast<std::size_t>(ref)];
        if (c.leaf_point >= 0) {
            const WeightedPoint& p = points_[static_cast<std::size_t>(c.leaf_point)];
            if (contains(range, p)) {
                PriorityRangeTree::TopKSearch::Item item;
                item.rank = rank_of(p.w);
                item.kind = 0;
                item.point = p;
                shared.pq.insert(item.rank, item, counters);
            }
            continue;
        }
        const ThreeSidedRange tr{range.y1, range.y2, left_side ? range.x1 : -range.x2};
        engines.emplace_back(*c.side_tree, tr,
                             static_cast<std::uint8_t>(engines.size()));
    }
    detail::run_topk(engines, shared);
    for (const WeightedPoint& t : shared.out) out.push_back(original(t.id));
    return out;
}

SpaceCensus FourSidedIndex::space_census() const {
    SpaceCensus c;
    c.tree_nodes = xnodes_.size();
    for (const XNode& v : xnodes_) {
        if (v.side_tree) {
            const SpaceCensus sub = v.side_tree->space_census();
            c.tree_nodes += sub.tree_nodes;
            c.bucket_points += sub.bucket_points;
            c.heap_nodes += sub.heap_nodes;
            c.catalog_slots += sub.catalog_slots;
        }
    }
    return c;
}

void FourSidedIndex::audit() const {
    if (root_ < 0) return;
    const long double W = static_cast<long double>(W_);
    std::size_t total_side_points = 0;
    std::size_t depth_sum = 0;
    std::function<std::vector<PointId>(std::int32_t, bool)> walk =
        [&](std::int32_t idx, bool is_root) -> std::vector<PointId> {
        const XNode& v = xnodes_[static_cast<std::size_t>(idx)];
        if (v.leaf_point >= 0) {
            const WeightedPoint& p = points_[static_cast<std::size_t>(v.leaf_point)];
            const long double bound =
                2.0L * std::log2(W / static_cast<long double>(p.w)) + 2.0L + 1e-9L;
            if (static_cast<long double>(v.depth) > bound) {
                throw std::logic_error("prt4: leaf depth bound violated");
            }
            depth_sum += static_cast<std::size_t>(v.depth);
            return {p.id};
        }
        auto ids = walk(v.left, false);
        auto rids = walk(v.right, false);
        ids.insert(ids.end(), rids.begin(), rids.end());
        if (is_root) {
            if (v.side_tree) throw std::logic_error("prt4: root must not store a tree");
        } else {
            if (!v.side_tree) throw std::logic_error("prt4: missing side tree");
            if (v.side_tree->size() != ids.size()) {
                throw std::logic_error("prt4: side tree size mismatch");
            }
            v.side_tree->audit();
            total_side_points += v.side_tree->size();
        }
        return ids;
    };
    const auto ids = walk(root_, true);
    if (ids.size() != points_.size()) throw std::logic_error("prt4: leaf count mismatch");
    // Each point appears in one side tree per proper ancestor below the root,
    // i.e. (leaf depth - 1) trees.
    const std::size_t expect =
        depth_sum >= points_.size() ? depth_sum - points_.size() : 0;
    if (points_.size() > 1 && total_side_points != expect) {
        throw std::logic_error("prt4: replication count mismatch");
    }
}

std::uint64_t FourSidedIndex::structure_signature() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    std::function<void(std::int32_t)> walk = [&](std::int32_t idx) {
        if (idx < 0) {
            mix(0x7fu);
            return;
        }
        const XNode& v = xnodes_[static_cast<std::size_t>(idx)];
        mix(std::bit_cast<std::uint64_t>(v.split_key));
        if (v.leaf_point >= 0) {
            mix(points_[static_cast<std::size_t>(v.leaf_point)].id);
        }
        if (v.side_tree) mix(v.side_tree->structure_signature());
        walk(v.left);
        walk(v.right);
    };
    walk(root_);
    return h;
}

}  // namespace prt
