#include "prt/wbpst.hpp"

#include <algorithm>
#include <stdexcept>

namespace prt {
namespace {

// Index of the max-weight element in [lo, hi); ties go to the smallest id.
std::size_t argmax_weight(const std::vector<WeightedPoint>& pts, std::size_t lo,
                          std::size_t hi) {
    std::size_t best = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        if (pts[i].w > pts[best].w ||
            (pts[i].w == pts[best].w && pts[i].id < pts[best].id)) {
            best = i;
        }
    }
    return best;
}

}  // namespace

WbPst::WbPst(std::vector<WeightedPoint> points) {
    if (points.empty()) return;
    require_unique_ids(points);
    total_weight_ = prt::total_weight(points);
    points = sorted_by_x(std::move(points));
    nodes_.reserve(points.size());
    root_ = build_range(points, 0, points.size());
}

std::int32_t WbPst::build_range(std::vector<WeightedPoint>& pts, std::size_t lo,
                                std::size_t hi) {
    if (lo >= hi) return -1;

    const std::size_t root_pos = argmax_weight(pts, lo, hi);
    Node node;
    node.point = pts[root_pos];
    // Shift the tail left by one; [lo, hi-1) stays x-sorted.
    for (std::size_t i = root_pos; i + 1 < hi; ++i) pts[i] = pts[i + 1];
    const std::size_t end = hi - 1;

    Weight total = 0;
    for (std::size_t i = lo; i < end; ++i) total += pts[i].w;
    node.subtree_weight = total + node.point.w;

    // Split [lo, end) into prefix A / suffix B minimizing |w(A) - w(B)|,
    // ties toward the smaller prefix. A may be empty (split_key stays -inf).
    std::size_t split = lo;
    Weight best_diff = total;  // empty prefix
    Weight prefix = 0;
    for (std::size_t i = lo; i < end; ++i) {
        prefix += pts[i].w;
        const Weight suffix = total - prefix;
        const Weight diff = prefix > suffix ? prefix - suffix : suffix - prefix;
        if (diff < best_diff) {
            best_diff = diff;
            split = i + 1;
        }
    }

    if (split > lo) node.split_key = pts[split - 1].x;

    const std::int32_t idx = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    const std::int32_t l = build_range(pts, lo, split);
    const std::int32_t r = build_range(pts, split, end);
    nodes_[idx].left = l;
    nodes_[idx].right = r;
    return idx;
}

std::vector<WeightedPoint> WbPst::threshold_query(double a, double b, Weight w,
                                                  QueryCounters* counters) const {
    if (counters) counters->reset();
    std::vector<WeightedPoint> out;
    if (w == 0) throw std::invalid_argument("threshold_query: weight must be >= 1");
    query_rec(root_, a, b, w, out, counters);
    return out;
}

void WbPst::query_rec(std::int32_t idx, double a, double b, Weight w,
                      std::vector<WeightedPoint>& out, QueryCounters* counters) const {
    if (idx < 0) return;
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    if (counters) ++counters->tree_nodes_visited;
    if (n.point.w < w) return;  // heap order: everything below is lighter
    if (a <= n.point.x && n.point.x <= b) out.push_back(n.point);
    if (a <= n.split_key) query_rec(n.left, a, b, w, out, counters);
    // >= because equal x values may straddle the split (ids break the tie)
    if (b >= n.split_key) query_rec(n.right, a, b, w, out, counters);
}

void WbPst::for_each(
    const std::function<void(const WeightedPoint&, int depth)>& fn) const {
    std::function<void(std::int32_t, int)> walk = [&](std::int32_t idx, int depth) {
        if (idx < 0) return;
        const Node& n = nodes_[static_cast<std::size_t>(idx)];
        fn(n.point, depth);
        walk(n.left, depth + 1);
        walk(n.right, depth + 1);
    };
    walk(root_, 0);
}

void WbPst::audit() const {
    if (root_ < 0) return;
    const Weight W = total_weight_;
    std::size_t count = 0;

    struct XId {
        double x;
        PointId id;
        bool operator<(const XId& o) const {
            return x < o.x || (x == o.x && id < o.id);
        }
    };
    struct Span {
        XId lo, hi;
        bool any = false;
    };

    std::function<Span(std::int32_t, int, Weight)> walk =
        [&](std::int32_t idx, int depth, Weight parent_w) -> Span {
        if (idx < 0) return {};
        const Node& n = nodes_[static_cast<std::size_t>(idx)];
        ++count;
        if (n.point.w > parent_w) throw std::logic_error("wbpst: heap order violated");
        // Exact weight-balance bound: 2^depth * w <= W.
        if (depth >= 64 ||
            (static_cast<unsigned __int128>(n.point.w) << depth) >
                static_cast<unsigned __int128>(W)) {
            throw std::logic_error("wbpst: depth bound violated");
        }
        const Span l = walk(n.left, depth + 1, n.point.w);
        const Span r = walk(n.right, depth + 1, n.point.w);
        // Search order: left subtree x <= split_key <= right subtree x, and no
        // (x, id) overlap across the split.
        if (l.any && l.hi.x > n.split_key) {
            throw std::logic_error("wbpst: left subtree exceeds split key");
        }
        if (r.any && r.lo.x < n.split_key) {
            throw std::logic_error("wbpst: right subtree below split key");
        }
        if (l.any && r.any && !(l.hi < r.lo)) {
            throw std::logic_error("wbpst: subtree order overlap");
        }
        Span s{XId{n.point.x, n.point.id}, XId{n.point.x, n.point.id}, true};
        for (const Span& c : {l, r}) {
            if (!c.any) continue;
            if (c.lo < s.lo) s.lo = c.lo;
            if (s.hi < c.hi) s.hi = c.hi;
        }
        return s;
    };
    walk(root_, 0, nodes_[static_cast<std::size_t>(root_)].point.w);
    if (count != nodes_.size()) throw std::logic_error("wbpst: node count mismatch");
}

std::uint64_t WbPst::structure_signature() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    std::function<void(std::int32_t)> walk = [&](std::int32_t idx) {
        if (idx < 0) {
            mix(0xdeadu);
            return;
        }
        const Node& n = nodes_[static_cast<std::size_t>(idx)];
        mix(n.point.id);
        mix(n.point.w);
        mix(std::bit_cast<std::uint64_t>(n.split_key));
        walk(n.left);
        walk(n.right);
    };
    walk(root_);
    return h;
}

}  // namespace prt
