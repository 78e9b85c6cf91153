#include "prt/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace prt::oracle {
namespace {

template <typename RangeT>
std::vector<WeightedPoint> threshold_impl(const std::vector<WeightedPoint>& pts,
                                          const RangeT& range, Weight w) {
    const Rank rth = rank_threshold(w);
    std::vector<WeightedPoint> out;
    for (const WeightedPoint& p : pts) {
        if (contains(range, p) && rank_of(p.w) >= rth) out.push_back(p);
    }
    return out;
}

template <typename RangeT>
std::vector<WeightedPoint> topk_impl(const std::vector<WeightedPoint>& pts,
                                     const RangeT& range, std::size_t k) {
    if (k == 0) throw std::invalid_argument("top_k: k must be >= 1");
    std::vector<WeightedPoint> in_range;
    for (const WeightedPoint& p : pts) {
        if (contains(range, p)) in_range.push_back(p);
    }
    std::sort(in_range.begin(), in_range.end(),
              [](const WeightedPoint& a, const WeightedPoint& b) {
                  const Rank ra = rank_of(a.w), rb = rank_of(b.w);
                  if (ra != rb) return ra > rb;
                  return a.id < b.id;
              });
    if (in_range.size() > k) in_range.resize(k);
    return in_range;
}

}  // namespace

std::vector<WeightedPoint> threshold(const std::vector<WeightedPoint>& pts,
                                     const ThreeSidedRange& range, Weight w) {
    return threshold_impl(pts, range, w);
}

std::vector<WeightedPoint> threshold(const std::vector<WeightedPoint>& pts,
                                     const FourSidedRange& range, Weight w) {
    return threshold_impl(pts, range, w);
}

std::vector<WeightedPoint> top_k(const std::vector<WeightedPoint>& pts,
                                 const ThreeSidedRange& range, std::size_t k) {
    return topk_impl(pts, range, k);
}

std::vector<WeightedPoint> top_k(const std::vector<WeightedPoint>& pts,
                                 const FourSidedRange& range, std::size_t k) {
    return topk_impl(pts, range, k);
}

std::optional<Rank> max_rank(const std::vector<WeightedPoint>& pts,
                             const ThreeSidedRange& range) {
    std::optional<Rank> best;
    for (const WeightedPoint& p : pts) {
        if (!contains(range, p)) continue;
        const Rank r = rank_of(p.w);
        if (!best || r > *best) best = r;
    }
    return best;
}

std::vector<std::vector<LayerPoint>> layers(std::vector<LayerPoint> pts) {
    std::vector<std::vector<LayerPoint>> out;
    std::vector<bool> taken(pts.size(), false);
    std::size_t remaining = pts.size();
    while (remaining > 0) {
        std::vector<LayerPoint> layer;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (taken[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if (j == i || taken[j]) continue;
                if (pts[j].rank > pts[i].rank && pts[j].y >= pts[i].y) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) layer.push_back(pts[i]);
        }
        for (const LayerPoint& p : layer) {
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (!taken[i] && pts[i].rank == p.rank && pts[i].y == p.y &&
                    pts[i].origin == p.origin) {
                    taken[i] = true;
                    break;
                }
            }
        }
        std::sort(layer.begin(), layer.end(),
                  [](const LayerPoint& a, const LayerPoint& b) { return a.rank < b.rank; });
        remaining -= layer.size();
        out.push_back(std::move(layer));
    }
    return out;
}

SuffixPstBaseline::SuffixPstBaseline(const std::vector<WeightedPoint>& pts) : n_(pts.size()) {
    Rank max_r = 0;
    for (const WeightedPoint& p : pts) max_r = std::max(max_r, rank_of(p.w));
    per_rank_.resize(pts.empty() ? 0 : max_r + 1);
    for (Rank i = 0; i < per_rank_.size(); ++i) {
        std::vector<WeightedPoint> subset;
        for (const WeightedPoint& p : pts) {
            if (rank_of(p.w) >= i) subset.push_back(p);
        }
        subset = sorted_by_x(std::move(subset));
        per_rank_[i].nodes.reserve(subset.size());
        per_rank_[i].root = build_pst(per_rank_[i], subset, 0, subset.size());
    }
}

std::int32_t SuffixPstBaseline::build_pst(Pst& t, std::vector<WeightedPoint>& work,
                                          std::size_t lo, std::size_t hi) {
    if (lo >= hi) return -1;
    std::size_t best = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        if (work[i].y > work[best].y ||
            (work[i].y == work[best].y && work[i].id < work[best].id)) {
            best = i;
        }
    }
    PstNode node;
    node.point = work[best];
    for (std::size_t i = best; i + 1 < hi; ++i) work[i] = work[i + 1];
    const std::size_t end = hi - 1;
    const std::size_t split = lo + (end - lo) / 2 + (end - lo) % 2;  // left gets the extra
    if (split > lo) node.split_key = work[split - 1].x;
    const std::int32_t idx = static_cast<std::int32_t>(t.nodes.size());
    t.nodes.push_back(node);
    const std::int32_t l = build_pst(t, work, lo, split);
    const std::int32_t r = build_pst(t, work, split, end);
    t.nodes[static_cast<std::size_t>(idx)].left = l;
    t.nodes[static_cast<std::size_t>(idx)].right = r;
    return idx;
}

void SuffixPstBaseline::query_pst(const Pst& t, std::int32_t idx,
                                  const ThreeSidedRange& range,
                                  std::vector<WeightedPoint>& out,
                                  QueryCounters* counters) {
    if (idx < 0) return;
    const PstNode& n = t.nodes[static_cast<std::size_t>(idx)];
    if (counters) ++counters->tree_nodes_visited;
    if (n.point.y < range.y) return;  // heap order on y
    if (range.x1 <= n.point.x && n.point.x <= range.x2) out.push_back(n.point);
    if (range.x1 <= n.split_key) query_pst(t, n.left, range, out, counters);
    if (range.x2 >= n.split_key) query_pst(t, n.right, range, out, counters);
}

std::vector<WeightedPoint> SuffixPstBaseline::threshold_query(
    const ThreeSidedRange& range, Weight w, QueryCounters* counters) const {
    if (counters) counters->reset();
    std::vector<WeightedPoint> out;
    if (w == 0) throw std::invalid_argument("threshold_query: weight must be >= 1");
    const Rank rth = rank_threshold(w);
    if (rth >= per_rank_.size()) return out;
    query_pst(per_rank_[rth], per_rank_[rth].root, range, out, counters);
    return out;
}

std::size_t SuffixPstBaseline::space_nodes() const {
    std::size_t total = 0;
    for (const Pst& t : per_rank_) total += t.nodes.size();
    return total;
}

}  // namespace prt::oracle
