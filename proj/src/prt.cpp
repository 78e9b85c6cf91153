#include "prt/prt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "topk_search.hpp"

namespace prt {
namespace {

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

// Left-subtree node count of a complete binary tree with s nodes.
std::size_t complete_left_size(std::size_t s) {
    if (s <= 1) return 0;
    const int h = std::bit_width(s) - 1;
    const std::size_t half = std::size_t{1} << (h - 1);
    const std::size_t last = s - ((std::size_t{1} << h) - 1);
    return (half - 1) + std::min(last, half);
}

}  // namespace

PriorityRangeTree::PriorityRangeTree(std::vector<WeightedPoint> points) {
    require_unique_ids(points);
    points_ = sorted_by_x(std::move(points));
    if (points_.empty()) return;
    W_ = prt::total_weight(points_);
    log2_w_ = std::log2(static_cast<double>(W_));
    Weight maxw = 0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        index_by_id_.emplace(points_[i].id, i);
        maxw = std::max(maxw, points_[i].w);
    }
    max_rank_ = rank_of(maxw);
    const double log2n = std::log2(static_cast<double>(points_.size()));
    switch_depth_ = static_cast<std::int32_t>(std::floor(0.5 * log2n));
    bucket_cap_ = 2.0 * log2n;

    std::vector<WeightedPoint> work = points_;
    root_ = build_range(work, 0, work.size(), 0);

    for (std::size_t bi = 0; bi < buckets_.size(); ++bi) {
        Bucket& b = buckets_[bi];
        std::vector<MaximaCatalog::Input> in;
        Rank m = 0;
        for (std::size_t i = 0; i < b.points.size(); ++i) {
            const Rank r = rank_of(b.points[i].w);
            m = std::max(m, static_cast<Rank>(r + 1));
            in.push_back({r, b.points[i].y, static_cast<std::uint64_t>(i)});
        }
        b.catalog = MaximaCatalog::build_with_chains(std::move(in), m);
    }

    // Size-region roots: split-by-size nodes hanging below the weight region
    // (or the tree root itself). Whole-bucket subtrees need no heaps.
    std::function<void(Ref)> find_roots = [&](Ref ref) {
        if (ref == -1 || is_bucket(ref)) return;
        Node& v = nodes_[static_cast<std::size_t>(ref)];
        if (v.strategy == Strategy::kBySize) {
            const std::int32_t idx = static_cast<std::int32_t>(subtrees_.size());
            subtrees_.emplace_back();
            subtrees_.back().root = ref;
            collect_subtree_positions(ref, idx, -1, false);
            subtrees_.back().shape.root = 0;
            return;
        }
        find_roots(v.left);
        find_roots(v.right);
    };
    find_roots(root_);

    for (SizeSubtree& st : subtrees_) build_subtree_heaps(st);
    build_node_catalogs();
    build_weight_catalogs(root_);
}

PriorityRangeTree::Ref PriorityRangeTree::build_range(std::vector<WeightedPoint>& work,
                                                      std::size_t lo, std::size_t hi,
                                                      std::int32_t depth) {
    const std::size_t size = hi - lo;
    if (size == 0) return -1;

    if (depth >= switch_depth_ &&
        static_cast<double>(size) <= bucket_cap_) {
        Bucket b;
        b.points.assign(work.begin() + static_cast<std::ptrdiff_t>(lo),
                        work.begin() + static_cast<std::ptrdiff_t>(hi));
        b.depth = depth;
        buckets_.push_back(std::move(b));
        return make_bucket_ref(static_cast<std::int32_t>(buckets_.size() - 1));
    }

    const std::size_t root_pos = argmax_weight(work, lo, hi);
    Node node;
    node.point = work[root_pos];
    node.depth = depth;
    node.strategy = depth < switch_depth_ ? Strategy::kByWeight : Strategy::kBySize;
    for (std::size_t i = root_pos; i + 1 < hi; ++i) work[i] = work[i + 1];
    const std::size_t end = hi - 1;

    std::size_t split = lo;
    if (node.strategy == Strategy::kByWeight) {
        Weight total = 0;
        for (std::size_t i = lo; i < end; ++i) total += work[i].w;
        Weight best_diff = total;
        Weight prefix = 0;
        for (std::size_t i = lo; i < end; ++i) {
            prefix += work[i].w;
            const Weight suffix = total - prefix;
            const Weight diff = prefix > suffix ? prefix - suffix : suffix - prefix;
            if (diff < best_diff) {
                best_diff = diff;
                split = i + 1;
            }
        }
    } else {
        split = lo + complete_left_size(size);
    }
    if (split > lo) node.split_key = work[split - 1].x;

    const std::int32_t idx = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(std::move(node));
    const Ref l = build_range(work, lo, split, depth + 1);
    const Ref r = build_range(work, split, end, depth + 1);
    nodes_[static_cast<std::size_t>(idx)].left = l;
    nodes_[static_cast<std::size_t>(idx)].right = r;
    return idx;
}

void PriorityRangeTree::collect_subtree_positions(Ref ref, std::int32_t subtree_idx,
                                                  std::int32_t parent_pos,
                                                  bool left_child) {
    if (ref == -1) return;
    SizeSubtree& st = subtrees_[static_cast<std::size_t>(subtree_idx)];
    const std::int32_t pos = static_cast<std::int32_t>(st.shape.nodes.size());
    st.shape.nodes.emplace_back();
    st.pos_owner.push_back(ref);
    if (parent_pos >= 0) {
        auto& pn = st.shape.nodes[static_cast<std::size_t>(parent_pos)];
        (left_child ? pn.left : pn.right) = pos;
    }
    if (is_node(ref)) {
        Node& v = nodes_[static_cast<std::size_t>(ref)];
        v.subtree = subtree_idx;
        v.heap_pos = pos;
        collect_subtree_positions(v.left, subtree_idx, pos, true);
        collect_subtree_positions(v.right, subtree_idx, pos, false);
    }
    // Buckets are contracted leaves.
}

void PriorityRangeTree::build_subtree_heaps(SizeSubtree& st) {
    std::vector<bool> present(max_rank_ + 1, false);
    for (Ref ref : st.pos_owner) {
        if (is_node(ref)) {
            present[rank_of(nodes_[static_cast<std::size_t>(ref)].point.w)] = true;
        } else {
            for (Rank r : bucket_at(ref).catalog.present_ranks()) present[r] = true;
        }
    }
    for (Rank r = 0; r <= max_rank_; ++r) {
        if (present[r]) st.present_ranks.push_back(r);
    }

    for (Rank r : st.present_ranks) {
        PersistentHeap::BaseTree base = st.shape;
        for (std::size_t pos = 0; pos < st.pos_owner.size(); ++pos) {
            const Ref owner = st.pos_owner[pos];
            auto& bn = base.nodes[pos];
            if (is_node(owner)) {
                const WeightedPoint& p = nodes_[static_cast<std::size_t>(owner)].point;
                if (rank_of(p.w) == r) {
                    bn.key = p.y;
                    bn.payload = point_payload(index_by_id_.at(p.id));
                }
            } else {
                bn.key = bucket_at(owner).catalog.max_y_for_rank(r);
                bn.payload = bucket_payload(bucket_index(owner));
            }
        }
        st.heaps.emplace(r, PersistentHeap::build_persistent(base));
    }
}

void PriorityRangeTree::build_node_catalogs() {
    for (SizeSubtree& st : subtrees_) {
        for (std::size_t pos = 0; pos < st.pos_owner.size(); ++pos) {
            const Ref ref = st.pos_owner[pos];
            if (!is_node(ref)) continue;
            Node& v = nodes_[static_cast<std::size_t>(ref)];
            std::vector<MaximaCatalog::Input> in;
            Rank m = 0;
            for (Rank r : st.present_ranks) {
                const PersistentHeap& h = st.heaps.at(r);
                if (h.has_version(static_cast<std::int32_t>(pos))) {
                    in.push_back({r, h.root_key(static_cast<std::int32_t>(pos)), r});
                    m = std::max(m, static_cast<Rank>(r + 1));
                }
            }
            v.catalog = MaximaCatalog::build(std::move(in), m);
        }
    }
}

std::unordered_map<Rank, double> PriorityRangeTree::build_weight_catalogs(Ref ref) {
    std::unordered_map<Rank, double> maxima;
    if (ref == -1) return maxima;
    if (is_bucket(ref)) {
        const MaximaCatalog& cat = bucket_at(ref).catalog;
        for (Rank r : cat.present_ranks()) maxima.emplace(r, cat.max_y_for_rank(r));
        return maxima;
    }
    Node& v = nodes_[static_cast<std::size_t>(ref)];
    if (v.strategy == Strategy::kBySize) {
        for (Rank r : v.catalog.present_ranks()) {
            maxima.emplace(r, v.catalog.max_y_for_rank(r));
        }
        return maxima;
    }
    maxima = build_weight_catalogs(v.left);
    for (const auto& [r, y] : build_weight_catalogs(v.right)) {
        auto [it, inserted] = maxima.emplace(r, y);
        if (!inserted) it->second = std::max(it->second, y);
    }
    {
        const Rank r = rank_of(v.point.w);
        auto [it, inserted] = maxima.emplace(r, v.point.y);
        if (!inserted) it->second = std::max(it->second, v.point.y);
    }
    std::vector<MaximaCatalog::Input> in;
    Rank m = 0;
    for (const auto& [r, y] : maxima) {
        in.push_back({r, y, static_cast<std::uint64_t>(r)});
        m = std::max(m, static_cast<Rank>(r + 1));
    }
    v.catalog = MaximaCatalog::build(std::move(in), m);
    return maxima;
}

// ---------------------------------------------------------------------------
// threshold queries

void PriorityRangeTree::report(const ReportCtx& ctx, const WeightedPoint& p) const {
    if (ctx.marked->insert(p.id).second) ctx.out->push_back(p);
}

bool PriorityRangeTree::matches(const ReportCtx& ctx, const WeightedPoint& p) const {
    return contains(*ctx.range, p) && rank_of(p.w) >= ctx.rth;
}

std::vector<WeightedPoint> PriorityRangeTree::threshold_query(
    const ThreeSidedRange& range, Weight w, QueryCounters* counters) const {
    if (counters) counters->reset();
    if (w == 0) throw std::invalid_argument("threshold_query: weight must be >= 1");
    std::vector<WeightedPoint> out;
    if (empty() || !range_valid(range)) return out;
    const Rank rth = rank_threshold(w);
    if (rth > max_rank_) return out;
    std::unordered_set<PointId> marked;
    ReportCtx ctx{&range, rth, &out, &marked, counters};
    threshold_descend(root_, false, true, depth_limit(rth), ctx);
    return out;
}

void PriorityRangeTree::threshold_descend(Ref ref, bool lower_side, bool shared,
                                          double limit, const ReportCtx& ctx) const {
    while (ref != -1) {
        if (ref_depth(ref) > limit) return;
        if (is_bucket(ref)) {
            // Search path hit a bucket: test its O(log n) points exhaustively.
            const Bucket& b = bucket_at(ref);
            if (ctx.counters) ctx.counters->tree_nodes_visited += b.points.size();
            for (const WeightedPoint& p : b.points) {
                if (matches(ctx, p)) report(ctx, p);
            }
            return;
        }
        const Node& v = nodes_[static_cast<std::size_t>(ref)];
        if (ctx.counters) ++ctx.counters->tree_nodes_visited;
        if (matches(ctx, v.point)) report(ctx, v.point);
        // Equal x values may straddle a split, so the shared phase descends one
        // side only under strict comparisons, and the upper arm treats a left
        // child at exactly x2 as inside.
        if (shared) {
            if (ctx.range->x2 < v.split_key) {
                ref = v.left;
            } else if (ctx.range->x1 > v.split_key) {
                ref = v.right;
            } else {
                threshold_descend(v.left, true, false, limit, ctx);
                threshold_descend(v.right, false, false, limit, ctx);
                return;
            }
            continue;
        }
        if (lower_side) {
            if (ctx.range->x1 <= v.split_key) {
                if (v.right != -1 && ref_depth(v.right) <= limit) {
                    threshold_inside(v.right, ctx);
                }
                ref = v.left;
            } else {
                ref = v.right;
            }
        } else {
            if (ctx.range->x2 >= v.split_key) {
                if (v.left != -1 && ref_depth(v.left) <= limit) {
                    threshold_inside(v.left, ctx);
                }
                ref = v.right;
            } else {
                ref = v.left;
            }
        }
    }
}

void PriorityRangeTree::threshold_inside(Ref ref, const ReportCtx& ctx) const {
    if (ref == -1) return;
    const double q_y = ctx.range->y;
    if (is_bucket(ref)) {
        const Bucket& b = bucket_at(ref);
        const auto hits = b.catalog.domination_query(ctx.rth, q_y, ctx.counters);
        for (const auto& hit : hits) {
            const auto chain = b.catalog.walk_same_rank(hit.rank, q_y);
            if (ctx.counters) ctx.counters->catalog_entries_scanned += chain.size();
            for (const auto& link : chain) {
                report(ctx, b.points[static_cast<std::size_t>(link.origin)]);
            }
        }
        return;
    }
    const Node& v = nodes_[static_cast<std::size_t>(ref)];
    if (v.strategy == Strategy::kBySize) {
        const SizeSubtree& st = subtrees_[static_cast<std::size_t>(v.subtree)];
        const auto hits = v.catalog.domination_query(ctx.rth, q_y, ctx.counters);
        for (const auto& hit : hits) {
            drain_heap_rank(st, hit.rank, v.heap_pos, ctx);
        }
        return;
    }
    if (ctx.counters) ++ctx.counters->tree_nodes_visited;
    if (matches(ctx, v.point)) report(ctx, v.point);
    for (Ref child : {v.left, v.right}) {
        if (child == -1) continue;
        const MaximaCatalog& cat = is_node(child)
                                       ? nodes_[static_cast<std::size_t>(child)].catalog
                                       : bucket_at(child).catalog;
        if (cat.has_dominating(ctx.rth, q_y, ctx.counters)) {
            threshold_inside(child, ctx);
        }
    }
}

void PriorityRangeTree::drain_heap_rank(const SizeSubtree& st, Rank r,
                                        std::int32_t heap_pos,
                                        const ReportCtx& ctx) const {
    const auto it = st.heaps.find(r);
    if (it == st.heaps.end()) return;
    const double q_y = ctx.range->y;
    it->second.descend_visit(
        heap_pos, q_y,
        [&](std::int32_t pos) {
            // Co-located tree point: may belong to any rank.
            const Ref owner = st.pos_owner[static_cast<std::size_t>(pos)];
            if (is_node(owner)) {
                const WeightedPoint& p = nodes_[static_cast<std::size_t>(owner)].point;
                if (matches(ctx, p)) report(ctx, p);
            }
        },
        [&](double, std::int64_t payload, std::int32_t) {
            if (payload_is_point(payload)) {
                report(ctx, points_[static_cast<std::size_t>(payload)]);
            } else {
                const Bucket& b = buckets_[static_cast<std::size_t>(payload_bucket(payload))];
                const auto chain = b.catalog.walk_same_rank(r, q_y);
                if (ctx.counters) ctx.counters->catalog_entries_scanned += chain.size();
                for (const auto& link : chain) {
                    report(ctx, b.points[static_cast<std::size_t>(link.origin)]);
                }
            }
            return true;
        },
        ctx.counters);
}

// ---------------------------------------------------------------------------
// max-reporting

std::optional<WeightedPoint> PriorityRangeTree::max_report(const ThreeSidedRange& range,
                                                           QueryCounters* counters) const {
    if (counters) counters->reset();
    if (empty() || !range_valid(range)) return std::nullopt;

    struct Cursor {
        Ref pending;
        std::uint8_t mode;  // 0 shared, 1 lower, 2 upper
    };
    std::vector<Cursor> cursors{{root_, 0}};
    std::int64_t best_rank = -1;
    WeightedPoint best{};
    // Strict maximization with a nudged bound expresses the closed y >= range.y.
    const double strict_below = std::nextafter(range.y, kNegInf);

    auto offer = [&](const WeightedPoint& p) {
        if (!contains(range, p)) return;
        const Rank r = rank_of(p.w);
        if (static_cast<std::int64_t>(r) > best_rank) {
            best_rank = r;
            best = p;
        }
    };

    // Extracts a rank-r point with y >= range.y from an inside subtree.
    std::function<WeightedPoint(Ref, Rank)> witness = [&](Ref ref, Rank r) -> WeightedPoint {
        if (is_bucket(ref)) {
            const Bucket& b = bucket_at(ref);
            const auto chain = b.catalog.walk_same_rank(r, range.y);
            return b.points[static_cast<std::size_t>(chain.front().origin)];
        }
        const Node& v = nodes_[static_cast<std::size_t>(ref)];
        if (v.strategy == Strategy::kBySize) {
            const SizeSubtree& st = subtrees_[static_cast<std::size_t>(v.subtree)];
            const PersistentHeap& h = st.heaps.at(r);
            const auto& root = h.arena()[static_cast<std::size_t>(h.version_root(v.heap_pos))];
            if (payload_is_point(root.payload)) {
                return points_[static_cast<std::size_t>(root.payload)];
            }
            return witness(make_bucket_ref(payload_bucket(root.payload)), r);
        }
        if (rank_of(v.point.w) == r && v.point.y >= range.y) return v.point;
        for (Ref child : {v.left, v.right}) {
            if (child == -1) continue;
            const MaximaCatalog& cat = is_node(child)
                                           ? nodes_[static_cast<std::size_t>(child)].catalog
                                           : bucket_at(child).catalog;
            if (cat.max_y_for_rank(r) >= range.y) return witness(child, r);
        }
        throw std::logic_error("max_report: witness extraction failed");
    };

    auto fringe_max = [&](Ref ref) {
        const MaximaCatalog& cat = is_node(ref)
                                       ? nodes_[static_cast<std::size_t>(ref)].catalog
                                       : bucket_at(ref).catalog;
        const auto hit = cat.maximization_query(strict_below, counters);
        if (!hit || static_cast<std::int64_t>(hit->rank) <= best_rank) return;
        best_rank = hit->rank;
        if (is_bucket(ref)) {
            best = bucket_at(ref).points[static_cast<std::size_t>(hit->origin)];
        } else {
            best = witness(ref, hit->rank);
        }
    };

    auto limit = [&]() {
        return best_rank < 0 ? kPosInf : depth_limit(static_cast<Rank>(best_rank));
    };

    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (std::size_t i = 0; i < cursors.size(); ++i) {
            while (cursors[i].pending != -1 && ref_depth(cursors[i].pending) <= limit()) {
                progressed = true;
                const Ref ref = cursors[i].pending;
                if (is_bucket(ref)) {
                    const Bucket& b = bucket_at(ref);
                    if (counters) counters->tree_nodes_visited += b.points.size();
                    for (const WeightedPoint& p : b.points) offer(p);
                    cursors[i].pending = -1;
                    break;
                }
                const Node& v = nodes_[static_cast<std::size_t>(ref)];
                if (counters) ++counters->tree_nodes_visited;
                offer(v.point);
                if (cursors[i].mode == 0) {
                    if (range.x2 < v.split_key) {
                        cursors[i].pending = v.left;
                    } else if (range.x1 > v.split_key) {
                        cursors[i].pending = v.right;
                    } else {
                        cursors[i].pending = -1;
                        cursors.push_back({v.left, 1});
                        cursors.push_back({v.right, 2});
                        break;
                    }
                } else if (cursors[i].mode == 1) {
                    if (range.x1 <= v.split_key) {
                        if (v.right != -1) fringe_max(v.right);
                        cursors[i].pending = v.left;
                    } else {
                        cursors[i].pending = v.right;
                    }
                } else {
                    if (range.x2 >= v.split_key) {
                        if (v.left != -1) fringe_max(v.left);
                        cursors[i].pending = v.right;
                    } else {
                        cursors[i].pending = v.left;
                    }
                }
            }
        }
    }
    if (best_rank < 0) return std::nullopt;
    return best;
}

// ---------------------------------------------------------------------------
// top-k

std::vector<WeightedPoint> PriorityRangeTree::top_k(const ThreeSidedRange& range,
                                                    std::size_t k,
                                                    QueryCounters* counters) const {
    if (counters) counters->reset();
    if (k == 0) throw std::invalid_argument("top_k: k must be >= 1");
    if (empty() || !range_valid(range)) return {};
    TopKSearch::Shared shared(rank_domain(), k, counters);
    std::vector<TopKSearch> engines;
    engines.emplace_back(*this, range, 0);
    detail::run_topk(engines, shared);
    return std::move(shared.out);
}

// ---------------------------------------------------------------------------
// structure checks and accounting

SpaceCensus PriorityRangeTree::space_census() const {
    SpaceCensus c;
    c.tree_nodes = nodes_.size();
    for (const Bucket& b : buckets_) {
        c.bucket_points += b.points.size();
        c.catalog_slots += b.catalog.space_slots();
    }
    for (const Node& v : nodes_) c.catalog_slots += v.catalog.space_slots();
    for (const SizeSubtree& st : subtrees_) {
        for (const auto& [r, h] : st.heaps) c.heap_nodes += h.allocated_nodes();
    }
    return c;
}

void PriorityRangeTree::audit() const {
    if (root_ == -1) {
        if (!points_.empty()) throw std::logic_error("prt: missing root");
        return;
    }
    const long double W = static_cast<long double>(W_);
    std::size_t seen = 0;

    struct XId {
        double x;
        PointId id;
        bool operator<(const XId& o) const {
            return x < o.x || (x == o.x && id < o.id);
        }
    };
    struct Span {
        XId lo{}, hi{};
        bool any = false;
        void absorb(const XId& v) {
            if (!any) {
                lo = hi = v;
                any = true;
                return;
            }
            if (v < lo) lo = v;
            if (hi < v) hi = v;
        }
        void absorb(const Span& s) {
            if (!s.any) return;
            absorb(s.lo);
            absorb(s.hi);
        }
    };
    auto check_depth = [&](const WeightedPoint& p, std::int32_t depth, bool exact) {
        if (exact) {
            if (depth >= 64 || (static_cast<unsigned __int128>(p.w) << depth) >
                                   static_cast<unsigned __int128>(W_)) {
                throw std::logic_error("prt: exact depth bound violated");
            }
        }
        const long double bound =
            3.0L * std::log2(W / static_cast<long double>(p.w)) + 3.0L + 1e-9L;
        if (static_cast<long double>(depth) > bound) {
            throw std::logic_error("prt: hybrid depth bound violated");
        }
    };

    std::function<Span(Ref, std::int32_t, Weight, bool)> walk =
        [&](Ref ref, std::int32_t depth, Weight parent_w, bool size_parent) -> Span {
        Span span;
        if (ref == -1) return span;
        if (is_bucket(ref)) {
            const Bucket& b = bucket_at(ref);
            if (b.depth != depth) throw std::logic_error("prt: bucket depth mismatch");
            if (static_cast<double>(b.points.size()) >
                std::max(1.0, std::ceil(bucket_cap_))) {
                throw std::logic_error("prt: bucket too large");
            }
            // Buckets cut out of a larger split-by-size subtree inherit the
            // complete-split child bound; whole-subtree buckets at the region
            // boundary may be smaller.
            if (size_parent && static_cast<double>(b.points.size()) <
                                   std::max(1.0, (bucket_cap_ - 1.0) / 4.0 - 1.0)) {
                throw std::logic_error("prt: bucket too small");
            }
            XId prev{};
            bool have_prev = false;
            for (const WeightedPoint& p : b.points) {
                ++seen;
                if (p.w > parent_w) throw std::logic_error("prt: heap order violated");
                check_depth(p, depth, false);
                const XId cur{p.x, p.id};
                if (have_prev && !(prev < cur)) {
                    throw std::logic_error("prt: bucket points out of order");
                }
                prev = cur;
                have_prev = true;
                span.absorb(cur);
            }
            return span;
        }
        const Node& v = nodes_[static_cast<std::size_t>(ref)];
        if (v.depth != depth) throw std::logic_error("prt: node depth mismatch");
        const bool want_weight = depth < switch_depth_;
        if ((v.strategy == Strategy::kByWeight) != want_weight) {
            throw std::logic_error("prt: strategy/depth mismatch");
        }
        if (v.point.w > parent_w) throw std::logic_error("prt: heap order violated");
        ++seen;
        check_depth(v.point, depth, depth < switch_depth_);
        if (v.catalog.empty()) throw std::logic_error("prt: node without catalog");
        const bool by_size = v.strategy == Strategy::kBySize;
        const Span l = walk(v.left, depth + 1, v.point.w, by_size);
        const Span r = walk(v.right, depth + 1, v.point.w, by_size);
        if (l.any && l.hi.x > v.split_key) {
            throw std::logic_error("prt: left subtree exceeds split key");
        }
        if (r.any && r.lo.x < v.split_key) {
            throw std::logic_error("prt: right subtree below split key");
        }
        if (l.any && r.any && !(l.hi < r.lo)) {
            throw std::logic_error("prt: subtree order overlap");
        }
        span.absorb(XId{v.point.x, v.point.id});
        span.absorb(l);
        span.absorb(r);
        return span;
    };
    walk(root_, 0, points_.empty() ? 0 : ~Weight{0}, false);
    if (seen != points_.size()) throw std::logic_error("prt: point count mismatch");
}

std::uint64_t PriorityRangeTree::structure_signature() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    std::function<void(Ref)> walk = [&](Ref ref) {
        if (ref == -1) {
            mix(0x7fu);
            return;
        }
        if (is_bucket(ref)) {
            const Bucket& b = bucket_at(ref);
            mix(0xb0u);
            for (const WeightedPoint& p : b.points) mix(p.id);
            return;
        }
        const Node& v = nodes_[static_cast<std::size_t>(ref)];
        mix(v.point.id);
        mix(static_cast<std::uint64_t>(v.strategy));
        mix(std::bit_cast<std::uint64_t>(v.split_key));
        walk(v.left);
        walk(v.right);
    };
    walk(root_);
    for (const SizeSubtree& st : subtrees_) {
        for (Rank r : st.present_ranks) {
            const PersistentHeap& heap = st.heaps.at(r);
            mix(r);
            mix(heap.allocated_nodes());
            for (const auto& pn : heap.arena()) {
                mix(std::bit_cast<std::uint64_t>(pn.key));
                mix(static_cast<std::uint64_t>(pn.payload));
            }
        }
    }
    return h;
}

}  // namespace prt
