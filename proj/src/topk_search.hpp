#pragma once

#include <cmath>
#include <unordered_set>
#include <vector>

#include "prt/prt.hpp"

namespace prt {

/// Incremental top-k search over one PriorityRangeTree. Several engines can
/// share one queue, mark set, and output budget, which is how the four-sided
/// index runs its two half-open searches in lockstep: the shared watermark
/// rank drives each engine's own depth limit.
class PriorityRangeTree::TopKSearch {
public:
    struct Item {
        Rank rank = 0;
        std::uint8_t kind = 0;  // 0 point, 1 node-catalog entry, 2 bucket-catalog entry
        std::uint8_t side = 0;
        WeightedPoint point{};
        Ref owner = -1;
        MaximaCatalog::EntryRef entry{};
        bool first_of_layer = false;
    };

    struct Shared {
        std::size_t k = 0;
        QueryCounters* counters = nullptr;
        RankPriorityQueue<Item> pq;
        std::unordered_set<PointId> marked;
        std::vector<WeightedPoint> out;
        std::int64_t best_rank = -1;  // max candidate rank seen while seeding

        Shared(Rank domain, std::size_t k_arg, QueryCounters* counters_arg)
            : k(k_arg), counters(counters_arg), pq(domain) {}
        bool full() const { return out.size() >= k; }
    };

    TopKSearch(const PriorityRangeTree& tree, const ThreeSidedRange& range,
               std::uint8_t side)
        : tree_(&tree), range_(range), side_(side) {
        if (tree_->root_ != -1) cursors_.push_back(Cursor{tree_->root_, kShared});
    }

    const PriorityRangeTree* tree() const { return tree_; }

    bool exhausted() const {
        for (const Cursor& c : cursors_) {
            if (c.pending != -1) return false;
        }
        return true;
    }

    /// Steps every cursor while its pending node sits at depth <= limit.
    /// Returns true if any step was taken.
    bool advance(Shared& sh, double limit) {
        bool progressed = false;
        // Stepping a shared cursor may append the two boundary cursors.
        for (std::size_t i = 0; i < cursors_.size(); ++i) {
            while (cursors_[i].pending != -1 &&
                   tree_->ref_depth(cursors_[i].pending) <= limit) {
                step(sh, cursors_[i]);
                progressed = true;
            }
        }
        return progressed;
    }

    /// Handles one extracted catalog item that belongs to this engine:
    /// proposes its successors, then drains its reports.
    void process(Shared& sh, const Item& it) {
        const MaximaCatalog& cat = catalog_of(it.owner);
        if (auto pred = cat.pred_in_layer(it.entry)) {
            push_entry(sh, it.owner, it.kind, cat.at(*pred), *pred, false);
        }
        if (it.first_of_layer) {
            if (auto nxt = cat.layer_best(it.entry.layer + 1, range_.y)) {
                push_entry(sh, it.owner, it.kind, cat.at(*nxt), *nxt, true);
            }
        }
        if (it.kind == 2) {
            drain_bucket(sh, it.owner, it.rank);
        } else {
            drain_ref(sh, it.owner, it.rank);
        }
    }

private:
    static constexpr std::uint8_t kShared = 0, kLower = 1, kUpper = 2;

    struct Cursor {
        Ref pending = -1;
        std::uint8_t mode = kShared;
    };

    const MaximaCatalog& catalog_of(Ref ref) const {
        return is_node(ref) ? tree_->nodes_[static_cast<std::size_t>(ref)].catalog
                            : tree_->bucket_at(ref).catalog;
    }

    void push_entry(Shared& sh, Ref owner, std::uint8_t kind,
                    const MaximaCatalog::Hit& hit, MaximaCatalog::EntryRef entry,
                    bool first_of_layer) {
        Item it;
        it.rank = hit.rank;
        it.kind = kind;
        it.side = side_;
        it.owner = owner;
        it.entry = entry;
        it.first_of_layer = first_of_layer;
        sh.pq.insert(it.rank, it, sh.counters);
        if (static_cast<std::int64_t>(it.rank) > sh.best_rank) sh.best_rank = it.rank;
    }

    void offer_point(Shared& sh, const WeightedPoint& p) {
        if (!contains(range_, p)) return;
        if (sh.marked.count(p.id)) return;
        Item it;
        it.rank = rank_of(p.w);
        it.kind = 0;
        it.side = side_;
        it.point = p;
        sh.pq.insert(it.rank, it, sh.counters);
        if (static_cast<std::int64_t>(it.rank) > sh.best_rank) sh.best_rank = it.rank;
    }

    void report(Shared& sh, const WeightedPoint& p) {
        if (sh.full()) return;
        if (sh.marked.insert(p.id).second) sh.out.push_back(p);
    }

    void seed_fringe(Shared& sh, Ref ref) {
        const MaximaCatalog& cat = catalog_of(ref);
        if (auto best = cat.layer_best(0, range_.y)) {
            if (sh.counters) ++sh.counters->catalog_entries_scanned;
            push_entry(sh, ref, is_bucket(ref) ? 2 : 1, cat.at(*best), *best, true);
        }
    }

    void step(Shared& sh, Cursor& cur) {
        const Ref ref = cur.pending;
        if (is_bucket(ref)) {
            const Bucket& b = tree_->bucket_at(ref);
            if (sh.counters) sh.counters->tree_nodes_visited += b.points.size();
            for (const WeightedPoint& p : b.points) offer_point(sh, p);
            cur.pending = -1;
            return;
        }
        const Node& v = tree_->nodes_[static_cast<std::size_t>(ref)];
        if (sh.counters) ++sh.counters->tree_nodes_visited;
        offer_point(sh, v.point);
        if (cur.mode == kShared) {
            if (range_.x2 < v.split_key) {
                cur.pending = v.left;
            } else if (range_.x1 > v.split_key) {
                cur.pending = v.right;
            } else {
                cur.pending = -1;
                cursors_.push_back(Cursor{v.left, kLower});
                cursors_.push_back(Cursor{v.right, kUpper});
            }
            return;
        }
        if (cur.mode == kLower) {
            if (range_.x1 <= v.split_key) {
                if (v.right != -1) seed_fringe(sh, v.right);
                cur.pending = v.left;
            } else {
                cur.pending = v.right;
            }
        } else {
            if (range_.x2 >= v.split_key) {
                if (v.left != -1) seed_fringe(sh, v.left);
                cur.pending = v.right;
            } else {
                cur.pending = v.left;
            }
        }
    }

    // Reports the rank-r points with y >= range.y under `ref` (which is fully
    // inside the x-range), marking as it goes and respecting the k budget.
    void drain_ref(Shared& sh, Ref ref, Rank r) {
        if (sh.full() || ref == -1) return;
        if (is_bucket(ref)) {
            drain_bucket(sh, ref, r);
            return;
        }
        const Node& v = tree_->nodes_[static_cast<std::size_t>(ref)];
        if (v.strategy == Strategy::kBySize) {
            drain_size_node(sh, v, r);
            return;
        }
        if (sh.counters) ++sh.counters->tree_nodes_visited;
        if (rank_of(v.point.w) == r && v.point.y >= range_.y && contains(range_, v.point)) {
            report(sh, v.point);
        }
        for (Ref child : {v.left, v.right}) {
            if (sh.full() || child == -1) continue;
            if (catalog_of(child).max_y_for_rank(r) >= range_.y) {
                drain_ref(sh, child, r);
            }
        }
    }

    void drain_size_node(Shared& sh, const Node& v, Rank r) {
        const SizeSubtree& st = tree_->subtrees_[static_cast<std::size_t>(v.subtree)];
        const auto it = st.heaps.find(r);
        if (it == st.heaps.end()) return;
        it->second.descend_visit(
            v.heap_pos, range_.y,
            [&](std::int32_t pos) {  // co-located tree point, any rank
                if (sh.full()) return;
                const Ref owner = st.pos_owner[static_cast<std::size_t>(pos)];
                if (is_node(owner)) {
                    offer_point(sh, tree_->nodes_[static_cast<std::size_t>(owner)].point);
                }
            },
            [&](double, std::int64_t payload, std::int32_t) {
                if (payload_is_point(payload)) {
                    report(sh, tree_->points_[static_cast<std::size_t>(payload)]);
                } else {
                    drain_bucket(sh, make_bucket_ref(payload_bucket(payload)), r);
                }
                return !sh.full();
            },
            sh.counters);
    }

    void drain_bucket(Shared& sh, Ref ref, Rank r) {
        const Bucket& b = tree_->bucket_at(ref);
        const auto chain = b.catalog.walk_same_rank(r, range_.y);
        if (sh.counters) sh.counters->catalog_entries_scanned += chain.size() + 1;
        for (const auto& hit : chain) {
            if (sh.full()) break;
            report(sh, b.points[static_cast<std::size_t>(hit.origin)]);
        }
    }

    const PriorityRangeTree* tree_;
    ThreeSidedRange range_;
    std::uint8_t side_;
    std::vector<Cursor> cursors_;
};

namespace detail {

/// Shared driver: seeds every engine under an adaptive limit, then extracts
/// candidates in global rank order, extending all engines whenever the queue's
/// best rank drops below the current watermark.
inline void run_topk(std::vector<PriorityRangeTree::TopKSearch>& engines,
                     PriorityRangeTree::TopKSearch::Shared& sh) {
    using Item = PriorityRangeTree::TopKSearch::Item;

    auto seed_limit = [&](const PriorityRangeTree::TopKSearch& e) {
        return sh.best_rank < 0 ? kPosInf
                                : e.tree()->depth_limit(static_cast<Rank>(sh.best_rank));
    };
    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (auto& e : engines) progressed |= e.advance(sh, seed_limit(e));
    }

    std::int64_t watermark = sh.best_rank;
    while (!sh.full()) {
        if (sh.pq.empty()) {
            bool any = false;
            for (auto& e : engines) {
                if (!e.exhausted()) any = true;
            }
            if (!any) break;
            for (auto& e : engines) e.advance(sh, e.tree()->depth_limit(0));
            if (sh.pq.empty()) continue;  // next round sees engines exhausted
        }
        const Rank r = sh.pq.max_rank();
        if (static_cast<std::int64_t>(r) < watermark) {
            watermark = r;
            for (auto& e : engines) e.advance(sh, e.tree()->depth_limit(r));
        }
        Item it = sh.pq.extract_max(sh.counters);
        if (it.kind == 0) {
            if (!sh.full() && sh.marked.insert(it.point.id).second) {
                sh.out.push_back(it.point);
            }
        } else {
            engines[it.side].process(sh, it);
        }
    }
}

}  // namespace detail
}  // namespace prt
