#include "prt/maxima.hpp"

#include <algorithm>
#include <stdexcept>

namespace prt {

MaximaCatalog MaximaCatalog::build(std::vector<Input> pts, Rank m) {
    MaximaCatalog c;
    c.m_ = m;
    c.point_count_ = pts.size();
    c.top_entry_.assign(m, -1);
    if (!pts.empty()) {
        std::sort(pts.begin(), pts.end(),
                  [](const Input& a, const Input& b) { return a.rank < b.rank; });
        c.rank_index_.reserve(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i].rank >= m) {
                throw std::invalid_argument("catalog: rank out of domain");
            }
            if (i > 0 && pts[i].rank == pts[i - 1].rank) {
                throw std::invalid_argument("catalog: duplicate rank");
            }
            c.rank_index_.push_back({pts[i].rank, pts[i].y, pts[i].y});
        }
        for (std::size_t i = c.rank_index_.size() - 1; i-- > 0;) {
            c.rank_index_[i].suffix_max =
                std::max(c.rank_index_[i].y, c.rank_index_[i + 1].suffix_max);
        }
        c.build_layers(pts);
        c.build_cascades();
    }
    return c;
}

MaximaCatalog MaximaCatalog::build_with_chains(std::vector<Input> pts, Rank m) {
    // One chain per rank, y descending (ties by origin for determinism); the
    // chain head is the rank's catalog point.
    std::sort(pts.begin(), pts.end(), [](const Input& a, const Input& b) {
        if (a.rank != b.rank) return a.rank < b.rank;
        if (a.y != b.y) return a.y > b.y;
        return a.origin < b.origin;
    });
    std::vector<std::vector<Hit>> chains;
    std::vector<Rank> chain_ranks;
    std::vector<Input> reps;
    for (const Input& p : pts) {
        if (p.rank >= m) throw std::invalid_argument("catalog: rank out of domain");
        if (chain_ranks.empty() || chain_ranks.back() != p.rank) {
            chain_ranks.push_back(p.rank);
            chains.emplace_back();
            reps.push_back(p);
        }
        chains.back().push_back(Hit{p.rank, p.y, p.origin});
    }
    MaximaCatalog c = build(std::move(reps), m);
    c.chains_ = std::move(chains);
    c.chain_ranks_ = std::move(chain_ranks);
    c.augmented_ = true;
    return c;
}

void MaximaCatalog::build_layers(std::vector<Input>& pts) {
    // Iterated maxima peeling. `pts` is rank-ascending with unique ranks, so a
    // point is a maximum of the remainder iff no remaining higher-rank point
    // has y >= its own.
    std::vector<bool> assigned(pts.size(), false);
    std::size_t remaining = pts.size();
    while (remaining > 0) {
        std::vector<Hit> layer;
        double suffix = kNegInf;
        std::vector<std::size_t> taken;
        for (std::size_t i = pts.size(); i-- > 0;) {
            if (assigned[i]) continue;
            if (pts[i].y > suffix) {
                taken.push_back(i);
                suffix = pts[i].y;
            }
        }
        for (auto it = taken.rbegin(); it != taken.rend(); ++it) {
            assigned[*it] = true;
            layer.push_back(Hit{pts[*it].rank, pts[*it].y, pts[*it].origin});
        }
        remaining -= taken.size();
        layers_.push_back(std::move(layer));
    }
}

void MaximaCatalog::build_cascades() {
    const std::int32_t L = static_cast<std::int32_t>(layers_.size());
    aug_head_.assign(L, -1);
    std::vector<std::vector<std::int32_t>> aug(L);  // entry indices, rank ascending

    for (std::int32_t layer = L - 1; layer >= 0; --layer) {
        // Promote every other entry of the layer below, starting at its
        // lowest-rank entry, copies included.
        std::vector<std::int32_t> promoted;
        if (layer + 1 < L) {
            const auto& below = aug[layer + 1];
            for (std::size_t i = 0; i < below.size(); i += 2) promoted.push_back(below[i]);
        }
        std::vector<std::int32_t> merged;
        std::size_t oi = 0, pi = 0;
        const auto& originals = layers_[layer];
        while (oi < originals.size() || pi < promoted.size()) {
            const bool take_original =
                pi >= promoted.size() ||
                (oi < originals.size() &&
                 originals[oi].rank < entries_[promoted[pi]].rank);
            Entry e;
            if (take_original) {
                e.rank = originals[oi].rank;
                e.y = originals[oi].y;
                e.orig_layer = layer;
                e.orig_pos = static_cast<std::int32_t>(oi);
                ++oi;
            } else {
                const Entry& src = entries_[promoted[pi]];
                e.rank = src.rank;
                e.y = src.y;
                e.orig_layer = src.orig_layer;
                e.orig_pos = src.orig_pos;
                e.copied = true;
                e.source = promoted[pi];
                ++pi;
            }
            entries_.push_back(e);
            merged.push_back(static_cast<std::int32_t>(entries_.size() - 1));
        }
        for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
            entries_[merged[i]].next = merged[i + 1];
        }
        // next_original: first non-copied entry at-or-after each position.
        std::int32_t next_org = -1;
        for (std::size_t i = merged.size(); i-- > 0;) {
            if (!entries_[merged[i]].copied) next_org = merged[i];
            entries_[merged[i]].next_original = next_org;
        }
        // down: source of the last copy strictly before this position, so a
        // rank locate in the layer below starts at-or-left of its target.
        std::int32_t last_src = layer + 1 < L ? -2 : -1;
        for (std::int32_t idx : merged) {
            entries_[idx].down =
                last_src == -2 ? (aug[layer + 1].empty() ? -1 : aug[layer + 1].front())
                               : last_src;
            if (entries_[idx].copied) last_src = entries_[idx].source;
        }
        aug_head_[layer] = merged.empty() ? -1 : merged.front();
        aug[layer] = std::move(merged);
    }

    // m entry slots into the top layer: first entry with rank >= slot index.
    const auto& top = aug[0];
    std::size_t ti = 0;
    for (Rank r = 0; r < m_; ++r) {
        while (ti < top.size() && entries_[top[ti]].rank < r) ++ti;
        top_entry_[r] = ti < top.size() ? top[ti] : -1;
    }

    // Right-side entries: top-layer entries (copied or not) keyed by y, each
    // pointing at the max-rank entry among those with y at-or-above its own.
    right_entries_.reserve(top.size());
    for (std::int32_t idx : top) right_entries_.push_back({entries_[idx].y, idx});
    std::sort(right_entries_.begin(), right_entries_.end(),
              [](const RightEntry& a, const RightEntry& b) { return a.y < b.y; });
    std::int32_t best = -1;
    for (std::size_t i = right_entries_.size(); i-- > 0;) {
        if (best < 0 || entries_[right_entries_[i].best].rank > entries_[best].rank) {
            best = right_entries_[i].best;
        }
        right_entries_[i].best = best;
    }
}

std::int32_t MaximaCatalog::locate_from(std::int32_t start, Rank q_rank,
                                        QueryCounters* counters) const {
    std::int32_t e = start;
    while (e >= 0 && entries_[e].rank < q_rank) {
        if (counters) ++counters->catalog_entries_scanned;
        e = entries_[e].next;
    }
    if (counters && e >= 0) ++counters->catalog_entries_scanned;
    return e;
}

std::vector<MaximaCatalog::Hit> MaximaCatalog::domination_query(
    Rank q_rank, double q_y, QueryCounters* counters) const {
    std::vector<Hit> out;
    if (layers_.empty() || q_rank >= m_) return out;
    std::int32_t start = top_entry_[q_rank];
    if (counters) ++counters->catalog_entries_scanned;
    while (start >= 0) {
        // Report matching originals on this layer; they sit rank-ascending /
        // y-descending from the first original at-or-after the start.
        std::int32_t e = entries_[start].next_original;
        std::size_t matched = 0;
        while (e >= 0) {
            if (counters) ++counters->catalog_entries_scanned;
            if (entries_[e].y < q_y) break;
            out.push_back(at(EntryRef{entries_[e].orig_layer, entries_[e].orig_pos}));
            ++matched;
            const std::int32_t nxt = entries_[e].next;
            e = nxt < 0 ? -1 : entries_[nxt].next_original;
        }
        // A layer with no match means no deeper layer can match: any deeper
        // match is dominated by a match on this layer.
        if (matched == 0) break;
        start = locate_from(entries_[start].down, q_rank, counters);
    }
    return out;
}

bool MaximaCatalog::has_dominating(Rank q_rank, double q_y,
                                   QueryCounters* counters) const {
    if (counters) ++counters->catalog_entries_scanned;
    return suffix_max_y(q_rank) >= q_y;
}

std::optional<MaximaCatalog::Hit> MaximaCatalog::maximization_query(
    double q_y, QueryCounters* counters) const {
    if (right_entries_.empty()) return std::nullopt;
    // First right entry with y strictly above the query value.
    std::size_t lo = 0, hi = right_entries_.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (counters) ++counters->catalog_entries_scanned;
        if (right_entries_[mid].y > q_y) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if (lo == right_entries_.size()) return std::nullopt;
    const Entry& e = entries_[right_entries_[lo].best];
    if (counters) ++counters->catalog_entries_scanned;
    return at(EntryRef{e.orig_layer, e.orig_pos});
}

std::vector<MaximaCatalog::Hit> MaximaCatalog::walk_same_rank(Rank rank,
                                                              double q_y) const {
    if (!augmented_) {
        throw std::logic_error("walk_same_rank: catalog built without chains");
    }
    std::vector<Hit> out;
    const auto it = std::lower_bound(chain_ranks_.begin(), chain_ranks_.end(), rank);
    if (it == chain_ranks_.end() || *it != rank) return out;
    for (const Hit& h : chains_[static_cast<std::size_t>(it - chain_ranks_.begin())]) {
        if (h.y < q_y) break;
        out.push_back(h);
    }
    return out;
}

std::optional<MaximaCatalog::EntryRef> MaximaCatalog::layer_best(std::int32_t layer,
                                                                 double q_y) const {
    if (layer < 0 || static_cast<std::size_t>(layer) >= layers_.size()) {
        return std::nullopt;
    }
    const auto& pts = layers_[static_cast<std::size_t>(layer)];
    // y strictly decreases along the layer; valid points form a prefix.
    const auto it = std::partition_point(pts.begin(), pts.end(),
                                         [q_y](const Hit& h) { return h.y >= q_y; });
    if (it == pts.begin()) return std::nullopt;
    return EntryRef{layer, static_cast<std::int32_t>(it - pts.begin() - 1)};
}

std::optional<MaximaCatalog::EntryRef> MaximaCatalog::pred_in_layer(EntryRef ref) const {
    if (ref.pos <= 0) return std::nullopt;
    return EntryRef{ref.layer, ref.pos - 1};
}

MaximaCatalog::Hit MaximaCatalog::at(EntryRef ref) const {
    return layers_[static_cast<std::size_t>(ref.layer)][static_cast<std::size_t>(ref.pos)];
}

double MaximaCatalog::max_y_for_rank(Rank r) const {
    const auto it = std::lower_bound(
        rank_index_.begin(), rank_index_.end(), r,
        [](const RankEntry& e, Rank v) { return e.rank < v; });
    if (it == rank_index_.end() || it->rank != r) return kNegInf;
    return it->y;
}

double MaximaCatalog::suffix_max_y(Rank r) const {
    const auto it = std::lower_bound(
        rank_index_.begin(), rank_index_.end(), r,
        [](const RankEntry& e, Rank v) { return e.rank < v; });
    if (it == rank_index_.end()) return kNegInf;
    return it->suffix_max;
}

std::vector<Rank> MaximaCatalog::present_ranks() const {
    std::vector<Rank> out;
    out.reserve(rank_index_.size());
    for (const RankEntry& e : rank_index_) out.push_back(e.rank);
    return out;
}

std::size_t MaximaCatalog::space_slots() const {
    std::size_t slots = entries_.size() + top_entry_.size() + right_entries_.size() +
                        rank_index_.size() + point_count_;
    for (const auto& chain : chains_) slots += chain.size();
    return slots;
}

}  // namespace prt
