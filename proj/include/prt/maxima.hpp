#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prt/core.hpp"

namespace prt {

/// Layers-of-maxima structure over a small catalog of (rank, y) pairs, one
/// point per rank, with two fractional-cascading navigation structures:
/// an m-slot entry array into the top layer (bottom-to-top cascade) and a
/// y-keyed entry list on the right (left-to-right cascade).
///
/// Dominance is strict in rank and non-strict in y: equal-y points at
/// different ranks resolve toward the higher rank, which keeps every layer a
/// strict staircase (rank ascending, y descending).
///
/// Domination queries are non-strict (rank >= q_rank, y >= q_y); maximization
/// queries are strict in y (y > q_y).
class MaximaCatalog {
public:
    struct Input {
        Rank rank = 0;
        double y = 0.0;
        std::uint64_t origin = 0;
    };
    struct Hit {
        Rank rank = 0;
        double y = 0.0;
        std::uint64_t origin = 0;
    };
    /// Position of an original (non-copied) catalog point: layer + index.
    struct EntryRef {
        std::int32_t layer = -1;
        std::int32_t pos = -1;
    };

    MaximaCatalog() = default;

    /// Builds the catalog; at most one point per rank, ranks in [0, m).
    static MaximaCatalog build(std::vector<Input> pts, Rank m);

    /// Bucket variant: groups points by rank, keeps the max-y point per rank
    /// as the catalog point, and stores the full per-rank y-descending chains
    /// for walk_same_rank.
    static MaximaCatalog build_with_chains(std::vector<Input> pts, Rank m);

    static bool dominates(Rank rank_a, double y_a, Rank rank_b, double y_b) {
        return rank_a > rank_b && y_a >= y_b;
    }

    bool empty() const { return layers_.empty(); }
    Rank domain() const { return m_; }
    std::size_t size() const { return point_count_; }
    std::size_t layer_count() const { return layers_.size(); }
    bool augmented() const { return augmented_; }

    /// All non-copied points with rank >= q_rank and y >= q_y.
    std::vector<Hit> domination_query(Rank q_rank, double q_y,
                                      QueryCounters* counters = nullptr) const;

    /// O(1): whether domination_query(q_rank, q_y) would be non-empty.
    bool has_dominating(Rank q_rank, double q_y, QueryCounters* counters = nullptr) const;

    /// A non-copied point of maximum rank with y strictly greater than q_y.
    std::optional<Hit> maximization_query(double q_y,
                                          QueryCounters* counters = nullptr) const;

    /// All chain points sharing `rank` with y >= q_y, y-descending.
    /// Throws std::logic_error unless built with chains.
    std::vector<Hit> walk_same_rank(Rank rank, double q_y) const;

    /// Rightmost original of `layer` with y >= q_y (the layer's best valid
    /// point for a closed lower y bound), or nullopt.
    std::optional<EntryRef> layer_best(std::int32_t layer, double q_y) const;
    std::optional<EntryRef> pred_in_layer(EntryRef ref) const;
    Hit at(EntryRef ref) const;

    /// Max stored y at exactly rank r; -inf if r is absent. O(log size).
    double max_y_for_rank(Rank r) const;
    /// Max stored y over all ranks >= r; -inf if none. O(log size).
    double suffix_max_y(Rank r) const;
    /// Ranks present in this catalog, ascending.
    std::vector<Rank> present_ranks() const;

    /// Cascade entries (originals + copies) across all augmented layers.
    std::size_t cascade_entries() const { return entries_.size(); }
    /// Every slot this catalog occupies: cascade entries, the m top-entry
    /// slots, right entries, per-rank arrays, chain links.
    std::size_t space_slots() const;

    const std::vector<std::vector<Hit>>& layers() const { return layers_; }

private:
    struct Entry {
        Rank rank = 0;
        double y = 0.0;
        std::int32_t orig_layer = -1;  // identity of the original point
        std::int32_t orig_pos = -1;
        bool copied = false;
        std::int32_t next = -1;           // rank-ascending within augmented layer
        std::int32_t next_original = -1;  // first non-copied entry at-or-after self
        std::int32_t down = -1;           // locate hint into the layer below
        std::int32_t source = -1;         // copies: promoted-from entry
    };

    void build_layers(std::vector<Input>& pts);
    void build_cascades();
    std::int32_t locate_from(std::int32_t start, Rank q_rank,
                             QueryCounters* counters) const;

    Rank m_ = 0;
    std::size_t point_count_ = 0;
    std::vector<std::vector<Hit>> layers_;  // originals; layer 0 = maxima
    std::vector<Entry> entries_;
    std::vector<std::int32_t> aug_head_;
    std::vector<std::int32_t> top_entry_;  // m slots
    struct RightEntry {
        double y;
        std::int32_t best;  // arena index of the max-rank top-layer entry at/above this y
    };
    std::vector<RightEntry> right_entries_;  // y ascending over the top layer
    struct RankEntry {
        Rank rank;
        double y;
        double suffix_max;  // max y over this and all higher present ranks
    };
    std::vector<RankEntry> rank_index_;  // one slot per point, rank ascending
    bool augmented_ = false;
    std::vector<std::vector<Hit>> chains_;  // per present rank, y descending
    std::vector<Rank> chain_ranks_;         // rank of chains_[i]
};

}  // namespace prt
