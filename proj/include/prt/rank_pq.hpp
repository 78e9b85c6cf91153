#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "prt/core.hpp"

namespace prt {

/// Priority queue as an array indexed by rank: a cell per rank holding pending
/// items, plus r_max/r_min trackers. Insert is O(1); extract-max pays pointer
/// marches over emptied cells, bounded by the rank span of inserted items when
/// post-seed inserts never exceed the last extracted rank.
template <typename T>
class RankPriorityQueue {
public:
    explicit RankPriorityQueue(Rank domain) : cells_(domain) {}

    bool empty() const { return count_ == 0; }
    std::size_t size() const { return count_; }

    Rank max_rank() const {
        if (empty()) throw std::logic_error("rank_pq: empty");
        return static_cast<Rank>(r_max_);
    }
    Rank min_rank() const {
        if (empty()) throw std::logic_error("rank_pq: empty");
        return static_cast<Rank>(r_min_);
    }

    void insert(Rank r, T item, QueryCounters* counters = nullptr) {
        if (r >= cells_.size()) throw std::logic_error("rank_pq: rank out of domain");
        cells_[r].push_back(std::move(item));
        if (counters) ++counters->pq_operations;
        if (count_ == 0) {
            r_max_ = r_min_ = static_cast<std::int64_t>(r);
        } else {
            if (static_cast<std::int64_t>(r) > r_max_) r_max_ = r;
            if (static_cast<std::int64_t>(r) < r_min_) r_min_ = r;
        }
        ++count_;
    }

    T extract_max(QueryCounters* counters = nullptr) {
        if (empty()) throw std::logic_error("rank_pq: empty");
        auto& cell = cells_[static_cast<std::size_t>(r_max_)];
        T item = std::move(cell.back());
        cell.pop_back();
        --count_;
        if (counters) ++counters->pq_operations;
        if (count_ == 0) {
            r_max_ = -1;
            r_min_ = -1;
        } else {
            while (cells_[static_cast<std::size_t>(r_max_)].empty()) {
                --r_max_;
                ++marches_;
                if (counters) ++counters->pq_operations;
            }
            while (cells_[static_cast<std::size_t>(r_min_)].empty()) {
                ++r_min_;
                ++marches_;
                if (counters) ++counters->pq_operations;
            }
        }
        return item;
    }

    std::uint64_t marches() const { return marches_; }

    /// No occupied cell outside [r_min, r_max], both endpoints occupied.
    bool consistent() const {
        if (count_ == 0) return r_max_ == -1 && r_min_ == -1;
        if (r_max_ < 0 || r_min_ < 0 || r_min_ > r_max_) return false;
        if (cells_[static_cast<std::size_t>(r_max_)].empty()) return false;
        if (cells_[static_cast<std::size_t>(r_min_)].empty()) return false;
        for (std::size_t r = 0; r < cells_.size(); ++r) {
            const bool occupied = !cells_[r].empty();
            if (occupied && (static_cast<std::int64_t>(r) > r_max_ ||
                             static_cast<std::int64_t>(r) < r_min_)) {
                return false;
            }
        }
        return true;
    }

private:
    std::vector<std::vector<T>> cells_;
    std::int64_t r_max_ = -1;
    std::int64_t r_min_ = -1;
    std::size_t count_ = 0;
    std::uint64_t marches_ = 0;
};

}  // namespace prt
