#include "prt/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace prt {

Rank rank_of(Weight w) {
    if (w == 0) {
        throw std::invalid_argument("rank_of: weight must be >= 1");
    }
    return static_cast<Rank>(std::bit_width(w) - 1);
}

Rank rank_threshold(Weight query_weight) { return rank_of(query_weight); }

bool range_valid(const ThreeSidedRange& r) { return r.x1 <= r.x2; }

bool range_valid(const FourSidedRange& r) { return r.x1 <= r.x2 && r.y1 <= r.y2; }

bool contains(const ThreeSidedRange& r, const WeightedPoint& p) {
    return r.x1 <= p.x && p.x <= r.x2 && p.y >= r.y;
}

bool contains(const FourSidedRange& r, const WeightedPoint& p) {
    return r.x1 <= p.x && p.x <= r.x2 && r.y1 <= p.y && p.y <= r.y2;
}

TotalWeight total_weight(const std::vector<WeightedPoint>& pts) {
    TotalWeight sum = 0;
    for (const auto& p : pts) {
        if (p.w == 0) {
            throw std::invalid_argument("total_weight: weight must be >= 1");
        }
        sum += p.w;
    }
    return sum;
}

void require_unique_ids(const std::vector<WeightedPoint>& pts) {
    std::unordered_set<PointId> seen;
    seen.reserve(pts.size() * 2);
    for (const auto& p : pts) {
        if (!seen.insert(p.id).second) {
            throw std::invalid_argument("duplicate point id " + std::to_string(p.id));
        }
    }
}

std::vector<WeightedPoint> sorted_by_x(std::vector<WeightedPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const WeightedPoint& a, const WeightedPoint& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.id < b.id;
    });
    return pts;
}

}  // namespace prt
