#include "prt/pheap.hpp"

#include <deque>
#include <stdexcept>

namespace prt {

bool PersistentHeap::is_complete(const BaseTree& base) {
    if (base.root < 0) return base.nodes.empty();
    // Level-order walk: once a missing child is seen, no further children may
    // exist anywhere to the right or below.
    std::deque<std::int32_t> queue{base.root};
    bool gap = false;
    std::size_t seen = 0;
    while (!queue.empty()) {
        const std::int32_t v = queue.front();
        queue.pop_front();
        ++seen;
        const BaseNode& n = base.nodes[static_cast<std::size_t>(v)];
        for (std::int32_t child : {n.left, n.right}) {
            if (child < 0) {
                gap = true;
            } else {
                if (gap) return false;
                queue.push_back(child);
            }
        }
    }
    return seen == base.nodes.size();
}

PersistentHeap PersistentHeap::build_persistent(const BaseTree& base) {
    if (!is_complete(base)) {
        throw std::invalid_argument("build_persistent: base tree is not complete");
    }
    PersistentHeap h;
    h.roots_.assign(base.nodes.size(), -1);
    h.base_children_.resize(base.nodes.size());
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        h.base_children_[i] = {base.nodes[i].left, base.nodes[i].right};
    }
    if (base.root >= 0) h.build_rec(base, base.root);
    return h;
}

std::int32_t PersistentHeap::alloc(double key, std::int64_t payload, std::int32_t left,
                                   std::int32_t right) {
    arena_.push_back(PNode{key, payload, left, right});
    return static_cast<std::int32_t>(arena_.size() - 1);
}

std::int32_t PersistentHeap::build_rec(const BaseTree& base, std::int32_t v) {
    const BaseNode& bn = base.nodes[static_cast<std::size_t>(v)];
    const std::int32_t lc = bn.left >= 0 ? build_rec(base, bn.left) : -1;
    const std::int32_t rc = bn.right >= 0 ? build_rec(base, bn.right) : -1;

    if (lc < 0 && rc < 0 && bn.key == kNegInf) {
        // All-dummy subtree: no version node at all.
        roots_[static_cast<std::size_t>(v)] = -1;
        return -1;
    }

    // Fresh copy of v linking to the published child versions, then sift the
    // element down; nodes created here are private until this call returns.
    const std::int32_t fresh = alloc(bn.key, bn.key == kNegInf ? -1 : bn.payload, lc, rc);
    std::int32_t m = fresh;
    while (true) {
        const std::int32_t L = arena_[static_cast<std::size_t>(m)].left;
        const std::int32_t R = arena_[static_cast<std::size_t>(m)].right;
        const double cur = arena_[static_cast<std::size_t>(m)].key;
        const double lk = L < 0 ? kNegInf : arena_[static_cast<std::size_t>(L)].key;
        const double rk = R < 0 ? kNegInf : arena_[static_cast<std::size_t>(R)].key;
        std::int32_t c = -1;
        bool left_side = false;
        if (L >= 0 && lk > cur && lk >= rk) {
            c = L;
            left_side = true;
        } else if (R >= 0 && rk > cur) {
            c = R;
        }
        if (c < 0) break;  // no swap on equality

        // Copy out before alloc: push_back may reallocate the arena.
        const PNode child = arena_[static_cast<std::size_t>(c)];
        const std::int64_t sinking = arena_[static_cast<std::size_t>(m)].payload;
        // A dummy sinking onto an all-dummy position is the empty subtree.
        const bool vanishes = cur == kNegInf && child.left < 0 && child.right < 0;
        const std::int32_t sunk =
            vanishes ? -1 : alloc(cur, sinking, child.left, child.right);
        arena_[static_cast<std::size_t>(m)].key = child.key;
        arena_[static_cast<std::size_t>(m)].payload = child.payload;
        if (left_side) {
            arena_[static_cast<std::size_t>(m)].left = sunk;
        } else {
            arena_[static_cast<std::size_t>(m)].right = sunk;
        }
        if (sunk < 0) break;
        m = sunk;
    }
    roots_[static_cast<std::size_t>(v)] = fresh;
    return fresh;
}

std::vector<std::int64_t> PersistentHeap::descend_report(std::int32_t base_node,
                                                         double y,
                                                         std::optional<std::size_t> limit,
                                                         QueryCounters* counters) const {
    std::vector<std::int64_t> out;
    if (limit && *limit == 0) return out;
    descend_visit(
        base_node, y, [](std::int32_t) {},
        [&](double, std::int64_t payload, std::int32_t) {
            out.push_back(payload);
            return !limit || out.size() < *limit;
        },
        counters);
    return out;
}

}  // namespace prt
