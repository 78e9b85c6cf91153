#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prt/core.hpp"

namespace prt {

/// Persistent max-heaps on y keys: one BuildHeap pass over a complete binary
/// tree, recording node-copied versions so that every subtree owns a heap view
/// of its elements. Keys equal to -inf are dummies (BOTTOM) carrying no payload.
///
/// Published versions are immutable; an all-dummy subtree has no version node
/// and is reported as an empty heap.
class PersistentHeap {
public:
    struct BaseNode {
        double key = kNegInf;           // -inf = BOTTOM dummy
        std::int64_t payload = -1;      // caller-defined; ignored for dummies
        std::int32_t left = -1;
        std::int32_t right = -1;
    };
    struct BaseTree {
        std::vector<BaseNode> nodes;
        std::int32_t root = -1;
    };

    struct PNode {
        double key = kNegInf;
        std::int64_t payload = -1;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    PersistentHeap() = default;

    /// Runs BuildHeap bottom-up with node copying. The base tree must be
    /// complete (every level full except possibly the last, filled left to
    /// right); otherwise throws std::invalid_argument. The base is not mutated.
    static PersistentHeap build_persistent(const BaseTree& base);

    static bool is_complete(const BaseTree& base);

    /// Version root for a base node, or -1 if that subtree is all dummies.
    std::int32_t version_root(std::int32_t base_node) const {
        return roots_[static_cast<std::size_t>(base_node)];
    }
    bool has_version(std::int32_t base_node) const {
        return version_root(base_node) >= 0;
    }
    /// Max key in the subtree of `base_node`; -inf for an all-dummy subtree.
    double root_key(std::int32_t base_node) const {
        const std::int32_t r = version_root(base_node);
        return r < 0 ? kNegInf : arena_[static_cast<std::size_t>(r)].key;
    }

    std::size_t allocated_nodes() const { return arena_.size(); }
    std::size_t base_size() const { return roots_.size(); }
    const std::vector<PNode>& arena() const { return arena_; }

    /// Payloads of all heap nodes with key >= y reachable from the version of
    /// `base_node` through nodes with key >= y; stops after `limit` payloads.
    std::vector<std::int64_t> descend_report(std::int32_t base_node, double y,
                                             std::optional<std::size_t> limit = {},
                                             QueryCounters* counters = nullptr) const;

    /// Visitor-driven descent. The version shape mirrors the base subtree, so
    /// every heap node is paired with the base position it occupies.
    ///   on_touch(base_pos)                 -- every node the search tests
    ///   on_hit(key, payload, base_pos)     -- non-dummy node with key >= y;
    ///                                         return false to stop the search
    template <typename Touch, typename Hit>
    void descend_visit(std::int32_t base_node, double y, Touch&& on_touch,
                       Hit&& on_hit, QueryCounters* counters = nullptr) const {
        if (base_node < 0 || static_cast<std::size_t>(base_node) >= roots_.size())
            return;
        bool stop = false;
        visit_rec(roots_[static_cast<std::size_t>(base_node)], base_node, y, on_touch,
                  on_hit, counters, stop);
    }

private:
    template <typename Touch, typename Hit>
    void visit_rec(std::int32_t pnode, std::int32_t base_pos, double y, Touch&& on_touch,
                   Hit&& on_hit, QueryCounters* counters, bool& stop) const {
        if (stop || pnode < 0) return;
        const PNode& n = arena_[static_cast<std::size_t>(pnode)];
        if (counters) ++counters->heap_nodes_visited;
        on_touch(base_pos);
        if (n.key == kNegInf || n.key < y) return;  // dummies and cut subtrees
        if (!on_hit(n.key, n.payload, base_pos)) {
            stop = true;
            return;
        }
        const BasePos children = base_children(base_pos);
        visit_rec(n.left, children.left, y, on_touch, on_hit, counters, stop);
        visit_rec(n.right, children.right, y, on_touch, on_hit, counters, stop);
    }

    struct BasePos {
        std::int32_t left = -1;
        std::int32_t right = -1;
    };
    BasePos base_children(std::int32_t base_pos) const {
        return base_children_[static_cast<std::size_t>(base_pos)];
    }

    std::int32_t build_rec(const BaseTree& base, std::int32_t v);
    std::int32_t alloc(double key, std::int64_t payload, std::int32_t left,
                       std::int32_t right);

    std::vector<PNode> arena_;
    std::vector<std::int32_t> roots_;        // base node index -> version root
    std::vector<BasePos> base_children_;     // base node index -> child indices
};

}  // namespace prt
