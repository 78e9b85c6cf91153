#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <random>

#include "prt/pheap.hpp"

using namespace prt;

namespace {

using Base = PersistentHeap::BaseTree;

// Level-order complete tree over the given keys; payload = index.
Base complete_tree(const std::vector<double>& keys) {
    Base b;
    b.nodes.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        b.nodes[i].key = keys[i];
        b.nodes[i].payload = static_cast<std::int64_t>(i);
        const std::size_t l = 2 * i + 1, r = 2 * i + 2;
        if (l < keys.size()) b.nodes[i].left = static_cast<std::int32_t>(l);
        if (r < keys.size()) b.nodes[i].right = static_cast<std::int32_t>(r);
    }
    b.root = keys.empty() ? -1 : 0;
    return b;
}

void subtree_keys(const Base& b, std::int32_t v, std::multiset<double>& out) {
    if (v < 0) return;
    const auto& n = b.nodes[static_cast<std::size_t>(v)];
    if (n.key != kNegInf) out.insert(n.key);
    subtree_keys(b, n.left, out);
    subtree_keys(b, n.right, out);
}

void version_keys(const PersistentHeap& h, std::int32_t pnode,
                  std::multiset<double>& out) {
    if (pnode < 0) return;
    const auto& n = h.arena()[static_cast<std::size_t>(pnode)];
    if (n.key != kNegInf) out.insert(n.key);
    version_keys(h, n.left, out);
    version_keys(h, n.right, out);
}

void check_heap_property(const PersistentHeap& h, std::int32_t pnode) {
    if (pnode < 0) return;
    const auto& n = h.arena()[static_cast<std::size_t>(pnode)];
    for (std::int32_t c : {n.left, n.right}) {
        if (c < 0) continue;
        CHECK(h.arena()[static_cast<std::size_t>(c)].key <= n.key);
        check_heap_property(h, c);
    }
}

}  // namespace

TEST_SUITE("pheap") {

TEST_CASE("single node") {
    const auto h = PersistentHeap::build_persistent(complete_tree({5.0}));
    CHECK(h.root_key(0) == 5.0);
    CHECK(h.allocated_nodes() <= 1);
}

TEST_CASE("three nodes, hand-run BuildHeap") {
    const Base base = complete_tree({1.0, 9.0, 4.0});
    const Base before = base;
    const auto h = PersistentHeap::build_persistent(base);
    CHECK(h.root_key(0) == 9.0);
    CHECK(h.root_key(1) == 9.0);
    CHECK(h.root_key(2) == 4.0);
    // Root version holds {1, 9, 4} as a max-heap.
    std::multiset<double> keys;
    version_keys(h, h.version_root(0), keys);
    CHECK(keys == std::multiset<double>{1.0, 4.0, 9.0});
    // Original base untouched.
    REQUIRE(base.nodes.size() == before.nodes.size());
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        CHECK(base.nodes[i].key == before.nodes[i].key);
        CHECK(base.nodes[i].left == before.nodes[i].left);
        CHECK(base.nodes[i].right == before.nodes[i].right);
    }
}

TEST_CASE("seven nodes: every version root is its subtree max") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> keys(7);
        for (auto& k : keys) k = static_cast<double>(rng() % 100);
        const Base base = complete_tree(keys);
        const auto h = PersistentHeap::build_persistent(base);
        for (std::int32_t v = 0; v < 7; ++v) {
            std::multiset<double> sub;
            subtree_keys(base, v, sub);
            CHECK(h.root_key(v) == *sub.rbegin());
        }
    }
}

TEST_CASE("non-complete base trees are rejected") {
    // Right child present while the left is missing: not left-filled.
    Base b;
    b.nodes.resize(2);
    b.nodes[0].key = 1.0;
    b.nodes[0].right = 1;
    b.nodes[1].key = 2.0;
    b.root = 0;
    CHECK_FALSE(PersistentHeap::is_complete(b));
    CHECK_THROWS_AS(PersistentHeap::build_persistent(b), std::invalid_argument);

    // Gap in the last level.
    Base c;
    c.nodes.resize(4);
    c.root = 0;
    c.nodes[0].left = 1;
    c.nodes[0].right = 2;
    c.nodes[2].left = 3;  // node 1 has no children but node 2 does
    CHECK_FALSE(PersistentHeap::is_complete(c));
    CHECK_THROWS_AS(PersistentHeap::build_persistent(c), std::invalid_argument);
}

TEST_CASE("version validity on complete trees up to 2^9 nodes") {
    std::mt19937_64 rng(123);
    for (std::size_t n : {1ul, 2ul, 3ul, 6ul, 15ul, 64ul, 200ul, 511ul, 512ul}) {
        std::vector<double> keys(n);
        for (auto& k : keys) {
            // Mix in dummies to model absent ranks.
            k = (rng() % 4 == 0) ? kNegInf : static_cast<double>(rng() % 1000);
        }
        const Base base = complete_tree(keys);
        const auto h = PersistentHeap::build_persistent(base);
        CHECK(h.allocated_nodes() <= 4 * n);
        for (std::size_t v = 0; v < n; ++v) {
            std::multiset<double> expect, got;
            subtree_keys(base, static_cast<std::int32_t>(v), expect);
            version_keys(h, h.version_root(static_cast<std::int32_t>(v)), got);
            CHECK(expect == got);
            check_heap_property(h, h.version_root(static_cast<std::int32_t>(v)));
        }
    }
}

TEST_CASE("all-dummy heap reports nothing for any y") {
    const auto h = PersistentHeap::build_persistent(complete_tree({kNegInf, kNegInf, kNegInf}));
    CHECK(h.descend_report(0, 0.0).empty());
    CHECK(h.descend_report(0, kNegInf).empty());
    CHECK(h.root_key(0) == kNegInf);
}

TEST_CASE("descend_report filters, limits, and stays within the visit bound") {
    const auto h = PersistentHeap::build_persistent(complete_tree({9.0, 7.0, 4.0}));
    auto got = h.descend_report(0, 5.0);
    std::sort(got.begin(), got.end());
    // Payloads are base indices; keys 9 and 7 sit at base 0 and 1.
    CHECK(got == std::vector<std::int64_t>{0, 1});

    const auto limited = h.descend_report(0, 0.0, 1);
    REQUIRE(limited.size() == 1);
    CHECK(limited[0] == 0);  // root is the max

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> keys(127);
        for (auto& k : keys) k = static_cast<double>(rng() % 50);
        const Base base = complete_tree(keys);
        const auto heap = PersistentHeap::build_persistent(base);
        const double y = static_cast<double>(rng() % 50);
        QueryCounters c;
        const auto rep = heap.descend_report(0, y, {}, &c);
        std::size_t expect = 0;
        for (double k : keys) {
            if (k >= y) ++expect;
        }
        CHECK(rep.size() == expect);
        CHECK(c.heap_nodes_visited <= 2 * (rep.size() + 1) + 1);
    }
}

TEST_CASE("building does not disturb earlier versions") {
    std::mt19937_64 rng(8);
    std::vector<double> keys(63);
    for (auto& k : keys) k = static_cast<double>(rng() % 97);
    const Base base = complete_tree(keys);
    const auto h = PersistentHeap::build_persistent(base);
    // Versions are views over one immutable arena: re-walking any version
    // yields the same multiset every time, and the arena never shrinks.
    std::vector<std::multiset<double>> first(keys.size());
    for (std::size_t v = 0; v < keys.size(); ++v) {
        version_keys(h, h.version_root(static_cast<std::int32_t>(v)), first[v]);
    }
    for (std::size_t v = 0; v < keys.size(); ++v) {
        std::multiset<double> again;
        version_keys(h, h.version_root(static_cast<std::int32_t>(v)), again);
        CHECK(again == first[v]);
    }
}

}  // TEST_SUITE
