#include <catch_amalgamated.hpp>

#include <algorithm>
#include <barrier>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "braun/locked_array_heap.hpp"

using Heap = braun::LockedArrayHeap<std::int64_t>;

namespace {

std::vector<std::int64_t> sorted(std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("locked array heap basics") {
    Heap h;
    REQUIRE(h.empty());
    REQUIRE_FALSE(h.get_min().has_value());
    REQUIRE_FALSE(h.remove_min().has_value());
    h.insert(3);
    h.insert(1);
    h.insert(2);
    REQUIRE(h.get_min() == 1);
    REQUIRE(h.remove_min() == 1);
    REQUIRE(h.remove_min() == 2);
    REQUIRE(h.remove_min() == 3);
    REQUIRE(h.empty());
}

TEST_CASE("locked array heap drain equals sort") {
    std::mt19937_64 rng(23);
    Heap h;
    std::vector<std::int64_t> vals;
    for (int i = 0; i < 10000; ++i) {
        auto v = static_cast<std::int64_t>(rng());
        vals.push_back(v);
        h.insert(v);
    }
    REQUIRE(h.to_sorted_vector() == sorted(vals));
}

TEST_CASE("locked array heap snapshot is a full unaffected copy") {
    Heap h;
    SECTION("empty heap copies empty") {
        Heap copy = h.snapshot();
        REQUIRE(copy.empty());
    }
    SECTION("later mutations do not reach the copy") {
        for (std::int64_t v : {5, 2, 9}) h.insert(v);
        Heap copy = h.snapshot();
        h.insert(0);
        h.remove_min();
        REQUIRE(copy.to_sorted_vector() == std::vector<std::int64_t>{2, 5, 9});
        REQUIRE(h.to_sorted_vector() == std::vector<std::int64_t>{2, 5, 9});
    }
}

TEST_CASE("locked array heap sum") {
    Heap h;
    REQUIRE(h.sum() == 0);
    for (std::int64_t v : {1, 2, 3}) h.insert(v);
    REQUIRE(h.sum() == 6);
    std::mt19937_64 rng(31);
    Heap big;
    std::int64_t expected = 0;
    for (int i = 0; i < 1000; ++i) {
        auto v = static_cast<std::int64_t>(rng() % 1000);
        expected += v;
        big.insert(v);
    }
    REQUIRE(big.sum() == expected);
}

TEST_CASE("locked array heap is safe under concurrent mixed use") {
    constexpr int kThreads = 4;
    Heap h;
    for (int i = 0; i < 128; ++i) h.insert(i);
    std::barrier gate(kThreads);
    std::vector<std::thread> pool;
    for (int t = 0; t < kThreads; ++t) {
        pool.emplace_back([&, t] {
            std::mt19937_64 rng(t);
            gate.arrive_and_wait();
            for (int i = 0; i < 2000; ++i) {
                switch (rng() % 4) {
                    case 0: h.insert(static_cast<std::int64_t>(rng() % 1000)); break;
                    case 1: h.remove_min(); break;
                    case 2: h.get_min(); break;
                    default: h.sum(); break;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    auto drained = h.to_sorted_vector();
    REQUIRE(std::is_sorted(drained.begin(), drained.end()));
}
