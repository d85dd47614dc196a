#ifndef BRAUN_VERIFY_ISOLATION_HPP
#define BRAUN_VERIFY_ISOLATION_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "braun/concurrent_heap.hpp"

namespace braun::verify {

/// Scripted snapshot-isolation probe: freeze one side, mutate the other,
/// repeatedly drain the frozen side and demand identical multisets.
struct IsolationPlan {
    std::size_t initial_size = 256;
    int mutations = 1000;  // insert/remove ops applied to the mutated side
    int drains = 8;        // full drains of the frozen side while mutating
    bool mutate_snapshot = false;  // mutate the snapshot, observe the origin
    std::uint64_t seed = 1;
};

struct IsolationVerdict {
    bool holds = true;
    std::string detail;
};

inline IsolationVerdict check_snapshot_isolation(const IsolationPlan& plan) {
    using Heap = ConcurrentHeap<std::int64_t>;
    Heap origin;
    std::mt19937_64 rng(plan.seed);
    for (std::size_t i = 0; i < plan.initial_size; ++i) {
        origin.insert(static_cast<std::int64_t>(rng() % 100000));
    }
    Heap snap = origin.snapshot();
    Heap& mutated = plan.mutate_snapshot ? snap : origin;
    const Heap& frozen = plan.mutate_snapshot ? static_cast<const Heap&>(origin)
                                              : static_cast<const Heap&>(snap);

    // to_sorted_vector drains a private sub-snapshot, so the frozen handle
    // itself is never consumed and can be read again and again.
    const std::vector<std::int64_t> expected = frozen.to_sorted_vector();

    std::thread mutator([&] {
        std::mt19937_64 oprng(plan.seed ^ 0x9e3779b97f4a7c15ull);
        for (int i = 0; i < plan.mutations; ++i) {
            if (oprng() % 3 == 0) {
                mutated.remove_min();
            } else {
                mutated.insert(static_cast<std::int64_t>(oprng() % 100000));
            }
        }
    });

    IsolationVerdict verdict;
    for (int d = 0; d < plan.drains && verdict.holds; ++d) {
        if (frozen.to_sorted_vector() != expected) {
            verdict.holds = false;
            verdict.detail = "drain " + std::to_string(d) + " diverged while mutating the " +
                             (plan.mutate_snapshot ? "snapshot" : "origin");
        }
    }
    mutator.join();
    if (verdict.holds && frozen.to_sorted_vector() != expected) {
        verdict.holds = false;
        verdict.detail = "final drain diverged after mutations settled";
    }
    if (!plan.mutate_snapshot) snap.release();
    return verdict;
}

}  // namespace braun::verify

#endif  // BRAUN_VERIFY_ISOLATION_HPP
