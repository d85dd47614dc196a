#ifndef BRAUN_ALLOC_STATS_HPP
#define BRAUN_ALLOC_STATS_HPP

#include <atomic>
#include <cstdint>

namespace braun {

/// Counters shared by a heap and all snapshots derived from it.
/// `nodes_allocated` covers every node construction; `nodes_peeled` counts
/// the subset that replaced a snapshot-shared node on first mutation.
struct AllocStats {
    std::atomic<std::uint64_t> nodes_allocated{0};
    std::atomic<std::uint64_t> nodes_peeled{0};
};

/// Point-in-time copy of the counters, as returned by inspection calls.
struct AllocCounts {
    std::uint64_t nodes_allocated = 0;
    std::uint64_t nodes_peeled = 0;
};

}  // namespace braun

#endif  // BRAUN_ALLOC_STATS_HPP
