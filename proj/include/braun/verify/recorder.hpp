#ifndef BRAUN_VERIFY_RECORDER_HPP
#define BRAUN_VERIFY_RECORDER_HPP

#include <algorithm>
#include <atomic>
#include <barrier>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "braun/concurrent_heap.hpp"
#include "braun/verify/history.hpp"

namespace braun::verify {

struct ScriptedOp {
    OpKind kind = OpKind::insert;
    std::int64_t arg = 0;  // used by insert only
};

/// A small concurrent workload: initial heap contents plus one op script per
/// thread. Kept tiny because the linearizability checker is factorial.
struct WorkloadSpec {
    std::vector<std::int64_t> initial;
    std::vector<std::vector<ScriptedOp>> scripts;

    std::size_t total_ops() const {
        std::size_t n = 0;
        for (const auto& s : scripts) n += s.size();
        return n;
    }
};

inline constexpr std::size_t kMaxRecordThreads = 4;
inline constexpr std::size_t kMaxRecordOps = 8;

/// Runs the workload against a concurrent heap with instrumented call
/// sites and returns the recorded history. Timestamps come from one shared
/// counter bumped at each invoke and respond boundary.
inline History record(const WorkloadSpec& spec) {
    if (spec.scripts.size() > kMaxRecordThreads) {
        throw std::invalid_argument("record: more than 4 threads");
    }
    if (spec.total_ops() > kMaxRecordOps) {
        throw std::invalid_argument("record: more than 8 operations");
    }

    ConcurrentHeap<std::int64_t> heap;
    for (auto v : spec.initial) heap.insert(v);

    std::atomic<std::uint64_t> clock{1};
    std::atomic<std::int64_t> next_handle_id{1};
    const int nthreads = static_cast<int>(spec.scripts.size());
    std::vector<std::vector<Event>> per_thread(nthreads);
    std::barrier gate(nthreads == 0 ? 1 : nthreads);

    auto run_script = [&](int tid) {
        auto& out = per_thread[tid];
        gate.arrive_and_wait();
        for (const ScriptedOp& op : spec.scripts[tid]) {
            Event inv{clock.fetch_add(1), tid, Phase::invoke, op.kind, std::nullopt, std::nullopt};
            if (op.kind == OpKind::insert) inv.arg = op.arg;
            out.push_back(inv);
            std::optional<std::int64_t> resp;
            switch (op.kind) {
                case OpKind::insert:
                    heap.insert(op.arg);
                    break;
                case OpKind::remove_min:
                    resp = heap.remove_min();
                    break;
                case OpKind::get_min:
                    resp = heap.get_min();
                    break;
                case OpKind::snapshot: {
                    auto snap = heap.snapshot();
                    resp = next_handle_id.fetch_add(1);
                    snap.release();
                    break;
                }
                case OpKind::sum:
                    resp = heap.sum();
                    break;
            }
            out.push_back(Event{clock.fetch_add(1), tid, Phase::respond, op.kind, inv.arg, resp});
        }
    };

    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(run_script, t);
    for (auto& th : pool) th.join();

    History h;
    h.initial = spec.initial;
    for (auto& events : per_thread) {
        h.events.insert(h.events.end(), events.begin(), events.end());
    }
    std::sort(h.events.begin(), h.events.end(),
              [](const Event& a, const Event& b) { return a.seq_no < b.seq_no; });
    if (auto issue = h.well_formedness_issue()) {
        throw std::logic_error("recorded history is malformed: " + *issue);
    }
    return h;
}

/// Deterministic random workload for the stress matrices.
inline WorkloadSpec generate_workload(int threads, std::size_t total_ops, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    WorkloadSpec spec;
    std::size_t init_count = rng() % 4;
    for (std::size_t i = 0; i < init_count; ++i) {
        spec.initial.push_back(static_cast<std::int64_t>(rng() % 10));
    }
    spec.scripts.resize(threads);
    for (std::size_t i = 0; i < total_ops; ++i) {
        ScriptedOp op;
        switch (rng() % 8) {
            case 0:
            case 1:
            case 2:
                op.kind = OpKind::insert;
                op.arg = static_cast<std::int64_t>(rng() % 10);
                break;
            case 3:
            case 4:
                op.kind = OpKind::remove_min;
                break;
            case 5:
                op.kind = OpKind::get_min;
                break;
            case 6:
                op.kind = OpKind::sum;
                break;
            default:
                op.kind = OpKind::snapshot;
                break;
        }
        spec.scripts[i % threads].push_back(op);
    }
    return spec;
}

}  // namespace braun::verify

#endif  // BRAUN_VERIFY_RECORDER_HPP
