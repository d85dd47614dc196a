#ifndef BRAUN_BENCH_BENCH_HPP
#define BRAUN_BENCH_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "braun/alloc_stats.hpp"
#include "braun/concurrent_heap.hpp"
#include "braun/locked_array_heap.hpp"
#include "braun/verify/invariants.hpp"

namespace braun::bench {

enum class Task { sum, snap_insert, mixed, snap_only, insert, remove_min };
enum class Structure { braun, locked_array };

inline const char* to_string(Task t) {
    switch (t) {
        case Task::sum: return "sum";
        case Task::snap_insert: return "snap-insert";
        case Task::mixed: return "mixed";
        case Task::snap_only: return "snap-only";
        case Task::insert: return "insert";
        case Task::remove_min: return "remove-min";
    }
    return "?";
}

inline const char* to_string(Structure s) {
    return s == Structure::braun ? "braun" : "locked-array";
}

inline std::optional<Task> task_from_string(const std::string& s) {
    for (Task t : {Task::sum, Task::snap_insert, Task::mixed, Task::snap_only, Task::insert,
                   Task::remove_min}) {
        if (s == to_string(t)) return t;
    }
    return std::nullopt;
}

inline std::optional<Structure> structure_from_string(const std::string& s) {
    for (Structure st : {Structure::braun, Structure::locked_array}) {
        if (s == to_string(st)) return st;
    }
    return std::nullopt;
}

struct BenchConfig {
    Task task = Task::mixed;
    Structure structure = Structure::braun;
    int threads = 1;
    std::size_t init_size = std::size_t{1} << 20;
    std::size_t total_ops = 1344;
    int warmup_runs = 10;
    int measured_runs = 40;
    std::uint64_t seed = 42;

    std::optional<std::string> validation_error() const {
        if (threads < 1) return "threads must be >= 1";
        if (init_size < 1) return "init-size must be >= 1";
        if (total_ops == 0) return "ops must be >= 1";
        if (total_ops % static_cast<std::size_t>(threads) != 0) {
            return "ops (" + std::to_string(total_ops) + ") must be divisible by threads (" +
                   std::to_string(threads) + ")";
        }
        if (warmup_runs < 0) return "warmup must be >= 0";
        if (measured_runs < 1) return "runs must be >= 1";
        return std::nullopt;
    }

    bool operator==(const BenchConfig&) const = default;
};

/// Tally of operations actually drawn by the mixed task, measured runs only.
struct OpMix {
    std::uint64_t inserts = 0;
    std::uint64_t removes = 0;
    std::uint64_t sums = 0;

    std::uint64_t total() const { return inserts + removes + sums; }
};

struct BenchResult {
    BenchConfig config;
    double mean_ms = 0.0;
    double std_ms = 0.0;
    std::vector<double> per_run_ms;  // measured runs only, warmups discarded
    AllocCounts alloc;               // last measured run, braun only
    OpMix op_mix;
    std::size_t final_size = 0;  // heap size after the last measured run
};

// Sink that keeps sum results observable so the work is not optimized away.
inline std::atomic<std::uint64_t>& bench_sink() {
    static std::atomic<std::uint64_t> sink{0};
    return sink;
}

namespace detail {

struct BraunOps {
    using Heap = ConcurrentHeap<std::int64_t>;
    static Heap make() { return Heap::with_alloc_stats(); }
    static void sum_all(const Heap& h) {
        bench_sink().fetch_xor(h.sum<std::uint64_t>(), std::memory_order_relaxed);
    }
    static void sum_first(const Heap& h, std::size_t k) {
        Heap snap = h.snapshot();
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < k; ++i) {
            auto v = snap.remove_min();
            if (!v) break;
            acc += static_cast<std::uint64_t>(*v);
        }
        snap.release();
        bench_sink().fetch_xor(acc, std::memory_order_relaxed);
    }
    static Heap snapshot(const Heap& h) { return h.snapshot(); }
    static void dispose(Heap& snap) { snap.release(); }
    static std::size_t size(const Heap& h) { return verify::count_elements(h); }
    static AllocCounts allocs(const Heap& h) { return h.alloc_counts(); }
};

struct LockedArrayOps {
    using Heap = LockedArrayHeap<std::int64_t>;
    static Heap make() { return Heap(); }
    static void sum_all(const Heap& h) {
        bench_sink().fetch_xor(h.sum<std::uint64_t>(), std::memory_order_relaxed);
    }
    static void sum_first(const Heap& h, std::size_t k) {
        Heap snap = h.snapshot();
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < k; ++i) {
            auto v = snap.remove_min();
            if (!v) break;
            acc += static_cast<std::uint64_t>(*v);
        }
        bench_sink().fetch_xor(acc, std::memory_order_relaxed);
    }
    static Heap snapshot(const Heap& h) { return h.snapshot(); }
    static void dispose(Heap&) {}
    static std::size_t size(const Heap& h) { return h.size(); }
    static AllocCounts allocs(const Heap&) { return {}; }
};

template <typename Ops>
BenchResult run_task_impl(const BenchConfig& cfg) {
    using Heap = typename Ops::Heap;
    BenchResult result;
    result.config = cfg;

    const std::size_t ops_per_thread = cfg.total_ops / static_cast<std::size_t>(cfg.threads);
    const int total_runs = cfg.warmup_runs + cfg.measured_runs;

    for (int run = 0; run < total_runs; ++run) {
        const bool measured = run >= cfg.warmup_runs;
        Heap heap = Ops::make();
        {
            std::mt19937_64 init_rng(cfg.seed);
            for (std::size_t i = 0; i < cfg.init_size; ++i) {
                heap.insert(static_cast<std::int64_t>(init_rng()));
            }
        }

        std::vector<std::optional<Heap>> held_snapshots(cfg.threads);
        std::vector<OpMix> mixes(cfg.threads);
        std::barrier gate(cfg.threads + 1);
        std::vector<std::thread> workers;
        workers.reserve(cfg.threads);
        for (int t = 0; t < cfg.threads; ++t) {
            workers.emplace_back([&, t] {
                // Per-thread stream split from (seed, thread index); identical
                // across runs so every run replays the same op sequence.
                std::seed_seq sseq{cfg.seed, static_cast<std::uint64_t>(t)};
                std::mt19937_64 rng(sseq);
                gate.arrive_and_wait();
                switch (cfg.task) {
                    case Task::insert:
                        for (std::size_t i = 0; i < ops_per_thread; ++i) {
                            heap.insert(static_cast<std::int64_t>(rng()));
                        }
                        break;
                    case Task::remove_min:
                        for (std::size_t i = 0; i < ops_per_thread; ++i) heap.remove_min();
                        break;
                    case Task::sum:
                        Ops::sum_all(heap);
                        break;
                    case Task::snap_only:
                        held_snapshots[t].emplace(Ops::snapshot(heap));
                        break;
                    case Task::snap_insert:
                        held_snapshots[t].emplace(Ops::snapshot(heap));
                        for (std::size_t i = 0; i < ops_per_thread; ++i) {
                            heap.insert(static_cast<std::int64_t>(rng()));
                        }
                        break;
                    case Task::mixed:
                        for (std::size_t i = 0; i < ops_per_thread; ++i) {
                            switch (rng() % 8) {
                                case 0:
                                case 1:
                                case 2:
                                    heap.insert(static_cast<std::int64_t>(rng()));
                                    mixes[t].inserts++;
                                    break;
                                case 3:
                                case 4:
                                case 5:
                                    heap.remove_min();
                                    mixes[t].removes++;
                                    break;
                                default:
                                    Ops::sum_first(heap, 1024);
                                    mixes[t].sums++;
                                    break;
                            }
                        }
                        break;
                }
            });
        }

        gate.arrive_and_wait();
        const auto start = std::chrono::steady_clock::now();
        for (auto& w : workers) w.join();
        const auto stop = std::chrono::steady_clock::now();

        // Snapshots are disposed of outside the timed region.
        for (auto& snap : held_snapshots) {
            if (snap) Ops::dispose(*snap);
        }
        held_snapshots.clear();

        if (measured) {
            result.per_run_ms.push_back(
                std::chrono::duration<double, std::milli>(stop - start).count());
            for (const auto& m : mixes) {
                result.op_mix.inserts += m.inserts;
                result.op_mix.removes += m.removes;
                result.op_mix.sums += m.sums;
            }
            if (run == total_runs - 1) {
                result.alloc = Ops::allocs(heap);
                result.final_size = Ops::size(heap);
            }
        }
    }

    double sum = 0.0;
    for (double ms : result.per_run_ms) sum += ms;
    result.mean_ms = sum / static_cast<double>(result.per_run_ms.size());
    double var = 0.0;
    for (double ms : result.per_run_ms) {
        var += (ms - result.mean_ms) * (ms - result.mean_ms);
    }
    result.std_ms = result.per_run_ms.size() > 1
                        ? std::sqrt(var / static_cast<double>(result.per_run_ms.size() - 1))
                        : 0.0;
    return result;
}

}  // namespace detail

inline BenchResult run_task(const BenchConfig& cfg) {
    if (auto err = cfg.validation_error()) {
        throw std::invalid_argument("invalid bench config: " + *err);
    }
    if (cfg.structure == Structure::braun) {
        return detail::run_task_impl<detail::BraunOps>(cfg);
    }
    return detail::run_task_impl<detail::LockedArrayOps>(cfg);
}

/// CSV rows ordered by (task, structure, threads) regardless of input order.
inline std::string emit_csv(std::vector<BenchResult> results) {
    std::sort(results.begin(), results.end(), [](const BenchResult& a, const BenchResult& b) {
        auto key = [](const BenchResult& r) {
            return std::tuple(static_cast<int>(r.config.task), static_cast<int>(r.config.structure),
                              r.config.threads);
        };
        return key(a) < key(b);
    });
    std::ostringstream out;
    out << "task,structure,threads,init_size,mean_ms,std_ms\n";
    for (const BenchResult& r : results) {
        out << to_string(r.config.task) << ',' << to_string(r.config.structure) << ','
            << r.config.threads << ',' << r.config.init_size << ',' << r.mean_ms << ','
            << r.std_ms << '\n';
    }
    return out.str();
}

/// Matrix file: one config per line as `key=value` pairs separated by spaces.
/// Keys match the CLI flags: task, structure, threads, init-size, ops,
/// warmup, runs, seed. Blank lines and lines starting with '#' are skipped.
inline std::vector<BenchConfig> parse_matrix(std::istream& in) {
    std::vector<BenchConfig> configs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string pair;
        BenchConfig cfg;
        bool any = false;
        while (ls >> pair) {
            if (pair.front() == '#') break;
            auto eq = pair.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("matrix line " + std::to_string(lineno) +
                                            ": expected key=value, got '" + pair + "'");
            }
            std::string key = pair.substr(0, eq);
            std::string value = pair.substr(eq + 1);
            any = true;
            if (key == "task") {
                auto t = task_from_string(value);
                if (!t) throw std::invalid_argument("matrix line " + std::to_string(lineno) +
                                                    ": unknown task '" + value + "'");
                cfg.task = *t;
            } else if (key == "structure") {
                auto s = structure_from_string(value);
                if (!s) throw std::invalid_argument("matrix line " + std::to_string(lineno) +
                                                    ": unknown structure '" + value + "'");
                cfg.structure = *s;
            } else if (key == "threads") {
                cfg.threads = std::stoi(value);
            } else if (key == "init-size") {
                cfg.init_size = std::stoull(value);
            } else if (key == "ops") {
                cfg.total_ops = std::stoull(value);
            } else if (key == "warmup") {
                cfg.warmup_runs = std::stoi(value);
            } else if (key == "runs") {
                cfg.measured_runs = std::stoi(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else {
                throw std::invalid_argument("matrix line " + std::to_string(lineno) +
                                            ": unknown key '" + key + "'");
            }
        }
        if (!any) continue;
        if (auto err = cfg.validation_error()) {
            throw std::invalid_argument("matrix line " + std::to_string(lineno) + ": " + *err);
        }
        configs.push_back(cfg);
    }
    return configs;
}

/// Runs every distinct config in the matrix (duplicates collapse) and
/// reports progress per config when `progress` is given.
inline std::vector<BenchResult> sweep(const std::vector<BenchConfig>& matrix,
                                      std::ostream* progress = nullptr) {
    std::vector<BenchConfig> todo;
    for (const BenchConfig& cfg : matrix) {
        if (std::find(todo.begin(), todo.end(), cfg) == todo.end()) todo.push_back(cfg);
    }
    std::vector<BenchResult> results;
    results.reserve(todo.size());
    for (std::size_t i = 0; i < todo.size(); ++i) {
        const BenchConfig& cfg = todo[i];
        if (progress) {
            *progress << "[" << (i + 1) << "/" << todo.size() << "] task=" << to_string(cfg.task)
                      << " structure=" << to_string(cfg.structure) << " threads=" << cfg.threads
                      << " init-size=" << cfg.init_size << " ..." << std::flush;
        }
        results.push_back(run_task(cfg));
        if (progress) {
            *progress << " mean=" << results.back().mean_ms << "ms\n" << std::flush;
        }
    }
    return results;
}

}  // namespace braun::bench

#endif  // BRAUN_BENCH_BENCH_HPP
