#ifndef BRAUN_VERIFY_LINEARIZABILITY_HPP
#define BRAUN_VERIFY_LINEARIZABILITY_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "braun/persistent_heap.hpp"
#include "braun/verify/history.hpp"
#include "braun/verify/recorder.hpp"

namespace braun::verify {

struct LinVerdict {
    bool accepted = false;
    std::string detail;
    /// Indices into History::completed_ops() in linearization order, filled
    /// when accepted.
    std::vector<std::size_t> witness;
};

namespace detail {

struct ReplayState {
    PersistentHeap<std::int64_t> heap;
    std::int64_t sum = 0;
};

/// Applies one operation to the sequential oracle. Returns false when the
/// recorded response contradicts the oracle.
inline bool replay_op(const CompletedOp& op, ReplayState& state) {
    switch (op.op) {
        case OpKind::insert:
            state.heap = state.heap.insert(*op.arg);
            state.sum += *op.arg;
            return true;
        case OpKind::remove_min: {
            auto [rest, v] = state.heap.remove_min();
            if (v != op.resp) return false;
            state.heap = std::move(rest);
            if (v) state.sum -= *v;
            return true;
        }
        case OpKind::get_min:
            return state.heap.get_min() == op.resp;
        case OpKind::sum:
            return op.resp.has_value() && state.sum == *op.resp;
        case OpKind::snapshot:
            return true;  // no effect on the multiset; handle id is free-form
    }
    return false;
}

inline bool search(const std::vector<CompletedOp>& ops, std::uint32_t remaining,
                   const ReplayState& state, std::vector<std::size_t>& witness) {
    if (remaining == 0) return true;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (!(remaining & (1u << i))) continue;
        // Real-time order: an op that responded before our invocation must
        // be linearized first, so we cannot come before it.
        bool minimal = true;
        for (std::size_t j = 0; j < ops.size() && minimal; ++j) {
            if (j == i || !(remaining & (1u << j))) continue;
            if (ops[j].respond_seq < ops[i].invoke_seq) minimal = false;
        }
        if (!minimal) continue;
        ReplayState next = state;
        if (!replay_op(ops[i], next)) continue;
        witness.push_back(i);
        if (search(ops, remaining & ~(1u << i), next, witness)) return true;
        witness.pop_back();
    }
    return false;
}

}  // namespace detail

/// Brute-force linearizability check with real-time-order pruning: accepted
/// iff some permutation of the completed operations respects real-time order
/// and replays correctly against the sequential oracle from the initial
/// multiset. Histories beyond the recorder's size bounds are refused.
inline LinVerdict check_linearizable(const History& h) {
    if (auto issue = h.well_formedness_issue()) {
        throw std::invalid_argument("check_linearizable: malformed history: " + *issue);
    }
    auto ops = h.completed_ops();
    if (ops.size() > kMaxRecordOps) {
        throw std::invalid_argument("check_linearizable: history exceeds " +
                                    std::to_string(kMaxRecordOps) + " operations");
    }
    detail::ReplayState init;
    for (auto v : h.initial) {
        init.heap = init.heap.insert(v);
        init.sum += v;
    }
    LinVerdict verdict;
    std::uint32_t all = ops.empty() ? 0 : ((1u << ops.size()) - 1);
    verdict.accepted = detail::search(ops, all, init, verdict.witness);
    if (!verdict.accepted) {
        verdict.detail = "no linearization of " + std::to_string(ops.size()) +
                         " operations replays against the oracle";
    }
    return verdict;
}

}  // namespace braun::verify

#endif  // BRAUN_VERIFY_LINEARIZABILITY_HPP
