#ifndef BRAUN_VERIFY_HISTORY_HPP
#define BRAUN_VERIFY_HISTORY_HPP

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace braun::verify {

enum class OpKind { insert, remove_min, get_min, snapshot, sum };
enum class Phase { invoke, respond };

inline const char* to_string(OpKind op) {
    switch (op) {
        case OpKind::insert: return "insert";
        case OpKind::remove_min: return "removeMin";
        case OpKind::get_min: return "getMin";
        case OpKind::snapshot: return "snapshot";
        case OpKind::sum: return "sum";
    }
    return "?";
}

inline std::optional<OpKind> op_from_string(const std::string& s) {
    if (s == "insert") return OpKind::insert;
    if (s == "removeMin") return OpKind::remove_min;
    if (s == "getMin") return OpKind::get_min;
    if (s == "snapshot") return OpKind::snapshot;
    if (s == "sum") return OpKind::sum;
    return std::nullopt;
}

struct Event {
    std::uint64_t seq_no = 0;
    int thread_id = 0;
    Phase phase = Phase::invoke;
    OpKind op = OpKind::insert;
    std::optional<std::int64_t> arg;   // insert argument
    std::optional<std::int64_t> resp;  // returned value or snapshot handle id

    bool operator==(const Event&) const = default;
};

/// One operation with both of its events matched up.
struct CompletedOp {
    OpKind op = OpKind::insert;
    int thread_id = 0;
    std::optional<std::int64_t> arg;
    std::optional<std::int64_t> resp;
    std::uint64_t invoke_seq = 0;
    std::uint64_t respond_seq = 0;
};

/// A recorded concurrent run: the heap's initial contents plus the
/// invoke/respond event sequence, ordered by logical timestamp.
struct History {
    std::vector<std::int64_t> initial;
    std::vector<Event> events;

    bool operator==(const History&) const = default;

    /// Returns a description of the first well-formedness defect: events out
    /// of timestamp order, unmatched or mismatched invoke/respond pairs, or
    /// nested operations on one thread. nullopt when well formed.
    std::optional<std::string> well_formedness_issue() const {
        std::unordered_map<int, const Event*> open;  // thread -> pending invoke
        std::uint64_t last_seq = 0;
        bool first = true;
        for (const Event& e : events) {
            if (!first && e.seq_no <= last_seq) {
                return "timestamps not strictly increasing at seq " + std::to_string(e.seq_no);
            }
            first = false;
            last_seq = e.seq_no;
            auto it = open.find(e.thread_id);
            if (e.phase == Phase::invoke) {
                if (it != open.end() && it->second != nullptr) {
                    return "thread " + std::to_string(e.thread_id) +
                           " invoked while an operation was pending";
                }
                open[e.thread_id] = &e;
            } else {
                if (it == open.end() || it->second == nullptr) {
                    return "thread " + std::to_string(e.thread_id) + " responded without invoking";
                }
                if (it->second->op != e.op) {
                    return "thread " + std::to_string(e.thread_id) +
                           " responded to a different operation than it invoked";
                }
                it->second = nullptr;
            }
        }
        for (const auto& [tid, pending] : open) {
            if (pending != nullptr) {
                return "thread " + std::to_string(tid) + " has an unmatched invoke";
            }
        }
        return std::nullopt;
    }

    std::vector<CompletedOp> completed_ops() const {
        std::unordered_map<int, Event> open;
        std::vector<CompletedOp> ops;
        for (const Event& e : events) {
            if (e.phase == Phase::invoke) {
                open[e.thread_id] = e;
            } else {
                const Event& inv = open.at(e.thread_id);
                ops.push_back(CompletedOp{e.op, e.thread_id, inv.arg, e.resp, inv.seq_no,
                                          e.seq_no});
            }
        }
        return ops;
    }
};

// Line format, one event per line after the header:
//   init <v0> <v1> ...
//   <seqNo> <thread> <invoke|respond> <op> <arg|-> <resp|->
inline std::string serialize(const History& h) {
    std::ostringstream out;
    out << "init";
    for (auto v : h.initial) out << ' ' << v;
    out << '\n';
    for (const Event& e : h.events) {
        out << e.seq_no << ' ' << e.thread_id << ' '
            << (e.phase == Phase::invoke ? "invoke" : "respond") << ' ' << to_string(e.op) << ' ';
        if (e.arg) out << *e.arg;
        else out << '-';
        out << ' ';
        if (e.resp) out << *e.resp;
        else out << '-';
        out << '\n';
    }
    return out.str();
}

inline History parse_history(const std::string& text) {
    History h;
    std::istringstream in(text);
    std::string line;
    bool saw_init = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "init") {
            std::int64_t v;
            while (ls >> v) h.initial.push_back(v);
            saw_init = true;
            continue;
        }
        Event e;
        e.seq_no = std::stoull(head);
        std::string phase, op, arg, resp;
        if (!(ls >> e.thread_id >> phase >> op >> arg >> resp)) {
            throw std::invalid_argument("history line has too few fields: " + line);
        }
        if (phase == "invoke") e.phase = Phase::invoke;
        else if (phase == "respond") e.phase = Phase::respond;
        else throw std::invalid_argument("bad phase in history line: " + line);
        auto kind = op_from_string(op);
        if (!kind) throw std::invalid_argument("bad op in history line: " + line);
        e.op = *kind;
        if (arg != "-") e.arg = std::stoll(arg);
        if (resp != "-") e.resp = std::stoll(resp);
        h.events.push_back(e);
    }
    if (!saw_init) throw std::invalid_argument("history text is missing the init line");
    return h;
}

}  // namespace braun::verify

#endif  // BRAUN_VERIFY_HISTORY_HPP
