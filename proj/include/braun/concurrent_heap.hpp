#ifndef BRAUN_CONCURRENT_HEAP_HPP
#define BRAUN_CONCURRENT_HEAP_HPP

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "braun/alloc_stats.hpp"

// Thread-safe Braun min-heap with O(1) snapshots.
//
// Locking protocol:
//   * Each handle owns a reader-writer lock guarding its root reference.
//     get_min takes it shared; insert, remove_min and snapshot take it
//     exclusive, then acquire the root node's mutex and release the handle
//     lock (the handle lock is the base case of the hand-over-hand chain).
//   * Traversals rewrite a node while holding both the node's mutex and the
//     mutex owning the slot that points at it (its parent, or the handle),
//     then release the parent side and step leafward. Node mutexes are only
//     ever acquired parent-before-child (left sibling before right), so all
//     lock acquisition is strictly leafward and deadlock-free.
//   * remove_min keeps the root mutex from the start of its shape-restoring
//     pull until its sift-down has begun, so no other thread can observe the
//     heap-order violation between the two phases.
//
// Snapshots: each node carries a count of snapshot references. snapshot()
// bumps the root's count and returns a new handle on the same tree. A node
// whose count is nonzero is never mutated in place; the first mutation
// installs a fresh copy in the writer's tree, moves one count from the node
// onto each child, and leaves the original to the snapshots ("peeling").
// Counts are only ever touched under the owning parent-side lock, except
// that they may stay conservatively high after a handle dies; that costs at
// most one redundant peel per node and never breaks isolation.

namespace braun {

namespace detail {

#if !defined(NDEBUG) && !defined(BRAUN_NO_LOCK_RANK_CHECK)
#define BRAUN_LOCK_RANK_CHECK 1
#else
#define BRAUN_LOCK_RANK_CHECK 0
#endif

#if BRAUN_LOCK_RANK_CHECK
// Ranks are heap positions (root 1, children 2i and 2i+1), so "strictly
// greater than everything held" is exactly leafward, left-before-right order.
inline thread_local std::vector<std::uint64_t> held_lock_ranks;

inline void note_lock_acquired(std::uint64_t rank, bool strict) {
    if (strict) {
        for (auto held : held_lock_ranks) {
            assert(rank > held && "node lock acquired out of leafward order");
        }
    }
    held_lock_ranks.push_back(rank);
}

inline void note_lock_released(std::uint64_t rank) {
    auto it = std::find(held_lock_ranks.rbegin(), held_lock_ranks.rend(), rank);
    assert(it != held_lock_ranks.rend());
    held_lock_ranks.erase(std::next(it).base());
}
#endif

}  // namespace detail

template <typename T>
struct SnapNode {
    T elem;
    std::shared_ptr<SnapNode> left;
    std::shared_ptr<SnapNode> right;
    std::mutex lock;
    std::atomic<std::int64_t> snap_count{0};

    SnapNode(T e, std::shared_ptr<SnapNode> l, std::shared_ptr<SnapNode> r)
        : elem(std::move(e)), left(std::move(l)), right(std::move(r)) {}
};

template <typename T, typename Compare = std::less<T>>
class ConcurrentHeap {
public:
    using Node = SnapNode<T>;
    using NodePtr = std::shared_ptr<Node>;

    ConcurrentHeap() : h_(std::make_unique<Holder>()) {}
    explicit ConcurrentHeap(Compare cmp) : h_(std::make_unique<Holder>()), cmp_(std::move(cmp)) {}

    /// Heap with peel/allocation instrumentation shared across its snapshots.
    static ConcurrentHeap with_alloc_stats(Compare cmp = Compare()) {
        ConcurrentHeap h(std::move(cmp));
        h.stats_ = std::make_shared<AllocStats>();
        return h;
    }

    ConcurrentHeap(ConcurrentHeap&&) noexcept = default;
    ConcurrentHeap& operator=(ConcurrentHeap&&) noexcept = default;
    ConcurrentHeap(const ConcurrentHeap&) = delete;
    ConcurrentHeap& operator=(const ConcurrentHeap&) = delete;

    ~ConcurrentHeap() {
        if (h_ && h_->is_snapshot && !h_->released.load()) release_impl();
    }

    void insert(const T& value) {
        ensure_active();
        std::unique_lock<std::shared_mutex> holder(h_->mx);
        if (!h_->root) {
            h_->root = make_node(value, nullptr, nullptr);
            return;
        }
        NodeGuard cur(h_->root, 1);
        T carry = value;
        {
            // Elements are copied, not moved: on a peel the node stays
            // visible to its snapshots and must keep its contents intact.
            Node* n = cur.get();
            bool incoming_smaller = cmp_(carry, n->elem);
            T stay = incoming_smaller ? carry : n->elem;
            T descend = incoming_smaller ? n->elem : carry;
            // Swap subtrees; the larger element goes into the old right
            // subtree, which becomes the new left subtree.
            cur = cow_rewrite(h_->root, std::move(cur), std::move(stay), n->right, n->left);
            carry = std::move(descend);
        }
        holder.unlock();
        std::uint64_t pos = 1;
        while (true) {
            Node* n = cur.get();
            if (!n->left) {
                n->left = make_node(std::move(carry), nullptr, nullptr);
                return;
            }
            NodeGuard child(n->left, pos * 2);
            Node* c = child.get();
            bool incoming_smaller = cmp_(carry, c->elem);
            T stay = incoming_smaller ? carry : c->elem;
            T descend = incoming_smaller ? c->elem : carry;
            child = cow_rewrite(n->left, std::move(child), std::move(stay), c->right, c->left);
            carry = std::move(descend);
            pos *= 2;
            cur = std::move(child);  // releases the parent
        }
    }

    std::optional<T> get_min() const {
        ensure_active();
        std::shared_lock<std::shared_mutex> holder(h_->mx);
        if (!h_->root) return std::nullopt;
        NodeGuard root(h_->root, 1);
        return root.get()->elem;
    }

    std::optional<T> remove_min() {
        ensure_active();
        std::unique_lock<std::shared_mutex> holder(h_->mx);
        if (!h_->root) return std::nullopt;
        NodeGuard root(h_->root, 1);
        Node* r = root.get();
        T min_value = r->elem;
        if (!r->left) {
            assert(!r->right);
            // Lone node: the handle just lets go of it.
            if (r->snap_count.load(std::memory_order_relaxed) > 0) {
                r->snap_count.fetch_sub(1, std::memory_order_relaxed);
            }
            h_->root = nullptr;
            return min_value;
        }
        // Phase 1: swap the root's subtrees and pull the bottom element off
        // what was the left spine. The root mutex stays held throughout.
        root = cow_rewrite(h_->root, std::move(root), T(r->elem), r->right, r->left);
        holder.unlock();
        T pulled = pull_up_leftmost(root);
        // Phase 2: the pulled element replaces the minimum at the root and
        // sifts down. The root has been exclusively owned since its rewrite,
        // so this in-place write is invisible to every snapshot.
        Node* n = root.get();
        assert(n->snap_count.load(std::memory_order_relaxed) == 0);
        n->elem = std::move(pulled);
        push_down_from(std::move(root), 1);
        return min_value;
    }

    /// O(1): bumps the root's snapshot count and returns an independent
    /// handle on the shared tree. Mutations on either side never show up in
    /// the other.
    ConcurrentHeap snapshot() const {
        ensure_active();
        ConcurrentHeap snap(cmp_);
        snap.stats_ = stats_;
        snap.h_->is_snapshot = true;
        std::unique_lock<std::shared_mutex> holder(h_->mx);
        if (h_->root) {
            NodeGuard root(h_->root, 1);
            root.get()->snap_count.fetch_add(1, std::memory_order_relaxed);
            snap.h_->root = h_->root;
        }
        return snap;
    }

    /// Returns the snapshot reference it holds. Only valid on handles
    /// produced by snapshot(), at most once; the handle is dead afterwards.
    /// Only the root's count is given back; deeper counts stay conservatively
    /// high and are reclaimed by later peels.
    void release() {
        if (!h_) throw std::logic_error("release() on a moved-from heap handle");
        if (!h_->is_snapshot) throw std::logic_error("release() on a heap that is not a snapshot");
        if (h_->released.exchange(true)) throw std::logic_error("snapshot handle released twice");
        release_impl();
    }

    bool empty() const {
        ensure_active();
        std::shared_lock<std::shared_mutex> holder(h_->mx);
        return h_->root == nullptr;
    }

    /// Sum over a point-in-time view: snapshots, drains, releases.
    /// Acc must absorb T via +=; pass an unsigned type for wrapping sums.
    template <typename Acc = T>
    Acc sum() const {
        Acc acc{};
        ConcurrentHeap snap = snapshot();
        while (auto v = snap.remove_min()) acc += static_cast<Acc>(*v);
        snap.release();
        return acc;
    }

    /// Elements of a point-in-time view in nondecreasing order.
    std::vector<T> to_sorted_vector() const {
        std::vector<T> out;
        ConcurrentHeap snap = snapshot();
        while (auto v = snap.remove_min()) out.push_back(std::move(*v));
        snap.release();
        return out;
    }

    AllocCounts alloc_counts() const {
        if (!stats_) return {};
        return {stats_->nodes_allocated.load(std::memory_order_relaxed),
                stats_->nodes_peeled.load(std::memory_order_relaxed)};
    }

    bool alloc_stats_enabled() const { return stats_ != nullptr; }

    /// Root of the shared tree for quiescent inspection (validation sweeps,
    /// fault injection in tests). Not synchronized; callers must ensure no
    /// operation is in flight anywhere in the heap's family.
    NodePtr debug_root() const {
        ensure_active();
        return h_->root;
    }

    const Compare& comparator() const { return cmp_; }

private:
    struct Holder {
        mutable std::shared_mutex mx;
        NodePtr root;
        std::atomic<bool> released{false};
        bool is_snapshot = false;
    };

    // Locks a node and pins it so the mutex outlives any unlink performed
    // while the lock is held.
    class NodeGuard {
    public:
        NodeGuard() = default;
        NodeGuard(const NodePtr& node, std::uint64_t rank) : node_(node) {
            node_->lock.lock();
#if BRAUN_LOCK_RANK_CHECK
            detail::note_lock_acquired(rank, /*strict=*/true);
            rank_ = rank;
#else
            (void)rank;
#endif
        }

        // Adopts a freshly allocated, unpublished node in place of an old
        // node at the same position.
        static NodeGuard adopt_fresh(const NodePtr& node, std::uint64_t rank) {
            NodeGuard g;
            g.node_ = node;
            bool locked = node->lock.try_lock();
            assert(locked);
            (void)locked;
#if BRAUN_LOCK_RANK_CHECK
            detail::note_lock_acquired(rank, /*strict=*/false);
            g.rank_ = rank;
#else
            (void)rank;
#endif
            return g;
        }

        NodeGuard(NodeGuard&& other) noexcept { *this = std::move(other); }

        NodeGuard& operator=(NodeGuard&& other) noexcept {
            if (this != &other) {
                unlock();
                node_ = std::move(other.node_);
#if BRAUN_LOCK_RANK_CHECK
                rank_ = other.rank_;
#endif
            }
            return *this;
        }

        ~NodeGuard() { unlock(); }

        void unlock() {
            if (node_) {
                node_->lock.unlock();
#if BRAUN_LOCK_RANK_CHECK
                detail::note_lock_released(rank_);
#endif
                node_.reset();
            }
        }

        Node* get() const { return node_.get(); }
        const NodePtr& ptr() const { return node_; }

        std::uint64_t rank() const {
#if BRAUN_LOCK_RANK_CHECK
            return rank_;
#else
            return 0;
#endif
        }

    private:
        NodePtr node_;
#if BRAUN_LOCK_RANK_CHECK
        std::uint64_t rank_ = 0;
#endif
    };

    void ensure_active() const {
        if (!h_) throw std::logic_error("operation on a moved-from heap handle");
        if (h_->released.load(std::memory_order_acquire)) {
            throw std::logic_error("operation on a released snapshot handle");
        }
    }

    void release_impl() noexcept {
        std::unique_lock<std::shared_mutex> holder(h_->mx);
        if (h_->root) {
            NodeGuard root(h_->root, 1);
            Node* r = root.get();
            if (r->snap_count.load(std::memory_order_relaxed) > 0) {
                r->snap_count.fetch_sub(1, std::memory_order_relaxed);
            }
            h_->root = nullptr;
        }
        h_->released.store(true, std::memory_order_release);
    }

    NodePtr make_node(T elem, NodePtr left, NodePtr right) const {
        if (stats_) stats_->nodes_allocated.fetch_add(1, std::memory_order_relaxed);
        return std::make_shared<Node>(std::move(elem), std::move(left), std::move(right));
    }

    // Rewrites the node held by `guard` to (elem, left, right). The caller
    // must also hold the lock owning `slot`, which currently points at that
    // node. Mutates in place when no snapshot holds the node; otherwise
    // installs a fresh copy in `slot`, hands one snapshot reference to each
    // of the old node's children, and drops one from the old node. Returns
    // the guard of whichever node now sits in the slot.
    NodeGuard cow_rewrite(NodePtr& slot, NodeGuard guard, T elem, NodePtr left, NodePtr right) {
        Node* n = guard.get();
        const auto observed = n->snap_count.load(std::memory_order_relaxed);
        if (observed == 0) {
            // The parent-side lock is held, so no concurrent peel of the
            // parent can be granting this node to a snapshot right now.
            assert(n->snap_count.load(std::memory_order_relaxed) == 0 &&
                   "in-place mutation of a snapshot-shared node");
            n->elem = std::move(elem);
            n->left = std::move(left);
            n->right = std::move(right);
            return guard;
        }
        if (n->left) n->left->snap_count.fetch_add(1, std::memory_order_relaxed);
        if (n->right) n->right->snap_count.fetch_add(1, std::memory_order_relaxed);
        NodePtr fresh = make_node(std::move(elem), std::move(left), std::move(right));
        if (stats_) stats_->nodes_peeled.fetch_add(1, std::memory_order_relaxed);
        NodeGuard fresh_guard = NodeGuard::adopt_fresh(fresh, guard.rank());
        n->snap_count.fetch_sub(1, std::memory_order_relaxed);
        slot = std::move(fresh);
        return fresh_guard;  // `guard` unlocks the peeled node on return
    }

    // Phase 1 of remove_min. Entered with the root rewritten (subtrees
    // swapped) and locked; extracts the element at the bottom of what was
    // the left spine, deleting the leaf from its parent. The root guard is
    // left untouched so the caller still owns the root afterwards.
    T pull_up_leftmost(NodeGuard& root_guard) {
        NodeGuard parent_guard;  // empty while the parent is the root
        Node* parent = root_guard.get();
        std::uint64_t parent_pos = 1;
        while (true) {
            NodePtr& slot = parent->right;
            assert(slot);
            NodeGuard child(slot, parent_pos * 2 + 1);
            Node* c = child.get();
            if (!c->left) {
                assert(!c->right);
                T pulled = c->elem;  // the leaf may live on in snapshots
                if (c->snap_count.load(std::memory_order_relaxed) > 0) {
                    c->snap_count.fetch_sub(1, std::memory_order_relaxed);
                }
                slot = nullptr;  // parent-side lock is held
                return pulled;
            }
            child = cow_rewrite(slot, std::move(child), T(c->elem), c->right, c->left);
            parent_guard = std::move(child);  // hand over hand: drops the old parent
            parent = parent_guard.get();
            parent_pos = parent_pos * 2 + 1;
        }
    }

    // Phase 2 of remove_min: classic sift-down with hand-over-hand locking,
    // peeling children as needed. `cur` has been exclusively owned since its
    // own rewrite, so its element can be swapped in place.
    void push_down_from(NodeGuard cur, std::uint64_t pos) {
        while (true) {
            Node* n = cur.get();
            if (!n->left && !n->right) return;
            assert(n->left && "tree is not Braun");
            NodeGuard left(n->left, pos * 2);
            if (!n->right) {
                Node* l = left.get();
                if (cmp_(l->elem, n->elem)) {
                    T displaced = std::move(n->elem);
                    n->elem = l->elem;
                    cow_rewrite(n->left, std::move(left), std::move(displaced), l->left, l->right);
                }
                return;
            }
            NodeGuard right(n->right, pos * 2 + 1);
            Node* l = left.get();
            Node* r = right.get();
            const bool go_right = cmp_(r->elem, l->elem);  // ties sift left
            Node* c = go_right ? r : l;
            if (!cmp_(c->elem, n->elem)) return;  // heap order already holds
            T displaced = std::move(n->elem);
            n->elem = c->elem;
            NodeGuard next;
            if (go_right) {
                left.unlock();
                next = cow_rewrite(n->right, std::move(right), std::move(displaced), c->left,
                                   c->right);
                pos = pos * 2 + 1;
            } else {
                right.unlock();
                next = cow_rewrite(n->left, std::move(left), std::move(displaced), c->left,
                                   c->right);
                pos = pos * 2;
            }
            cur = std::move(next);  // releases the parent
        }
    }

    std::unique_ptr<Holder> h_;
    std::shared_ptr<AllocStats> stats_;
    [[no_unique_address]] Compare cmp_;
};

}  // namespace braun

#endif  // BRAUN_CONCURRENT_HEAP_HPP
