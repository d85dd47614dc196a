#ifndef BRAUN_VERIFY_INVARIANTS_HPP
#define BRAUN_VERIFY_INVARIANTS_HPP

#include <cstddef>
#include <string>

#include "braun/concurrent_heap.hpp"
#include "braun/validation.hpp"

namespace braun::verify {

/// Element count of the tree behind a quiescent heap handle.
template <typename T, typename Compare>
std::size_t count_elements(const ConcurrentHeap<T, Compare>& heap) {
    using NodePtr = typename ConcurrentHeap<T, Compare>::NodePtr;
    struct Walk {
        static std::size_t size(const NodePtr& n) {
            return n ? 1 + size(n->left) + size(n->right) : 0;
        }
    };
    return Walk::size(heap.debug_root());
}

namespace detail {

template <typename NodePtr, typename Compare>
std::size_t sweep_node(const NodePtr& node, const std::string& path, const Compare& cmp,
                       ValidationResult& issue) {
    if (!node || issue) return 0;
    if (node->snap_count.load(std::memory_order_relaxed) < 0) {
        issue = ValidationIssue{path, "negative snapshot count"};
        return 0;
    }
    std::size_t ls = sweep_node(node->left, child_path(path, false), cmp, issue);
    std::size_t rs = sweep_node(node->right, child_path(path, true), cmp, issue);
    if (issue) return 0;
    if (ls < rs || ls > rs + 1) {
        issue = ValidationIssue{path, "Braun violation: |left|=" + std::to_string(ls) +
                                          " |right|=" + std::to_string(rs)};
        return 0;
    }
    if (node->left && cmp(node->left->elem, node->elem)) {
        issue = ValidationIssue{child_path(path, false), "heap-order violation"};
        return 0;
    }
    if (node->right && cmp(node->right->elem, node->elem)) {
        issue = ValidationIssue{child_path(path, true), "heap-order violation"};
        return 0;
    }
    return 1 + ls + rs;
}

}  // namespace detail

/// Full recursive walk checking the Braun shape, heap order, and snapshot
/// count sanity. The heap (and every handle sharing its tree) must be
/// quiescent. Returns the first violation, or nullopt when clean.
template <typename T, typename Compare>
ValidationResult invariant_sweep(const ConcurrentHeap<T, Compare>& heap) {
    ValidationResult issue;
    detail::sweep_node(heap.debug_root(), "root", heap.comparator(), issue);
    return issue;
}

}  // namespace braun::verify

#endif  // BRAUN_VERIFY_INVARIANTS_HPP
