#ifndef BRAUN_PERSISTENT_HEAP_HPP
#define BRAUN_PERSISTENT_HEAP_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "braun/validation.hpp"

namespace braun {

// Immutable min-heap on a Braun tree. Every update allocates and returns a
// new heap value; existing values are never modified, so any number of
// versions can be held, compared, and shared between threads freely.
//
// Shape discipline:
//   insert    — swap the subtrees, send the larger element into the old
//               right subtree, which becomes the new left subtree.
//   remove    — pull the bottom element off the left spine (swapping at
//               each level), place it at the root, and sift it down.
//
// The Braun property |right| <= |left| <= |right| + 1 holds at every node,
// which bounds the depth by ceil(log2(n + 1)) without any stored sizes.
template <typename T, typename Compare = std::less<T>>
class PersistentHeap {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Node {
        T elem;
        NodePtr left;
        NodePtr right;
    };

    PersistentHeap() = default;
    explicit PersistentHeap(Compare cmp) : cmp_(std::move(cmp)) {}

    bool empty() const { return root_ == nullptr; }

    /// Element count. Walks the tree; O(n).
    std::size_t size() const { return node_size(root_); }

    const NodePtr& root() const { return root_; }

    PersistentHeap insert(const T& value) const {
        return with_root(insert_node(root_, value, cmp_));
    }

    std::optional<T> get_min() const {
        if (!root_) return std::nullopt;
        return root_->elem;
    }

    /// Removes one occurrence of the minimum. Returns the remaining heap and
    /// the removed element, or (unchanged, nullopt) when empty.
    std::pair<PersistentHeap, std::optional<T>> remove_min() const {
        if (!root_) return {*this, std::nullopt};
        T min_value = root_->elem;
        auto [rest, pulled] = pull_up_left(root_, /*is_root=*/true);
        if (!pulled) {
            // Single-element heap; the pull emptied it.
            return {with_root(nullptr), std::move(min_value)};
        }
        NodePtr replaced = make_node(*pulled, rest->left, rest->right);
        return {with_root(push_down(replaced, cmp_)), std::move(min_value)};
    }

    /// Extracts the element at the bottom of the left spine, restoring the
    /// Braun property by swapping subtrees at each level. With is_root set,
    /// a lone node yields (nullptr, nullopt) so the caller empties the heap.
    static std::pair<NodePtr, std::optional<T>> pull_up_left(const NodePtr& node,
                                                             bool is_root = false) {
        if (!node->left) {
            if (is_root) return {nullptr, std::nullopt};
            return {nullptr, node->elem};
        }
        auto [new_right, pulled] = pull_up_left(node->left, false);
        return {make_node(node->elem, node->right, new_right), std::move(pulled)};
    }

    /// Sifts the root element of the subtree down until heap order holds.
    /// Children must already be heaps. Ties sift into the left child.
    static NodePtr push_down(const NodePtr& node, const Compare& cmp = Compare()) {
        const NodePtr& l = node->left;
        const NodePtr& r = node->right;
        if (!l && !r) return node;
        if (l && !r) {
            if (cmp(l->elem, node->elem)) {
                NodePtr new_left = make_node(node->elem, l->left, l->right);
                return make_node(l->elem, new_left, nullptr);
            }
            return node;
        }
        if (!l && r) throw std::logic_error("push_down: tree is not Braun");
        if (!cmp(l->elem, node->elem) && !cmp(r->elem, node->elem)) return node;
        if (!cmp(r->elem, l->elem)) {  // left <= right
            NodePtr new_left = push_down(make_node(node->elem, l->left, l->right), cmp);
            return make_node(l->elem, new_left, r);
        }
        NodePtr new_right = push_down(make_node(node->elem, r->left, r->right), cmp);
        return make_node(r->elem, l, new_right);
    }

    static std::size_t node_size(const NodePtr& node) {
        if (!node) return 0;
        return 1 + node_size(node->left) + node_size(node->right);
    }

    /// Full recursive check of the Braun and heap-order invariants.
    /// Returns the first violation found, or nullopt when the heap is valid.
    ValidationResult validate() const { return validate_node(root_, "root", cmp_); }

    /// Drains a copy of the heap; yields the elements in nondecreasing order.
    std::vector<T> to_sorted_vector() const {
        std::vector<T> out;
        PersistentHeap h = *this;
        while (!h.empty()) {
            auto [rest, v] = h.remove_min();
            out.push_back(std::move(*v));
            h = std::move(rest);
        }
        return out;
    }

    static NodePtr make_node(T elem, NodePtr left = nullptr, NodePtr right = nullptr) {
        return std::make_shared<const Node>(Node{std::move(elem), std::move(left), std::move(right)});
    }

private:
    PersistentHeap(NodePtr root, Compare cmp) : root_(std::move(root)), cmp_(std::move(cmp)) {}

    PersistentHeap with_root(NodePtr root) const { return PersistentHeap(std::move(root), cmp_); }

    static NodePtr insert_node(const NodePtr& node, const T& value, const Compare& cmp) {
        if (!node) return make_node(value);
        // The smaller element stays here; the larger goes into the old right
        // subtree, which becomes the new left subtree. Ties keep the incumbent.
        const bool incoming_smaller = cmp(value, node->elem);
        const T& smaller = incoming_smaller ? value : node->elem;
        const T& larger = incoming_smaller ? node->elem : value;
        return make_node(smaller, insert_node(node->right, larger, cmp), node->left);
    }

    static ValidationResult validate_node(const NodePtr& node, const std::string& path,
                                          const Compare& cmp) {
        if (!node) return std::nullopt;
        std::size_t ls = node_size(node->left);
        std::size_t rs = node_size(node->right);
        if (ls < rs || ls > rs + 1) {
            return ValidationIssue{path, "Braun violation: |left|=" + std::to_string(ls) +
                                             " |right|=" + std::to_string(rs)};
        }
        for (bool is_right : {false, true}) {
            const NodePtr& child = is_right ? node->right : node->left;
            if (child && cmp(child->elem, node->elem)) {
                return ValidationIssue{child_path(path, is_right), "heap-order violation"};
            }
        }
        if (auto issue = validate_node(node->left, child_path(path, false), cmp)) return issue;
        return validate_node(node->right, child_path(path, true), cmp);
    }

    NodePtr root_;
    [[no_unique_address]] Compare cmp_;
};

}  // namespace braun

#endif  // BRAUN_PERSISTENT_HEAP_HPP
