#ifndef BRAUN_LOCKED_ARRAY_HEAP_HPP
#define BRAUN_LOCKED_ARRAY_HEAP_HPP

#include <cstddef>
#include <functional>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace braun {

// Textbook array-backed binary min-heap behind one global mutex: the
// trivially correct, intentionally unscalable comparison baseline. Its
// snapshot copies the whole backing array under the lock, so snapshot cost
// grows linearly with the heap while the Braun heap's stays constant.
template <typename T, typename Compare = std::less<T>>
class LockedArrayHeap {
public:
    LockedArrayHeap() { storage_.reserve(16); }
    explicit LockedArrayHeap(Compare cmp) : cmp_(std::move(cmp)) { storage_.reserve(16); }

    LockedArrayHeap(const LockedArrayHeap& other) : cmp_(other.cmp_) {
        std::lock_guard<std::mutex> g(other.lock_);
        storage_ = other.storage_;
    }

    LockedArrayHeap(LockedArrayHeap&& other) noexcept : cmp_(std::move(other.cmp_)) {
        std::lock_guard<std::mutex> g(other.lock_);
        storage_ = std::move(other.storage_);
    }

    void insert(const T& value) {
        std::lock_guard<std::mutex> g(lock_);
        if (storage_.size() == storage_.capacity()) storage_.reserve(storage_.capacity() * 2);
        storage_.push_back(value);
        sift_up(storage_.size() - 1);
    }

    std::optional<T> get_min() const {
        std::lock_guard<std::mutex> g(lock_);
        if (storage_.empty()) return std::nullopt;
        return storage_.front();
    }

    std::optional<T> remove_min() {
        std::lock_guard<std::mutex> g(lock_);
        if (storage_.empty()) return std::nullopt;
        T min_value = std::move(storage_.front());
        storage_.front() = std::move(storage_.back());
        storage_.pop_back();
        if (!storage_.empty()) sift_down(0);
        return min_value;
    }

    /// Strongly consistent snapshot: a full copy of the backing array. O(n).
    LockedArrayHeap snapshot() const { return LockedArrayHeap(*this); }

    /// Sum over a snapshot's array.
    template <typename Acc = T>
    Acc sum() const {
        LockedArrayHeap copy = snapshot();
        Acc acc{};
        for (const T& v : copy.storage_) acc += static_cast<Acc>(v);
        return acc;
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> g(lock_);
        return storage_.size();
    }

    bool empty() const { return size() == 0; }

    std::vector<T> to_sorted_vector() const {
        LockedArrayHeap copy = snapshot();
        std::vector<T> out;
        out.reserve(copy.storage_.size());
        while (auto v = copy.remove_min()) out.push_back(std::move(*v));
        return out;
    }

private:
    void sift_up(std::size_t i) {
        while (i > 0) {
            std::size_t parent = (i - 1) / 2;
            if (!cmp_(storage_[i], storage_[parent])) break;
            std::swap(storage_[i], storage_[parent]);
            i = parent;
        }
    }

    void sift_down(std::size_t i) {
        const std::size_t n = storage_.size();
        while (true) {
            std::size_t smallest = i;
            std::size_t l = 2 * i + 1;
            std::size_t r = 2 * i + 2;
            if (l < n && cmp_(storage_[l], storage_[smallest])) smallest = l;
            if (r < n && cmp_(storage_[r], storage_[smallest])) smallest = r;
            if (smallest == i) return;
            std::swap(storage_[i], storage_[smallest]);
            i = smallest;
        }
    }

    std::vector<T> storage_;
    mutable std::mutex lock_;
    [[no_unique_address]] Compare cmp_;
};

}  // namespace braun

#endif  // BRAUN_LOCKED_ARRAY_HEAP_HPP
