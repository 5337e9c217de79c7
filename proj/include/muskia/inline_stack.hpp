// inline_stack.hpp - Stack with fixed inline capacity that spills to the heap.
#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <vector>

namespace muskia {

// The first N entries live inline; deeper stacks grow into a vector. Layer
// nesting in real display lists is shallow, so the spill path is rare.
template <class T, std::size_t N>
class InlineStack {
public:
    void push(T v) {
        if (size_ < N)
            inline_[size_] = std::move(v);
        else
            spill_.push_back(std::move(v));
        ++size_;
    }

    void pop() {
        assert(size_ > 0);
        if (size_ > N) spill_.pop_back();
        --size_;
    }

    T& back() { return (*this)[size_ - 1]; }
    const T& back() const { return (*this)[size_ - 1]; }

    T& operator[](std::size_t i) {
        assert(i < size_);
        return i < N ? inline_[i] : spill_[i - N];
    }
    const T& operator[](std::size_t i) const {
        assert(i < size_);
        return i < N ? inline_[i] : spill_[i - N];
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

private:
    std::array<T, N> inline_{};
    std::vector<T> spill_;
    std::size_t size_ = 0;
};

}  // namespace muskia
