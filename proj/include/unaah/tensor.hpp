#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace unaah {

// Dense NHWC tensor. The innermost (channel) axis is contiguous, which is the
// layout every kernel in kernels.hpp assumes.
template <typename T>
struct Tensor4 {
    int n = 0, h = 0, w = 0, c = 0;
    std::vector<T> v;

    Tensor4() = default;
    Tensor4(int n_, int h_, int w_, int c_) { resize(n_, h_, w_, c_); }

    void resize(int n_, int h_, int w_, int c_) {
        n = n_;
        h = h_;
        w = w_;
        c = c_;
        v.assign(size_t(n) * h * w * c, T(0));
    }

    size_t size() const { return v.size(); }
    bool same_shape(const Tensor4& o) const { return n == o.n && h == o.h && w == o.w && c == o.c; }

    size_t offset(int i, int y, int x) const { return ((size_t(i) * h + y) * w + x) * c; }

    T& at(int i, int y, int x, int ch) { return v[offset(i, y, x) + ch]; }
    const T& at(int i, int y, int x, int ch) const { return v[offset(i, y, x) + ch]; }

    T* data() { return v.data(); }
    const T* data() const { return v.data(); }

    void zero() { std::fill(v.begin(), v.end(), T(0)); }
};

// Per-pixel class indices for a batch; companion of Tensor4 logits/probs.
struct Labels {
    int n = 0, h = 0, w = 0;
    std::vector<uint8_t> v;

    Labels() = default;
    Labels(int n_, int h_, int w_) : n(n_), h(h_), w(w_), v(size_t(n_) * h_ * w_, 0) {}

    size_t size() const { return v.size(); }
    uint8_t& at(int i, int y, int x) { return v[(size_t(i) * h + y) * w + x]; }
    uint8_t at(int i, int y, int x) const { return v[(size_t(i) * h + y) * w + x]; }
};

}  // namespace unaah
