#pragma once

#include <cmath>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "unaah/tensor.hpp"

// Single-threaded reference kernels, written as plain nested loops. They keep
// the same per-element accumulation order as the parallel kernels (including
// the item-ordered reductions for parameter gradients and batch statistics),
// so the tests can require bit-identical output rather than a tolerance.
namespace unaah::serial {

template <typename T>
void conv2d_forward(const Tensor4<T>& in, const std::vector<T>& w, const std::vector<std::type_identity_t<T>>* bias,
                    int kh, int kw, int cout, Tensor4<T>& out) {
    const int n = in.n, h = in.h, wd = in.w, cin = in.c;
    const int ph = kh / 2, pw = kw / 2;
    out.resize(n, h, wd, cout);
    for (int i = 0; i < n; ++i)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < wd; ++x)
                for (int co = 0; co < cout; ++co) {
                    T acc = bias ? (*bias)[co] : T(0);
                    for (int dy = 0; dy < kh; ++dy) {
                        const int yy = y + dy - ph;
                        if (yy < 0 || yy >= h) continue;
                        for (int dx = 0; dx < kw; ++dx) {
                            const int xx = x + dx - pw;
                            if (xx < 0 || xx >= wd) continue;
                            for (int ci = 0; ci < cin; ++ci)
                                acc += in.at(i, yy, xx, ci) *
                                       w[(size_t(dy * kw + dx) * cin + ci) * cout + co];
                        }
                    }
                    out.at(i, y, x, co) = acc;
                }
}

template <typename T>
void conv2d_backward_params(const Tensor4<T>& in, const Tensor4<T>& gout, int kh, int kw,
                            std::vector<T>& gw, std::vector<T>* gb) {
    const int n = in.n, h = in.h, wd = in.w, cin = in.c, cout = gout.c;
    const int ph = kh / 2, pw = kw / 2;
    const size_t wsz = size_t(kh) * kw * cin * cout;
    gw.assign(wsz, T(0));
    if (gb) gb->assign(cout, T(0));
    std::vector<T> gwi(wsz);
    std::vector<T> gbi(cout);
    for (int i = 0; i < n; ++i) {
        std::fill(gwi.begin(), gwi.end(), T(0));
        std::fill(gbi.begin(), gbi.end(), T(0));
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < wd; ++x) {
                for (int co = 0; co < cout; ++co) gbi[co] += gout.at(i, y, x, co);
                for (int dy = 0; dy < kh; ++dy) {
                    const int yy = y + dy - ph;
                    if (yy < 0 || yy >= h) continue;
                    for (int dx = 0; dx < kw; ++dx) {
                        const int xx = x + dx - pw;
                        if (xx < 0 || xx >= wd) continue;
                        for (int ci = 0; ci < cin; ++ci)
                            for (int co = 0; co < cout; ++co)
                                gwi[(size_t(dy * kw + dx) * cin + ci) * cout + co] +=
                                    in.at(i, yy, xx, ci) * gout.at(i, y, x, co);
                    }
                }
            }
        for (size_t k = 0; k < wsz; ++k) gw[k] += gwi[k];
        if (gb)
            for (int co = 0; co < cout; ++co) (*gb)[co] += gbi[co];
    }
}

template <typename T>
void maxpool2x2_forward(const Tensor4<T>& in, Tensor4<T>& out) {
    out.resize(in.n, in.h / 2, in.w / 2, in.c);
    for (int i = 0; i < in.n; ++i)
        for (int y = 0; y < out.h; ++y)
            for (int x = 0; x < out.w; ++x)
                for (int ch = 0; ch < in.c; ++ch) {
                    T best = in.at(i, 2 * y, 2 * x, ch);
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx)
                            best = std::max(best, in.at(i, 2 * y + dy, 2 * x + dx, ch));
                    out.at(i, y, x, ch) = best;
                }
}

template <typename T>
void upsample2x_bilinear_forward(const Tensor4<T>& in, Tensor4<T>& out) {
    const int h = in.h, wd = in.w;
    out.resize(in.n, 2 * h, 2 * wd, in.c);
    auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); };
    for (int i = 0; i < in.n; ++i)
        for (int y = 0; y < 2 * h; ++y) {
            const double sy = 0.5 * y - 0.25;
            const int fy = int(std::floor(sy));
            const double ry = sy - fy;
            const int y0 = clampi(fy, h - 1), y1 = clampi(fy + 1, h - 1);
            for (int x = 0; x < 2 * wd; ++x) {
                const double sx = 0.5 * x - 0.25;
                const int fx = int(std::floor(sx));
                const double rx = sx - fx;
                const int x0 = clampi(fx, wd - 1), x1 = clampi(fx + 1, wd - 1);
                for (int ch = 0; ch < in.c; ++ch)
                    out.at(i, y, x, ch) = T((1 - ry) * (1 - rx)) * in.at(i, y0, x0, ch) +
                                          T((1 - ry) * rx) * in.at(i, y0, x1, ch) +
                                          T(ry * (1 - rx)) * in.at(i, y1, x0, ch) +
                                          T(ry * rx) * in.at(i, y1, x1, ch);
            }
        }
}

// Scatter-form adjoint of the bilinear upsampling. The parallel kernel uses a
// gather over a precomputed tap list; summation order per input element
// differs, so comparisons against this one use a tolerance.
template <typename T>
void upsample2x_bilinear_backward(const Tensor4<T>& gout, Tensor4<T>& gin) {
    const int h = gout.h / 2, wd = gout.w / 2;
    gin.resize(gout.n, h, wd, gout.c);
    auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); };
    for (int i = 0; i < gout.n; ++i)
        for (int y = 0; y < gout.h; ++y) {
            const double sy = 0.5 * y - 0.25;
            const int fy = int(std::floor(sy));
            const double ry = sy - fy;
            const int y0 = clampi(fy, h - 1), y1 = clampi(fy + 1, h - 1);
            for (int x = 0; x < gout.w; ++x) {
                const double sx = 0.5 * x - 0.25;
                const int fx = int(std::floor(sx));
                const double rx = sx - fx;
                const int x0 = clampi(fx, wd - 1), x1 = clampi(fx + 1, wd - 1);
                for (int ch = 0; ch < gout.c; ++ch) {
                    const T g = gout.at(i, y, x, ch);
                    gin.at(i, y0, x0, ch) += T((1 - ry) * (1 - rx)) * g;
                    gin.at(i, y0, x1, ch) += T((1 - ry) * rx) * g;
                    gin.at(i, y1, x0, ch) += T(ry * (1 - rx)) * g;
                    gin.at(i, y1, x1, ch) += T(ry * rx) * g;
                }
            }
        }
}

template <typename T>
void bn_batch_stats(const Tensor4<T>& in, std::vector<double>& mean, std::vector<double>& var) {
    const int c = in.c;
    const size_t plane = size_t(in.h) * in.w;
    mean.assign(c, 0.0);
    var.assign(c, 0.0);
    std::vector<double> ps(c), pq(c);
    for (int i = 0; i < in.n; ++i) {
        std::fill(ps.begin(), ps.end(), 0.0);
        std::fill(pq.begin(), pq.end(), 0.0);
        for (size_t p = 0; p < plane; ++p)
            for (int ch = 0; ch < c; ++ch) {
                const double x = double(in.v[in.offset(i, 0, 0) + p * c + ch]);
                ps[ch] += x;
                pq[ch] += x * x;
            }
        for (int ch = 0; ch < c; ++ch) {
            mean[ch] += ps[ch];
            var[ch] += pq[ch];
        }
    }
    const double m = double(in.n) * double(plane);
    for (int ch = 0; ch < c; ++ch) {
        mean[ch] /= m;
        var[ch] = var[ch] / m - mean[ch] * mean[ch];
        if (var[ch] < 0) var[ch] = 0;
    }
}

template <typename T>
void softmax_channels(const Tensor4<T>& in, Tensor4<T>& out) {
    const int c = in.c;
    out.resize(in.n, in.h, in.w, c);
    const size_t npix = size_t(in.n) * in.h * in.w;
    for (size_t p = 0; p < npix; ++p) {
        const T* ip = in.data() + p * c;
        T* op = out.data() + p * c;
        T mx = ip[0];
        for (int ch = 1; ch < c; ++ch) mx = std::max(mx, ip[ch]);
        T sum = T(0);
        for (int ch = 0; ch < c; ++ch) {
            op[ch] = std::exp(ip[ch] - mx);
            sum += op[ch];
        }
        const T inv = T(1) / sum;
        for (int ch = 0; ch < c; ++ch) op[ch] *= inv;
    }
}

}  // namespace unaah::serial
