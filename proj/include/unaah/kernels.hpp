#pragma once

#include <omp.h>

#include <cmath>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "unaah/tensor.hpp"

// OpenMP-parallel compute kernels. Every kernel computes each output element
// with a fixed per-element operation order, and cross-item reductions are
// performed in index order, so results are bit-identical for any thread
// count. Serial counterparts used by the tests live in serial_kernels.hpp.
namespace unaah::kernels {

// ---------------------------------------------------------------------------
// convolution, stride 1, 'same' zero padding, weights [kh][kw][cin][cout]
// ---------------------------------------------------------------------------

template <typename T>
void conv2d_forward(const Tensor4<T>& in, const std::vector<T>& w,
                    const std::vector<std::type_identity_t<T>>* bias, int kh, int kw, int cout,
                    Tensor4<T>& out) {
    const int n = in.n, h = in.h, wd = in.w, cin = in.c;
    const int ph = kh / 2, pw = kw / 2;
    out.resize(n, h, wd, cout);
    const T* wp = w.data();
#pragma omp parallel
    {
        std::vector<T> acc(cout);
#pragma omp for collapse(2) schedule(static)
        for (int i = 0; i < n; ++i) {
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < wd; ++x) {
                    T* accp = acc.data();
                    if (bias) {
                        const T* bp = bias->data();
                        for (int co = 0; co < cout; ++co) accp[co] = bp[co];
                    } else {
                        for (int co = 0; co < cout; ++co) accp[co] = T(0);
                    }
                    for (int dy = 0; dy < kh; ++dy) {
                        const int yy = y + dy - ph;
                        if (yy < 0 || yy >= h) continue;
                        for (int dx = 0; dx < kw; ++dx) {
                            const int xx = x + dx - pw;
                            if (xx < 0 || xx >= wd) continue;
                            const T* ip = &in.v[in.offset(i, yy, xx)];
                            const T* wrow = wp + (size_t(dy * kw + dx) * cin) * cout;
                            for (int ci = 0; ci < cin; ++ci) {
                                const T a = ip[ci];
                                const T* wr = wrow + size_t(ci) * cout;
#pragma omp simd
                                for (int co = 0; co < cout; ++co) accp[co] += a * wr[co];
                            }
                        }
                    }
                    T* op = &out.v[out.offset(i, y, x)];
                    for (int co = 0; co < cout; ++co) op[co] = accp[co];
                }
            }
        }
    }
}

// Rotate the kernel 180 degrees and swap in/out channel axes; the adjoint of a
// stride-1 'same' convolution is a 'same' convolution with this kernel.
template <typename T>
std::vector<T> rotate_swap_weights(const std::vector<T>& w, int kh, int kw, int cin, int cout) {
    std::vector<T> wr(w.size());
    for (int dy = 0; dy < kh; ++dy)
        for (int dx = 0; dx < kw; ++dx) {
            const size_t src = size_t((kh - 1 - dy) * kw + (kw - 1 - dx)) * cin * cout;
            const size_t dst = size_t(dy * kw + dx) * cout * cin;
            for (int ci = 0; ci < cin; ++ci)
                for (int co = 0; co < cout; ++co)
                    wr[dst + size_t(co) * cin + ci] = w[src + size_t(ci) * cout + co];
        }
    return wr;
}

template <typename T>
void conv2d_backward_input(const Tensor4<T>& gout, const std::vector<T>& w, int kh, int kw,
                           int cin, Tensor4<T>& gin) {
    const std::vector<T> wr = rotate_swap_weights(w, kh, kw, cin, gout.c);
    conv2d_forward(gout, wr, nullptr, kh, kw, cin, gin);
}

// Weight/bias gradients. Each batch item is accumulated independently and the
// per-item partials are reduced in item order.
template <typename T>
void conv2d_backward_params(const Tensor4<T>& in, const Tensor4<T>& gout, int kh, int kw,
                            std::vector<T>& gw, std::vector<T>* gb) {
    const int n = in.n, h = in.h, wd = in.w, cin = in.c, cout = gout.c;
    const int ph = kh / 2, pw = kw / 2;
    const size_t wsz = size_t(kh) * kw * cin * cout;
    std::vector<T> per(size_t(n) * wsz, T(0));
    std::vector<T> perb(gb ? size_t(n) * cout : 0, T(0));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        T* gwi = &per[size_t(i) * wsz];
        T* gbi = gb ? &perb[size_t(i) * cout] : nullptr;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < wd; ++x) {
                const T* gop = &gout.v[gout.offset(i, y, x)];
                if (gbi)
                    for (int co = 0; co < cout; ++co) gbi[co] += gop[co];
                for (int dy = 0; dy < kh; ++dy) {
                    const int yy = y + dy - ph;
                    if (yy < 0 || yy >= h) continue;
                    for (int dx = 0; dx < kw; ++dx) {
                        const int xx = x + dx - pw;
                        if (xx < 0 || xx >= wd) continue;
                        const T* ip = &in.v[in.offset(i, yy, xx)];
                        T* gwrow = gwi + size_t(dy * kw + dx) * cin * cout;
                        for (int ci = 0; ci < cin; ++ci) {
                            const T a = ip[ci];
                            T* row = gwrow + size_t(ci) * cout;
#pragma omp simd
                            for (int co = 0; co < cout; ++co) row[co] += a * gop[co];
                        }
                    }
                }
            }
        }
    }
    gw.assign(wsz, T(0));
    for (int i = 0; i < n; ++i) {
        const T* gwi = &per[size_t(i) * wsz];
#pragma omp simd
        for (size_t k = 0; k < wsz; ++k) gw[k] += gwi[k];
    }
    if (gb) {
        gb->assign(cout, T(0));
        for (int i = 0; i < n; ++i) {
            const T* gbi = &perb[size_t(i) * cout];
            for (int co = 0; co < cout; ++co) (*gb)[co] += gbi[co];
        }
    }
}

// ---------------------------------------------------------------------------
// transposed convolution 2x2, stride 2 (each output pixel reads exactly one
// input pixel), weights [2][2][cin][cout]
// ---------------------------------------------------------------------------

template <typename T>
void tconv2x2_forward(const Tensor4<T>& in, const std::vector<T>& w,
                      const std::vector<std::type_identity_t<T>>* bias, int cout,
                      Tensor4<T>& out) {
    const int n = in.n, h = in.h, wd = in.w, cin = in.c;
    out.resize(n, h * 2, wd * 2, cout);
#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int y = 0; y < 2 * h; ++y) {
            const int sy = y / 2, dy = y % 2;
            for (int x = 0; x < 2 * wd; ++x) {
                const int sx = x / 2, dx = x % 2;
                const T* ip = &in.v[in.offset(i, sy, sx)];
                const T* wrow = &w[size_t(dy * 2 + dx) * cin * cout];
                T* op = &out.v[out.offset(i, y, x)];
                if (bias) {
                    const T* bp = bias->data();
                    for (int co = 0; co < cout; ++co) op[co] = bp[co];
                } else {
                    for (int co = 0; co < cout; ++co) op[co] = T(0);
                }
                for (int ci = 0; ci < cin; ++ci) {
                    const T a = ip[ci];
                    const T* wr = wrow + size_t(ci) * cout;
#pragma omp simd
                    for (int co = 0; co < cout; ++co) op[co] += a * wr[co];
                }
            }
        }
    }
}

template <typename T>
void tconv2x2_backward_input(const Tensor4<T>& gout, const std::vector<T>& w, int cin,
                             Tensor4<T>& gin) {
    const int n = gout.n, h2 = gout.h, w2 = gout.w, cout = gout.c;
    gin.resize(n, h2 / 2, w2 / 2, cin);
#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int y = 0; y < h2 / 2; ++y) {
            for (int x = 0; x < w2 / 2; ++x) {
                T* gp = &gin.v[gin.offset(i, y, x)];
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        const T* gop = &gout.v[gout.offset(i, 2 * y + dy, 2 * x + dx)];
                        const T* wrow = &w[size_t(dy * 2 + dx) * cin * cout];
                        for (int ci = 0; ci < cin; ++ci) {
                            const T* wr = wrow + size_t(ci) * cout;
                            T s = T(0);
                            for (int co = 0; co < cout; ++co) s += gop[co] * wr[co];
                            gp[ci] += s;
                        }
                    }
            }
        }
    }
}

template <typename T>
void tconv2x2_backward_params(const Tensor4<T>& in, const Tensor4<T>& gout, std::vector<T>& gw,
                              std::vector<T>* gb) {
    const int n = in.n, h = in.h, wd = in.w, cin = in.c, cout = gout.c;
    const size_t wsz = size_t(4) * cin * cout;
    std::vector<T> per(size_t(n) * wsz, T(0));
    std::vector<T> perb(gb ? size_t(n) * cout : 0, T(0));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        T* gwi = &per[size_t(i) * wsz];
        T* gbi = gb ? &perb[size_t(i) * cout] : nullptr;
        for (int y = 0; y < 2 * h; ++y) {
            const int sy = y / 2, dy = y % 2;
            for (int x = 0; x < 2 * wd; ++x) {
                const int sx = x / 2, dx = x % 2;
                const T* ip = &in.v[in.offset(i, sy, sx)];
                const T* gop = &gout.v[gout.offset(i, y, x)];
                if (gbi)
                    for (int co = 0; co < cout; ++co) gbi[co] += gop[co];
                T* gwrow = gwi + size_t(dy * 2 + dx) * cin * cout;
                for (int ci = 0; ci < cin; ++ci) {
                    const T a = ip[ci];
                    T* row = gwrow + size_t(ci) * cout;
#pragma omp simd
                    for (int co = 0; co < cout; ++co) row[co] += a * gop[co];
                }
            }
        }
    }
    gw.assign(wsz, T(0));
    for (int i = 0; i < n; ++i)
        for (size_t k = 0; k < wsz; ++k) gw[k] += per[size_t(i) * wsz + k];
    if (gb) {
        gb->assign(cout, T(0));
        for (int i = 0; i < n; ++i)
            for (int co = 0; co < cout; ++co) (*gb)[co] += perb[size_t(i) * cout + co];
    }
}

// ---------------------------------------------------------------------------
// 2x2 max pooling, stride 2
// ---------------------------------------------------------------------------

template <typename T>
void maxpool2x2_forward(const Tensor4<T>& in, Tensor4<T>& out, std::vector<int32_t>& argmax) {
    const int n = in.n, h = in.h, wd = in.w, c = in.c;
    out.resize(n, h / 2, wd / 2, c);
    argmax.assign(out.size(), 0);
#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int y = 0; y < h / 2; ++y) {
            for (int x = 0; x < wd / 2; ++x) {
                T* op = &out.v[out.offset(i, y, x)];
                int32_t* ap = &argmax[out.offset(i, y, x)];
                for (int ch = 0; ch < c; ++ch) {
                    T best = in.at(i, 2 * y, 2 * x, ch);
                    size_t bidx = in.offset(i, 2 * y, 2 * x) + ch;
                    // scan order fixed: ties keep the first candidate
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) {
                            const size_t idx = in.offset(i, 2 * y + dy, 2 * x + dx) + ch;
                            if (in.v[idx] > best) {
                                best = in.v[idx];
                                bidx = idx;
                            }
                        }
                    op[ch] = best;
                    ap[ch] = int32_t(bidx - in.offset(i, 0, 0));
                }
            }
        }
    }
}

template <typename T>
void maxpool2x2_backward(const Tensor4<T>& gout, const std::vector<int32_t>& argmax, int in_h,
                         int in_w, Tensor4<T>& gin) {
    const int n = gout.n, c = gout.c;
    gin.resize(n, in_h, in_w, c);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const size_t img = gin.offset(i, 0, 0);
        for (int y = 0; y < gout.h; ++y)
            for (int x = 0; x < gout.w; ++x) {
                const size_t o = gout.offset(i, y, x);
                for (int ch = 0; ch < c; ++ch) gin.v[img + argmax[o + ch]] += gout.v[o + ch];
            }
    }
}

// ---------------------------------------------------------------------------
// 2x bilinear upsampling (half-pixel-centre convention) and its adjoint
// ---------------------------------------------------------------------------

struct LinearTap {
    int i0, i1;
    double frac;  // weight of i1
};

inline LinearTap up2x_tap(int o, int in_len) {
    const double s = 0.5 * o - 0.25;
    const int f = int(std::floor(s));
    LinearTap t;
    t.frac = s - f;
    t.i0 = f < 0 ? 0 : (f >= in_len ? in_len - 1 : f);
    const int f1 = f + 1;
    t.i1 = f1 < 0 ? 0 : (f1 >= in_len ? in_len - 1 : f1);
    return t;
}

template <typename T>
void upsample2x_bilinear_forward(const Tensor4<T>& in, Tensor4<T>& out) {
    const int n = in.n, h = in.h, wd = in.w, c = in.c;
    out.resize(n, 2 * h, 2 * wd, c);
#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int y = 0; y < 2 * h; ++y) {
            const LinearTap ty = up2x_tap(y, h);
            for (int x = 0; x < 2 * wd; ++x) {
                const LinearTap tx = up2x_tap(x, wd);
                const T* p00 = &in.v[in.offset(i, ty.i0, tx.i0)];
                const T* p01 = &in.v[in.offset(i, ty.i0, tx.i1)];
                const T* p10 = &in.v[in.offset(i, ty.i1, tx.i0)];
                const T* p11 = &in.v[in.offset(i, ty.i1, tx.i1)];
                const T w00 = T((1 - ty.frac) * (1 - tx.frac));
                const T w01 = T((1 - ty.frac) * tx.frac);
                const T w10 = T(ty.frac * (1 - tx.frac));
                const T w11 = T(ty.frac * tx.frac);
                T* op = &out.v[out.offset(i, y, x)];
#pragma omp simd
                for (int ch = 0; ch < c; ++ch)
                    op[ch] = w00 * p00[ch] + w01 * p01[ch] + w10 * p10[ch] + w11 * p11[ch];
            }
        }
    }
}

// Adjoint in gather form: every input element sums the output taps that
// reference it, so no two threads write the same location.
template <typename T>
void upsample2x_bilinear_backward(const Tensor4<T>& gout, Tensor4<T>& gin) {
    const int n = gout.n, h = gout.h / 2, wd = gout.w / 2, c = gout.c;
    gin.resize(n, h, wd, c);
    auto taps_for = [](int i, int in_len, int out_len, int* os, double* ws) {
        int cnt = 0;
        const int lo = std::max(0, 2 * i - 2), hi = std::min(out_len - 1, 2 * i + 3);
        for (int o = lo; o <= hi; ++o) {
            const LinearTap t = up2x_tap(o, in_len);
            double w = 0;
            if (t.i0 == i) w += 1 - t.frac;
            if (t.i1 == i) w += t.frac;
            if (w != 0) {
                os[cnt] = o;
                ws[cnt] = w;
                ++cnt;
            }
        }
        return cnt;
    };
#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int y = 0; y < h; ++y) {
            int oy[6];
            double wy[6];
            const int ny = taps_for(y, h, 2 * h, oy, wy);
            for (int x = 0; x < wd; ++x) {
                int ox[6];
                double wx[6];
                const int nx = taps_for(x, wd, 2 * wd, ox, wx);
                T* gp = &gin.v[gin.offset(i, y, x)];
                for (int a = 0; a < ny; ++a)
                    for (int b = 0; b < nx; ++b) {
                        const T wgt = T(wy[a] * wx[b]);
                        const T* gop = &gout.v[gout.offset(i, oy[a], ox[b])];
#pragma omp simd
                        for (int ch = 0; ch < c; ++ch) gp[ch] += wgt * gop[ch];
                    }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// batch normalization (per-channel over N*H*W)
// ---------------------------------------------------------------------------

// Per-item partial sums are reduced in item order; double accumulators keep
// the statistics stable for both float and double tensors.
template <typename T>
void bn_batch_stats(const Tensor4<T>& in, std::vector<double>& mean, std::vector<double>& var) {
    const int n = in.n, c = in.c;
    const size_t plane = size_t(in.h) * in.w;
    std::vector<double> psum(size_t(n) * c, 0.0), psq(size_t(n) * c, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double* ps = &psum[size_t(i) * c];
        double* pq = &psq[size_t(i) * c];
        const T* base = &in.v[in.offset(i, 0, 0)];
        for (size_t p = 0; p < plane; ++p) {
            const T* px = base + p * c;
            for (int ch = 0; ch < c; ++ch) {
                const double x = double(px[ch]);
                ps[ch] += x;
                pq[ch] += x * x;
            }
        }
    }
    mean.assign(c, 0.0);
    var.assign(c, 0.0);
    for (int i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch) {
            mean[ch] += psum[size_t(i) * c + ch];
            var[ch] += psq[size_t(i) * c + ch];
        }
    const double m = double(n) * double(plane);
    for (int ch = 0; ch < c; ++ch) {
        mean[ch] /= m;
        var[ch] = var[ch] / m - mean[ch] * mean[ch];
        if (var[ch] < 0) var[ch] = 0;
    }
}

template <typename T>
void bn_normalize(const Tensor4<T>& in, const std::vector<double>& mean,
                  const std::vector<double>& invstd, const std::vector<T>& gamma,
                  const std::vector<T>& beta, Tensor4<T>& out) {
    const int n = in.n, c = in.c;
    const size_t plane = size_t(in.h) * in.w;
    out.resize(n, in.h, in.w, c);
    std::vector<T> scale(c), shift(c);
    for (int ch = 0; ch < c; ++ch) {
        scale[ch] = T(double(gamma[ch]) * invstd[ch]);
        shift[ch] = T(double(beta[ch]) - double(gamma[ch]) * invstd[ch] * mean[ch]);
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const T* ip = &in.v[in.offset(i, 0, 0)];
        T* op = &out.v[out.offset(i, 0, 0)];
        for (size_t p = 0; p < plane; ++p) {
            const T* px = ip + p * c;
            T* py = op + p * c;
#pragma omp simd
            for (int ch = 0; ch < c; ++ch) py[ch] = scale[ch] * px[ch] + shift[ch];
        }
    }
}

template <typename T>
void bn_backward(const Tensor4<T>& in, const Tensor4<T>& gout, const std::vector<double>& mean,
                 const std::vector<double>& invstd, const std::vector<T>& gamma, Tensor4<T>& gin,
                 std::vector<T>& dgamma, std::vector<T>& dbeta) {
    const int n = in.n, c = in.c;
    const size_t plane = size_t(in.h) * in.w;
    const double m = double(n) * double(plane);
    std::vector<double> pg(size_t(n) * c, 0.0), pgx(size_t(n) * c, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double* sg = &pg[size_t(i) * c];
        double* sgx = &pgx[size_t(i) * c];
        const T* ip = &in.v[in.offset(i, 0, 0)];
        const T* gp = &gout.v[gout.offset(i, 0, 0)];
        for (size_t p = 0; p < plane; ++p)
            for (int ch = 0; ch < c; ++ch) {
                const double g = double(gp[p * c + ch]);
                const double xh = (double(ip[p * c + ch]) - mean[ch]) * invstd[ch];
                sg[ch] += g;
                sgx[ch] += g * xh;
            }
    }
    std::vector<double> sum_g(c, 0.0), sum_gx(c, 0.0);
    for (int i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch) {
            sum_g[ch] += pg[size_t(i) * c + ch];
            sum_gx[ch] += pgx[size_t(i) * c + ch];
        }
    dgamma.assign(c, T(0));
    dbeta.assign(c, T(0));
    for (int ch = 0; ch < c; ++ch) {
        dgamma[ch] = T(sum_gx[ch]);
        dbeta[ch] = T(sum_g[ch]);
    }
    gin.resize(n, in.h, in.w, c);
    std::vector<double> k0(c), k1(c), k2(c);
    for (int ch = 0; ch < c; ++ch) {
        const double gi = double(gamma[ch]) * invstd[ch];
        k0[ch] = gi;
        k1[ch] = gi * sum_g[ch] / m;
        k2[ch] = gi * sum_gx[ch] / m;
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const T* ip = &in.v[in.offset(i, 0, 0)];
        const T* gp = &gout.v[gout.offset(i, 0, 0)];
        T* op = &gin.v[gin.offset(i, 0, 0)];
        for (size_t p = 0; p < plane; ++p)
            for (int ch = 0; ch < c; ++ch) {
                const double xh = (double(ip[p * c + ch]) - mean[ch]) * invstd[ch];
                op[p * c + ch] = T(k0[ch] * double(gp[p * c + ch]) - k1[ch] - k2[ch] * xh);
            }
    }
}

// ---------------------------------------------------------------------------
// elementwise
// ---------------------------------------------------------------------------

template <typename T>
void relu_forward(Tensor4<T>& x) {
    T* p = x.data();
    const size_t sz = x.size();
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < (long long)sz; ++k)
        if (p[k] < T(0)) p[k] = T(0);
}

// uses the forward output: out > 0 iff pre-activation > 0
template <typename T>
void relu_backward(const Tensor4<T>& out, Tensor4<T>& grad) {
    const T* o = out.data();
    T* g = grad.data();
    const size_t sz = out.size();
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < (long long)sz; ++k)
        if (o[k] <= T(0)) g[k] = T(0);
}

template <typename T>
void add_inplace(Tensor4<T>& dst, const Tensor4<T>& src) {
    T* d = dst.data();
    const T* s = src.data();
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < (long long)dst.size(); ++k) d[k] += s[k];
}

template <typename T>
void concat_channels(const Tensor4<T>& a, const Tensor4<T>& b, Tensor4<T>& out) {
    out.resize(a.n, a.h, a.w, a.c + b.c);
    const size_t npix = size_t(a.n) * a.h * a.w;
#pragma omp parallel for schedule(static)
    for (long long p = 0; p < (long long)npix; ++p) {
        const T* pa = a.data() + size_t(p) * a.c;
        const T* pb = b.data() + size_t(p) * b.c;
        T* po = out.data() + size_t(p) * out.c;
        for (int ch = 0; ch < a.c; ++ch) po[ch] = pa[ch];
        for (int ch = 0; ch < b.c; ++ch) po[a.c + ch] = pb[ch];
    }
}

template <typename T>
void split_channels(const Tensor4<T>& g, int ca, Tensor4<T>& ga, Tensor4<T>& gb) {
    ga.resize(g.n, g.h, g.w, ca);
    gb.resize(g.n, g.h, g.w, g.c - ca);
    const size_t npix = size_t(g.n) * g.h * g.w;
#pragma omp parallel for schedule(static)
    for (long long p = 0; p < (long long)npix; ++p) {
        const T* pg = g.data() + size_t(p) * g.c;
        T* pa = ga.data() + size_t(p) * ca;
        T* pb = gb.data() + size_t(p) * gb.c;
        for (int ch = 0; ch < ca; ++ch) pa[ch] = pg[ch];
        for (int ch = 0; ch < gb.c; ++ch) pb[ch] = pg[ca + ch];
    }
}

// numerically stable per-pixel softmax over the channel axis
template <typename T>
void softmax_channels(const Tensor4<T>& in, Tensor4<T>& out) {
    const int c = in.c;
    out.resize(in.n, in.h, in.w, c);
    const size_t npix = size_t(in.n) * in.h * in.w;
#pragma omp parallel for schedule(static)
    for (long long p = 0; p < (long long)npix; ++p) {
        const T* ip = in.data() + size_t(p) * c;
        T* op = out.data() + size_t(p) * c;
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

}  // namespace unaah::kernels
