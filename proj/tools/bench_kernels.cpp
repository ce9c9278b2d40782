// Times the OpenMP kernels against the serial reference implementations.
//
//   bench_kernels [size] [reps]
//
// size is the square spatial extent (default 128), reps the timed iteration
// count (default 5).

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "unaah/kernels.hpp"
#include "unaah/rng.hpp"
#include "unaah/serial_kernels.hpp"
#include "unaah/tensor.hpp"

using namespace unaah;

namespace {

double now_ms() {
    using clk = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clk::now().time_since_epoch()).count();
}

template <typename F>
double time_best(F&& fn, int reps) {
    double best = 1e30;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        fn();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

void fill_random(std::vector<float>& v, Rng& rng) {
    for (auto& x : v) x = float(rng.uniform(-1.0, 1.0));
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-24s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    const int size = argc > 1 ? std::atoi(argv[1]) : 128;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
    const int n = 4, cin = 16, cout = 32;

    std::printf("threads=%d  input %dx%dx%dx%d  conv %d->%d\n", omp_get_max_threads(), n, size,
                size, cin, cin, cout);

    Rng rng(42);
    Tensor4<float> x(n, size, size, cin);
    fill_random(x.v, rng);
    std::vector<float> w(size_t(3) * 3 * cin * cout), b(cout);
    fill_random(w, rng);
    fill_random(b, rng);

    Tensor4<float> ys, yp;
    const double conv_s =
        time_best([&] { serial::conv2d_forward(x, w, &b, 3, 3, cout, ys); }, reps);
    const double conv_p =
        time_best([&] { kernels::conv2d_forward(x, w, &b, 3, 3, cout, yp); }, reps);
    report("conv3x3 forward", conv_s, conv_p);
    if (ys.v != yp.v) {
        std::printf("MISMATCH: conv forward results differ\n");
        return 1;
    }

    Tensor4<float> gw_in = yp;
    std::vector<float> gw_s, gw_p, gb_s, gb_p;
    const double gp_s = time_best(
        [&] { serial::conv2d_backward_params(x, gw_in, 3, 3, gw_s, &gb_s); }, reps);
    const double gp_p = time_best(
        [&] { kernels::conv2d_backward_params(x, gw_in, 3, 3, gw_p, &gb_p); }, reps);
    report("conv3x3 grad params", gp_s, gp_p);
    if (gw_s != gw_p || gb_s != gb_p) {
        std::printf("MISMATCH: conv param gradients differ\n");
        return 1;
    }

    Tensor4<float> us, up;
    const double up_s = time_best([&] { serial::upsample2x_bilinear_forward(x, us); }, reps);
    const double up_p = time_best([&] { kernels::upsample2x_bilinear_forward(x, up); }, reps);
    report("bilinear up2x", up_s, up_p);
    if (us.v != up.v) {
        std::printf("MISMATCH: upsample results differ\n");
        return 1;
    }

    std::vector<double> mean_s, var_s, mean_p, var_p;
    const double bn_s = time_best([&] { serial::bn_batch_stats(x, mean_s, var_s); }, reps);
    const double bn_p = time_best([&] { kernels::bn_batch_stats(x, mean_p, var_p); }, reps);
    report("bn batch stats", bn_s, bn_p);
    if (mean_s != mean_p || var_s != var_p) {
        std::printf("MISMATCH: bn statistics differ\n");
        return 1;
    }

    std::printf("all kernel outputs match the serial reference\n");
    return 0;
}
