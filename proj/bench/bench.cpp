// Kernel timings: OpenMP kernels against their serial references.

#include "tcomp/observation.hpp"
#include "tcomp/oracle.hpp"
#include "tcomp/rng.hpp"
#include "tcomp/tensor.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>

namespace {

using namespace tcomp;

/// Best of `reps` wall-clock runs, in milliseconds.
double time_ms(const std::function<void()>& fn, int reps = 3)
{
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    }
    return best;
}

Tensor gaussian(const Shape& dims, Rng& rng)
{
    Tensor t = Tensor::zeros(dims);
    for (double& v : t.values())
        v = rng.normal();
    return t;
}

void bench_mode_multiply(Rng& rng)
{
    std::printf("%-34s %10s %10s %10s\n", "mode_multiply", "kernel_ms", "serial_ms", "speedup");
    for (std::size_t d : {32, 64, 96}) {
        const Tensor a = gaussian({d, d, d}, rng);
        Matrix b(static_cast<Eigen::Index>(d), 5);
        for (Eigen::Index i = 0; i < b.size(); ++i)
            b.data()[i] = rng.normal();
        for (std::size_t j = 0; j < 3; ++j) {
            const double fast = time_ms([&] { (void)mode_multiply(a, j, b); });
            const double slow = time_ms([&] { (void)oracle::mode_multiply_naive(a, j, b); }, 1);
            std::printf("  d=%-3zu mode=%zu r=5%19s %10.2f %10.2f %10.1fx\n", d, j, "", fast, slow, slow / fast);
        }
    }
}

void bench_n_hat(Rng& rng)
{
    std::printf("%-34s %10s %10s %10s\n", "n_hat vs pairwise", "grouped_ms", "pairs_ms", "speedup");
    const Tensor t = gaussian({20, 20, 20}, rng);
    for (std::size_t n : {100, 300, 500}) {
        const Dataset data = sample_dataset(t, n, NoiseSpec{0.1}, rng);
        const double fast = time_ms([&] { (void)n_hat(data, 0); });
        const double slow = time_ms([&] { (void)oracle::n_hat_pairwise(data, 0); }, 1);
        std::printf("  n=%-5zu%26s %10.3f %10.2f %10.1fx\n", n, "", fast, slow, slow / fast);
    }

    std::printf("%-34s %10s %10s %10s\n", "n_hat threads", "1 thr_ms", "max_ms", "speedup");
    const Tensor big = gaussian({64, 64, 64}, rng);
    const Dataset data = sample_dataset(big, 200000, NoiseSpec{0.1}, rng);
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const double one = time_ms([&] { (void)n_hat(data, 1); });
    omp_set_num_threads(max_threads);
    const double many = time_ms([&] { (void)n_hat(data, 1); });
    std::printf("  d=64 n=200000 threads=%-3d%15s %10.2f %10.2f %10.1fx\n", max_threads, "", one, many, one / many);
}

} // namespace

int main()
{
    Rng rng(2024);
    std::printf("OpenMP max threads: %d\n", omp_get_max_threads());
    bench_mode_multiply(rng);
    bench_n_hat(rng);
    return 0;
}
