// Timing comparison of the serial reference kernels against the OpenMP
// variants.  Build target only; not part of the test suite.
#include "dss/kernels.hpp"
#include "dss/rng.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

using clk = std::chrono::steady_clock;
namespace k = dss::kernels;

namespace {

double run_ms(int reps, const auto& fn) {
    fn();  // warm-up
    const auto t0 = clk::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = clk::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-24s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t rows = argc > 1 ? std::stoul(argv[1]) : 2'000'000;
    const std::size_t n = 4;
    const int reps = 20;

    dss::Rng rng(7);
    std::vector<double> x(rows * n), w(rows), p(n, 1.0), samples(rows);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    for (auto& v : w) v = rng.uniform(0.5, 1.5);

    volatile double sink = 0.0;

    report("chunked_sum",
           run_ms(reps, [&] { sink = k::chunked_sum(x.data(), x.size(), false); }),
           run_ms(reps, [&] { sink = k::chunked_sum(x.data(), x.size(), true); }));

    report("weighted_quadratic_rows",
           run_ms(reps, [&] {
               k::weighted_quadratic_rows(x, rows, n, p, w, samples, false);
               sink = samples[0];
           }),
           run_ms(reps, [&] {
               k::weighted_quadratic_rows(x, rows, n, p, w, samples, true);
               sink = samples[0];
           }));

    report("max_row_norm",
           run_ms(reps, [&] { sink = k::max_row_norm(x, rows, n, false); }),
           run_ms(reps, [&] { sink = k::max_row_norm(x, rows, n, true); }));

    std::vector<double> grad(rows * n);
    report("gradient",
           run_ms(reps, [&] {
               k::gradient(x, grad, rows, n, 1.0 / double(rows - 1), false);
               sink = grad[0];
           }),
           run_ms(reps, [&] {
               k::gradient(x, grad, rows, n, 1.0 / double(rows - 1), true);
               sink = grad[0];
           }));

    std::vector<double> next(rows * n), cfl(n, 0.5);
    report("upwind_update",
           run_ms(reps, [&] {
               k::upwind_update(x, next, rows, n, cfl, false);
               sink = next[rows * n - 1];
           }),
           run_ms(reps, [&] {
               k::upwind_update(x, next, rows, n, cfl, true);
               sink = next[rows * n - 1];
           }));

    (void)sink;
    return 0;
}
