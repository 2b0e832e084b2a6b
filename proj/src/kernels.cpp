#include "dss/kernels.hpp"

#include "dss/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dss::kernels {

static double sum_chunk(const double* a, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += a[i];
    return s;
}

double chunked_sum(const double* a, std::size_t len, bool parallel) {
    const std::size_t nchunks = (len + chunk_size - 1) / chunk_size;
    if (nchunks <= 1) return sum_chunk(a, len);
    std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && nchunks > 4)
#endif
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * chunk_size;
        const std::size_t n = std::min(chunk_size, len - lo);
        partial[static_cast<std::size_t>(c)] = sum_chunk(a + lo, n);
    }
    (void)parallel;
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double trapezoid(const std::vector<double>& samples, double dz, bool parallel) {
    if (samples.size() < 2)
        throw InvalidInput("trapezoid needs at least 2 samples");
    const double full = chunked_sum(samples.data(), samples.size(), parallel);
    return dz * (full - 0.5 * (samples.front() + samples.back()));
}

void upwind_update(const std::vector<double>& x, std::vector<double>& out,
                   std::size_t rows, std::size_t n,
                   const std::vector<double>& cfl, bool parallel) {
    if (x.size() != rows * n || cfl.size() != n)
        throw InvalidInput("upwind_update: shape mismatch");
    out.resize(rows * n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && rows > 256)
#endif
    for (long long j = 1; j < static_cast<long long>(rows); ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * n;
        for (std::size_t i = 0; i < n; ++i)
            out[row + i] = x[row + i] - cfl[i] * (x[row + i] - x[row - n + i]);
    }
    (void)parallel;
}

void gradient(const std::vector<double>& x, std::vector<double>& out,
              std::size_t rows, std::size_t n, double dz, bool parallel) {
    if (x.size() != rows * n || rows < 2)
        throw InvalidInput("gradient: shape mismatch");
    out.resize(rows * n);
    const std::size_t last = (rows - 1) * n;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (x[n + i] - x[i]) / dz;
        out[last + i] = (x[last + i] - x[last - n + i]) / dz;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && rows > 256)
#endif
    for (long long j = 1; j < static_cast<long long>(rows) - 1; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * n;
        for (std::size_t i = 0; i < n; ++i)
            out[row + i] = (x[row + n + i] - x[row - n + i]) / (2.0 * dz);
    }
    (void)parallel;
}

void weighted_quadratic_rows(const std::vector<double>& x, std::size_t rows,
                             std::size_t n, const std::vector<double>& p_diag,
                             const std::vector<double>& w,
                             std::vector<double>& samples, bool parallel) {
    if (x.size() != rows * n || p_diag.size() != n || w.size() != rows)
        throw InvalidInput("weighted_quadratic_rows: shape mismatch");
    samples.resize(rows);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && rows > 256)
#endif
    for (long long j = 0; j < static_cast<long long>(rows); ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * n;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += p_diag[i] * x[row + i] * x[row + i];
        samples[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] * s;
    }
    (void)parallel;
}

double max_row_norm(const std::vector<double>& x, std::size_t rows,
                    std::size_t n, bool parallel) {
    if (x.size() != rows * n)
        throw InvalidInput("max_row_norm: shape mismatch");
    double best = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : best) \
    if (parallel && rows > 256)
#endif
    for (long long j = 0; j < static_cast<long long>(rows); ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * n;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[row + i] * x[row + i];
        best = std::max(best, s);
    }
    (void)parallel;
    return std::sqrt(best);
}

double max_abs(const std::vector<double>& x, bool parallel) {
    double best = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : best) \
    if (parallel && x.size() > 4096)
#endif
    for (long long i = 0; i < static_cast<long long>(x.size()); ++i)
        best = std::max(best, std::fabs(x[static_cast<std::size_t>(i)]));
    (void)parallel;
    return best;
}

} // namespace dss::kernels
