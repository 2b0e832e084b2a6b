#pragma once

#include <cstddef>
#include <vector>

namespace dss::kernels {

/// Grid kernels backing the solver and the Lyapunov monitor.  Every kernel has
/// a serial reference path and an OpenMP path selected by `parallel`; the two
/// are bitwise identical because sums are reduced chunk-by-chunk in a fixed
/// order, never in thread-completion order.

inline constexpr std::size_t chunk_size = 1024;

/// Fixed-order chunked sum of a contiguous array.
double chunked_sum(const double* a, std::size_t len, bool parallel);

/// Composite trapezoid rule for uniformly spaced samples with spacing dz.
double trapezoid(const std::vector<double>& samples, double dz, bool parallel);

/// First-order upwind step on a (rows x n) row-major field: for j >= 1,
/// out(j,i) = x(j,i) - cfl[i]*(x(j,i) - x(j-1,i)).  Row 0 is copied through;
/// the caller owns the boundary condition.
void upwind_update(const std::vector<double>& x, std::vector<double>& out,
                   std::size_t rows, std::size_t n,
                   const std::vector<double>& cfl, bool parallel);

/// Spatial finite differences column-wise on a (rows x n) field: central in
/// the interior, one-sided at both ends.
void gradient(const std::vector<double>& x, std::vector<double>& out,
              std::size_t rows, std::size_t n, double dz, bool parallel);

/// samples[j] = w[j] * sum_i p_diag[i] * x(j,i)^2  (diagonal quadratic form
/// per grid row, scaled by a per-row weight).
void weighted_quadratic_rows(const std::vector<double>& x, std::size_t rows,
                             std::size_t n, const std::vector<double>& p_diag,
                             const std::vector<double>& w,
                             std::vector<double>& samples, bool parallel);

/// max over rows of the Euclidean row norm.
double max_row_norm(const std::vector<double>& x, std::size_t rows,
                    std::size_t n, bool parallel);

/// max over all entries of |x|.
double max_abs(const std::vector<double>& x, bool parallel);

} // namespace dss::kernels
