#pragma once

#include <cstddef>
#include <vector>

namespace dss {

enum class QuantizerKind { range_sensitivity, floor_kind };

/// Static uniform quantizer.  The range-sensitivity kind maps each component
/// into one of N cells of width 2*delta_q centered on a symmetric lattice
/// covering [-M_q, M_q] (N odd, so 0 is a codeword); inputs outside the range
/// raise the overflow flag and clamp to the nearest in-range codeword.  The
/// floor kind is q(x) = floor(ell*x)/ell with one-sided error in [0, 1/ell),
/// so its sensitivity is delta_q = 1/ell and its range is unbounded.
struct QuantizerSpec {
    QuantizerKind kind = QuantizerKind::floor_kind;
    double delta_q = 0.0;
    double M_q = 0.0;   // +inf for the floor kind
    long long N = 0;    // per-axis codewords (odd); 0 for the floor kind
    double ell = 1.0;

    static QuantizerSpec make_floor(double ell);
    static QuantizerSpec make_range(double delta_q, double M_q);
};

struct QuantizedValue {
    std::vector<double> value;
    bool overflow = false;
};

QuantizedValue quantize(const QuantizerSpec& spec, const std::vector<double>& x);

/// Euclidean bound sqrt(n) * delta_q on the in-range quantization error.
double error_bound(const QuantizerSpec& spec, std::size_t n);

} // namespace dss
