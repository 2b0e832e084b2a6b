#include "dss/quantizer.hpp"

#include "dss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dss {

QuantizerSpec QuantizerSpec::make_floor(double ell) {
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw InvalidInput("floor quantizer needs finite ell > 0");
    QuantizerSpec s;
    s.kind = QuantizerKind::floor_kind;
    s.ell = ell;
    s.delta_q = 1.0 / ell;
    s.M_q = std::numeric_limits<double>::infinity();
    s.N = 0;
    return s;
}

QuantizerSpec QuantizerSpec::make_range(double delta_q, double M_q) {
    if (!(delta_q > 0.0) || !(M_q > 0.0) || !std::isfinite(delta_q) ||
        !std::isfinite(M_q))
        throw InvalidInput("range quantizer needs finite delta_q > 0, M_q > 0");
    if (M_q < delta_q)
        throw InvalidInput("range quantizer needs M_q >= delta_q");
    QuantizerSpec s;
    s.kind = QuantizerKind::range_sensitivity;
    s.delta_q = delta_q;
    s.M_q = M_q;
    auto half_cells = static_cast<long long>(std::ceil(M_q / delta_q - 1e-12));
    s.N = (half_cells % 2 == 0) ? half_cells + 1 : half_cells;
    return s;
}

QuantizedValue quantize(const QuantizerSpec& spec, const std::vector<double>& x) {
    for (double v : x)
        if (!std::isfinite(v))
            throw InvalidInput("quantize: non-finite input");
    QuantizedValue out;
    out.value.resize(x.size());
    if (spec.kind == QuantizerKind::floor_kind) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            double y = spec.ell * x[i];
            // snap within a few ulps of a lattice point so that requantizing
            // a quantized value cannot slip into the next cell down
            const double r = std::nearbyint(y);
            if (std::fabs(y - r) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                        std::max(1.0, std::fabs(y)))
                y = r;
            out.value[i] = std::floor(y) / spec.ell;
        }
        return out;
    }
    // lattice of N cell centers at -N*dq + (2k+1)*dq, k = 0..N-1; the middle
    // cell straddles 0 so q(0) = 0 exactly
    const double dq = spec.delta_q;
    const double half = static_cast<double>(spec.N) * dq;
    const long long mid = (spec.N - 1) / 2;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::fabs(x[i]) > spec.M_q) out.overflow = true;
        auto k = static_cast<long long>(std::floor((x[i] + half) / (2.0 * dq)));
        k = std::clamp(k, 0LL, spec.N - 1);
        out.value[i] = 2.0 * dq * static_cast<double>(k - mid);
    }
    return out;
}

double error_bound(const QuantizerSpec& spec, std::size_t n) {
    return std::sqrt(static_cast<double>(n)) * spec.delta_q;
}

} // namespace dss
