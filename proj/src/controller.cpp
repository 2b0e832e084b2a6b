#include "dss/controller.hpp"

#include "dss/errors.hpp"
#include "dss/mat.hpp"

#include <cmath>

namespace dss {

std::vector<double> advance_eta(const std::vector<double>& eta,
                                const std::vector<double>& y_now,
                                const std::vector<double>& y_next,
                                double alpha, double dt) {
    if (eta.size() != y_now.size() || eta.size() != y_next.size())
        throw InvalidInput("advance_eta: dimension mismatch");
    if (!(dt > 0.0)) throw InvalidInput("advance_eta: dt must be > 0");
    const double x = alpha * dt;
    const double decay = std::exp(-x);
    // eta+ = decay*eta + c0*y_now + c1*y_next with
    //   c0 = (1-decay)(1 + 1/x) - 1,  c1 = 1 - (1-decay)/x;
    // the series branch avoids the 1 - (1-decay)/x cancellation for tiny x
    double c0, c1;
    if (x < 1e-5) {
        c0 = 0.5 * x - x * x / 3.0;
        c1 = 0.5 * x - x * x / 6.0;
    } else {
        const double one_m = -std::expm1(-x);
        c0 = one_m * (1.0 + 1.0 / x) - 1.0;
        c1 = 1.0 - one_m / x;
    }
    std::vector<double> out(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i)
        out[i] = decay * eta[i] + c0 * y_now[i] + c1 * y_next[i];
    return out;
}

std::vector<double> control(const ControllerParams& ctl,
                            const std::vector<double>& eta) {
    return mat_vec(ctl.K, eta);
}

} // namespace dss
