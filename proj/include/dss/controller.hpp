#pragma once

#include "dss/system.hpp"

#include <vector>

namespace dss {

/// One exact variation-of-constants step of eta' = -alpha(eta - y) with y
/// interpolated linearly between y_now and y_next over [t, t+dt].  Passing
/// y_next = y_now gives the zero-order-hold step used for quantized
/// measurements (the quantizer output is piecewise constant anyway).
std::vector<double> advance_eta(const std::vector<double>& eta,
                                const std::vector<double>& y_now,
                                const std::vector<double>& y_next,
                                double alpha, double dt);

/// u = K eta.
std::vector<double> control(const ControllerParams& ctl,
                            const std::vector<double>& eta);

} // namespace dss
