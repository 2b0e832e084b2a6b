#pragma once

#include "dss/rng.hpp"

#include <cstdint>
#include <vector>

namespace dss {

enum class SignalKind { zero, constant, step, decaying, random_piecewise };

/// Essentially bounded disturbance d(t) in R^n.  `amplitude` is the Euclidean
/// norm of the active value, which keeps sup-norm bound checks sharp:
///   zero               d = 0
///   constant           d = amplitude * u          (u = (1,..,1)/sqrt(n))
///   step               d = 0 for t < onset, then amplitude * u
///   decaying           d = amplitude * exp(-rate t) * u
///   random_piecewise   d = amplitude * (uniform random unit vector), redrawn
///                      every `dwell` time units from a seeded stream
class Signal {
public:
    Signal() = default;
    Signal(SignalKind kind, std::size_t n, double amplitude = 0.0,
           double rate = 1.0, double onset = 1.0, double dwell = 0.05,
           std::uint64_t seed = 0);

    /// Value at time t (t >= 0).  Updates the running sup of |d|.
    std::vector<double> sample(double t);

    /// sup of |d(s)| over all sampled s so far; monotone nondecreasing.
    double running_sup() const { return running_sup_; }

    SignalKind kind() const { return kind_; }
    std::size_t dim() const { return n_; }

private:
    std::vector<double> value_at(double t) const;

    SignalKind kind_ = SignalKind::zero;
    std::size_t n_ = 0;
    double amplitude_ = 0.0;
    double rate_ = 1.0;
    double onset_ = 1.0;
    double dwell_ = 0.05;
    std::uint64_t seed_ = 0;
    double running_sup_ = 0.0;
};

} // namespace dss
