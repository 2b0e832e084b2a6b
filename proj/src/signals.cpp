#include "dss/signals.hpp"

#include "dss/errors.hpp"
#include "dss/mat.hpp"

#include <algorithm>
#include <cmath>

namespace dss {

Signal::Signal(SignalKind kind, std::size_t n, double amplitude, double rate,
               double onset, double dwell, std::uint64_t seed)
    : kind_(kind), n_(n), amplitude_(amplitude), rate_(rate), onset_(onset),
      dwell_(dwell), seed_(seed) {
    if (n == 0) throw InvalidInput("signal dimension must be >= 1");
    if (kind == SignalKind::random_piecewise && !(dwell > 0.0))
        throw InvalidInput("random signal needs dwell > 0");
    if (!std::isfinite(amplitude) || amplitude < 0.0)
        throw InvalidInput("signal amplitude must be finite and >= 0");
}

static std::vector<double> uniform_direction(std::size_t n) {
    return std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

std::vector<double> Signal::value_at(double t) const {
    switch (kind_) {
    case SignalKind::zero:
        return std::vector<double>(n_, 0.0);
    case SignalKind::constant: {
        auto v = uniform_direction(n_);
        for (double& x : v) x *= amplitude_;
        return v;
    }
    case SignalKind::step: {
        if (t < onset_) return std::vector<double>(n_, 0.0);
        auto v = uniform_direction(n_);
        for (double& x : v) x *= amplitude_;
        return v;
    }
    case SignalKind::decaying: {
        auto v = uniform_direction(n_);
        const double a = amplitude_ * std::exp(-rate_ * t);
        for (double& x : v) x *= a;
        return v;
    }
    case SignalKind::random_piecewise: {
        // small forward nudge so interval boundaries hit by t = step*dt
        // round-off land in the interval they open
        const auto k = static_cast<std::uint64_t>(
            std::max(0.0, std::floor(t / dwell_ + 1e-9)));
        Rng r = Rng(seed_).fork(k);
        std::vector<double> v(n_);
        double norm = 0.0;
        do {
            for (std::size_t i = 0; i < n_; ++i) v[i] = r.normal();
            norm = vec_norm(v);
        } while (norm < 1e-8);
        for (double& x : v) x *= amplitude_ / norm;
        return v;
    }
    }
    throw InvalidInput("unknown signal kind");
}

std::vector<double> Signal::sample(double t) {
    if (t < 0.0) throw InvalidInput("signal sampled at negative time");
    auto v = value_at(t);
    running_sup_ = std::max(running_sup_, vec_norm(v));
    return v;
}

} // namespace dss
