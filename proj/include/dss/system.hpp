#pragma once

#include "dss/mat.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dss {

/// Plant X_t + Lambda X_z = 0 on z in [0,1] with boundary input
/// X(0,t) = H X(1,t) + B u(t).  Lambda is diagonal with strictly positive
/// transport speeds, so every component moves left to right.
struct HyperbolicSystem {
    std::size_t n = 0;             // state dimension
    std::size_t m = 0;             // input dimension
    std::vector<double> lambda;    // diagonal of Lambda, length n
    Mat H;                         // n x n
    Mat B;                         // n x m

    double lambda_min() const;
    double lambda_max() const;
};

/// Dynamic compensator eta' = -alpha(eta - y), u = K eta.
struct ControllerParams {
    Mat K;                         // m x n
    double alpha = 1.0;
    std::vector<double> eta0;      // length n
};

/// Initial profile X0 : [0,1] -> R^n.  Either an analytic closure (exact
/// evaluation anywhere, used by the characteristics solver) or uniform grid
/// samples with linear interpolation.
class InitialProfile {
public:
    static InitialProfile analytic(std::size_t n,
                                   std::function<std::vector<double>(double)> f);
    /// samples.size() >= 2 rows of length n, uniformly spaced over [0,1].
    static InitialProfile sampled(std::vector<std::vector<double>> samples);
    static InitialProfile zero(std::size_t n);

    /// Evaluate at z; arguments outside [0,1] are clamped.
    std::vector<double> eval(double z) const;
    std::size_t dim() const { return n_; }
    bool is_analytic() const { return static_cast<bool>(f_); }

private:
    std::size_t n_ = 0;
    std::function<std::vector<double>(double)> f_;
    std::vector<std::vector<double>> samples_;
};

struct CompatibilityReport {
    bool ok = false;
    double residual = 0.0;
};

/// X(0,t) = H x1 + B K eta, the closed-loop boundary map.
std::vector<double> closed_loop_boundary(const HyperbolicSystem& sys,
                                         const ControllerParams& ctl,
                                         const std::vector<double>& x1,
                                         const std::vector<double>& eta);

/// Residual of the boundary compatibility condition
/// X0(0) = H X0(1) + B K eta0, which membership in the generator's domain
/// (and hence H1 regularity of solutions) requires.
CompatibilityReport check_compatibility(const HyperbolicSystem& sys,
                                        const ControllerParams& ctl,
                                        const InitialProfile& profile,
                                        double tol = 1e-9);

/// Invariant violations (empty list means valid).
std::vector<std::string> validate(const HyperbolicSystem& sys,
                                  const ControllerParams& ctl);

/// Least-squares eta0 solving B K eta0 = X0(0) - H X0(1); helps pick an
/// initial controller state compatible with a given profile.
std::vector<double> suggest_eta0(const HyperbolicSystem& sys,
                                 const ControllerParams& ctl,
                                 const InitialProfile& profile);

} // namespace dss
