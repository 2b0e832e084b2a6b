#include "dss/system.hpp"

#include "dss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace dss {

double HyperbolicSystem::lambda_min() const {
    if (lambda.empty()) throw InvalidInput("empty Lambda");
    return *std::min_element(lambda.begin(), lambda.end());
}

double HyperbolicSystem::lambda_max() const {
    if (lambda.empty()) throw InvalidInput("empty Lambda");
    return *std::max_element(lambda.begin(), lambda.end());
}

InitialProfile InitialProfile::analytic(
    std::size_t n, std::function<std::vector<double>(double)> f) {
    InitialProfile p;
    p.n_ = n;
    p.f_ = std::move(f);
    return p;
}

InitialProfile InitialProfile::sampled(std::vector<std::vector<double>> samples) {
    if (samples.size() < 2)
        throw InvalidInput("sampled profile needs at least 2 samples");
    InitialProfile p;
    p.n_ = samples.front().size();
    for (const auto& row : samples)
        if (row.size() != p.n_)
            throw InvalidInput("sampled profile rows have inconsistent length");
    p.samples_ = std::move(samples);
    return p;
}

InitialProfile InitialProfile::zero(std::size_t n) {
    return analytic(n, [n](double) { return std::vector<double>(n, 0.0); });
}

std::vector<double> InitialProfile::eval(double z) const {
    z = std::clamp(z, 0.0, 1.0);
    if (f_) {
        auto v = f_(z);
        if (v.size() != n_)
            throw InvalidInput("analytic profile returned wrong dimension");
        for (double x : v)
            if (!std::isfinite(x))
                throw InvalidInput("analytic profile returned non-finite value");
        return v;
    }
    const std::size_t nseg = samples_.size() - 1;
    const double s = z * static_cast<double>(nseg);
    std::size_t k = static_cast<std::size_t>(s);
    if (k >= nseg) k = nseg - 1;
    const double frac = s - static_cast<double>(k);
    std::vector<double> v(n_);
    for (std::size_t i = 0; i < n_; ++i)
        v[i] = (1.0 - frac) * samples_[k][i] + frac * samples_[k + 1][i];
    return v;
}

std::vector<double> closed_loop_boundary(const HyperbolicSystem& sys,
                                         const ControllerParams& ctl,
                                         const std::vector<double>& x1,
                                         const std::vector<double>& eta) {
    if (x1.size() != sys.n || eta.size() != sys.n)
        throw InvalidInput("closed_loop_boundary: dimension mismatch");
    auto hx = mat_vec(sys.H, x1);
    auto bku = mat_vec(sys.B, mat_vec(ctl.K, eta));
    for (std::size_t i = 0; i < sys.n; ++i) hx[i] += bku[i];
    return hx;
}

CompatibilityReport check_compatibility(const HyperbolicSystem& sys,
                                        const ControllerParams& ctl,
                                        const InitialProfile& profile,
                                        double tol) {
    const auto x0 = profile.eval(0.0);
    const auto x1 = profile.eval(1.0);
    const auto rhs = closed_loop_boundary(sys, ctl, x1, ctl.eta0);
    std::vector<double> r(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) r[i] = x0[i] - rhs[i];
    CompatibilityReport rep;
    rep.residual = vec_norm(r);
    rep.ok = rep.residual <= tol;
    return rep;
}

std::vector<std::string> validate(const HyperbolicSystem& sys,
                                  const ControllerParams& ctl) {
    std::vector<std::string> v;
    if (sys.n == 0) v.push_back("system.n: must be >= 1");
    if (sys.m == 0) v.push_back("system.m: must be >= 1");
    if (sys.lambda.size() != sys.n)
        v.push_back("system.Lambda: needs exactly n diagonal entries");
    for (double l : sys.lambda)
        if (!(l > 0.0) || !std::isfinite(l)) {
            v.push_back("system.Lambda: entries must be finite and > 0");
            break;
        }
    if (sys.H.rows() != sys.n || sys.H.cols() != sys.n)
        v.push_back("system.H: must be n x n");
    if (sys.B.rows() != sys.n || sys.B.cols() != sys.m)
        v.push_back("system.B: must be n x m");
    if (!sys.H.finite()) v.push_back("system.H: non-finite entry");
    if (!sys.B.finite()) v.push_back("system.B: non-finite entry");
    if (ctl.K.rows() != sys.m || ctl.K.cols() != sys.n)
        v.push_back("controller.K: must be m x n");
    if (!ctl.K.finite()) v.push_back("controller.K: non-finite entry");
    if (!(ctl.alpha > 0.0) || !std::isfinite(ctl.alpha))
        v.push_back("controller.alpha: must be finite and > 0");
    if (ctl.eta0.size() != sys.n)
        v.push_back("controller.eta0: must have length n");
    for (double e : ctl.eta0)
        if (!std::isfinite(e)) {
            v.push_back("controller.eta0: non-finite entry");
            break;
        }
    return v;
}

std::vector<double> suggest_eta0(const HyperbolicSystem& sys,
                                 const ControllerParams& ctl,
                                 const InitialProfile& profile) {
    const auto x0 = profile.eval(0.0);
    const auto hx1 = mat_vec(sys.H, profile.eval(1.0));
    std::vector<double> rhs(sys.n);
    for (std::size_t i = 0; i < sys.n; ++i) rhs[i] = x0[i] - hx1[i];
    // normal equations for BK eta = rhs; fine at these dimensions
    const Mat bk = sys.B * ctl.K;
    const Mat gram = bk.transpose() * bk;
    auto bt_rhs = mat_vec(bk.transpose(), rhs);
    // tiny ridge keeps the solve defined when BK is rank-deficient
    Mat reg = gram;
    for (std::size_t i = 0; i < reg.rows(); ++i) reg(i, i) += 1e-12;
    return solve_linear(reg, bt_rhs);
}

} // namespace dss
