#include "dss/lyapunov.hpp"

#include "dss/errors.hpp"
#include "dss/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dss {

static std::vector<double> exp_weights(std::size_t rows, double mu, double dz) {
    std::vector<double> w(rows);
    for (std::size_t j = 0; j < rows; ++j)
        w[j] = std::exp(-mu * static_cast<double>(j) * dz);
    return w;
}

double h1_norm_sq(const std::vector<double>& X, std::size_t rows, std::size_t n,
                  double dz, bool parallel) {
    const std::vector<double> ones_w(rows, 1.0);
    const std::vector<double> ones_p(n, 1.0);
    std::vector<double> samples;
    kernels::weighted_quadratic_rows(X, rows, n, ones_p, ones_w, samples, parallel);
    const double l2 = kernels::trapezoid(samples, dz, parallel);
    std::vector<double> grad;
    kernels::gradient(X, grad, rows, n, dz, parallel);
    kernels::weighted_quadratic_rows(grad, rows, n, ones_p, ones_w, samples, parallel);
    return l2 + kernels::trapezoid(samples, dz, parallel);
}

LyapunovSample eval_V(const FieldState& state, const CertificateParams& cert,
                      const DerivedConstants& dc, bool parallel) {
    const std::size_t rows = state.M + 1;
    const std::size_t n = state.n;
    if (dc.P1.rows() != n)
        throw InvalidInput("eval_V: constants do not match the state dimension");
    LyapunovSample s;
    s.t = state.t;

    std::vector<double> p1(n), p2(n);
    for (std::size_t i = 0; i < n; ++i) {
        p1[i] = dc.P1(i, i);
        p2[i] = dc.P2(i, i);
    }
    const auto w = exp_weights(rows, cert.mu, state.dz());
    std::vector<double> samples;
    kernels::weighted_quadratic_rows(state.X, rows, n, p1, w, samples, parallel);
    s.V1 = kernels::trapezoid(samples, state.dz(), parallel);
    std::vector<double> grad;
    kernels::gradient(state.X, grad, rows, n, state.dz(), parallel);
    kernels::weighted_quadratic_rows(grad, rows, n, p2, w, samples, parallel);
    s.V2 = kernels::trapezoid(samples, state.dz(), parallel);

    double v3 = 0.0, x1inf = 0.0;
    const std::size_t last = state.M * n;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = state.eta[i] - state.X[last + i];
        v3 += dc.P3(i, i) * r * r;
        x1inf = std::max(x1inf, std::fabs(state.X[last + i]));
    }
    s.V3 = v3;
    s.V = s.V1 + s.V2 + s.V3;
    s.maxnorm = kernels::max_row_norm(state.X, rows, n, parallel);
    s.eta_norm = vec_norm(state.eta);
    s.x1_inf = x1inf;
    return s;
}

double dss_bound(const DerivedConstants& dc, double mx0, double t,
                 double dsup_sq) {
    return dc.c_D / dc.cP_lo *
           (dc.cP_hi * std::exp(-dc.sigma * t) * mx0 +
            dc.chi / dc.sigma * dsup_sq);
}

CheckReport check_sandwich(const FieldState& state, const CertificateParams& cert,
                           const DerivedConstants& dc, bool parallel) {
    const auto s = eval_V(state, cert, dc, parallel);
    const std::size_t n = state.n;
    double r2 = 0.0;
    const std::size_t last = state.M * n;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = state.eta[i] - state.X[last + i];
        r2 += r * r;
    }
    const double b = h1_norm_sq(state.X, state.M + 1, n, state.dz(), parallel) + r2;
    const double scale = std::max({1.0, s.V, dc.cP_hi * b});
    const double tol = (1e-6 + 10.0 * state.dz() * state.dz()) * scale;
    const double lower_margin = s.V - dc.cP_lo * b;
    const double upper_margin = dc.cP_hi * b - s.V;
    CheckReport rep;
    rep.name = "sandwich";
    rep.worst_margin = std::min(lower_margin, upper_margin);
    rep.pass = rep.worst_margin >= -tol;
    rep.details = {{"lower_margin", lower_margin},
                   {"upper_margin", upper_margin},
                   {"tol", tol},
                   {"V", s.V},
                   {"h1_plus_offset", b}};
    return rep;
}

static double step_tol(double c_tol, double dt, double dz, double v) {
    return c_tol * (dt + dz) * (1.0 + v);
}

CheckReport check_dissipation(const TrajectoryLog& traj, const DerivedConstants& dc,
                              double c_tol) {
    CheckReport rep;
    rep.name = "dissipation";
    if (traj.samples.size() < 2 || traj.d_norm.size() != traj.samples.size())
        throw InvalidInput("dissipation check needs a sampled trajectory");
    double worst = std::numeric_limits<double>::infinity();
    double first = -1.0;
    std::size_t violations = 0;
    for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
        const auto& a = traj.samples[k];
        const auto& b = traj.samples[k + 1];
        const double lhs = (b.V - a.V) / traj.dt;
        // sup of |d| over the step interval; a left sample alone misses
        // disturbances switching on inside the interval
        const double dmax = std::max(traj.d_norm[k], traj.d_norm[k + 1]);
        const double rhs = -dc.sigma * a.V + dc.chi * dmax * dmax +
                           step_tol(c_tol, traj.dt, traj.dz, a.V);
        const double margin = rhs - lhs;
        if (margin < worst) worst = margin;
        if (margin < 0.0) {
            ++violations;
            if (first < 0.0) first = a.t;
        }
    }
    rep.worst_margin = worst;
    rep.first_violation = first;
    rep.pass = violations == 0;
    rep.details = {{"violations", violations}};
    return rep;
}

CheckReport check_decay_envelope(const TrajectoryLog& traj,
                                 const DerivedConstants& dc, double c_tol) {
    CheckReport rep;
    rep.name = "decay-envelope";
    if (traj.samples.empty() || traj.d_norm.size() != traj.samples.size())
        throw InvalidInput("decay envelope check needs a sampled trajectory");
    const double v0 = traj.samples.front().V;
    double dsup = 0.0;
    double worst = std::numeric_limits<double>::infinity();
    double first = -1.0;
    std::size_t violations = 0;
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        dsup = std::max(dsup, traj.d_norm[k]);
        const auto& s = traj.samples[k];
        const double rhs = std::exp(-dc.sigma * s.t) * v0 +
                           dc.chi / dc.sigma * dsup * dsup +
                           step_tol(c_tol, traj.dt, traj.dz, s.V);
        const double margin = rhs - s.V;
        if (margin < worst) worst = margin;
        if (margin < 0.0) {
            ++violations;
            if (first < 0.0) first = s.t;
        }
    }
    rep.worst_margin = worst;
    rep.first_violation = first;
    rep.pass = violations == 0;
    rep.details = {{"violations", violations}};
    return rep;
}

CheckReport check_dss(const TrajectoryLog& traj, const DerivedConstants& dc,
                      double c_tol) {
    CheckReport rep;
    rep.name = "dss";
    if (traj.samples.empty() || traj.d_norm.size() != traj.samples.size())
        throw InvalidInput("dss check needs a sampled trajectory");
    double dsup = 0.0;
    double worst = std::numeric_limits<double>::infinity();
    double first = -1.0;
    std::size_t violations = 0;
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        dsup = std::max(dsup, traj.d_norm[k]);
        const auto& s = traj.samples[k];
        const double rhs = dss_bound(dc, traj.mx0, s.t, dsup * dsup) +
                           step_tol(c_tol, traj.dt, traj.dz, s.V);
        const double margin = rhs - s.maxnorm * s.maxnorm;
        if (margin < worst) worst = margin;
        if (margin < 0.0) {
            ++violations;
            if (first < 0.0) first = s.t;
        }
    }
    rep.worst_margin = worst;
    rep.first_violation = first;
    rep.pass = violations == 0;
    rep.details = {{"violations", violations}};
    return rep;
}

CheckReport check_iss_combined(const TrajectoryLog& traj,
                               const DerivedConstants& dc, double c_tol) {
    CheckReport rep;
    rep.name = "iss-combined";
    if (traj.samples.empty() || traj.d_norm.size() != traj.samples.size())
        throw InvalidInput("iss check needs a sampled trajectory");
    double dsup = 0.0;
    double worst = std::numeric_limits<double>::infinity();
    double first = -1.0;
    std::size_t violations = 0;
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        dsup = std::max(dsup, traj.d_norm[k]);
        const auto& s = traj.samples[k];
        const double lhs = s.maxnorm * s.maxnorm + s.eta_norm * s.eta_norm;
        const double rhs = dc.C1 * dsup * dsup +
                           dc.C2 * std::exp(-dc.sigma * s.t) * traj.init_combined +
                           step_tol(c_tol, traj.dt, traj.dz, s.V);
        const double margin = rhs - lhs;
        if (margin < worst) worst = margin;
        if (margin < 0.0) {
            ++violations;
            if (first < 0.0) first = s.t;
        }
    }
    rep.worst_margin = worst;
    rep.first_violation = first;
    rep.pass = violations == 0;
    rep.details = {{"violations", violations}};
    return rep;
}

InvariantSetLevels set_levels(const DerivedConstants& dc, std::size_t n,
                              const QuantizerSpec& spec, double eps) {
    if (!(eps > 0.0)) throw InvalidInput("set_levels needs eps > 0");
    InvariantSetLevels lv;
    lv.M_q = spec.M_q;
    lv.sm = std::isinf(spec.M_q)
                ? std::numeric_limits<double>::infinity()
                : dc.cP_lo / dc.c_D * spec.M_q * spec.M_q;
    lv.sdelta = static_cast<double>(n) * dc.chi / dc.sigma * spec.delta_q *
                spec.delta_q * (1.0 + eps);
    lv.gamma_eps = ultimate_bound(dc, n, spec.delta_q, eps);
    return lv;
}

CheckReport check_invariant_sets(const TrajectoryLog& traj,
                                 const DerivedConstants& dc,
                                 const InvariantSetLevels& levels,
                                 double c_tol) {
    CheckReport rep;
    rep.name = "invariant-sets";
    if (traj.samples.empty())
        throw InvalidInput("invariant set check needs a sampled trajectory");
    if (traj.samples.front().V > levels.sm) {
        rep.applicable = false;
        rep.pass = false;
        rep.details = {{"reason", "initial state outside the trapping set"}};
        return rep;
    }
    double t_eps = -1.0;
    bool sm_ok = true, range_ok = true, ultimate_ok = true;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.samples) {
        const double tol = step_tol(c_tol, traj.dt, traj.dz, s.V);
        if (s.V > levels.sm + tol) sm_ok = false;
        if (s.x1_inf > levels.M_q) range_ok = false;
        if (t_eps < 0.0 && s.V <= levels.sdelta) t_eps = s.t;
        if (t_eps >= 0.0 && s.t >= t_eps) {
            const double margin = levels.gamma_eps + tol - s.maxnorm * s.maxnorm;
            if (margin < worst) worst = margin;
            if (margin < 0.0) ultimate_ok = false;
        }
    }
    rep.pass = sm_ok && range_ok && ultimate_ok && t_eps >= 0.0;
    rep.worst_margin = worst;
    rep.details = {{"T_eps", t_eps},
                   {"SM_ok", sm_ok},
                   {"range_ok", range_ok},
                   {"ultimate_ok", ultimate_ok}};
    return rep;
}

static CheckReport profile_ineq(const std::vector<double>& X, std::size_t rows,
                                std::size_t n, bool prop1) {
    if (rows < 16) throw InvalidInput("profile checks need at least 16 samples");
    if (X.size() != rows * n) throw InvalidInput("profile shape mismatch");
    const double dz = 1.0 / static_cast<double>(rows - 1);
    const double h1 = h1_norm_sq(X, rows, n, dz);
    double maxsq = 0.0, end0 = 0.0, end1 = 0.0;
    for (std::size_t j = 0; j < rows; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += X[j * n + i] * X[j * n + i];
        maxsq = std::max(maxsq, s);
        if (j == 0) end0 = s;
        if (j == rows - 1) end1 = s;
    }
    const double lhs = prop1 ? maxsq : end1;
    const double rhs = prop1 ? end0 + h1 : 2.0 * h1;
    const double tol = 10.0 * dz * dz * (1.0 + rhs);
    CheckReport rep;
    rep.name = prop1 ? "max-vs-h1" : "right-trace";
    rep.worst_margin = rhs - lhs;
    rep.pass = rep.worst_margin >= -tol;
    rep.details = {{"lhs", lhs}, {"rhs", rhs}, {"tol", tol}};
    return rep;
}

CheckReport check_prop1(const std::vector<double>& X, std::size_t rows,
                        std::size_t n) {
    return profile_ineq(X, rows, n, true);
}

CheckReport check_trace_ineq(const std::vector<double>& X, std::size_t rows,
                             std::size_t n) {
    return profile_ineq(X, rows, n, false);
}

} // namespace dss
