#pragma once

#include "dss/certificate.hpp"
#include "dss/quantizer.hpp"
#include "dss/solver.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace dss {

/// One monitored point along a trajectory.
struct LyapunovSample {
    double t = 0.0;
    double V1 = 0.0, V2 = 0.0, V3 = 0.0, V = 0.0;
    double maxnorm = 0.0;   // max_z |X(z,t)| (Euclidean in components)
    double eta_norm = 0.0;  // |eta(t)|
    double x1_inf = 0.0;    // |X(1,t)|_inf
    bool in_SM = false;
    bool in_SDelta = false;
};

/// Uniformly sampled trajectory with everything the estimate checks consume.
struct TrajectoryLog {
    std::vector<LyapunovSample> samples;
    std::vector<double> d_norm;  // |d(t_k)| (quantization error norm when quantized)
    double dt = 0.0;
    double dz = 0.0;
    double mx0 = 0.0;        // ||X0||_H1^2 + |eta0 - X(1,0)|^2
    double init_combined = 0.0;  // 2(max_z|X0|^2 + |eta0|^2) + ||X0||_H1^2
};

struct CheckReport {
    std::string name;
    bool pass = false;
    bool applicable = true;
    double worst_margin = 0.0;        // smallest slack seen; negative = violated
    double first_violation = -1.0;    // time, or -1 if none
    nlohmann::json details;
};

/// ||X||_L2^2 + ||dX/dz||_L2^2 by trapezoid quadrature with finite-difference
/// gradients.
double h1_norm_sq(const std::vector<double>& X, std::size_t rows, std::size_t n,
                  double dz, bool parallel = false);

/// V1 + V2 + V3 with exponential weights, trapezoid quadrature for the
/// integral terms, plus the trajectory norms the checks need.
LyapunovSample eval_V(const FieldState& state, const CertificateParams& cert,
                      const DerivedConstants& dc, bool parallel = false);

/// Right side of the disturbance-to-state bound on max_z |X(z,t)|^2.
double dss_bound(const DerivedConstants& dc, double mx0, double t,
                 double dsup_sq);

/// Both sides of the norm-equivalence sandwich around V for one state.
CheckReport check_sandwich(const FieldState& state, const CertificateParams& cert,
                           const DerivedConstants& dc, bool parallel = false);

inline constexpr double default_c_tol = 10.0;

/// Forward-difference dissipation inequality dV/dt <= -sigma V + chi |d|^2.
CheckReport check_dissipation(const TrajectoryLog& traj, const DerivedConstants& dc,
                              double c_tol = default_c_tol);

/// Integrated decay envelope V(t) <= exp(-sigma t) V(0) + (chi/sigma) sup|d|^2.
CheckReport check_decay_envelope(const TrajectoryLog& traj,
                                 const DerivedConstants& dc,
                                 double c_tol = default_c_tol);

/// Pointwise disturbance-to-state estimate on max_z |X(z,t)|^2.
CheckReport check_dss(const TrajectoryLog& traj, const DerivedConstants& dc,
                      double c_tol = default_c_tol);

/// Combined-state estimate on max_z |X|^2 + |eta|^2 with gains C1, C2.
CheckReport check_iss_combined(const TrajectoryLog& traj,
                               const DerivedConstants& dc,
                               double c_tol = default_c_tol);

/// Sublevel thresholds of V for the quantized-loop analysis.
struct InvariantSetLevels {
    double sm = 0.0;         // trapping level (infinite for the floor kind)
    double sdelta = 0.0;     // ultimate level
    double gamma_eps = 0.0;  // ultimate bound on max_z |X|^2
    double M_q = 0.0;
};

InvariantSetLevels set_levels(const DerivedConstants& dc, std::size_t n,
                              const QuantizerSpec& spec, double eps);

/// Quantized-loop claims: the trapping level is never exceeded, the ultimate
/// set is reached at a finite time T_eps, and past T_eps the field obeys the
/// ultimate bound while the measured boundary stays in quantizer range.
CheckReport check_invariant_sets(const TrajectoryLog& traj,
                                 const DerivedConstants& dc,
                                 const InvariantSetLevels& levels,
                                 double c_tol = default_c_tol);

/// max_z |X(z)|^2 <= |X(0)|^2 + ||X||_H1^2 for sampled profiles.
CheckReport check_prop1(const std::vector<double>& X, std::size_t rows,
                        std::size_t n);

/// |X(1)|^2 <= 2 ||X||_H1^2 for sampled profiles.
CheckReport check_trace_ineq(const std::vector<double>& X, std::size_t rows,
                             std::size_t n);

} // namespace dss
