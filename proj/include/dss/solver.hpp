#pragma once

#include "dss/quantizer.hpp"
#include "dss/system.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace dss {

enum class SolverMode { exact, upwind };

/// Sampled closed-loop state: X on a uniform grid over [0,1] plus the
/// controller state.
struct FieldState {
    double t = 0.0;
    std::size_t M = 0;             // grid intervals; M+1 rows
    std::size_t n = 0;
    std::vector<double> X;         // (M+1) x n row-major
    std::vector<double> eta;

    double dz() const { return 1.0 / static_cast<double>(M); }
    double at(std::size_t j, std::size_t i) const { return X[j * n + i]; }
};

/// Spatial gradient of the field: central differences in the interior,
/// one-sided at the ends.
std::vector<double> gradient_field(const FieldState& s, bool parallel = false);

struct Trace {
    std::vector<double> x1;    // X(1,t)
    std::vector<double> x1_t;  // d/dt X(1,t)
    std::vector<double> x0;    // X(0,t)
};

/// Ring buffer of per-step boundary samples X_i(0, k*dt).  Negative steps are
/// pre-filled from the initial profile along backward characteristics.
class HistoryBuffer {
public:
    HistoryBuffer() = default;
    HistoryBuffer(std::size_t depth, long long first_step);

    void push(double v);
    double at_step(long long k) const;
    /// Linear interpolation at fractional step s, snapping to the nearest
    /// slot when within 1e-9 of it.
    double at_time(double s) const;

    long long latest_step() const { return latest_; }
    std::size_t depth() const { return buf_.size(); }

    nlohmann::json to_json() const;
    static HistoryBuffer from_json(const nlohmann::json& j);

private:
    std::size_t slot(long long k) const;
    std::vector<double> buf_;
    long long latest_ = -1;
    std::size_t count_ = 0;
};

struct SolverOptions {
    std::size_t M = 200;
    double dt = 0.0;               // 0 selects dz / lambda_max
    SolverMode mode = SolverMode::exact;
    bool parallel = false;
};

/// Closed-loop evolution of the transport PDE with the dynamic boundary
/// controller.  Exact mode realizes each component as a delay line fed by the
/// boundary map (no numerical diffusion); upwind mode is the first-order
/// finite-difference oracle used for cross-validation.
class Solver {
public:
    Solver(HyperbolicSystem sys, ControllerParams ctl, InitialProfile profile,
           SolverOptions opts);

    const FieldState& state() const { return state_; }
    double t() const { return state_.t; }
    double dt() const { return dt_; }
    long long step_index() const { return step_; }
    bool grid_aligned() const { return aligned_; }
    SolverMode mode() const { return opts_.mode; }
    bool compat_warning() const { return compat_warning_; }

    /// Advance one step with additive measurement disturbance sampled at the
    /// two step endpoints.
    void step(const std::vector<double>& d_now, const std::vector<double>& d_next);

    /// Advance one step with a quantized measurement (zero-order hold).
    void step_quantized(const QuantizerSpec& q);

    /// Quantization error d_q = q(X(1,t)) - X(1,t) of the last quantized step.
    const std::vector<double>& last_dq() const { return last_dq_; }
    bool last_overflow() const { return last_overflow_; }

    Trace trace() const;
    std::vector<double> control_input() const;

    nlohmann::json snapshot() const;
    static Solver restore(HyperbolicSystem sys, ControllerParams ctl,
                          InitialProfile profile, SolverOptions opts,
                          const nlohmann::json& snap);

private:
    void init_exact_();
    void reconstruct_();
    void check_finite_() const;
    std::vector<double> boundary_x1_(long long at_step) const;
    void advance_core_(const std::vector<double>& y_now,
                       const std::vector<double>& y_next);

    HyperbolicSystem sys_;
    ControllerParams ctl_;
    InitialProfile profile_;
    SolverOptions opts_;
    double dt_ = 0.0;
    long long step_ = 0;
    bool aligned_ = false;
    bool compat_warning_ = false;
    FieldState state_;
    std::vector<HistoryBuffer> hist_;       // exact mode
    std::vector<long long> node_delay_;     // steps per grid cell, aligned mode
    std::vector<double> steps_per_cell_;    // dz/(lambda_i dt)
    std::vector<double> cfl_;               // upwind mode
    std::vector<double> last_dq_;
    bool last_overflow_ = false;
};

inline constexpr double blow_up_threshold = 1e12;

} // namespace dss
