#include "dss/solver.hpp"

#include "dss/controller.hpp"
#include "dss/errors.hpp"
#include "dss/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace dss {

std::vector<double> gradient_field(const FieldState& s, bool parallel) {
    std::vector<double> out;
    kernels::gradient(s.X, out, s.M + 1, s.n, s.dz(), parallel);
    return out;
}

HistoryBuffer::HistoryBuffer(std::size_t depth, long long first_step)
    : buf_(depth, 0.0), latest_(first_step - 1) {
    if (depth == 0) throw InvalidInput("history depth must be >= 1");
}

std::size_t HistoryBuffer::slot(long long k) const {
    const auto d = static_cast<long long>(buf_.size());
    long long r = k % d;
    if (r < 0) r += d;
    return static_cast<std::size_t>(r);
}

void HistoryBuffer::push(double v) {
    ++latest_;
    buf_[slot(latest_)] = v;
    count_ = std::min(count_ + 1, buf_.size());
}

double HistoryBuffer::at_step(long long k) const {
    if (k > latest_ || k <= latest_ - static_cast<long long>(count_))
        throw InvalidInput("history access outside retained window");
    return buf_[slot(k)];
}

double HistoryBuffer::at_time(double s) const {
    double fl = std::floor(s);
    double frac = s - fl;
    if (frac < 1e-9) {
        frac = 0.0;
    } else if (frac > 1.0 - 1e-9) {
        fl += 1.0;
        frac = 0.0;
    }
    const auto k = static_cast<long long>(fl);
    if (frac == 0.0) return at_step(k);
    return (1.0 - frac) * at_step(k) + frac * at_step(k + 1);
}

nlohmann::json HistoryBuffer::to_json() const {
    std::vector<double> values;
    values.reserve(count_);
    for (long long k = latest_ - static_cast<long long>(count_) + 1; k <= latest_; ++k)
        values.push_back(at_step(k));
    return {{"latest", latest_}, {"depth", buf_.size()}, {"values", values}};
}

HistoryBuffer HistoryBuffer::from_json(const nlohmann::json& j) {
    const auto depth = j.at("depth").get<std::size_t>();
    const auto latest = j.at("latest").get<long long>();
    const auto values = j.at("values").get<std::vector<double>>();
    if (values.size() > depth)
        throw ConfigError("history snapshot larger than its depth");
    HistoryBuffer h(depth, latest - static_cast<long long>(values.size()) + 1);
    for (double v : values) h.push(v);
    return h;
}

Solver::Solver(HyperbolicSystem sys, ControllerParams ctl, InitialProfile profile,
               SolverOptions opts)
    : sys_(std::move(sys)), ctl_(std::move(ctl)), profile_(std::move(profile)),
      opts_(opts) {
    const auto violations = validate(sys_, ctl_);
    if (!violations.empty()) throw ConfigError(violations.front());
    if (profile_.dim() != sys_.n)
        throw ConfigError("initial profile dimension does not match the system");
    if (opts_.M < 16) throw ConfigError("grid size M must be >= 16");
    dt_ = opts_.dt > 0.0 ? opts_.dt : 1.0 / (static_cast<double>(opts_.M) * sys_.lambda_max());
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ConfigError("dt must be > 0");

    state_.M = opts_.M;
    state_.n = sys_.n;
    state_.t = 0.0;
    state_.eta = ctl_.eta0;
    state_.X.assign((opts_.M + 1) * sys_.n, 0.0);
    const double dz = state_.dz();
    for (std::size_t j = 0; j <= opts_.M; ++j) {
        const auto row = profile_.eval(static_cast<double>(j) * dz);
        for (std::size_t i = 0; i < sys_.n; ++i) state_.X[j * sys_.n + i] = row[i];
    }

    if (opts_.mode == SolverMode::upwind) {
        cfl_.resize(sys_.n);
        for (std::size_t i = 0; i < sys_.n; ++i) {
            cfl_[i] = sys_.lambda[i] * dt_ / dz;
            if (cfl_[i] > 1.0 + 1e-12)
                throw ConfigError("upwind mode needs CFL = lambda*dt/dz <= 1");
        }
    } else {
        if (dt_ > 1.0 / sys_.lambda_max() + 1e-12)
            throw ConfigError("exact mode needs dt <= 1/lambda_max "
                              "(one step may not outrun the domain)");
        init_exact_();
    }

    compat_warning_ = !check_compatibility(sys_, ctl_, profile_).ok;
    check_finite_();
}

void Solver::init_exact_() {
    const std::size_t n = sys_.n;
    steps_per_cell_.resize(n);
    node_delay_.assign(n, 0);
    aligned_ = true;
    for (std::size_t i = 0; i < n; ++i) {
        steps_per_cell_[i] = state_.dz() / (sys_.lambda[i] * dt_);
        const double r = std::round(steps_per_cell_[i]);
        if (r >= 1.0 &&
            std::fabs(steps_per_cell_[i] - r) <= 1e-9 * std::max(1.0, r))
            node_delay_[i] = static_cast<long long>(r);
        else
            aligned_ = false;
    }

    hist_.clear();
    hist_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double full_delay = 1.0 / (sys_.lambda[i] * dt_);
        const auto depth = static_cast<std::size_t>(std::ceil(full_delay)) + 3;
        const long long first = -static_cast<long long>(depth) + 1;
        HistoryBuffer h(depth, first);
        for (long long k = first; k <= 0; ++k) {
            const double z = -sys_.lambda[i] * static_cast<double>(k) * dt_;
            h.push(profile_.eval(std::clamp(z, 0.0, 1.0))[i]);
        }
        hist_.push_back(std::move(h));
    }
}

std::vector<double> Solver::boundary_x1_(long long at_step) const {
    std::vector<double> x1(sys_.n);
    for (std::size_t i = 0; i < sys_.n; ++i) {
        if (aligned_) {
            x1[i] = hist_[i].at_step(at_step -
                                     node_delay_[i] * static_cast<long long>(state_.M));
        } else {
            const double delay = 1.0 / (sys_.lambda[i] * dt_);
            x1[i] = hist_[i].at_time(static_cast<double>(at_step) - delay);
        }
    }
    return x1;
}

void Solver::advance_core_(const std::vector<double>& y_now,
                           const std::vector<double>& y_next) {
    if (opts_.mode == SolverMode::exact) {
        const auto x1_next = boundary_x1_(step_ + 1);
        state_.eta = advance_eta(state_.eta, y_now, y_next, ctl_.alpha, dt_);
        const auto x0 = closed_loop_boundary(sys_, ctl_, x1_next, state_.eta);
        for (std::size_t i = 0; i < sys_.n; ++i) hist_[i].push(x0[i]);
        ++step_;
        state_.t = static_cast<double>(step_) * dt_;
        reconstruct_();
    } else {
        std::vector<double> next;
        kernels::upwind_update(state_.X, next, state_.M + 1, sys_.n, cfl_,
                               opts_.parallel);
        const std::size_t last = state_.M * sys_.n;
        std::vector<double> x1_next(next.begin() + static_cast<long long>(last),
                                    next.begin() + static_cast<long long>(last + sys_.n));
        state_.eta = advance_eta(state_.eta, y_now, y_next, ctl_.alpha, dt_);
        const auto x0 = closed_loop_boundary(sys_, ctl_, x1_next, state_.eta);
        for (std::size_t i = 0; i < sys_.n; ++i) next[i] = x0[i];
        state_.X = std::move(next);
        ++step_;
        state_.t = static_cast<double>(step_) * dt_;
    }
    check_finite_();
}

void Solver::step(const std::vector<double>& d_now,
                  const std::vector<double>& d_next) {
    if (d_now.size() != sys_.n || d_next.size() != sys_.n)
        throw InvalidInput("disturbance dimension mismatch");
    const auto x1_now = opts_.mode == SolverMode::exact
                            ? boundary_x1_(step_)
                            : std::vector<double>(state_.X.end() - static_cast<long long>(sys_.n),
                                                  state_.X.end());
    std::vector<double> y_now(sys_.n), y_next(sys_.n);
    for (std::size_t i = 0; i < sys_.n; ++i) y_now[i] = x1_now[i] + d_now[i];
    if (opts_.mode == SolverMode::exact) {
        const auto x1_next = boundary_x1_(step_ + 1);
        for (std::size_t i = 0; i < sys_.n; ++i) y_next[i] = x1_next[i] + d_next[i];
        advance_core_(y_now, y_next);
    } else {
        // the updated inflow sample is only known after the upwind sweep; use
        // the disturbance at t+dt with the pre-sweep boundary estimate, which
        // keeps the eta step explicit
        std::vector<double> nxt;
        kernels::upwind_update(state_.X, nxt, state_.M + 1, sys_.n, cfl_,
                               opts_.parallel);
        const std::size_t lastrow = state_.M * sys_.n;
        for (std::size_t i = 0; i < sys_.n; ++i)
            y_next[i] = nxt[lastrow + i] + d_next[i];
        state_.eta = advance_eta(state_.eta, y_now, y_next, ctl_.alpha, dt_);
        const std::vector<double> x1_next(nxt.begin() + static_cast<long long>(lastrow),
                                          nxt.begin() + static_cast<long long>(lastrow + sys_.n));
        const auto x0 = closed_loop_boundary(sys_, ctl_, x1_next, state_.eta);
        for (std::size_t i = 0; i < sys_.n; ++i) nxt[i] = x0[i];
        state_.X = std::move(nxt);
        ++step_;
        state_.t = static_cast<double>(step_) * dt_;
        check_finite_();
    }
}

void Solver::step_quantized(const QuantizerSpec& q) {
    const auto x1_now = opts_.mode == SolverMode::exact
                            ? boundary_x1_(step_)
                            : std::vector<double>(state_.X.end() - static_cast<long long>(sys_.n),
                                                  state_.X.end());
    const auto qv = quantize(q, x1_now);
    last_dq_.resize(sys_.n);
    for (std::size_t i = 0; i < sys_.n; ++i) last_dq_[i] = qv.value[i] - x1_now[i];
    last_overflow_ = qv.overflow;
    advance_core_(qv.value, qv.value);
}

void Solver::reconstruct_() {
    const std::size_t n = sys_.n;
    const auto rows = static_cast<long long>(state_.M) + 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (opts_.parallel && rows > 256)
#endif
    for (long long j = 0; j < rows; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double v;
            if (aligned_) {
                v = hist_[i].at_step(step_ - j * node_delay_[i]);
            } else {
                v = hist_[i].at_time(static_cast<double>(step_) -
                                     static_cast<double>(j) * steps_per_cell_[i]);
            }
            state_.X[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
}

void Solver::check_finite_() const {
    const double worst = std::max(kernels::max_abs(state_.X, opts_.parallel),
                                  vec_inf_norm(state_.eta));
    if (!std::isfinite(worst) || worst > blow_up_threshold)
        throw BlowUpError(state_.t,
                          "state magnitude left the sanity range at t = " +
                              std::to_string(state_.t));
}

Trace Solver::trace() const {
    Trace tr;
    tr.x1.resize(sys_.n);
    tr.x1_t.resize(sys_.n);
    tr.x0.resize(sys_.n);
    const std::size_t n = sys_.n;
    if (opts_.mode == SolverMode::exact) {
        tr.x1 = boundary_x1_(step_);
        for (std::size_t i = 0; i < n; ++i) {
            tr.x0[i] = hist_[i].at_step(step_);
            long long k;
            if (aligned_) {
                k = step_ - node_delay_[i] * static_cast<long long>(state_.M);
            } else {
                const double s =
                    static_cast<double>(step_) - 1.0 / (sys_.lambda[i] * dt_);
                k = static_cast<long long>(std::floor(s + 1e-9));
            }
            tr.x1_t[i] = (hist_[i].at_step(k) - hist_[i].at_step(k - 1)) / dt_;
        }
    } else {
        const std::size_t last = state_.M * n;
        for (std::size_t i = 0; i < n; ++i) {
            tr.x1[i] = state_.X[last + i];
            tr.x0[i] = state_.X[i];
            tr.x1_t[i] = -sys_.lambda[i] *
                         (state_.X[last + i] - state_.X[last - n + i]) / state_.dz();
        }
    }
    return tr;
}

std::vector<double> Solver::control_input() const {
    return control(ctl_, state_.eta);
}

nlohmann::json Solver::snapshot() const {
    nlohmann::json j;
    j["mode"] = opts_.mode == SolverMode::exact ? "exact" : "upwind";
    j["step"] = step_;
    j["dt"] = dt_;
    j["M"] = state_.M;
    j["eta"] = state_.eta;
    if (opts_.mode == SolverMode::exact) {
        j["hist"] = nlohmann::json::array();
        for (const auto& h : hist_) j["hist"].push_back(h.to_json());
    } else {
        j["X"] = state_.X;
    }
    return j;
}

Solver Solver::restore(HyperbolicSystem sys, ControllerParams ctl,
                       InitialProfile profile, SolverOptions opts,
                       const nlohmann::json& snap) {
    Solver s(std::move(sys), std::move(ctl), std::move(profile), opts);
    const std::string mode = snap.at("mode").get<std::string>();
    if ((mode == "exact") != (opts.mode == SolverMode::exact))
        throw ConfigError("snapshot mode does not match solver options");
    if (snap.at("M").get<std::size_t>() != s.state_.M ||
        std::fabs(snap.at("dt").get<double>() - s.dt_) > 1e-15)
        throw ConfigError("snapshot grid does not match solver options");
    s.step_ = snap.at("step").get<long long>();
    s.state_.t = static_cast<double>(s.step_) * s.dt_;
    s.state_.eta = snap.at("eta").get<std::vector<double>>();
    if (opts.mode == SolverMode::exact) {
        const auto& hs = snap.at("hist");
        if (hs.size() != s.sys_.n) throw ConfigError("snapshot history count");
        s.hist_.clear();
        for (const auto& hj : hs) s.hist_.push_back(HistoryBuffer::from_json(hj));
        s.reconstruct_();
    } else {
        s.state_.X = snap.at("X").get<std::vector<double>>();
        if (s.state_.X.size() != (s.state_.M + 1) * s.sys_.n)
            throw ConfigError("snapshot field size");
    }
    s.check_finite_();
    return s;
}

} // namespace dss
