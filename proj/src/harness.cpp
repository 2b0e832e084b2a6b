#include "dss/harness.hpp"

#include "dss/errors.hpp"
#include "dss/signals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>

namespace dss {

using nlohmann::json;

namespace {

const std::set<std::string> known_checks = {
    "sandwich", "dissipation", "decay-envelope", "dss", "iss-combined",
    "invariant-sets"};

std::vector<std::string> default_checks(MeasurementKind mk) {
    if (mk == MeasurementKind::quantized)
        return {"sandwich", "dissipation", "invariant-sets"};
    return {"sandwich", "dissipation", "decay-envelope", "dss", "iss-combined"};
}

void append_num(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    line += buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& header) {
        out_.open(path);
        if (!out_) throw ConfigError("cannot open output file: " + path.string());
        out_ << header << '\n';
    }
    void row(double t, std::initializer_list<const std::vector<double>*> groups,
             const std::vector<double>& extra = {}) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", t);
        std::string line = buf;
        for (const auto* g : groups)
            for (double v : *g) append_num(line, v);
        for (double v : extra) append_num(line, v);
        out_ << line << '\n';
    }
    void raw(const std::string& line) { out_ << line << '\n'; }

private:
    std::ofstream out_;
};

std::string field_header(std::size_t n) {
    std::string h = "t,z";
    for (std::size_t i = 1; i <= n; ++i) h += ",X_" + std::to_string(i);
    return h;
}

std::string boundary_header(std::size_t n, std::size_t m) {
    std::string h = "t";
    for (std::size_t i = 1; i <= n; ++i) h += ",X1_" + std::to_string(i);
    for (std::size_t i = 1; i <= n; ++i) h += ",eta_" + std::to_string(i);
    for (std::size_t i = 1; i <= m; ++i) h += ",u_" + std::to_string(i);
    for (std::size_t i = 1; i <= n; ++i) h += ",d_" + std::to_string(i);
    return h;
}

json report_json(const CheckReport& r) {
    json j{{"pass", r.pass},
           {"applicable", r.applicable},
           {"worst_margin", r.worst_margin},
           {"first_violation", r.first_violation}};
    if (!r.details.is_null()) j["details"] = r.details;
    return j;
}

double h1_of_state(const FieldState& s) {
    return h1_norm_sq(s.X, s.M + 1, s.n, s.dz());
}

} // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg_in, const RunOptions& opts) {
    ExperimentConfig cfg = cfg_in;
    if (opts.has_seed_override) cfg.seed = opts.seed_override;
    std::vector<std::string> checks =
        opts.has_checks_override ? opts.checks_override : cfg.checks;
    if (checks.empty()) checks = default_checks(cfg.measurement);
    for (const auto& c : checks)
        if (!known_checks.count(c)) throw ConfigError("unknown check: " + c);
    const auto want = [&checks](const char* name) {
        return std::find(checks.begin(), checks.end(), name) != checks.end();
    };

    RunArtifacts art;
    art.summary["seed"] = cfg.seed;
    art.summary["blow_up"] = false;

    const auto violations = validate(cfg.sys, cfg.ctl);
    if (!violations.empty()) {
        std::string msg = "invalid system/controller:";
        for (const auto& v : violations) msg += " " + v;
        throw ConfigError(msg);
    }

    std::filesystem::path out_dir;
    const bool writing = !opts.out_dir.empty();
    if (writing) {
        out_dir = opts.out_dir;
        std::filesystem::create_directories(out_dir);
    }
    const auto finish = [&](int code) {
        art.exit_code = code;
        if (writing) {
            std::ofstream s(out_dir / "summary.json");
            s << art.summary.dump(2) << '\n';
        }
        return art;
    };

    // Certificate.
    CertificateParams cert;
    if (cfg.cert_search) {
        std::optional<double> fix_alpha;
        if (!cfg.alpha_auto) fix_alpha = cfg.ctl.alpha;
        const auto res = search_certificate(cfg.sys, cfg.ctl, cfg.search_budget,
                                            cfg.seed, fix_alpha);
        art.summary["certificate_feasible"] = res.feasible;
        if (!res.feasible) {
            art.summary["error"] = "certificate search infeasible";
            art.summary["best_damping_norm"] = res.best_norm;
            art.summary["best_omega_min_eig"] = res.best_min_eig;
            return finish(1);
        }
        cert = res.cert;
    } else {
        cert = cfg.cert_explicit;
        if (!cfg.alpha_auto && std::abs(cert.alpha - cfg.ctl.alpha) > 1e-12)
            throw ConfigError("explicit certificate alpha disagrees with the controller");
    }
    if (cfg.alpha_auto) cfg.ctl.alpha = cert.alpha;

    DerivedConstants dc;
    try {
        dc = derive_constants(cfg.sys, cfg.ctl, cert, cfg.chi_reading,
                              !cfg.cert_nominal);
    } catch (const CertificateInfeasible& e) {
        art.summary["certificate_feasible"] = false;
        art.summary["error"] = e.what();
        return finish(1);
    }
    const auto rep_a = check_13a(cfg.sys, cfg.ctl, cert);
    const auto rep_b = check_13b(cfg.sys, cfg.ctl, cert);
    art.summary["certificate_mode"] =
        cfg.cert_search ? "search" : (cfg.cert_nominal ? "nominal" : "explicit");
    art.summary["certificate_feasible"] = rep_a.holds && rep_b.holds;
    art.summary["certificate_verified"] = rep_a.holds && rep_b.holds;
    art.certificate = certificate_report(cfg.sys, cert, dc, rep_a, rep_b);
    if (writing) {
        std::ofstream c(out_dir / "certificate.json");
        c << art.certificate.dump(2) << '\n';
    }

    if (cfg.eta0_auto)
        cfg.ctl.eta0 = suggest_eta0(cfg.sys, cfg.ctl, cfg.profile);
    const auto compat = check_compatibility(cfg.sys, cfg.ctl, cfg.profile);
    art.summary["compatibility_residual"] = compat.residual;

    // Simulation.
    Solver solver(cfg.sys, cfg.ctl, cfg.profile, cfg.grid);
    const double dt = solver.dt();
    const std::size_t nsteps =
        static_cast<std::size_t>(std::ceil(cfg.horizon / dt - 1e-9));
    const std::size_t nsamples = nsteps + 1;
    const std::size_t snap_every = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.field_stride / dt)));

    const bool quantized = cfg.measurement == MeasurementKind::quantized;
    Signal dist;
    if (!quantized)
        dist = Signal(cfg.dist_kind, cfg.sys.n, cfg.dist_amplitude, cfg.dist_rate,
                      cfg.dist_onset, cfg.dist_dwell,
                      cfg.dist_seed_set ? cfg.dist_seed : cfg.seed);
    InvariantSetLevels levels;
    if (quantized) levels = set_levels(dc, cfg.sys.n, cfg.quant, cfg.eps);

    art.traj.dt = dt;
    art.traj.dz = solver.state().dz();
    art.traj.samples.reserve(nsamples);
    art.traj.d_norm.reserve(nsamples);
    {
        const auto& s0 = solver.state();
        std::vector<double> x1(cfg.sys.n);
        for (std::size_t i = 0; i < cfg.sys.n; ++i) x1[i] = s0.at(s0.M, i);
        double mismatch = 0.0;
        for (std::size_t i = 0; i < cfg.sys.n; ++i) {
            const double e = cfg.ctl.eta0[i] - x1[i];
            mismatch += e * e;
        }
        const double h1 = h1_of_state(s0);
        art.traj.mx0 = h1 + mismatch;
        double max0sq = 0.0, eta0sq = 0.0;
        for (std::size_t j = 0; j <= s0.M; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < cfg.sys.n; ++i) s += s0.at(j, i) * s0.at(j, i);
            max0sq = std::max(max0sq, s);
        }
        for (double e : cfg.ctl.eta0) eta0sq += e * e;
        art.traj.init_combined = 2.0 * (max0sq + eta0sq) + h1;
    }

    std::optional<CsvWriter> field_csv, boundary_csv, monitor_csv;
    if (writing) {
        field_csv.emplace(out_dir / "field.csv", field_header(cfg.sys.n));
        boundary_csv.emplace(out_dir / "boundary.csv",
                             boundary_header(cfg.sys.n, cfg.sys.m));
        monitor_csv.emplace(out_dir / "monitor.csv",
                            "t,V1,V2,V3,V,maxnorm,d_norm,in_SM,in_SDelta,"
                            "dss_rhs,dss_slack");
    }
    const auto write_field = [&](const FieldState& s) {
        if (!field_csv) return;
        const double dz = s.dz();
        for (std::size_t j = 0; j <= s.M; ++j) {
            std::vector<double> row(s.n);
            for (std::size_t i = 0; i < s.n; ++i) row[i] = s.at(j, i);
            char buf[72];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", s.t,
                          static_cast<double>(j) * dz);
            std::string line = buf;
            for (double v : row) append_num(line, v);
            field_csv->raw(line);
        }
    };

    CheckReport sandwich;
    sandwich.name = "sandwich";
    sandwich.pass = true;
    sandwich.worst_margin = std::numeric_limits<double>::infinity();
    bool any_overflow = false;
    double run_sup = 0.0;

    const auto record = [&](const std::vector<double>& d_vec, double d_mag) {
        const auto& s = solver.state();
        auto samp = eval_V(s, cert, dc, cfg.grid.parallel);
        if (quantized) {
            samp.in_SM = samp.V <= levels.sm;
            samp.in_SDelta = samp.V <= levels.sdelta;
        }
        art.traj.samples.push_back(samp);
        art.traj.d_norm.push_back(d_mag);
        run_sup = std::max(run_sup, d_mag);
        const double rhs = dss_bound(dc, art.traj.mx0, s.t, run_sup * run_sup);
        if (monitor_csv) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", s.t);
            std::string line = buf;
            for (double v : {samp.V1, samp.V2, samp.V3, samp.V, samp.maxnorm, d_mag})
                append_num(line, v);
            line += samp.in_SM ? ",1" : ",0";
            line += samp.in_SDelta ? ",1" : ",0";
            append_num(line, rhs);
            append_num(line, rhs - samp.maxnorm * samp.maxnorm);
            monitor_csv->raw(line);
        }
        if (boundary_csv) {
            std::vector<double> x1(s.n);
            for (std::size_t i = 0; i < s.n; ++i) x1[i] = s.at(s.M, i);
            const auto u = solver.control_input();
            boundary_csv->row(s.t, {&x1, &s.eta, &u, &d_vec});
        }
        const bool snap =
            (static_cast<std::size_t>(solver.step_index()) % snap_every == 0) ||
            art.traj.samples.size() == nsamples;
        if (snap) {
            write_field(s);
            if (want("sandwich")) {
                auto r = check_sandwich(s, cert, dc, cfg.grid.parallel);
                sandwich.pass = sandwich.pass && r.pass;
                if (r.worst_margin < sandwich.worst_margin) {
                    sandwich.worst_margin = r.worst_margin;
                    sandwich.details = r.details;
                }
                if (!r.pass && sandwich.first_violation < 0.0)
                    sandwich.first_violation = s.t;
            }
        }
    };

    const auto current_dq = [&]() {
        const auto& s = solver.state();
        std::vector<double> x1(s.n);
        for (std::size_t i = 0; i < s.n; ++i) x1[i] = s.at(s.M, i);
        auto q = quantize(cfg.quant, x1);
        for (std::size_t i = 0; i < s.n; ++i) q.value[i] -= x1[i];
        return q;
    };

    try {
        for (std::size_t k = 0; k < nsteps; ++k) {
            if (quantized) {
                auto q = current_dq();
                record(q.value, vec_norm(q.value));
                solver.step_quantized(cfg.quant);
                any_overflow = any_overflow || solver.last_overflow();
            } else {
                const double tk = static_cast<double>(solver.step_index()) * dt;
                auto d_now = dist.sample(tk);
                auto d_next = dist.sample(tk + dt);
                record(d_now, vec_norm(d_now));
                solver.step(d_now, d_next);
            }
        }
        if (quantized) {
            auto q = current_dq();
            any_overflow = any_overflow || q.overflow;
            record(q.value, vec_norm(q.value));
        } else {
            auto d_final = dist.sample(static_cast<double>(solver.step_index()) * dt);
            record(d_final, vec_norm(d_final));
        }
    } catch (const BlowUpError& e) {
        art.summary["blow_up"] = true;
        art.summary["blow_up_time"] = e.time;
        art.summary["error"] = e.what();
        return finish(3);
    }

    // Check reports.
    json checks_json = json::object();
    std::vector<CheckReport> reports;
    if (want("sandwich")) {
        if (sandwich.worst_margin == std::numeric_limits<double>::infinity())
            sandwich.worst_margin = 0.0;
        reports.push_back(sandwich);
    }
    if (want("dissipation"))
        reports.push_back(check_dissipation(art.traj, dc, cfg.c_tol));
    if (want("decay-envelope"))
        reports.push_back(check_decay_envelope(art.traj, dc, cfg.c_tol));
    if (want("dss")) reports.push_back(check_dss(art.traj, dc, cfg.c_tol));
    if (want("iss-combined"))
        reports.push_back(check_iss_combined(art.traj, dc, cfg.c_tol));
    double T_eps = -1.0;
    if (want("invariant-sets")) {
        if (!quantized) {
            CheckReport r;
            r.name = "invariant-sets";
            r.applicable = false;
            r.details = json{{"reason", "run has no quantizer"}};
            reports.push_back(r);
        } else {
            auto r = check_invariant_sets(art.traj, dc, levels, cfg.c_tol);
            if (r.details.contains("T_eps")) T_eps = r.details["T_eps"].get<double>();
            reports.push_back(r);
        }
    }
    bool all_pass = true;
    for (const auto& r : reports) {
        checks_json[r.name] = report_json(r);
        all_pass = all_pass && r.pass && r.applicable;
    }
    art.summary["checks"] = checks_json;

    const auto& samples = art.traj.samples;
    const double T = samples.back().t;
    double ultimate = 0.0;
    for (const auto& s : samples)
        if (s.t >= 0.9 * T) ultimate = std::max(ultimate, s.maxnorm);
    art.summary["initial_maxnorm"] = samples.front().maxnorm;
    art.summary["final_maxnorm"] = samples.back().maxnorm;
    art.summary["ultimate_maxnorm"] = ultimate;
    art.summary["mx0"] = art.traj.mx0;
    art.summary["horizon"] = T;
    art.summary["sigma"] = dc.sigma;
    art.summary["chi"] = dc.chi;
    if (quantized) {
        art.summary["T_eps"] = T_eps;
        art.summary["gamma_eps"] = levels.gamma_eps;
        art.summary["quantizer_overflow"] = any_overflow;
        if (cfg.quant.kind == QuantizerKind::floor_kind)
            art.summary["ell"] = cfg.quant.ell;
        art.summary["delta_q"] = cfg.quant.delta_q;
    } else {
        art.summary["d_sup"] = run_sup;
    }
    return finish(all_pass ? 0 : 1);
}

json compare_runs(const std::vector<std::string>& summary_paths) {
    if (summary_paths.empty()) throw ConfigError("compare needs at least one summary");
    json out;
    out["runs"] = json::array();
    std::vector<double> ultimates;
    bool gamma_ok = true;
    for (const auto& p : summary_paths) {
        std::ifstream in(p);
        if (!in) throw ConfigError("cannot open summary: " + p);
        json s;
        try {
            in >> s;
        } catch (const json::exception& e) {
            throw ConfigError("bad summary " + p + ": " + e.what());
        }
        if (!s.contains("ultimate_maxnorm"))
            throw ConfigError("summary lacks ultimate_maxnorm: " + p);
        const double u = s["ultimate_maxnorm"].get<double>();
        json entry{{"path", p}, {"ultimate_maxnorm", u}};
        if (s.contains("gamma_eps")) {
            const double g = s["gamma_eps"].get<double>();
            entry["gamma_eps"] = g;
            entry["gamma_covers_ultimate"] = u * u <= g;
            gamma_ok = gamma_ok && (u * u <= g);
        }
        if (s.contains("ell")) entry["ell"] = s["ell"];
        out["runs"].push_back(entry);
        ultimates.push_back(u);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < ultimates.size(); ++i)
        decreasing = decreasing && ultimates[i] < ultimates[i - 1];
    out["decreasing_ultimate"] = decreasing;
    out["gamma_covers_all"] = gamma_ok;
    return out;
}

json restart_check(const ExperimentConfig& cfg, double split) {
    if (cfg.grid.mode != SolverMode::exact)
        throw ConfigError("restart check needs the exact solver mode");
    if (split < 0.0 || split >= cfg.horizon)
        throw ConfigError("split time must lie in [0, horizon)");

    const auto make_signal = [&]() {
        return Signal(cfg.dist_kind, cfg.sys.n, cfg.dist_amplitude, cfg.dist_rate,
                      cfg.dist_onset, cfg.dist_dwell,
                      cfg.dist_seed_set ? cfg.dist_seed : cfg.seed);
    };
    const bool quantized = cfg.measurement == MeasurementKind::quantized;

    Solver mono(cfg.sys, cfg.ctl, cfg.profile, cfg.grid);
    const double dt = mono.dt();
    const auto nsteps = static_cast<long long>(std::ceil(cfg.horizon / dt - 1e-9));
    const auto ksplit = std::clamp<long long>(std::llround(split / dt), 0, nsteps);

    const auto advance = [&](Solver& s, Signal& d, long long from, long long to) {
        for (long long k = from; k < to; ++k) {
            if (quantized) {
                s.step_quantized(cfg.quant);
            } else {
                const double tk = static_cast<double>(k) * dt;
                s.step(d.sample(tk), d.sample(tk + dt));
            }
        }
    };

    Signal d1 = make_signal();
    advance(mono, d1, 0, nsteps);

    Solver first(cfg.sys, cfg.ctl, cfg.profile, cfg.grid);
    Signal d2 = make_signal();
    advance(first, d2, 0, ksplit);
    const std::string blob = first.snapshot().dump();
    Solver second = Solver::restore(cfg.sys, cfg.ctl, cfg.profile, cfg.grid,
                                    json::parse(blob));
    Signal d3 = make_signal();
    for (long long k = 0; k < ksplit; ++k) {
        const double tk = static_cast<double>(k) * dt;
        d3.sample(tk);
        d3.sample(tk + dt);
    }
    advance(second, d3, ksplit, nsteps);

    const auto& a = mono.state();
    const auto& b = second.state();
    double diff_X = 0.0, diff_eta = 0.0;
    for (std::size_t i = 0; i < a.X.size(); ++i)
        diff_X = std::max(diff_X, std::abs(a.X[i] - b.X[i]));
    for (std::size_t i = 0; i < a.eta.size(); ++i)
        diff_eta = std::max(diff_eta, std::abs(a.eta[i] - b.eta[i]));

    const double tol = mono.grid_aligned() ? 1e-12 : 1e-8;
    json out{{"split", static_cast<double>(ksplit) * dt},
             {"steps", nsteps},
             {"grid_aligned", mono.grid_aligned()},
             {"diff_X", diff_X},
             {"diff_eta", diff_eta},
             {"tol", tol},
             {"pass", diff_X <= tol && diff_eta <= tol}};
    return out;
}

} // namespace dss
