#include "dss/config.hpp"

#include "dss/errors.hpp"

#include <cmath>
#include <fstream>

namespace dss {

using nlohmann::json;

static Mat mat_from_json(const json& j, const char* what) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    if (rows.empty() || rows.front().empty())
        throw ConfigError(std::string(what) + ": empty matrix");
    Mat m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols())
            throw ConfigError(std::string(what) + ": ragged matrix");
        for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = rows[i][k];
    }
    return m;
}

namespace {

/// Per-component trigonometric polynomial c + sum a*cos(2 pi f z) + b*sin(...).
struct TrigComponent {
    double constant = 0.0;
    std::vector<std::pair<double, double>> cos_terms;  // (amplitude, cycles)
    std::vector<std::pair<double, double>> sin_terms;
};

InitialProfile trig_profile(std::vector<TrigComponent> comps) {
    const std::size_t n = comps.size();
    return InitialProfile::analytic(n, [comps = std::move(comps), n](double z) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = comps[i].constant;
            for (const auto& [a, f] : comps[i].cos_terms)
                s += a * std::cos(2.0 * M_PI * f * z);
            for (const auto& [b, f] : comps[i].sin_terms)
                s += b * std::sin(2.0 * M_PI * f * z);
            v[i] = s;
        }
        return v;
    });
}

std::vector<std::pair<double, double>> term_list(const json& j) {
    std::vector<std::pair<double, double>> out;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 2)
            throw ConfigError("profile trig terms must be [amplitude, cycles] pairs");
        out.emplace_back(t[0].get<double>(), t[1].get<double>());
    }
    return out;
}

InitialProfile parse_profile(const json& j, std::size_t n) {
    const std::string kind = j.value("kind", "zero");
    if (kind == "zero") return InitialProfile::zero(n);
    if (kind == "trig") {
        std::vector<TrigComponent> comps;
        for (const auto& cj : j.at("components")) {
            TrigComponent c;
            c.constant = cj.value("const", 0.0);
            if (cj.contains("cos")) c.cos_terms = term_list(cj.at("cos"));
            if (cj.contains("sin")) c.sin_terms = term_list(cj.at("sin"));
            comps.push_back(std::move(c));
        }
        if (comps.size() != n)
            throw ConfigError("profile needs one component per state dimension");
        return trig_profile(std::move(comps));
    }
    if (kind == "samples") {
        auto values = j.at("values").get<std::vector<std::vector<double>>>();
        auto p = InitialProfile::sampled(std::move(values));
        if (p.dim() != n)
            throw ConfigError("sampled profile dimension does not match the system");
        return p;
    }
    throw ConfigError("unknown profile kind: " + kind);
}

SignalKind parse_signal_kind(const std::string& s) {
    if (s == "zero") return SignalKind::zero;
    if (s == "constant") return SignalKind::constant;
    if (s == "step") return SignalKind::step;
    if (s == "decaying") return SignalKind::decaying;
    if (s == "random") return SignalKind::random_piecewise;
    throw ConfigError("unknown disturbance kind: " + s);
}

} // namespace

ExperimentConfig parse_config(const json& j) {
    try {
        ExperimentConfig cfg;
        const auto& sj = j.at("system");
        cfg.sys.lambda = sj.at("Lambda").get<std::vector<double>>();
        cfg.sys.n = cfg.sys.lambda.size();
        cfg.sys.H = mat_from_json(sj.at("H"), "system.H");
        cfg.sys.B = mat_from_json(sj.at("B"), "system.B");
        cfg.sys.m = cfg.sys.B.cols();

        const auto& cj = j.at("controller");
        cfg.ctl.K = mat_from_json(cj.at("K"), "controller.K");
        if (!cj.contains("alpha") ||
            (cj.at("alpha").is_string() && cj.at("alpha") == "auto")) {
            cfg.alpha_auto = true;
            cfg.ctl.alpha = 1.0;  // placeholder until the certificate fixes it
        } else {
            cfg.ctl.alpha = cj.at("alpha").get<double>();
        }
        if (!cj.contains("eta0") ||
            (cj.at("eta0").is_string() && cj.at("eta0") == "auto")) {
            cfg.eta0_auto = true;
            cfg.ctl.eta0.assign(cfg.sys.n, 0.0);
        } else {
            cfg.ctl.eta0 = cj.at("eta0").get<std::vector<double>>();
        }

        if (j.contains("certificate")) {
            const auto& tj = j.at("certificate");
            const std::string mode = tj.value("mode", "search");
            if (mode == "search") {
                cfg.cert_search = true;
                cfg.search_budget = tj.value("budget", std::size_t{100000});
            } else if (mode == "explicit") {
                cfg.cert_search = false;
                cfg.cert_explicit = certificate_from_json(tj);
            } else if (mode == "nominal") {
                cfg.cert_search = false;
                cfg.cert_nominal = true;
                cfg.cert_explicit = certificate_from_json(tj);
            } else {
                throw ConfigError("certificate.mode must be search, explicit, or nominal");
            }
            const std::string reading = tj.value("chi_beta_term", "beta2");
            if (reading == "beta2")
                cfg.chi_reading = ChiBetaReading::beta2;
            else if (reading == "beta3")
                cfg.chi_reading = ChiBetaReading::beta3;
            else
                throw ConfigError("certificate.chi_beta_term must be beta2 or beta3");
        }

        cfg.profile = parse_profile(j.value("profile", json{{"kind", "zero"}}),
                                    cfg.sys.n);

        if (j.contains("grid")) {
            const auto& gj = j.at("grid");
            cfg.grid.M = gj.value("M", std::size_t{200});
            cfg.grid.dt = gj.value("dt", 0.0);
            const std::string mode = gj.value("mode", "exact");
            if (mode == "exact")
                cfg.grid.mode = SolverMode::exact;
            else if (mode == "upwind")
                cfg.grid.mode = SolverMode::upwind;
            else
                throw ConfigError("grid.mode must be exact or upwind");
            cfg.grid.parallel = gj.value("parallel", false);
        }
        cfg.horizon = j.at("horizon").get<double>();
        if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be > 0");

        if (j.contains("disturbance") && j.contains("quantizer"))
            throw ConfigError("give either a disturbance or a quantizer, not both");
        if (j.contains("quantizer")) {
            cfg.measurement = MeasurementKind::quantized;
            const auto& qj = j.at("quantizer");
            const std::string kind = qj.value("kind", "floor");
            if (kind == "floor")
                cfg.quant = QuantizerSpec::make_floor(qj.at("ell").get<double>());
            else if (kind == "range")
                cfg.quant = QuantizerSpec::make_range(qj.at("delta_q").get<double>(),
                                                      qj.at("M_q").get<double>());
            else
                throw ConfigError("quantizer.kind must be floor or range");
        } else if (j.contains("disturbance")) {
            const auto& dj = j.at("disturbance");
            cfg.dist_kind = parse_signal_kind(dj.value("kind", "zero"));
            cfg.dist_amplitude = dj.value("amplitude", 0.0);
            cfg.dist_rate = dj.value("rate", 1.0);
            cfg.dist_onset = dj.value("onset", 1.0);
            cfg.dist_dwell = dj.value("dwell", 0.05);
            if (dj.contains("seed")) {
                cfg.dist_seed_set = true;
                cfg.dist_seed = dj.at("seed").get<std::uint64_t>();
            }
        }
        cfg.eps = j.value("eps", 0.1);
        if (!(cfg.eps > 0.0)) throw ConfigError("eps must be > 0");

        cfg.checks = j.value("checks", std::vector<std::string>{});
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.c_tol = j.value("c_tol", 10.0);
        if (j.contains("output"))
            cfg.field_stride = j.at("output").value("field_stride", 0.1);
        if (!(cfg.field_stride > 0.0))
            throw ConfigError("output.field_stride must be > 0");
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

} // namespace dss
