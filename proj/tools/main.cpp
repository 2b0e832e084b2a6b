#include "dss/config.hpp"
#include "dss/errors.hpp"
#include "dss/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::string& checks, bool has_seed, std::uint64_t seed) {
    auto cfg = dss::load_config(config_path);
    dss::RunOptions opts;
    opts.out_dir = out_dir;
    if (!checks.empty()) {
        opts.has_checks_override = true;
        opts.checks_override = split_list(checks);
    }
    opts.has_seed_override = has_seed;
    opts.seed_override = seed;
    auto art = dss::run_experiment(cfg, opts);
    std::cout << art.summary.dump(2) << '\n';
    return art.exit_code;
}

int cmd_search(const std::string& config_path) {
    auto cfg = dss::load_config(config_path);
    std::optional<double> fix_alpha;
    if (!cfg.alpha_auto) fix_alpha = cfg.ctl.alpha;
    auto res = dss::search_certificate(cfg.sys, cfg.ctl, cfg.search_budget,
                                       cfg.seed, fix_alpha);
    if (!res.feasible) {
        nlohmann::json j{{"feasible", false},
                         {"best_damping_norm", res.best_norm},
                         {"best_omega_min_eig", res.best_min_eig},
                         {"evals", res.evals}};
        std::cout << j.dump(2) << '\n';
        return 1;
    }
    dss::ControllerParams ctl = cfg.ctl;
    ctl.alpha = res.cert.alpha;
    auto dc = dss::derive_constants(cfg.sys, ctl, res.cert, cfg.chi_reading);
    auto a = dss::check_13a(cfg.sys, ctl, res.cert);
    auto b = dss::check_13b(cfg.sys, ctl, res.cert);
    auto rep = dss::certificate_report(cfg.sys, res.cert, dc, a, b);
    rep["evals"] = res.evals;
    std::cout << rep.dump(2) << '\n';
    return 0;
}

int cmd_compare(const std::vector<std::string>& paths) {
    auto rep = dss::compare_runs(paths);
    std::cout << rep.dump(2) << '\n';
    const bool ok = rep["decreasing_ultimate"].get<bool>() &&
                    rep["gamma_covers_all"].get<bool>();
    return ok ? 0 : 1;
}

int cmd_restart(const std::string& config_path, double split) {
    auto cfg = dss::load_config(config_path);
    auto rep = dss::restart_check(cfg, split);
    std::cout << rep.dump(2) << '\n';
    return rep["pass"].get<bool>() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and certificate toolkit for disturbance-to-state "
                 "stability of boundary-controlled linear transport systems"};
    app.require_subcommand(1);

    std::string config_path, out_dir, checks;
    std::uint64_t seed = 0;
    double split = 0.0;
    std::vector<std::string> summaries;

    auto* run = app.add_subcommand("run", "Run one experiment end to end");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "Artifact directory");
    run->add_option("--checks", checks, "Comma-separated check list override");
    auto* seed_opt = run->add_option("--seed", seed, "Seed override");

    auto* sc = app.add_subcommand("search-cert", "Search a stability certificate");
    sc->add_option("config", config_path, "Experiment config (JSON)")->required();

    auto* cmp = app.add_subcommand("compare", "Compare run summaries");
    cmp->add_option("summaries", summaries, "summary.json paths")->required();

    auto* rc = app.add_subcommand("restart-check",
                                  "Serialize/resume semigroup consistency test");
    rc->add_option("config", config_path, "Experiment config (JSON)")->required();
    rc->add_option("--split", split, "Split time")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, out_dir, checks, seed_opt->count() > 0, seed);
        if (sc->parsed()) return cmd_search(config_path);
        if (cmp->parsed()) return cmd_compare(summaries);
        if (rc->parsed()) return cmd_restart(config_path, split);
    } catch (const dss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const dss::InvalidInput& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const dss::BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
