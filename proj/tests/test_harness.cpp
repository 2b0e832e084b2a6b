#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dss/errors.hpp"
#include "dss/harness.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace dss;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& leaf) {
    const auto p = fs::temp_directory_path() / "dss-harness-tests" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// contractive scalar loop with a feasible hand certificate in nominal mode
json scalar_config() {
    return json{
        {"system", {{"Lambda", {1.0}}, {"H", {{0.5}}}, {"B", {{1.0}}}}},
        {"controller", {{"K", {{0.0}}}, {"alpha", 1.0}, {"eta0", {0.0}}}},
        {"certificate",
         {{"mode", "nominal"},
          {"mu", 0.2},
          {"nu", 0.6},
          {"D", {1.0}},
          {"alpha", 1.0},
          {"beta1", 1.0},
          {"beta2", 1.0},
          {"beta3", 0.5},
          {"zeta", 0.04}}},
        {"profile",
         {{"kind", "trig"}, {"components", {{{"sin", {{1.0, 1.0}}}}}}}},
        {"grid", {{"M", 64}, {"mode", "exact"}}},
        {"horizon", 3.0},
        {"seed", 5}};
}

json demo_search_config() {
    return json{
        {"system",
         {{"Lambda", {1.0, 2.0}},
          {"H", {{0.3, 0.1}, {0.0, 0.4}}},
          {"B", {{1.0, 0.0}, {0.0, 1.0}}}}},
        {"controller",
         {{"K", {{0.08, 0.02}, {-0.03, -0.1}}},
          {"alpha", "auto"},
          {"eta0", "auto"}}},
        {"certificate", {{"mode", "search"}, {"budget", 100000}}},
        {"profile",
         {{"kind", "trig"},
          {"components",
           {{{"const", -1.0}, {"cos", {{1.0, 2.0}}}},
            {{"const", -1.0}, {"cos", {{1.0, 1.0}}}}}}}},
        {"grid", {{"M", 64}, {"mode", "exact"}}},
        {"horizon", 4.0},
        {"disturbance", {{"kind", "step"}, {"amplitude", 0.3}, {"onset", 1.0}}},
        {"seed", 7}};
}

} // namespace

TEST_CASE("config parser rejects malformed inputs") {
    auto base = scalar_config();
    CHECK_NOTHROW(parse_config(base));

    auto j = base;
    j["certificate"]["mode"] = "bogus";
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = base;
    j["disturbance"] = {{"kind", "zero"}};
    j["quantizer"] = {{"kind", "floor"}, {"ell", 1.0}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = base;
    j.erase("horizon");
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = base;
    j["profile"]["kind"] = "spline";
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = base;
    j["grid"]["mode"] = "spectral";
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = base;
    j["disturbance"] = {{"kind", "sawtooth"}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = base;
    j["eps"] = 0.0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = base;
    j["output"] = {{"field_stride", -1.0}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("nominal run passes its checks and reports the pathway") {
    const auto cfg = parse_config(scalar_config());
    const auto art = run_experiment(cfg, {});
    CHECK(art.exit_code == 0);
    CHECK(art.summary["certificate_mode"] == "nominal");
    CHECK(art.summary["certificate_feasible"] == true);
    CHECK(art.summary["certificate_verified"] == true);
    CHECK(art.summary["compatibility_residual"].get<double>() < 1e-12);
    CHECK(art.summary["blow_up"] == false);
    // horizon 3 at dt = 1/64 gives 192 steps and one sample per step edge
    CHECK(art.traj.samples.size() == 193);
    CHECK(art.summary["ultimate_maxnorm"].get<double>() <
          art.summary["initial_maxnorm"].get<double>());
    for (const char* name :
         {"sandwich", "dissipation", "decay-envelope", "dss", "iss-combined"}) {
        CAPTURE(name);
        CHECK(art.summary["checks"][name]["pass"] == true);
    }
}

TEST_CASE("search run certifies the demo pair and survives a step disturbance") {
    const auto cfg = parse_config(demo_search_config());
    const auto art = run_experiment(cfg, {});
    CHECK(art.exit_code == 0);
    CHECK(art.summary["certificate_mode"] == "search");
    CHECK(art.summary["certificate_verified"] == true);
    CHECK(art.summary["d_sup"].get<double>() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(art.certificate["zeta"].get<double>() > 0.0);
    CHECK(art.certificate["rate_bound"].get<double>() > 0.0);
}

TEST_CASE("infeasible search reports diagnostics and exits with failure") {
    json j = scalar_config();
    j["system"] = {{"Lambda", {1.0, 1.0}},
                   {"H", {{2.0, 0.0}, {0.0, 2.0}}},
                   {"B", {{0.0, 0.0}, {0.0, 0.0}}}};
    j["controller"] = {{"K", {{0.0, 0.0}, {0.0, 0.0}}},
                      {"alpha", 1.0},
                      {"eta0", {0.0, 0.0}}};
    j["certificate"] = {{"mode", "search"}, {"budget", 20000}};
    j["profile"] = {{"kind", "zero"}};
    const auto art = run_experiment(parse_config(j), {});
    CHECK(art.exit_code == 1);
    CHECK(art.summary["certificate_feasible"] == false);
    CHECK(art.summary["best_damping_norm"].get<double>() ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(art.traj.samples.empty());
}

TEST_CASE("explicit infeasible certificate is refused before simulating") {
    json j = scalar_config();
    j["certificate"]["mode"] = "explicit";
    j["certificate"]["zeta"] = 50.0;   // far above any eigenvalue of Omega
    const auto art = run_experiment(parse_config(j), {});
    CHECK(art.exit_code == 1);
    CHECK(art.summary["certificate_feasible"] == false);
    CHECK(art.traj.samples.empty());
}

TEST_CASE("explicit certificate must agree with the controller gain alpha") {
    json j = scalar_config();
    j["certificate"]["mode"] = "explicit";
    j["certificate"]["alpha"] = 2.0;
    CHECK_THROWS_AS(run_experiment(parse_config(j), {}), ConfigError);
}

TEST_CASE("unknown check names are rejected") {
    const auto cfg = parse_config(scalar_config());
    RunOptions opts;
    opts.has_checks_override = true;
    opts.checks_override = {"sandwich", "bogus"};
    CHECK_THROWS_AS(run_experiment(cfg, opts), ConfigError);
}

TEST_CASE("check and seed overrides take effect") {
    auto j = scalar_config();
    j["disturbance"] = {{"kind", "random"}, {"amplitude", 0.2}, {"dwell", 0.1}};
    j["horizon"] = 1.0;
    const auto cfg = parse_config(j);
    RunOptions opts;
    opts.has_checks_override = true;
    opts.checks_override = {"sandwich"};
    opts.has_seed_override = true;
    opts.seed_override = 123;
    const auto art = run_experiment(cfg, opts);
    CHECK(art.summary["seed"].get<std::uint64_t>() == 123);
    CHECK(art.summary["checks"].size() == 1);
    CHECK(art.summary["checks"].contains("sandwich"));
    CHECK(art.summary["d_sup"].get<double>() > 0.0);
}

TEST_CASE("quantized run reports arrival time and ultimate level") {
    auto j = scalar_config();
    j["quantizer"] = {{"kind", "floor"}, {"ell", 10.0}};
    j["horizon"] = 6.0;
    const auto art = run_experiment(parse_config(j), {});
    CHECK(art.exit_code == 0);
    CHECK(art.summary["T_eps"].get<double>() >= 0.0);
    CHECK(art.summary["gamma_eps"].get<double>() > 0.0);
    CHECK(art.summary["ell"].get<double>() == doctest::Approx(10.0));
    CHECK(art.summary["delta_q"].get<double>() == doctest::Approx(0.1));
    CHECK(art.summary["quantizer_overflow"] == false);
    CHECK(art.summary["checks"]["invariant-sets"]["pass"] == true);
}

TEST_CASE("blow-up is reported with its onset time") {
    json j = scalar_config();
    j["system"]["H"] = {{2.0}};
    j["certificate"]["nu"] = 0.9;   // nominal mode carries no feasibility gate
    j["certificate"]["mu"] = 0.1;
    j["certificate"]["zeta"] = 0.01;
    j["profile"] = {{"kind", "trig"}, {"components", {{{"const", 1.0}}}}};
    j["grid"] = {{"M", 16}, {"mode", "exact"}};
    j["horizon"] = 45.0;
    const auto art = run_experiment(parse_config(j), {});
    CHECK(art.exit_code == 3);
    CHECK(art.summary["blow_up"] == true);
    const double t = art.summary["blow_up_time"].get<double>();
    CHECK(t > 30.0);
    CHECK(t < 45.0);
}

TEST_CASE("same seed produces byte-identical artifacts") {
    auto j = scalar_config();
    j["disturbance"] = {{"kind", "random"}, {"amplitude", 0.5}, {"dwell", 0.1}};
    j["grid"] = {{"M", 32}, {"mode", "exact"}};
    j["horizon"] = 1.0;
    const auto cfg = parse_config(j);

    const auto da = fresh_dir("rep-a");
    const auto db = fresh_dir("rep-b");
    RunOptions oa, ob;
    oa.out_dir = da.string();
    ob.out_dir = db.string();
    const auto ra = run_experiment(cfg, oa);
    const auto rb = run_experiment(cfg, ob);
    CHECK(ra.exit_code == rb.exit_code);
    for (const char* f :
         {"field.csv", "boundary.csv", "monitor.csv", "summary.json",
          "certificate.json"}) {
        CAPTURE(f);
        CHECK(slurp(da / f) == slurp(db / f));
    }
    CHECK(slurp(da / "field.csv").size() > 100);
}

TEST_CASE("restart after serialization matches the monolithic run") {
    auto j = scalar_config();
    j["disturbance"] = {{"kind", "random"}, {"amplitude", 0.4}, {"dwell", 0.1},
                        {"seed", 11}};
    j["grid"] = {{"M", 32}, {"mode", "exact"}};
    j["horizon"] = 2.0;
    const auto cfg = parse_config(j);

    for (double split : {0.0, 1.0}) {
        CAPTURE(split);
        const auto rep = restart_check(cfg, split);
        CHECK(rep["pass"] == true);
        CHECK(rep["grid_aligned"] == true);
        CHECK(rep["diff_X"].get<double>() <= 1e-12);
        CHECK(rep["diff_eta"].get<double>() <= 1e-12);
    }
    CHECK_THROWS_AS(restart_check(cfg, 2.5), ConfigError);

    auto ju = j;
    ju["grid"]["mode"] = "upwind";
    CHECK_THROWS_AS(restart_check(parse_config(ju), 1.0), ConfigError);
}

TEST_CASE("run comparison orders ultimate norms and checks gamma cover") {
    const auto dir = fresh_dir("compare");
    auto write = [&](const std::string& name, const json& j) {
        std::ofstream out(dir / name);
        out << j.dump(2);
        return (dir / name).string();
    };
    const auto a = write("a.json", {{"ultimate_maxnorm", 5.0}});
    const auto b =
        write("b.json", {{"ultimate_maxnorm", 2.0}, {"gamma_eps", 9.0}, {"ell", 1.0}});
    const auto c =
        write("c.json", {{"ultimate_maxnorm", 1.0}, {"gamma_eps", 4.0}, {"ell", 10.0}});

    const auto rep = compare_runs({a, b, c});
    CHECK(rep["decreasing_ultimate"] == true);
    CHECK(rep["gamma_covers_all"] == true);
    CHECK(rep["runs"].size() == 3);

    const auto rev = compare_runs({c, b, a});
    CHECK(rev["decreasing_ultimate"] == false);

    CHECK_THROWS_AS(compare_runs({(dir / "missing.json").string()}), ConfigError);
    CHECK_THROWS_AS(compare_runs({}), ConfigError);

    const auto bad = write("bad.json", json{{"no_ultimate", 1}});
    CHECK_THROWS_AS(compare_runs({bad}), ConfigError);
}
