#pragma once

#include "dss/config.hpp"
#include "dss/lyapunov.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace dss {

struct RunOptions {
    std::string out_dir;                       // empty: no files written
    bool has_checks_override = false;
    std::vector<std::string> checks_override;
    bool has_seed_override = false;
    std::uint64_t seed_override = 0;
};

struct RunArtifacts {
    int exit_code = 0;     // 0 pass, 1 check failure, 3 blow-up
    nlohmann::json summary;
    nlohmann::json certificate;
    TrajectoryLog traj;
};

/// End-to-end experiment: certificate (search or explicit), closed-loop
/// simulation, estimate checks, artifact files.  Configuration problems throw
/// ConfigError; everything else is reported through exit_code + summary.
RunArtifacts run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

/// Side-by-side ordering report over summary.json files (quantizer sweeps).
nlohmann::json compare_runs(const std::vector<std::string>& summary_paths);

/// Semigroup test: simulate [0,T] monolithically, then [0,s] + serialize +
/// resume [s,T], and compare final states.
nlohmann::json restart_check(const ExperimentConfig& cfg, double split);

} // namespace dss
