#pragma once

#include "dss/certificate.hpp"
#include "dss/quantizer.hpp"
#include "dss/signals.hpp"
#include "dss/solver.hpp"
#include "dss/system.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace dss {

enum class MeasurementKind { additive, quantized };

/// Fully parsed experiment description.  See README for the JSON schema.
struct ExperimentConfig {
    HyperbolicSystem sys;
    ControllerParams ctl;
    bool alpha_auto = false;   // take alpha from the certificate
    bool eta0_auto = false;    // least-squares compatible eta0

    bool cert_search = true;
    bool cert_nominal = false; // explicit params, monitoring only, no feasibility gate
    std::size_t search_budget = 100000;
    CertificateParams cert_explicit;
    ChiBetaReading chi_reading = ChiBetaReading::beta2;

    InitialProfile profile;
    SolverOptions grid;
    double horizon = 10.0;

    MeasurementKind measurement = MeasurementKind::additive;
    SignalKind dist_kind = SignalKind::zero;
    double dist_amplitude = 0.0;
    double dist_rate = 1.0;
    double dist_onset = 1.0;
    double dist_dwell = 0.05;
    bool dist_seed_set = false;
    std::uint64_t dist_seed = 0;
    QuantizerSpec quant;
    double eps = 0.1;

    std::vector<std::string> checks;
    std::uint64_t seed = 0;
    double field_stride = 0.1;
    double c_tol = 10.0;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

} // namespace dss
