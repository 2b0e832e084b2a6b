#pragma once

#include "dss/mat.hpp"
#include "dss/system.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace dss {

/// Stability certificate (mu, nu, D, alpha, beta1..beta3, zeta).  Feasibility
/// means the boundary damping condition ||D(H+BK)D^-1||_2 <= nu < 1 together
/// with the block matrix condition Omega > zeta*I.
struct CertificateParams {
    double mu = 0.0;
    double nu = 0.0;
    std::vector<double> D;   // diagonal entries, all > 0
    double alpha = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;
    double zeta = 0.0;

    double rho() const;      // exp(-mu) - nu^2
};

/// Reading of the unsubscripted "(alpha*beta)^2" factor in the disturbance
/// gain chi; beta2 matches the Young-inequality step the term comes from.
enum class ChiBetaReading { beta2, beta3 };

struct DerivedConstants {
    Mat F;        // BK
    Mat Q;        // F^T D^2 F
    Mat G;        // H^T D^2 F
    Mat Omega;    // 3n x 3n, symmetric by construction
    Mat P1, P2, P3;
    std::vector<double> Dtilde;   // diagonal of D*Lambda
    double sigma1 = 0.0, sigma2 = 0.0, sigma = 0.0;
    double chi = 0.0;
    double c_D = 0.0;
    double cP_lo = 0.0, cP_hi = 0.0;
    double dss_c = 0.0, dss_a = 0.0, dss_gamma_coef = 0.0;
    double C1 = 0.0, C2 = 0.0;
};

struct Check13aReport {
    bool holds = false;
    double norm = 0.0;
};

struct Check13bReport {
    bool holds = false;
    double min_eig = 0.0;
};

Mat build_omega(const HyperbolicSystem& sys, const ControllerParams& ctl,
                const CertificateParams& cert);

Check13aReport check_13a(const HyperbolicSystem& sys, const ControllerParams& ctl,
                         const CertificateParams& cert);

Check13bReport check_13b(const HyperbolicSystem& sys, const ControllerParams& ctl,
                         const CertificateParams& cert);

/// Derives every stability constant; throws CertificateInfeasible unless both
/// feasibility checks pass.  require_feasible=false skips the throw and
/// evaluates the same formulas anyway, for nominal (uncertified) monitoring.
DerivedConstants derive_constants(const HyperbolicSystem& sys,
                                  const ControllerParams& ctl,
                                  const CertificateParams& cert,
                                  ChiBetaReading reading = ChiBetaReading::beta2,
                                  bool require_feasible = true);

/// Lower bound on (M_q/delta_q)^2 that a quantizer must strictly exceed.
double quantizer_rate_bound(const DerivedConstants& dc, std::size_t n);

/// Ultimate bound gamma_eps(delta_q) on max_z |X(z,t)|^2 after the transient.
double ultimate_bound(const DerivedConstants& dc, std::size_t n, double delta_q,
                      double eps);

struct SearchResult {
    bool feasible = false;
    CertificateParams cert;    // valid when feasible
    double best_norm = 0.0;    // best boundary-damping norm reached
    double best_min_eig = 0.0; // best Omega minimum eigenvalue reached
    std::size_t evals = 0;
};

/// Deterministic certificate search: (i) coordinate descent on log D entries
/// minimizing the damping norm; (ii) log-spaced grid over (mu, alpha); (iii)
/// per cell, seeded Nelder-Mead over log(beta) maximizing min_eig(Omega) along
/// the scale-normalized direction (Omega is homogeneous of degree 1 in beta),
/// then a closed-form rescale pushing zeta/2 up to the transport decay rate;
/// (iv) zeta = 0.9 * min_eig(Omega) / (1.5 + beta3/2) at the returned betas, a
/// cap under which the block-condition slack funds the eta-channel decay.
/// fix_alpha pins the alpha grid to one value.
SearchResult search_certificate(const HyperbolicSystem& sys,
                                const ControllerParams& ctl,
                                std::size_t budget, std::uint64_t seed,
                                std::optional<double> fix_alpha = std::nullopt);

/// JSON report with the full certificate and constants.  rate_bound needs the
/// state dimension, hence the sys argument.
nlohmann::json certificate_report(const HyperbolicSystem& sys,
                                  const CertificateParams& cert,
                                  const DerivedConstants& dc,
                                  const Check13aReport& a,
                                  const Check13bReport& b);

CertificateParams certificate_from_json(const nlohmann::json& j);

} // namespace dss
