#pragma once

#include <stdexcept>
#include <string>

namespace dss {

/// Bad user input (dimensions, non-finite values, malformed config fields).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Configuration rejected before a run starts (CFL violation, bad grid, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Derived constants requested from a certificate that fails condition (13).
class CertificateInfeasible : public std::runtime_error {
public:
    explicit CertificateInfeasible(const std::string& what) : std::runtime_error(what) {}
};

/// A field sample left the sanity range during simulation.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, const std::string& what)
        : std::runtime_error(what), time(t) {}
    double time;
};

} // namespace dss
