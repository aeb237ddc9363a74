#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace oisac {

using cplx = std::complex<double>;

/// Invalid configuration or misuse of an operation contract.
/// Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
    ConfigError(const std::string& msg, std::vector<std::string> issue_list)
        : std::runtime_error(msg), issues(std::move(issue_list)) {}

    /// Individual violations when several were collected at once.
    std::vector<std::string> issues;
};

/// Malformed or out-of-contract data encountered at runtime.
/// Maps to CLI exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Sampled real-valued signal. Intensity units are dimensionless relative
/// power. `optical` marks a waveform that has passed DC bias / clipping (or
/// is non-negative by construction) and may drive the laser directly.
struct RealWaveform {
    std::vector<double> samples;
    double sample_rate_hz = 1.0;
    bool optical = false;

    std::size_t size() const { return samples.size(); }
};

/// Complex baseband sample block (pre-bias or post-front-end).
struct ComplexFrame {
    std::vector<cplx> samples;
    double sample_rate_hz = 1.0;

    std::size_t size() const { return samples.size(); }
};

} // namespace oisac
