#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oisac/channel.hpp"
#include "oisac/lfm_cpm.hpp"
#include "oisac/ofdm.hpp"
#include "oisac/ppm.hpp"
#include "oisac/types.hpp"

namespace oisac {

enum class Scheme { DcoOfdm, LfmCpm, Ppm };

const char* scheme_name(Scheme s);

/// One BER/RMSE-versus-SNR experiment. Trials draw a fresh payload and a
/// fresh target distance (continuous-uniform, so the ranging floor is the
/// sample-quantization law), then run both the communication and the
/// monostatic sensing path with independent noise streams.
///
/// Randomness is common across SNR points (the per-trial streams do not see
/// the point index; only the noise scale does), which makes BER monotone in
/// SNR testable with modest trial counts.
struct SweepSpec {
    Scheme scheme = Scheme::DcoOfdm;
    OfdmConfig ofdm;
    LfmCpmConfig lfm;
    PpmConfig ppm;
    MuiSpec mui; // PPM only; empty = no interference

    ChannelSpec channel;
    SnrConvention convention = SnrConvention::ElectricalAc;
    std::vector<double> snr_db_grid;

    double target_min_m = 2.4;
    double target_max_m = 7.2;

    std::uint64_t min_bits = 0;
    std::uint64_t min_trials = 1;
    std::uint64_t max_trials = 10'000;
    std::uint64_t target_error_events = 100;

    std::uint64_t master_seed = 1;
    int threads = 1;

    void validate() const;
    std::uint64_t bits_per_trial() const;
    /// Echo listening window (power of two >= frame + worst-case delay).
    std::size_t sense_window() const;
};

struct TrialRecord {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    double sq_range_error_m2 = 0.0;
    double clip_fraction = 0.0;
};

/// Deterministic in (spec.master_seed, trial_index); the SNR point only
/// scales the noise streams.
TrialRecord run_trial(const SweepSpec& spec, std::size_t point_index,
                      std::uint64_t trial_index);

struct SweepPoint {
    double snr_db = 0.0;
    double ber = 0.0;
    double ber_ci95 = 0.0; // Wilson 95% half-width
    double rmse_m = 0.0;
    std::uint64_t n_bits = 0;
    std::uint64_t n_trials = 0;
    std::uint64_t n_error_events = 0;
    double clip_fraction = 0.0;
    double wall_ms = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
};

/// Wilson 95% interval for k errors in n bits.
struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
    double half_width = 0.0;
};
WilsonInterval wilson95(std::uint64_t errors, std::uint64_t bits);

SweepResult run_sweep(const SweepSpec& spec);

struct BiasScanResult {
    std::vector<double> bias_factors;
    std::vector<SweepResult> sweeps;
};

/// Re-runs the sweep for each bias factor under the OPTICAL_TOTAL SNR
/// convention, where DC power counts as spent power. DCO-OFDM only.
BiasScanResult bias_tradeoff_scan(const SweepSpec& base, std::span<const double> bias_factors);

} // namespace oisac
