#pragma once

#include <cstdint>

#include "oisac/rng.hpp"
#include "oisac/types.hpp"

namespace oisac {

inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s

/// How a stated SNR maps to the receiver noise variance.
///   ElectricalAc:  signal power is the AC (variance) part of the detected
///                  electrical signal; DC carries no information.
///   OpticalTotal:  signal power is the squared mean detected level, so the
///                  DC bias counts as spent power.
enum class SnrConvention { ElectricalAc, OpticalTotal };

/// IM/DD free-space channel: LoS gain for the communication path and a
/// reflectance-scaled round-trip for the monostatic sensing path.
struct ChannelSpec {
    double comm_gain = 0.8;         // h_c in (0, 1]
    double target_distance_m = 4.8; // d > 0
    double reflectance = 0.5;       // rho in [0, 1]
    double aperture_gain_m2 = 1.0;  // gamma > 0, lumps aperture and optics
    double sample_rate_hz = 1e9;
    double responsivity = 1.0;

    /// Sensing path gain h_s = gamma * rho / d^2.
    double sensing_gain() const;
    /// Round-trip delay 2 d / c in seconds.
    double round_trip_delay_s() const;
    /// Delay quantized to the sample grid.
    std::int64_t delay_samples() const;

    void validate() const;
};

struct NoiseSpec {
    double variance = 0.0; // electrical-domain, per real sample
    SnrConvention convention = SnrConvention::ElectricalAc;
};

/// y[n] = responsivity * h_c * tx[n] + w[n], w ~ N(0, variance) i.i.d.
/// The output is the post-detection electrical signal and may go negative.
RealWaveform comm_propagate(const RealWaveform& tx, const ChannelSpec& ch,
                            const NoiseSpec& noise, const SeedSpec& seed);

/// y[n] = responsivity * h_s * tx[n - D] + w[n] with D = round(2 d fs / c),
/// zero before the echo arrives. D must be shorter than the frame.
RealWaveform sense_propagate(const RealWaveform& tx, const ChannelSpec& ch,
                             const NoiseSpec& noise, const SeedSpec& seed);

/// Noise variance that realizes `snr_db` at the receiver for the given
/// effective path gain under the chosen convention.
double noise_variance_for_snr(const RealWaveform& tx, double snr_db,
                              SnrConvention convention, double gain);

} // namespace oisac
