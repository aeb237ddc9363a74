#include "oisac/channel.hpp"

#include <cmath>
#include <string>

namespace oisac {

double ChannelSpec::sensing_gain() const {
    return aperture_gain_m2 * reflectance / (target_distance_m * target_distance_m);
}

double ChannelSpec::round_trip_delay_s() const {
    return 2.0 * target_distance_m / kSpeedOfLight;
}

std::int64_t ChannelSpec::delay_samples() const {
    return std::llround(round_trip_delay_s() * sample_rate_hz);
}

void ChannelSpec::validate() const {
    if (!(comm_gain > 0.0) || comm_gain > 1.0) {
        throw ConfigError("channel: comm_gain must lie in (0, 1]");
    }
    if (!(target_distance_m > 0.0)) {
        throw ConfigError("channel: target_distance_m must be > 0");
    }
    if (reflectance < 0.0 || reflectance > 1.0) {
        throw ConfigError("channel: reflectance must lie in [0, 1]");
    }
    if (!(aperture_gain_m2 > 0.0)) {
        throw ConfigError("channel: aperture_gain_m2 must be > 0");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ConfigError("channel: sample_rate_hz must be > 0");
    }
    if (!(responsivity > 0.0)) {
        throw ConfigError("channel: responsivity must be > 0");
    }
    const double hs = sensing_gain();
    if (!(hs > 0.0) || hs > 1.0) {
        throw ConfigError("channel: sensing gain gamma*rho/d^2 = " + std::to_string(hs) +
                          " is outside (0, 1]");
    }
}

namespace {

void check_tx(const RealWaveform& tx, const ChannelSpec& ch) {
    if (tx.samples.empty()) throw ConfigError("channel: empty transmit frame");
    if (!tx.optical) {
        throw ConfigError("channel: transmit waveform is not tagged optical");
    }
    if (tx.sample_rate_hz > 0.0 && ch.sample_rate_hz > 0.0 &&
        tx.sample_rate_hz != ch.sample_rate_hz) {
        throw ConfigError("channel: waveform and channel sample rates differ");
    }
}

} // namespace

RealWaveform comm_propagate(const RealWaveform& tx, const ChannelSpec& ch,
                            const NoiseSpec& noise, const SeedSpec& seed) {
    check_tx(tx, ch);
    const double g = ch.responsivity * ch.comm_gain;
    const double sd = std::sqrt(noise.variance);

    RealWaveform out;
    out.sample_rate_hz = tx.sample_rate_hz;
    out.optical = false;
    out.samples.resize(tx.size());
    StreamRng rng(seed);
    for (std::size_t n = 0; n < tx.size(); ++n) {
        out.samples[n] = g * tx.samples[n] + (sd > 0.0 ? sd * rng.gaussian() : 0.0);
    }
    return out;
}

RealWaveform sense_propagate(const RealWaveform& tx, const ChannelSpec& ch,
                             const NoiseSpec& noise, const SeedSpec& seed) {
    check_tx(tx, ch);
    const std::int64_t d_samples = ch.delay_samples();
    if (d_samples >= static_cast<std::int64_t>(tx.size())) {
        throw ConfigError("channel: target beyond unambiguous range (delay " +
                          std::to_string(d_samples) + " samples >= frame length " +
                          std::to_string(tx.size()) + ")");
    }
    const double g = ch.responsivity * ch.sensing_gain();
    const double sd = std::sqrt(noise.variance);

    RealWaveform out;
    out.sample_rate_hz = tx.sample_rate_hz;
    out.optical = false;
    out.samples.resize(tx.size());
    StreamRng rng(seed);
    for (std::size_t n = 0; n < tx.size(); ++n) {
        const std::int64_t src = static_cast<std::int64_t>(n) - d_samples;
        const double echo = src >= 0 ? g * tx.samples[static_cast<std::size_t>(src)] : 0.0;
        out.samples[n] = echo + (sd > 0.0 ? sd * rng.gaussian() : 0.0);
    }
    return out;
}

double noise_variance_for_snr(const RealWaveform& tx, double snr_db,
                              SnrConvention convention, double gain) {
    if (tx.samples.empty()) throw ConfigError("noise_variance_for_snr: empty frame");
    const double n = static_cast<double>(tx.size());
    double mean = 0.0;
    for (double v : tx.samples) mean += v;
    mean /= n;
    const double snr_lin = std::pow(10.0, snr_db / 10.0);

    if (convention == SnrConvention::OpticalTotal) {
        const double dc = gain * mean;
        return dc * dc / snr_lin;
    }

    double var = 0.0;
    for (double v : tx.samples) {
        const double d = v - mean;
        var += d * d;
    }
    var /= n;
    if (!(var > 0.0)) {
        throw ConfigError("noise_variance_for_snr: zero AC power under ELECTRICAL_AC");
    }
    return gain * gain * var / snr_lin;
}

} // namespace oisac
