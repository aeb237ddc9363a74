#include "oisac/ppm.hpp"

#include "oisac/channel.hpp"
#include "oisac/dsp.hpp"
#include "oisac/lfsr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace oisac {

std::size_t PpmConfig::chips_per_slot() const {
    if (!spreading) return 1;
    return (std::size_t{1} << spreading->degree) - 1;
}

std::size_t PpmConfig::bits_per_symbol() const {
    return static_cast<std::size_t>(std::countr_zero(slots_per_symbol));
}

std::vector<std::uint8_t> PpmConfig::chip_pattern() const {
    if (!spreading) return {1};
    auto seq = dsp::lfsr_msequence(spreading->degree, 1u);
    const int period = static_cast<int>(seq.size());
    int shift = spreading->phase % period;
    if (shift < 0) shift += period;
    std::rotate(seq.begin(), seq.begin() + shift, seq.end());
    return seq;
}

void PpmConfig::validate() const {
    if (slots_per_symbol < 2 || !dsp::is_power_of_two(slots_per_symbol)) {
        throw ConfigError("ppm: slots_per_symbol must be a power of two >= 2");
    }
    if (samples_per_slot < 1) {
        throw ConfigError("ppm: samples_per_slot must be >= 1");
    }
    if (n_symbols < 1) {
        throw ConfigError("ppm: n_symbols must be >= 1");
    }
    if (!(pulse_amplitude > 0.0)) {
        throw ConfigError("ppm: pulse_amplitude must be > 0");
    }
    if (spreading) {
        // Degree bounds are enforced by the polynomial table.
        dsp::primitive_polynomial(spreading->degree);
    }
}

RealWaveform ppm_modulate(std::span<const int> symbols, const PpmConfig& cfg,
                          double sample_rate_hz) {
    cfg.validate();
    if (symbols.size() != cfg.n_symbols) {
        throw DataError("ppm_modulate: symbol count must equal n_symbols");
    }
    const auto pattern = cfg.chip_pattern();
    const std::size_t chip = cfg.samples_per_slot;

    RealWaveform out;
    out.sample_rate_hz = sample_rate_hz;
    out.optical = true;
    out.samples.assign(cfg.frame_samples(), 0.0);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const int s = symbols[i];
        if (s < 0 || static_cast<std::size_t>(s) >= cfg.slots_per_symbol) {
            throw DataError("ppm_modulate: symbol " + std::to_string(s) + " out of range");
        }
        const std::size_t slot_base =
            i * cfg.symbol_samples() + static_cast<std::size_t>(s) * cfg.slot_samples();
        for (std::size_t c = 0; c < pattern.size(); ++c) {
            if (!pattern[c]) continue;
            const std::size_t base = slot_base + c * chip;
            for (std::size_t k = 0; k < chip; ++k) {
                out.samples[base + k] = cfg.pulse_amplitude;
            }
        }
    }
    return out;
}

std::vector<int> ppm_demodulate(const RealWaveform& rx, const PpmConfig& cfg) {
    cfg.validate();
    if (rx.size() < cfg.frame_samples()) {
        throw DataError("ppm_demodulate: frame shorter than configured");
    }
    const auto pattern = cfg.chip_pattern();
    const std::size_t chip = cfg.samples_per_slot;

    std::vector<int> out(cfg.n_symbols);
    for (std::size_t i = 0; i < cfg.n_symbols; ++i) {
        double best = 0.0;
        int best_slot = 0;
        for (std::size_t s = 0; s < cfg.slots_per_symbol; ++s) {
            const std::size_t slot_base = i * cfg.symbol_samples() + s * cfg.slot_samples();
            double stat = 0.0;
            for (std::size_t c = 0; c < pattern.size(); ++c) {
                if (!pattern[c]) continue;
                const std::size_t base = slot_base + c * chip;
                for (std::size_t k = 0; k < chip; ++k) {
                    stat += rx.samples[base + k];
                }
            }
            if (s == 0 || stat > best) {
                best = stat;
                best_slot = static_cast<int>(s);
            }
        }
        out[i] = best_slot;
    }
    return out;
}

double ppm_tof_estimate(const RealWaveform& echo, const RealWaveform& tx,
                        const PpmConfig& cfg, double sample_rate_hz) {
    cfg.validate();
    if (echo.size() < tx.size()) {
        throw DataError("ppm_tof_estimate: echo shorter than the transmit template");
    }
    ComplexFrame rx_c, tx_c;
    rx_c.sample_rate_hz = echo.sample_rate_hz;
    tx_c.sample_rate_hz = tx.sample_rate_hz;
    rx_c.samples.assign(echo.samples.begin(), echo.samples.end());
    tx_c.samples.assign(tx.samples.begin(), tx.samples.end());
    const auto corr = dsp::cross_correlate(rx_c, tx_c);
    const std::int64_t lag = dsp::peak_lag(corr);
    return kSpeedOfLight * static_cast<double>(lag) / (2.0 * sample_rate_hz);
}

RealWaveform inject_mui(const RealWaveform& rx, const MuiSpec& mui, const PpmConfig& cfg,
                        const SeedSpec& seed) {
    cfg.validate();
    RealWaveform out = rx;
    if (mui.interferers.empty()) return out;

    StreamRng rng(seed);
    for (const MuiInterferer& user : mui.interferers) {
        if (user.amplitude < 0.0) {
            throw ConfigError("inject_mui: interferer amplitude must be >= 0");
        }
        PpmConfig icfg = cfg;
        if (icfg.spreading) icfg.spreading->phase = user.spreading_phase;

        std::vector<int> payload(icfg.n_symbols);
        for (int& s : payload) {
            s = static_cast<int>(rng.below(icfg.slots_per_symbol));
        }
        const std::int64_t delay = user.delay_samples
                                       ? *user.delay_samples
                                       : static_cast<std::int64_t>(rng.below(icfg.frame_samples()));
        if (user.amplitude == 0.0) continue;

        const RealWaveform frame = ppm_modulate(payload, icfg, rx.sample_rate_hz);
        for (std::size_t n = 0; n < out.size(); ++n) {
            const std::int64_t src = static_cast<std::int64_t>(n) - delay;
            if (src >= 0 && src < static_cast<std::int64_t>(frame.size())) {
                out.samples[n] += user.amplitude * frame.samples[static_cast<std::size_t>(src)];
            }
        }
    }
    return out;
}

} // namespace oisac
