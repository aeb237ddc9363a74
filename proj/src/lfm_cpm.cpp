#include "oisac/lfm_cpm.hpp"

#include "oisac/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace oisac {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
} // namespace

void LfmCpmConfig::resolve_defaults() {
    if (intermediate_freq_hz == 0.0) {
        intermediate_freq_hz = sample_rate_hz / 8.0;
    }
    if (chirp_rate_hz_per_s == 0.0) {
        // Chirp excursion of fs/4 across the frame.
        chirp_rate_hz_per_s = sample_rate_hz / 4.0 / frame_period_s();
    }
}

void LfmCpmConfig::validate() const {
    if (samples_per_symbol < 4) {
        throw ConfigError("lfm_cpm: samples_per_symbol must be >= 4");
    }
    if (n_symbols < 1) {
        throw ConfigError("lfm_cpm: n_symbols must be >= 1");
    }
    if (!dsp::is_power_of_two(frame_samples())) {
        throw ConfigError("lfm_cpm: frame length (samples_per_symbol * n_symbols) must be a "
                          "power of two for the frame-level transforms");
    }
    if (mod_index.num < 1 || mod_index.den < 1) {
        throw ConfigError("lfm_cpm: modulation index must be a positive rational");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ConfigError("lfm_cpm: sample_rate_hz must be > 0");
    }
    if (bias_factor < 0.0) {
        throw ConfigError("lfm_cpm: bias_factor must be >= 0");
    }
    if (intermediate_freq_hz <= 0.0 || chirp_rate_hz_per_s < 0.0) {
        throw ConfigError("lfm_cpm: intermediate frequency and chirp rate must be resolved "
                          "and positive");
    }
    const double excursion = chirp_rate_hz_per_s * frame_period_s();
    if (intermediate_freq_hz + excursion >= sample_rate_hz / 2.0) {
        throw ConfigError("lfm_cpm: f_if + chirp excursion reaches Nyquist; reduce the chirp "
                          "rate or the intermediate frequency");
    }
    const double cpm_dev = mod_index.value() / (2.0 * symbol_period_s());
    if (intermediate_freq_hz - cpm_dev <= 0.0) {
        throw ConfigError("lfm_cpm: CPM deviation crosses DC at the intermediate frequency");
    }
}

CpmTrellis CpmTrellis::build(const LfmCpmConfig& cfg) {
    cfg.validate();
    const int num = cfg.mod_index.num;
    const int den = cfg.mod_index.den;
    // Phase states are the subgroup generated by pi*h modulo 2*pi.
    const int g = std::gcd(num, 2 * den);
    const int n_states = 2 * den / g;
    const int step = num / g;

    CpmTrellis t;
    t.n_states = n_states;
    t.step = step;
    t.samples_per_symbol = cfg.samples_per_symbol;
    t.references.resize(static_cast<std::size_t>(n_states) * 2 * cfg.samples_per_symbol);

    const double h = cfg.mod_index.value();
    const double q = static_cast<double>(cfg.samples_per_symbol);
    for (int s = 0; s < n_states; ++s) {
        const double base = kTwoPi * static_cast<double>(s) / static_cast<double>(n_states);
        for (int input = 0; input < 2; ++input) {
            const double a = input == 1 ? 1.0 : -1.0;
            cplx* ref = t.references.data() +
                        (static_cast<std::size_t>(s) * 2 + static_cast<std::size_t>(input)) *
                            cfg.samples_per_symbol;
            for (std::size_t m = 0; m < cfg.samples_per_symbol; ++m) {
                const double phase = base + kPi * h * a * static_cast<double>(m) / q;
                ref[m] = cplx(std::cos(phase), std::sin(phase));
            }
        }
    }
    return t;
}

ComplexFrame lfm_cpm_baseband(std::span<const std::uint8_t> bits, const LfmCpmConfig& cfg) {
    cfg.validate();
    if (bits.size() != cfg.n_symbols) {
        throw DataError("lfm_cpm_baseband: bit count must equal n_symbols");
    }

    const double h = cfg.mod_index.value();
    const double fs = cfg.sample_rate_hz;
    const double q = static_cast<double>(cfg.samples_per_symbol);

    ComplexFrame out;
    out.sample_rate_hz = fs;
    out.samples.resize(cfg.frame_samples());

    double accumulated = 0.0; // CPM phase at the current symbol boundary
    std::size_t n = 0;
    for (std::size_t i = 0; i < cfg.n_symbols; ++i) {
        const double a = bits[i] ? 1.0 : -1.0;
        for (std::size_t m = 0; m < cfg.samples_per_symbol; ++m, ++n) {
            const double t = static_cast<double>(n) / fs;
            const double chirp = kPi * cfg.chirp_rate_hz_per_s * t * t;
            const double cpm = accumulated + kPi * h * a * static_cast<double>(m) / q;
            out.samples[n] = cplx(std::cos(chirp + cpm), std::sin(chirp + cpm));
        }
        accumulated += kPi * h * a;
    }
    return out;
}

LfmCpmTxFrame lfm_cpm_transmit(std::span<const std::uint8_t> bits, const LfmCpmConfig& cfg) {
    ComplexFrame baseband = lfm_cpm_baseband(bits, cfg);
    const double fs = cfg.sample_rate_hz;

    RealWaveform passband;
    passband.sample_rate_hz = fs;
    passband.samples.resize(baseband.size());
    for (std::size_t n = 0; n < baseband.size(); ++n) {
        const double w = kTwoPi * cfg.intermediate_freq_hz * static_cast<double>(n) / fs;
        const cplx carrier(std::cos(w), std::sin(w));
        passband.samples[n] = (baseband.samples[n] * carrier).real();
    }

    auto biased = dsp::dc_bias_and_clip(passband, cfg.bias_factor);
    LfmCpmTxFrame out;
    out.optical = std::move(biased.optical);
    out.reference = std::move(baseband);
    out.clip = biased.stats;
    out.bias = biased.bias;
    return out;
}

ComplexFrame lfm_cpm_front_end(const RealWaveform& rx, const LfmCpmConfig& cfg) {
    cfg.validate();
    if (rx.size() < 4 || rx.size() % 2 != 0) {
        throw DataError("lfm_cpm_front_end: input length must be even and >= 4");
    }

    RealWaveform centered;
    centered.sample_rate_hz = rx.sample_rate_hz;
    centered.samples = rx.samples;
    const double mean =
        std::accumulate(centered.samples.begin(), centered.samples.end(), 0.0) /
        static_cast<double>(centered.samples.size());
    for (double& v : centered.samples) v -= mean;

    ComplexFrame analytic = dsp::hilbert_analytic(centered);
    const double fs = cfg.sample_rate_hz;
    for (std::size_t n = 0; n < analytic.size(); ++n) {
        const double w = -kTwoPi * cfg.intermediate_freq_hz * static_cast<double>(n) / fs;
        analytic.samples[n] *= cplx(std::cos(w), std::sin(w));
    }
    return analytic;
}

std::vector<std::uint8_t> dechirp_viterbi_decode(const ComplexFrame& baseband,
                                                 const LfmCpmConfig& cfg,
                                                 const CpmTrellis& trellis) {
    cfg.validate();
    if (baseband.size() < cfg.frame_samples()) {
        throw DataError("dechirp_viterbi_decode: frame shorter than configured");
    }

    const double fs = cfg.sample_rate_hz;
    std::vector<cplx> z(cfg.frame_samples());
    for (std::size_t n = 0; n < z.size(); ++n) {
        const double t = static_cast<double>(n) / fs;
        const double w = -kPi * cfg.chirp_rate_hz_per_s * t * t;
        z[n] = baseband.samples[n] * cplx(std::cos(w), std::sin(w));
    }

    const int n_states = trellis.n_states;
    const std::size_t q = trellis.samples_per_symbol;
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    std::vector<double> metric(static_cast<std::size_t>(n_states), kNegInf);
    std::vector<double> next(static_cast<std::size_t>(n_states));
    metric[0] = 0.0; // known zero initial phase
    // survivors[i * n_states + s]: (previous state << 1) | input
    std::vector<std::uint8_t> survivors(cfg.n_symbols * static_cast<std::size_t>(n_states));

    for (std::size_t i = 0; i < cfg.n_symbols; ++i) {
        std::fill(next.begin(), next.end(), kNegInf);
        const cplx* seg = z.data() + i * q;
        for (int s = 0; s < n_states; ++s) {
            if (metric[static_cast<std::size_t>(s)] == kNegInf) continue;
            for (int input = 0; input < 2; ++input) {
                const cplx* ref = trellis.reference(s, input);
                double corr = 0.0;
                for (std::size_t m = 0; m < q; ++m) {
                    corr += (seg[m] * std::conj(ref[m])).real();
                }
                const int delta = input == 1 ? trellis.step : -trellis.step;
                const int to = ((s + delta) % n_states + n_states) % n_states;
                const double cand = metric[static_cast<std::size_t>(s)] + corr;
                if (cand > next[static_cast<std::size_t>(to)]) {
                    next[static_cast<std::size_t>(to)] = cand;
                    survivors[i * static_cast<std::size_t>(n_states) +
                              static_cast<std::size_t>(to)] =
                        static_cast<std::uint8_t>((s << 1) | input);
                }
            }
        }
        metric.swap(next);
    }

    int state = 0;
    for (int s = 1; s < n_states; ++s) {
        if (metric[static_cast<std::size_t>(s)] > metric[static_cast<std::size_t>(state)]) {
            state = s;
        }
    }

    std::vector<std::uint8_t> bits(cfg.n_symbols);
    for (std::size_t i = cfg.n_symbols; i-- > 0;) {
        const std::uint8_t entry =
            survivors[i * static_cast<std::size_t>(n_states) + static_cast<std::size_t>(state)];
        bits[i] = entry & 1;
        state = entry >> 1;
    }
    return bits;
}

std::vector<std::uint8_t> dechirp_viterbi_decode(const ComplexFrame& baseband,
                                                 const LfmCpmConfig& cfg) {
    return dechirp_viterbi_decode(baseband, cfg, CpmTrellis::build(cfg));
}

double xcorr_range_estimate(const RealWaveform& echo, const ComplexFrame& reference,
                            const LfmCpmConfig& cfg, double sample_rate_hz) {
    if (echo.size() < reference.size()) {
        throw DataError("xcorr_range_estimate: echo shorter than the reference frame");
    }
    ComplexFrame bb = lfm_cpm_front_end(echo, cfg);
    const auto corr = dsp::cross_correlate(bb, reference);
    const std::int64_t lag = dsp::peak_lag(corr);
    return kSpeedOfLight * static_cast<double>(lag) / (2.0 * sample_rate_hz);
}

} // namespace oisac
