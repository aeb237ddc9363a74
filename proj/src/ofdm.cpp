#include "oisac/ofdm.hpp"

#include "oisac/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace oisac {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt10 = 0.31622776601683793320;

// Per-axis Gray map for 16QAM: index is the bit pair (msb, lsb).
constexpr double k16Level[4] = {-3.0, -1.0, +3.0, +1.0}; // 00, 01, 10, 11

int axis_bits_16(double level) {
    // Nearest of {-3,-1,+1,+3}, then level -> Gray bit pair.
    if (level < -2.0) return 0b00;
    if (level < 0.0) return 0b01;
    if (level < 2.0) return 0b11;
    return 0b10;
}

} // namespace

void OfdmConfig::validate() const {
    if (n_fft < 8 || !dsp::is_power_of_two(n_fft)) {
        throw ConfigError("ofdm: n_fft must be a power of two >= 8");
    }
    if (qam_order != 4 && qam_order != 16) {
        throw ConfigError("ofdm: qam_order must be 4 or 16");
    }
    if (bias_factor < 0.0) {
        throw ConfigError("ofdm: bias_factor must be >= 0");
    }
    if (n_symbols < 1) {
        throw ConfigError("ofdm: n_symbols must be >= 1");
    }
}

std::vector<cplx> qam_map(std::span<const std::uint8_t> bits, int order) {
    if (order != 4 && order != 16) {
        throw ConfigError("qam_map: order must be 4 or 16");
    }
    const std::size_t bps = order == 16 ? 4 : 2;
    if (bits.size() % bps != 0) {
        throw DataError("qam_map: bit count not divisible by bits per symbol");
    }
    std::vector<cplx> out(bits.size() / bps);
    if (order == 4) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double re = bits[2 * i] ? 1.0 : -1.0;
            const double im = bits[2 * i + 1] ? 1.0 : -1.0;
            out[i] = cplx(re * kInvSqrt2, im * kInvSqrt2);
        }
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const int re_idx = (bits[4 * i] << 1) | bits[4 * i + 1];
            const int im_idx = (bits[4 * i + 2] << 1) | bits[4 * i + 3];
            out[i] = cplx(k16Level[re_idx] * kInvSqrt10, k16Level[im_idx] * kInvSqrt10);
        }
    }
    return out;
}

std::vector<std::uint8_t> qam_demap(std::span<const cplx> symbols, int order) {
    if (order != 4 && order != 16) {
        throw ConfigError("qam_demap: order must be 4 or 16");
    }
    std::vector<std::uint8_t> out;
    out.reserve(symbols.size() * (order == 16 ? 4 : 2));
    if (order == 4) {
        for (const cplx& s : symbols) {
            out.push_back(s.real() >= 0.0 ? 1 : 0);
            out.push_back(s.imag() >= 0.0 ? 1 : 0);
        }
    } else {
        for (const cplx& s : symbols) {
            const int re = axis_bits_16(s.real() / kInvSqrt10);
            const int im = axis_bits_16(s.imag() / kInvSqrt10);
            out.push_back(static_cast<std::uint8_t>((re >> 1) & 1));
            out.push_back(static_cast<std::uint8_t>(re & 1));
            out.push_back(static_cast<std::uint8_t>((im >> 1) & 1));
            out.push_back(static_cast<std::uint8_t>(im & 1));
        }
    }
    return out;
}

OfdmTxFrame ofdm_modulate(const QamSymbolGrid& grid, const OfdmConfig& cfg,
                          double sample_rate_hz) {
    cfg.validate();
    if (grid.n_symbols != cfg.n_symbols || grid.n_carriers != cfg.data_carriers()) {
        throw ConfigError("ofdm_modulate: grid dimensions do not match the configuration");
    }

    const std::size_t n = cfg.n_fft;
    ComplexFrame baseband;
    baseband.sample_rate_hz = sample_rate_hz;
    baseband.samples.reserve(cfg.frame_samples());

    std::vector<cplx> spec(n);
    double peak_real = 0.0;
    double peak_imag = 0.0;
    for (std::size_t sym = 0; sym < cfg.n_symbols; ++sym) {
        std::fill(spec.begin(), spec.end(), cplx(0.0, 0.0));
        for (std::size_t k = 1; k < n / 2; ++k) {
            const cplx v = grid.at(sym, k - 1);
            spec[k] = v;
            spec[n - k] = std::conj(v);
        }
        dsp::dft_inplace(spec, true);
        for (const cplx& v : spec) {
            peak_real = std::max(peak_real, std::abs(v.real()));
            peak_imag = std::max(peak_imag, std::abs(v.imag()));
        }
        // Cyclic prefix, then the body.
        for (std::size_t i = n - cfg.cp_len; i < n; ++i) baseband.samples.push_back(spec[i]);
        for (std::size_t i = 0; i < n; ++i) baseband.samples.push_back(spec[i]);
    }

    if (peak_imag > 1e-9 * std::max(1.0, peak_real)) {
        throw DataError("ofdm_modulate: Hermitian placement left an imaginary residue");
    }

    auto biased = dsp::dc_bias_and_clip(baseband, cfg.bias_factor);
    OfdmTxFrame out;
    out.optical = std::move(biased.optical);
    out.baseband = std::move(baseband);
    out.clip = biased.stats;
    out.bias = biased.bias;
    return out;
}

QamSymbolGrid ofdm_demodulate(const RealWaveform& rx, const OfdmConfig& cfg,
                              std::size_t frame_start, double gain) {
    cfg.validate();
    if (!(gain > 0.0)) {
        throw ConfigError("ofdm_demodulate: equalizer gain must be > 0");
    }
    const std::size_t frame_len = cfg.frame_samples();
    if (frame_start + frame_len > rx.size()) {
        throw DataError("ofdm_demodulate: frame overruns the received buffer");
    }

    double mean = 0.0;
    for (std::size_t i = 0; i < frame_len; ++i) mean += rx.samples[frame_start + i];
    mean /= static_cast<double>(frame_len);

    QamSymbolGrid grid;
    grid.n_symbols = cfg.n_symbols;
    grid.n_carriers = cfg.data_carriers();
    grid.cells.resize(grid.n_symbols * grid.n_carriers);

    const std::size_t n = cfg.n_fft;
    std::vector<cplx> spec(n);
    for (std::size_t sym = 0; sym < cfg.n_symbols; ++sym) {
        const std::size_t body = frame_start + sym * cfg.symbol_samples() + cfg.cp_len;
        for (std::size_t i = 0; i < n; ++i) {
            spec[i] = cplx(rx.samples[body + i] - mean, 0.0);
        }
        dsp::dft_inplace(spec, false);
        for (std::size_t k = 1; k < n / 2; ++k) {
            grid.at(sym, k - 1) = spec[k] / gain;
        }
    }
    return grid;
}

RangeEstimate symbol_eliminate_range(const RealWaveform& echo, const QamSymbolGrid& tx_grid,
                                     const OfdmConfig& cfg, double sample_rate_hz) {
    cfg.validate();
    if (tx_grid.n_symbols != cfg.n_symbols || tx_grid.n_carriers != cfg.data_carriers()) {
        throw ConfigError("symbol_eliminate_range: grid dimensions do not match");
    }
    for (const cplx& v : tx_grid.cells) {
        if (std::abs(v) < 1e-30) {
            throw ConfigError("symbol_eliminate_range: zero symbol in transmit grid");
        }
    }
    const std::size_t frame_len = cfg.frame_samples();
    if (echo.size() < frame_len) {
        throw DataError("symbol_eliminate_range: echo shorter than the frame");
    }

    double mean = 0.0;
    for (std::size_t i = 0; i < frame_len; ++i) mean += echo.samples[i];
    mean /= static_cast<double>(frame_len);

    const std::size_t n = cfg.n_fft;
    std::vector<cplx> quotient(n / 2 - 1, cplx(0.0, 0.0));
    std::vector<cplx> spec(n);
    for (std::size_t sym = 0; sym < cfg.n_symbols; ++sym) {
        const std::size_t body = sym * cfg.symbol_samples() + cfg.cp_len;
        for (std::size_t i = 0; i < n; ++i) {
            spec[i] = cplx(echo.samples[body + i] - mean, 0.0);
        }
        dsp::dft_inplace(spec, false);
        for (std::size_t k = 1; k < n / 2; ++k) {
            quotient[k - 1] += spec[k] / tx_grid.at(sym, k - 1);
        }
    }
    const double inv_syms = 1.0 / static_cast<double>(cfg.n_symbols);
    for (cplx& q : quotient) q *= inv_syms;

    // Hermitian extension so the delay profile is (numerically) real.
    std::fill(spec.begin(), spec.end(), cplx(0.0, 0.0));
    for (std::size_t k = 1; k < n / 2; ++k) {
        spec[k] = quotient[k - 1];
        spec[n - k] = std::conj(quotient[k - 1]);
    }
    dsp::dft_inplace(spec, true);

    RangeEstimate out;
    out.delay_profile.resize(n);
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.delay_profile[i] = std::abs(spec[i]);
        if (out.delay_profile[i] > out.delay_profile[best]) best = i;
    }
    out.distance_m = kSpeedOfLight * static_cast<double>(best) / (2.0 * sample_rate_hz);
    return out;
}

} // namespace oisac
