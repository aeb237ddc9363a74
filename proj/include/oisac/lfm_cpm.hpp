#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oisac/dsp.hpp"
#include "oisac/types.hpp"

namespace oisac {

/// Modulation index as an exact rational so the trellis state count stays
/// finite and exact.
struct Rational {
    int num = 1;
    int den = 2;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Chirp-plus-CPM on an intermediate frequency. Binary symbols, 1REC
/// frequency pulse. A zero chirp rate or intermediate frequency means
/// "derive the default" (f_if = fs/8, chirp spanning fs/4 over the frame);
/// call resolve_defaults() before use.
struct LfmCpmConfig {
    std::size_t samples_per_symbol = 8; // Q
    std::size_t n_symbols = 256;
    Rational mod_index{1, 2};
    double chirp_rate_hz_per_s = 0.0;  // mu; 0 -> resolved default
    double intermediate_freq_hz = 0.0; // 0 -> resolved default
    double sample_rate_hz = 1e9;
    double bias_factor = 1.5;

    std::size_t frame_samples() const { return n_symbols * samples_per_symbol; }
    double symbol_period_s() const { return static_cast<double>(samples_per_symbol) / sample_rate_hz; }
    double frame_period_s() const { return static_cast<double>(frame_samples()) / sample_rate_hz; }

    void resolve_defaults();
    void validate() const;
};

/// Phase-state trellis for the CPM part after de-chirping. States are the
/// multiples of pi*h modulo 2*pi; each transition carries its reference
/// segment for correlation metrics.
struct CpmTrellis {
    int n_states = 0;
    int step = 0; // state increment for symbol +1 (symbol -1 steps by -step)
    std::size_t samples_per_symbol = 0;
    // references[(state * 2 + input) * Q + m], input 0 -> symbol -1, 1 -> +1
    std::vector<cplx> references;

    static CpmTrellis build(const LfmCpmConfig& cfg);

    const cplx* reference(int state, int input) const {
        return references.data() +
               (static_cast<std::size_t>(state) * 2 + static_cast<std::size_t>(input)) *
                   samples_per_symbol;
    }
};

/// s[n] = exp(j(pi mu (n/fs)^2 + phi_cpm[n])); unit modulus everywhere.
/// One bit per symbol, bit 1 -> +1, bit 0 -> -1.
ComplexFrame lfm_cpm_baseband(std::span<const std::uint8_t> bits, const LfmCpmConfig& cfg);

struct LfmCpmTxFrame {
    RealWaveform optical;
    ComplexFrame reference; // complex baseband, kept for de-chirp and ranging
    dsp::ClipStats clip;
    double bias = 0.0;
};

/// Real passband Re{s exp(j 2 pi f_if n / fs)}, DC-biased and clipped.
LfmCpmTxFrame lfm_cpm_transmit(std::span<const std::uint8_t> bits, const LfmCpmConfig& cfg);

/// Mean removal, analytic signal, down-conversion to complex baseband.
/// Length must be an even power of two (frame sizes are chosen so).
ComplexFrame lfm_cpm_front_end(const RealWaveform& rx, const LfmCpmConfig& cfg);

/// De-chirp then maximum-likelihood sequence detection over the phase
/// trellis with per-transition correlation metrics.
std::vector<std::uint8_t> dechirp_viterbi_decode(const ComplexFrame& baseband,
                                                 const LfmCpmConfig& cfg,
                                                 const CpmTrellis& trellis);
std::vector<std::uint8_t> dechirp_viterbi_decode(const ComplexFrame& baseband,
                                                 const LfmCpmConfig& cfg);

/// Front-end the echo and cross-correlate against the transmitted baseband
/// reference; the peak lag gives the round-trip delay.
double xcorr_range_estimate(const RealWaveform& echo, const ComplexFrame& reference,
                            const LfmCpmConfig& cfg, double sample_rate_hz);

} // namespace oisac
