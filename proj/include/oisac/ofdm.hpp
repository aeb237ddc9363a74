#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oisac/dsp.hpp"
#include "oisac/types.hpp"

namespace oisac {

/// DCO-OFDM frame parameters. Data rides on subcarriers 1..N/2-1; bins 0 and
/// N/2 are nulled and the upper half mirrors conjugately, so the time-domain
/// signal is real before biasing.
struct OfdmConfig {
    std::size_t n_fft = 256;
    std::size_t cp_len = 64;
    int qam_order = 4; // 4 or 16
    double bias_factor = 3.0;
    std::size_t n_symbols = 16;

    std::size_t data_carriers() const { return n_fft / 2 - 1; }
    std::size_t symbol_samples() const { return n_fft + cp_len; }
    std::size_t frame_samples() const { return n_symbols * symbol_samples(); }
    std::size_t bits_per_symbol() const { return qam_order == 16 ? 4 : 2; }
    std::size_t bits_per_frame() const {
        return n_symbols * data_carriers() * bits_per_symbol();
    }

    void validate() const;
};

/// Complex constellation points, one row per OFDM symbol, one column per
/// data subcarrier. Row-major.
struct QamSymbolGrid {
    std::size_t n_symbols = 0;
    std::size_t n_carriers = 0;
    std::vector<cplx> cells;

    cplx& at(std::size_t sym, std::size_t carrier) { return cells[sym * n_carriers + carrier]; }
    const cplx& at(std::size_t sym, std::size_t carrier) const {
        return cells[sym * n_carriers + carrier];
    }
};

/// Gray-mapped square constellation with unit average energy.
/// 4QAM: per-axis bit 1 -> +1, 0 -> -1, scaled by 1/sqrt(2).
/// 16QAM: per-axis bit pair 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3, scaled
/// by 1/sqrt(10). First half of each symbol's bits drives the real axis.
std::vector<cplx> qam_map(std::span<const std::uint8_t> bits, int order);

/// Hard minimum-distance decisions; exact inverse of qam_map on clean input.
std::vector<std::uint8_t> qam_demap(std::span<const cplx> symbols, int order);

struct OfdmTxFrame {
    RealWaveform optical;  // biased and clipped, ready for the laser
    ComplexFrame baseband; // pre-bias time-domain record (CP included)
    dsp::ClipStats clip;
    double bias = 0.0;
};

/// Hermitian placement, unitary inverse DFT, cyclic prefix, then DC bias
/// and clipping at the configured factor.
OfdmTxFrame ofdm_modulate(const QamSymbolGrid& grid, const OfdmConfig& cfg,
                          double sample_rate_hz = 1.0);

/// Mean removal, CP strip, forward DFT, data-bin extraction, and single-tap
/// genie equalization by the known flat electrical gain.
QamSymbolGrid ofdm_demodulate(const RealWaveform& rx, const OfdmConfig& cfg,
                              std::size_t frame_start, double gain);

struct RangeEstimate {
    double distance_m = 0.0;
    std::vector<double> delay_profile; // magnitude, one entry per sample lag in [0, N)
};

/// Symbol-elimination ranging: per symbol, divide received data bins by the
/// transmitted symbols, average the quotients coherently across symbols, and
/// inverse-transform to a delay profile. Peak index (ties toward the
/// smallest lag) gives the round-trip delay on the sample grid.
RangeEstimate symbol_eliminate_range(const RealWaveform& echo, const QamSymbolGrid& tx_grid,
                                     const OfdmConfig& cfg, double sample_rate_hz);

} // namespace oisac
