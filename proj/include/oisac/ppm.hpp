#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oisac/rng.hpp"
#include "oisac/types.hpp"

namespace oisac {

/// m-sequence spreading of the pulse: the pulse-bearing slot carries one
/// period of the sequence as on/off chips (+1 chips at the pulse amplitude,
/// -1 chips dark). `phase` cyclically rotates the sequence, which is how
/// interfering users are separated.
struct PpmSpreading {
    int degree = 6; // m, chip pattern length 2^m - 1
    int phase = 0;
};

/// L-ary PPM frame layout. Without spreading each slot is one rectangular
/// chip of `samples_per_slot` samples; with spreading the slot widens to
/// 2^m - 1 such chips carrying the sequence pattern.
struct PpmConfig {
    std::size_t slots_per_symbol = 4; // L, power of two
    std::size_t samples_per_slot = 4; // samples per chip
    std::size_t n_symbols = 64;
    std::optional<PpmSpreading> spreading;
    double pulse_amplitude = 1.0;

    std::size_t chips_per_slot() const;
    std::size_t slot_samples() const { return chips_per_slot() * samples_per_slot; }
    std::size_t symbol_samples() const { return slots_per_symbol * slot_samples(); }
    std::size_t frame_samples() const { return n_symbols * symbol_samples(); }
    std::size_t bits_per_symbol() const;
    std::size_t bits_per_frame() const { return n_symbols * bits_per_symbol(); }

    /// Chip pattern over one slot: 1 where a chip is lit.
    std::vector<std::uint8_t> chip_pattern() const;

    void validate() const;
};

/// Non-negative by construction; no DC bias is ever applied.
RealWaveform ppm_modulate(std::span<const int> symbols, const PpmConfig& cfg,
                          double sample_rate_hz = 1.0);

/// Per slot, correlate against the chip pattern and pick the largest;
/// ties break toward the smallest slot index.
std::vector<int> ppm_demodulate(const RealWaveform& rx, const PpmConfig& cfg);

/// Matched filter against the full transmitted frame; peak lag -> distance.
double ppm_tof_estimate(const RealWaveform& echo, const RealWaveform& tx,
                        const PpmConfig& cfg, double sample_rate_hz);

struct MuiInterferer {
    int spreading_phase = 0;                   // sequence phase for this user
    double amplitude = 1.0;                    // relative to the desired user
    std::optional<std::int64_t> delay_samples; // absent -> uniform random
};

struct MuiSpec {
    std::vector<MuiInterferer> interferers;
};

/// Adds independently generated interferer frames (random payloads, the
/// given delays/amplitudes) on top of rx.
RealWaveform inject_mui(const RealWaveform& rx, const MuiSpec& mui, const PpmConfig& cfg,
                        const SeedSpec& seed);

} // namespace oisac
