#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oisac/allocator.hpp"
#include "oisac/harness.hpp"

namespace oisac {

/// Shortest round-trip decimal form, locale-independent, LF line endings
/// throughout. Reruns of the same spec produce byte-identical files.
std::string format_number(double v);
std::string format_number(std::uint64_t v);

/// Long-format sweep table with the fixed header
/// scheme,snr_db,snr_convention,qam_order,bias_factor,ber,ber_ci95,rmse_m,
/// n_bits,n_trials,clip_fraction,seed
std::string sweep_csv(const SweepSpec& spec, const SweepResult& result);

std::string alloc_csv(const AllocationProblem& problem, const std::vector<double>& powers);

struct WaveformDump {
    RealWaveform optical;
    ComplexFrame baseband; // empty for schemes without a complex record
};
std::string waveform_csv(const WaveformDump& dump);

void write_file(const std::string& path, const std::string& content);

} // namespace oisac
