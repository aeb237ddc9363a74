#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oisac/allocator.hpp"
#include "oisac/harness.hpp"
#include "oisac/types.hpp"

namespace oisac {

/// Parsed and validated experiment description. The on-disk format is flat
/// `key = value` lines under `[section]` headers, `#` comments, strict:
/// unknown sections or keys are rejected and every violation in the file is
/// reported at once, not just the first.
struct ExperimentConfig {
    enum class Kind { Sweep, ScanBias, Allocate, DumpWaveform };

    Kind kind = Kind::Sweep;
    SweepSpec sweep; // scheme + channel + sweep grid (Sweep/ScanBias/Dump)
    std::vector<double> scan_bias_factors;
    AllocationProblem alloc;
    std::string out_dir = "out";
    std::uint64_t dump_payload_seed = 1;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Key-value echo of the fully resolved configuration; written next to the
/// results so a run can be reproduced from its outputs alone.
std::string describe_config(const ExperimentConfig& cfg);

} // namespace oisac
