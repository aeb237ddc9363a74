#pragma once

#include <cstdint>
#include <vector>

#include "oisac/types.hpp"

namespace oisac::dsp {

/// One canonical primitive polynomial per degree m in [2, 16], written as
/// the exponent list of x^m + ... + 1 (the trailing +1 is implicit).
/// Example: degree 3 entry {3, 1} is x^3 + x + 1.
const std::vector<int>& primitive_polynomial(int degree);

/// One period (2^m - 1 bits) of the maximal-length sequence produced by a
/// Fibonacci LFSR over the given primitive polynomial. The seed is the
/// initial register state and must be nonzero; it selects the sequence
/// phase. Tap sets not in the built-in table are rejected.
std::vector<std::uint8_t> lfsr_msequence(int degree, const std::vector<int>& taps,
                                         std::uint32_t seed_state);

/// Same, with the table polynomial for the degree.
std::vector<std::uint8_t> lfsr_msequence(int degree, std::uint32_t seed_state);

} // namespace oisac::dsp
