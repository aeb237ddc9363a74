#include "oisac/lfsr.hpp"

#include <array>
#include <bit>
#include <string>

namespace oisac::dsp {

namespace {

// x^m + x^a + ... + 1 as exponent lists. All entries are primitive over
// GF(2); the test suite proves maximal period for every row.
const std::array<std::vector<int>, 17> kPolyTable = {{
    {},           // 0 unused
    {},           // 1 unused
    {2, 1},       // x^2 + x + 1
    {3, 1},       // x^3 + x + 1
    {4, 1},       // x^4 + x + 1
    {5, 2},       // x^5 + x^2 + 1
    {6, 1},       // x^6 + x + 1
    {7, 1},       // x^7 + x + 1
    {8, 4, 3, 2}, // x^8 + x^4 + x^3 + x^2 + 1
    {9, 4},       // x^9 + x^4 + 1
    {10, 3},      // x^10 + x^3 + 1
    {11, 2},      // x^11 + x^2 + 1
    {12, 6, 4, 1},
    {13, 4, 3, 1},
    {14, 10, 6, 1},
    {15, 1},
    {16, 12, 3, 1},
}};

} // namespace

const std::vector<int>& primitive_polynomial(int degree) {
    if (degree < 2 || degree > 16) {
        throw ConfigError("lfsr: degree must lie in [2, 16], got " + std::to_string(degree));
    }
    return kPolyTable[static_cast<std::size_t>(degree)];
}

std::vector<std::uint8_t> lfsr_msequence(int degree, const std::vector<int>& taps,
                                         std::uint32_t seed_state) {
    const std::vector<int>& table_taps = primitive_polynomial(degree);
    if (taps != table_taps) {
        throw ConfigError("lfsr: tap set is not the table polynomial for degree " +
                          std::to_string(degree));
    }
    const std::uint32_t state_mask = (degree == 32) ? 0xffffffffu : ((1u << degree) - 1u);
    if ((seed_state & state_mask) == 0) {
        throw ConfigError("lfsr: seed state must be nonzero");
    }

    // Register bit j holds output y_{n+j}. The recurrence of
    // x^m + sum_i x^i + 1 is y_{n+m} = y_n XOR sum_i y_{n+i}, so the
    // feedback mask is bit 0 (the implicit +1 term) plus the interior
    // exponents; the x^m term is the bit being produced.
    std::uint32_t fb_mask = 1u;
    for (int t : taps) {
        if (t != degree) fb_mask |= 1u << t;
    }

    std::uint32_t state = seed_state & state_mask;
    const std::size_t period = (std::size_t{1} << degree) - 1;
    std::vector<std::uint8_t> out(period);
    for (std::size_t i = 0; i < period; ++i) {
        out[i] = static_cast<std::uint8_t>(state & 1u);
        const std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(state & fb_mask) & 1);
        state = (state >> 1) | (fb << (degree - 1));
    }
    return out;
}

std::vector<std::uint8_t> lfsr_msequence(int degree, std::uint32_t seed_state) {
    return lfsr_msequence(degree, primitive_polynomial(degree), seed_state);
}

} // namespace oisac::dsp
