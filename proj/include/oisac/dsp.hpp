#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oisac/types.hpp"

namespace oisac::dsp {

/// Unitary DFT (1/sqrt(N) scaling in both directions). Length must be a
/// power of two; anything else is rejected, there is no slow fallback.
ComplexFrame dft(const ComplexFrame& frame, bool inverse);

/// In-place variant used by the hot paths.
void dft_inplace(std::vector<cplx>& data, bool inverse);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

/// Analytic signal via the frequency-domain mask: the real part equals the
/// input exactly, the imaginary part is its Hilbert transform. Requires an
/// even length >= 4 so positive and negative bins split cleanly.
ComplexFrame hilbert_analytic(const RealWaveform& x);

/// Sliding inner products <rx[k..k+M), template> for every valid lag
/// k in [0, N-M]. Computed with FFTs; magnitudes only, which is all the
/// peak searches downstream consume.
struct Correlation {
    std::vector<std::int64_t> lags;
    std::vector<double> magnitudes;
};

Correlation cross_correlate(const ComplexFrame& rx, const ComplexFrame& tmpl);

/// Index of the largest magnitude; ties break toward the smallest lag.
std::int64_t peak_lag(const Correlation& corr);

struct ClipStats {
    double clipped_fraction = 0.0;        // samples with x + b < 0
    double clipped_energy_fraction = 0.0; // energy removed / pre-clip energy
};

struct BiasResult {
    RealWaveform optical; // max(x + b, 0), tagged optical
    ClipStats stats;
    double bias = 0.0;  // b = kappa * sigma
    double sigma = 0.0; // biased sample standard deviation of the input
};

/// DC bias proportional to the sample standard deviation, then one-sided
/// clipping at zero. The complex overload requires a negligible imaginary
/// residue (|imag| < 1e-12), i.e. real-ification already happened upstream.
BiasResult dc_bias_and_clip(const RealWaveform& x, double bias_factor);
BiasResult dc_bias_and_clip(const ComplexFrame& x, double bias_factor);

} // namespace oisac::dsp
