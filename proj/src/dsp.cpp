#include "oisac/dsp.hpp"

#include <algorithm>
#include <cmath>

namespace oisac::dsp {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
} // namespace

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void dft_inplace(std::vector<cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) {
        throw ConfigError("dft: length " + std::to_string(n) + " is not a power of two");
    }
    if (n == 1) return;

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    // Twiddle table e^{+-j 2 pi k / n}, k < n/2, indexed with a stride per stage.
    thread_local std::vector<cplx> twiddle;
    twiddle.resize(n / 2);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = sign * kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        twiddle[k] = cplx(std::cos(ang), std::sin(ang));
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx w = twiddle[k * stride];
                cplx& a = data[base + k];
                cplx& b = data[base + k + len / 2];
                const cplx t = b * w;
                b = a - t;
                a = a + t;
            }
        }
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : data) v *= scale;
}

ComplexFrame dft(const ComplexFrame& frame, bool inverse) {
    if (frame.samples.empty()) {
        throw ConfigError("dft: empty frame");
    }
    ComplexFrame out = frame;
    dft_inplace(out.samples, inverse);
    return out;
}

ComplexFrame hilbert_analytic(const RealWaveform& x) {
    const std::size_t n = x.size();
    if (n < 4 || n % 2 != 0) {
        throw ConfigError("hilbert_analytic: length must be even and >= 4, got " +
                          std::to_string(n));
    }
    if (!is_power_of_two(n)) {
        throw ConfigError("hilbert_analytic: length must be a power of two, got " +
                          std::to_string(n));
    }

    std::vector<cplx> spec(n);
    for (std::size_t i = 0; i < n; ++i) spec[i] = cplx(x.samples[i], 0.0);
    dft_inplace(spec, false);

    // One-sided mask: DC and Nyquist kept, positive bins doubled, negative
    // bins zeroed.
    for (std::size_t k = 1; k < n / 2; ++k) spec[k] *= 2.0;
    for (std::size_t k = n / 2 + 1; k < n; ++k) spec[k] = cplx(0.0, 0.0);
    dft_inplace(spec, true);

    ComplexFrame out;
    out.sample_rate_hz = x.sample_rate_hz;
    out.samples.resize(n);
    // Pin the real part to the input; only the quadrature comes from the
    // transform path.
    for (std::size_t i = 0; i < n; ++i) {
        out.samples[i] = cplx(x.samples[i], spec[i].imag());
    }
    return out;
}

Correlation cross_correlate(const ComplexFrame& rx, const ComplexFrame& tmpl) {
    const std::size_t n = rx.size();
    const std::size_t m = tmpl.size();
    if (m == 0) {
        throw ConfigError("cross_correlate: empty template");
    }
    if (m > n) {
        throw ConfigError("cross_correlate: template longer than input (" +
                          std::to_string(m) + " > " + std::to_string(n) + ")");
    }

    // Zero-padded circular correlation; padding to >= n keeps every valid
    // lag wrap-free.
    const std::size_t p = next_power_of_two(n);
    std::vector<cplx> a(p, cplx(0.0, 0.0));
    std::vector<cplx> b(p, cplx(0.0, 0.0));
    std::copy(rx.samples.begin(), rx.samples.end(), a.begin());
    std::copy(tmpl.samples.begin(), tmpl.samples.end(), b.begin());
    dft_inplace(a, false);
    dft_inplace(b, false);
    for (std::size_t k = 0; k < p; ++k) a[k] *= std::conj(b[k]);
    dft_inplace(a, true);

    const double scale = std::sqrt(static_cast<double>(p));
    Correlation out;
    const std::size_t n_lags = n - m + 1;
    out.lags.resize(n_lags);
    out.magnitudes.resize(n_lags);
    for (std::size_t k = 0; k < n_lags; ++k) {
        out.lags[k] = static_cast<std::int64_t>(k);
        out.magnitudes[k] = std::abs(a[k]) * scale;
    }
    return out;
}

std::int64_t peak_lag(const Correlation& corr) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < corr.magnitudes.size(); ++k) {
        if (corr.magnitudes[k] > corr.magnitudes[best]) best = k;
    }
    return corr.lags[best];
}

namespace {

BiasResult bias_and_clip_real(std::vector<double> samples, double sample_rate_hz,
                              double bias_factor) {
    if (bias_factor < 0.0) {
        throw ConfigError("dc_bias_and_clip: bias factor must be >= 0");
    }
    const std::size_t n = samples.size();
    double mean = 0.0;
    for (double v : samples) {
        if (std::isnan(v)) throw DataError("dc_bias_and_clip: NaN in input");
        mean += v;
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : samples) {
        const double d = v - mean;
        var += d * d;
    }
    var /= static_cast<double>(n); // biased estimator, deterministic bookkeeping

    BiasResult res;
    res.sigma = std::sqrt(var);
    res.bias = bias_factor * res.sigma;

    double pre_energy = 0.0;
    double clipped_energy = 0.0;
    std::size_t clipped = 0;
    for (auto& v : samples) {
        const double shifted = v + res.bias;
        pre_energy += shifted * shifted;
        if (shifted < 0.0) {
            clipped_energy += shifted * shifted;
            ++clipped;
            v = 0.0;
        } else {
            v = shifted;
        }
    }
    res.stats.clipped_fraction = static_cast<double>(clipped) / static_cast<double>(n);
    res.stats.clipped_energy_fraction = pre_energy > 0.0 ? clipped_energy / pre_energy : 0.0;
    res.optical.samples = std::move(samples);
    res.optical.sample_rate_hz = sample_rate_hz;
    res.optical.optical = true;
    return res;
}

} // namespace

BiasResult dc_bias_and_clip(const RealWaveform& x, double bias_factor) {
    if (x.samples.empty()) {
        throw ConfigError("dc_bias_and_clip: empty input");
    }
    return bias_and_clip_real(x.samples, x.sample_rate_hz, bias_factor);
}

BiasResult dc_bias_and_clip(const ComplexFrame& x, double bias_factor) {
    if (x.samples.empty()) {
        throw ConfigError("dc_bias_and_clip: empty input");
    }
    std::vector<double> real(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const cplx v = x.samples[i];
        if (std::isnan(v.real()) || std::isnan(v.imag())) {
            throw DataError("dc_bias_and_clip: NaN in input");
        }
        if (std::abs(v.imag()) >= 1e-12) {
            throw DataError("dc_bias_and_clip: imaginary residue above 1e-12; "
                            "input must be real-ified upstream");
        }
        real[i] = v.real();
    }
    return bias_and_clip_real(std::move(real), x.sample_rate_hz, bias_factor);
}

} // namespace oisac::dsp
