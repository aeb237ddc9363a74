#include "oisac/selftest.hpp"

#include "oisac/allocator.hpp"
#include "oisac/channel.hpp"
#include "oisac/csv.hpp"
#include "oisac/dsp.hpp"
#include "oisac/harness.hpp"
#include "oisac/lfm_cpm.hpp"
#include "oisac/lfsr.hpp"
#include "oisac/ofdm.hpp"
#include "oisac/ppm.hpp"
#include "oisac/rng.hpp"

#include <cmath>

namespace oisac {

namespace {

bool check_dft_round_trip() {
    StreamRng rng({1001, 0, 0, StreamRole::Generic});
    ComplexFrame f;
    f.samples.resize(256);
    for (auto& v : f.samples) v = cplx(rng.gaussian(), rng.gaussian());
    const auto back = dsp::dft(dsp::dft(f, false), true);
    double peak = 0.0, err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        peak = std::max(peak, std::abs(f.samples[i]));
        err = std::max(err, std::abs(f.samples[i] - back.samples[i]));
    }
    return err < 1e-9 * peak;
}

bool check_parseval() {
    StreamRng rng({1002, 0, 0, StreamRole::Generic});
    ComplexFrame f;
    f.samples.resize(128);
    for (auto& v : f.samples) v = cplx(rng.gaussian(), rng.gaussian());
    const auto spec = dsp::dft(f, false);
    double et = 0.0, ef = 0.0;
    for (const auto& v : f.samples) et += std::norm(v);
    for (const auto& v : spec.samples) ef += std::norm(v);
    return std::abs(et - ef) < 1e-9 * et;
}

bool check_hilbert_leakage() {
    StreamRng rng({1003, 0, 0, StreamRole::Generic});
    const std::size_t n = 256;
    std::vector<cplx> spec(n, cplx(0, 0));
    for (std::size_t k = 6; k < n / 4; ++k) {
        spec[k] = cplx(rng.gaussian(), rng.gaussian());
        spec[n - k] = std::conj(spec[k]);
    }
    dsp::dft_inplace(spec, true);
    RealWaveform x;
    x.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) x.samples[i] = spec[i].real();
    auto a = dsp::hilbert_analytic(x);
    dsp::dft_inplace(a.samples, false);
    double neg = 0.0, total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        total += std::norm(a.samples[k]);
        if (k > n / 2) neg += std::norm(a.samples[k]);
    }
    return neg / total < 1e-12;
}

bool check_msequences() {
    for (int m = 2; m <= 10; ++m) {
        const auto seq = dsp::lfsr_msequence(m, 1u);
        long ones = 0;
        for (auto b : seq) ones += b;
        if (ones != (1L << (m - 1))) return false;
    }
    return true;
}

bool check_clip_arithmetic() {
    RealWaveform x;
    x.samples = {-1.0, 1.0};
    const auto r = dsp::dc_bias_and_clip(x, 1.0);
    return std::abs(r.bias - 1.0) < 1e-12 && r.optical.samples[0] == 0.0 &&
           std::abs(r.optical.samples[1] - 2.0) < 1e-12 && r.stats.clipped_fraction == 0.0;
}

bool check_ofdm_exactness() {
    OfdmConfig cfg;
    cfg.n_fft = 64;
    cfg.cp_len = 16;
    cfg.n_symbols = 2;
    StreamRng rng({1004, 0, 0, StreamRole::Payload});
    std::vector<std::uint8_t> bits(cfg.bits_per_frame());
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bits() & 1);
    QamSymbolGrid grid;
    grid.n_symbols = cfg.n_symbols;
    grid.n_carriers = cfg.data_carriers();
    grid.cells = qam_map(bits, cfg.qam_order);
    const auto tx = ofdm_modulate(grid, cfg);

    RealWaveform echo;
    echo.samples.assign(tx.optical.size(), 0.0);
    const std::size_t d = 5;
    for (std::size_t i = d; i < echo.size(); ++i) {
        echo.samples[i] = 0.4 * tx.optical.samples[i - d];
    }
    const auto est = symbol_eliminate_range(echo, grid, cfg, 1e9);
    return std::abs(est.distance_m - kSpeedOfLight * 5.0 / 2e9) < 1e-9;
}

bool check_lfm_exactness() {
    LfmCpmConfig cfg;
    cfg.samples_per_symbol = 8;
    cfg.n_symbols = 64;
    cfg.sample_rate_hz = 1.0;
    cfg.resolve_defaults();
    StreamRng rng({1005, 0, 0, StreamRole::Payload});
    std::vector<std::uint8_t> bits(cfg.n_symbols);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bits() & 1);
    const auto tx = lfm_cpm_transmit(bits, cfg);

    RealWaveform echo;
    echo.sample_rate_hz = 1.0;
    echo.samples.assign(1024, 0.0);
    const std::size_t d = 17;
    for (std::size_t i = 0; i < tx.optical.size(); ++i) {
        echo.samples[d + i] = 0.2 * tx.optical.samples[i];
    }
    const double d_hat = xcorr_range_estimate(echo, tx.reference, cfg, 1.0);
    if (std::abs(d_hat - kSpeedOfLight * 17.0 / 2.0) > 1e-6) return false;

    const auto decoded = dechirp_viterbi_decode(lfm_cpm_front_end(tx.optical, cfg), cfg);
    return decoded == bits;
}

bool check_ppm_exactness() {
    PpmConfig cfg;
    cfg.n_symbols = 8;
    std::vector<int> syms{0, 1, 2, 3, 3, 2, 1, 0};
    const auto tx = ppm_modulate(syms, cfg, 1.0);
    if (ppm_demodulate(tx, cfg) != syms) return false;
    RealWaveform echo;
    echo.sample_rate_hz = 1.0;
    echo.samples.assign(tx.size() + 64, 0.0);
    for (std::size_t i = 0; i < tx.size(); ++i) echo.samples[9 + i] = tx.samples[i];
    return std::abs(ppm_tof_estimate(echo, tx, cfg, 1.0) - kSpeedOfLight * 9.0 / 2.0) < 1e-9;
}

bool check_allocator_kkt() {
    AllocationProblem p;
    p.comm_gains = {1.0, 4.0};
    p.sense_gains = {0.0, 0.0};
    p.weight_alpha = 1.0;
    const auto powers = allocate_power(p);
    return std::abs(powers[0] - 0.125) < 1e-6 && std::abs(powers[1] - 0.875) < 1e-6;
}

bool check_sweep_determinism() {
    SweepSpec spec;
    spec.scheme = Scheme::DcoOfdm;
    spec.ofdm.n_fft = 64;
    spec.ofdm.cp_len = 16;
    spec.ofdm.n_symbols = 2;
    spec.snr_db_grid = {0.0, 10.0};
    spec.target_min_m = 0.8;
    spec.target_max_m = 2.2;
    spec.min_trials = spec.max_trials = 48;
    spec.master_seed = 777;

    spec.threads = 1;
    const auto a = sweep_csv(spec, run_sweep(spec));
    spec.threads = 4;
    const auto b = sweep_csv(spec, run_sweep(spec));
    return a == b;
}

} // namespace

int run_selftest(std::ostream& out) {
    struct Check {
        const char* name;
        bool (*fn)();
    };
    const Check checks[] = {
        {"dft round trip", check_dft_round_trip},
        {"parseval", check_parseval},
        {"hilbert negative-frequency leakage", check_hilbert_leakage},
        {"m-sequence balance", check_msequences},
        {"dc bias and clip arithmetic", check_clip_arithmetic},
        {"ofdm symbol-elimination exactness", check_ofdm_exactness},
        {"lfm-cpm ranging and decode exactness", check_lfm_exactness},
        {"ppm decode and tof exactness", check_ppm_exactness},
        {"allocator water-filling", check_allocator_kkt},
        {"sweep determinism across thread counts", check_sweep_determinism},
    };
    int failures = 0;
    for (const auto& check : checks) {
        const bool ok = check.fn();
        out << (ok ? "[PASS] " : "[FAIL] ") << check.name << "\n";
        failures += ok ? 0 : 1;
    }
    return failures;
}

} // namespace oisac
