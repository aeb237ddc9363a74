// Acceptance suite: one self-contained check per criterion, one PASS/FAIL
// line each. Run with no arguments for all criteria or pass criterion
// numbers (e.g. "acceptance 1 3"). Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

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
#include "oracles.hpp"

using namespace oisac;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

#define REQUIRE_THAT(cond, message)                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            out.pass = false;                                         \
            out.detail += std::string("; FAILED: ") + (message);      \
        }                                                             \
    } while (0)

SweepSpec reference_sweep_spec(int qam_order) {
    SweepSpec spec;
    spec.scheme = Scheme::DcoOfdm;
    spec.ofdm.n_fft = 256;
    spec.ofdm.cp_len = 64;
    spec.ofdm.n_symbols = 16;
    spec.ofdm.qam_order = qam_order;
    spec.ofdm.bias_factor = 3.0;
    spec.convention = SnrConvention::ElectricalAc;
    for (double s = -30.0; s <= 14.01; s += 2.0) spec.snr_db_grid.push_back(s);
    spec.target_min_m = 2.4;
    spec.target_max_m = 7.2;
    spec.min_trials = spec.max_trials = 300; // 2.44e6 bits per point at 4QAM
    spec.master_seed = 20250810;
    spec.threads = 4;
    return spec;
}

double quantization_floor(const SweepSpec& spec) {
    return kSpeedOfLight / (2.0 * spec.channel.sample_rate_hz * std::sqrt(12.0));
}

// Smallest grid SNR at which the predicate holds; NaN when it never does.
double first_snr(const SweepResult& r, const std::function<bool(const SweepPoint&)>& pred) {
    for (const auto& p : r.points) {
        if (pred(p)) return p.snr_db;
    }
    return std::nan("");
}

Outcome criterion1() {
    Outcome out;
    const SweepSpec spec = reference_sweep_spec(4);
    const auto result = run_sweep(spec);

    const auto& top = result.points.back();
    std::ostringstream detail;
    detail << "top point " << top.snr_db << " dB: BER " << top.ber << " over " << top.n_bits
           << " bits";
    out.detail = detail.str();

    REQUIRE_THAT(top.n_bits >= 1'000'000, "fewer than 1e6 bits at the top SNR point");
    REQUIRE_THAT(top.ber <= 1e-4, "BER above 1e-4 at the highest swept SNR");
    for (std::size_t i = 1; i < result.points.size(); ++i) {
        REQUIRE_THAT(result.points[i].ber <= result.points[i - 1].ber + 1e-12,
                     "BER not monotone non-increasing at " +
                         std::to_string(result.points[i].snr_db) + " dB");
    }
    return out;
}

Outcome criterion2() {
    Outcome out;
    const auto r4 = run_sweep(reference_sweep_spec(4));
    const auto r16 = run_sweep(reference_sweep_spec(16));

    std::size_t compared = 0;
    for (std::size_t i = 0; i < r4.points.size(); ++i) {
        const auto w4 = wilson95(r4.points[i].n_error_events, r4.points[i].n_bits);
        const auto w16 = wilson95(r16.points[i].n_error_events, r16.points[i].n_bits);
        const bool overlap = w4.lo <= w16.hi && w16.lo <= w4.hi;
        if (overlap) continue;
        ++compared;
        REQUIRE_THAT(r4.points[i].ber <= r16.points[i].ber,
                     "4QAM BER above 16QAM at " + std::to_string(r4.points[i].snr_db) + " dB");
    }
    out.detail = std::to_string(compared) + " points with disjoint CIs, 4QAM <= 16QAM at all";
    REQUIRE_THAT(compared >= 5, "too few points with disjoint confidence intervals");
    return out;
}

Outcome criterion3() {
    Outcome out;
    const SweepSpec spec = reference_sweep_spec(4);
    const auto result = run_sweep(spec);
    const double floor = quantization_floor(spec);

    for (std::size_t i = 1; i < result.points.size(); ++i) {
        REQUIRE_THAT(result.points[i].rmse_m <=
                         result.points[i - 1].rmse_m * (1.0 + 1e-9) + 1e-12,
                     "RMSE not monotone non-increasing at " +
                         std::to_string(result.points[i].snr_db) + " dB");
    }
    const double top_ratio = result.points.back().rmse_m / floor;
    REQUIRE_THAT(std::abs(top_ratio - 1.0) <= 0.15,
                 "top-SNR RMSE not within 15% of the quantization floor");

    const double snr_rmse =
        first_snr(result, [&](const SweepPoint& p) { return p.rmse_m <= 2.0 * floor; });
    const double snr_ber = first_snr(result, [](const SweepPoint& p) { return p.ber <= 1e-2; });
    std::ostringstream detail;
    detail << "RMSE reaches 2x floor at " << snr_rmse << " dB, BER crosses 1e-2 at " << snr_ber
           << " dB, top RMSE/floor " << top_ratio;
    out.detail = detail.str();
    REQUIRE_THAT(!std::isnan(snr_rmse), "RMSE never reaches 2x the floor");
    REQUIRE_THAT(!std::isnan(snr_ber), "BER never crosses 1e-2");
    REQUIRE_THAT(snr_rmse < snr_ber, "sensing does not converge before the BER=1e-2 crossing");
    return out;
}

Outcome criterion4() {
    Outcome out;
    SweepSpec spec = reference_sweep_spec(4);
    spec.snr_db_grid.clear();
    for (double s = -30.0; s <= 30.01; s += 2.0) spec.snr_db_grid.push_back(s);
    const double kappas[] = {1.0, 3.0};
    const auto scan = bias_tradeoff_scan(spec, kappas);
    const double floor = quantization_floor(spec);

    const auto& low = scan.sweeps[0];  // kappa = 1
    const auto& high = scan.sweeps[1]; // kappa = 3

    const double ber_low_top = low.points.back().ber;
    const double ber_high_top = high.points.back().ber;
    const double conv_low =
        first_snr(low, [&](const SweepPoint& p) { return p.rmse_m <= 2.0 * floor; });
    const double conv_high =
        first_snr(high, [&](const SweepPoint& p) { return p.rmse_m <= 2.0 * floor; });

    std::ostringstream detail;
    detail << "top BER kappa1 " << ber_low_top << " vs kappa3 " << ber_high_top
           << "; RMSE convergence kappa1 " << conv_low << " dB vs kappa3 " << conv_high << " dB";
    out.detail = detail.str();

    REQUIRE_THAT(ber_high_top < ber_low_top,
                 "high-SNR BER does not strictly improve from kappa 1 to kappa 3");
    REQUIRE_THAT(!std::isnan(conv_low) && !std::isnan(conv_high),
                 "RMSE never converged within the grid");
    REQUIRE_THAT(conv_high > conv_low,
                 "RMSE convergence SNR does not strictly worsen from kappa 1 to kappa 3");
    for (std::size_t i = 0; i < low.points.size(); ++i) {
        REQUIRE_THAT(high.points[i].clip_fraction < low.points[i].clip_fraction,
                     "clip fraction not decreasing in kappa");
    }
    return out;
}

Outcome criterion5() {
    Outcome out;

    // DCO-OFDM symbol elimination, every in-prefix delay.
    OfdmConfig ocfg;
    ocfg.n_fft = 256;
    ocfg.cp_len = 64;
    ocfg.n_symbols = 16;
    StreamRng rng({505, 0, 0, StreamRole::Payload});
    std::vector<std::uint8_t> bits(ocfg.bits_per_frame());
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bits() & 1);
    QamSymbolGrid grid;
    grid.n_symbols = ocfg.n_symbols;
    grid.n_carriers = ocfg.data_carriers();
    grid.cells = qam_map(bits, ocfg.qam_order);
    const auto otx = ofdm_modulate(grid, ocfg);
    for (std::size_t d = 0; d < 64; ++d) {
        RealWaveform echo;
        echo.samples.assign(otx.optical.size(), 0.0);
        for (std::size_t i = d; i < echo.size(); ++i) {
            echo.samples[i] = 0.3 * otx.optical.samples[i - d];
        }
        const auto est = symbol_eliminate_range(echo, grid, ocfg, 1e9);
        const double expect = kSpeedOfLight * static_cast<double>(d) / 2e9;
        REQUIRE_THAT(std::abs(est.distance_m - expect) < 1e-9,
                     "OFDM delay " + std::to_string(d) + " not recovered exactly");
    }

    // LFM-CPM correlation lags.
    LfmCpmConfig lcfg;
    lcfg.samples_per_symbol = 8;
    lcfg.n_symbols = 256;
    lcfg.sample_rate_hz = 1.0;
    lcfg.resolve_defaults();
    std::vector<std::uint8_t> lbits(lcfg.n_symbols);
    for (auto& b : lbits) b = static_cast<std::uint8_t>(rng.bits() & 1);
    const auto ltx = lfm_cpm_transmit(lbits, lcfg);
    for (std::size_t d : {std::size_t{0}, std::size_t{1}, std::size_t{17}, std::size_t{100}}) {
        RealWaveform echo;
        echo.sample_rate_hz = 1.0;
        echo.samples.assign(4096, 0.0);
        for (std::size_t i = 0; i < ltx.optical.size(); ++i) {
            echo.samples[d + i] = 0.25 * ltx.optical.samples[i];
        }
        const double d_hat = xcorr_range_estimate(echo, ltx.reference, lcfg, 1.0);
        const double expect = kSpeedOfLight * static_cast<double>(d) / 2.0;
        REQUIRE_THAT(std::abs(d_hat - expect) < 1e-9,
                     "LFM-CPM lag " + std::to_string(d) + " not recovered exactly");
    }

    // PPM decode + ToF, exhaustive over the L=4 alphabet.
    PpmConfig pcfg;
    pcfg.slots_per_symbol = 4;
    pcfg.samples_per_slot = 4;
    pcfg.n_symbols = 4;
    for (int base = 0; base < 4; ++base) {
        std::vector<int> syms{base, (base + 1) % 4, (base + 2) % 4, (base + 3) % 4};
        const auto tx = ppm_modulate(syms, pcfg, 1.0);
        REQUIRE_THAT(ppm_demodulate(tx, pcfg) == syms, "PPM decode mismatch");
        const std::size_t d = static_cast<std::size_t>(7 + 11 * base);
        RealWaveform echo;
        echo.sample_rate_hz = 1.0;
        echo.samples.assign(tx.size() + 64, 0.0);
        for (std::size_t i = 0; i < tx.size(); ++i) echo.samples[d + i] = 0.4 * tx.samples[i];
        const double d_hat = ppm_tof_estimate(echo, tx, pcfg, 1.0);
        const double expect = kSpeedOfLight * static_cast<double>(d) / 2.0;
        REQUIRE_THAT(std::abs(d_hat - expect) < 1e-9, "PPM ToF mismatch");
    }

    out.detail = "OFDM D in [0,64), LFM-CPM D in {0,1,17,100}, PPM exhaustive L=4";
    return out;
}

Outcome criterion6() {
    Outcome out;

    // DFT vs the direct O(N^2) oracle.
    StreamRng rng({606, 0, 0, StreamRole::Generic});
    for (std::size_t n = 1; n <= 64; n <<= 1) {
        ComplexFrame f;
        f.samples.resize(n);
        for (auto& v : f.samples) v = cplx(rng.gaussian(), rng.gaussian());
        const auto fast = dsp::dft(f, false);
        const auto slow = oracle::dft(f.samples, false);
        double scale = 1e-30, err = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            scale = std::max(scale, std::abs(slow[k]));
            err = std::max(err, std::abs(fast.samples[k] - slow[k]));
        }
        REQUIRE_THAT(err < 1e-9 * scale, "DFT deviates from the direct oracle at N=" +
                                             std::to_string(n));
    }

    // Hilbert negative-frequency leakage.
    {
        const std::size_t n = 512;
        std::vector<cplx> spec(n, cplx(0, 0));
        for (std::size_t k = 8; k < n / 4; ++k) {
            spec[k] = cplx(rng.gaussian(), rng.gaussian());
            spec[n - k] = std::conj(spec[k]);
        }
        const auto time = oracle::dft(spec, true);
        RealWaveform x;
        x.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) x.samples[i] = time[i].real();
        const auto a = dsp::hilbert_analytic(x);
        const auto aspec = oracle::dft(a.samples, false);
        double neg = 0.0, total = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            total += std::norm(aspec[k]);
            if (k > n / 2) neg += std::norm(aspec[k]);
        }
        REQUIRE_THAT(neg / total < 1e-12, "Hilbert negative-frequency leakage too high");
    }

    // m-sequence balance and two-valued autocorrelation, exhaustive m <= 10.
    for (int m = 2; m <= 10; ++m) {
        const auto seq = dsp::lfsr_msequence(m, 1u);
        long ones = 0;
        for (auto b : seq) ones += b;
        REQUIRE_THAT(ones == (1L << (m - 1)), "m-sequence unbalanced at m=" + std::to_string(m));
        REQUIRE_THAT(oracle::pm1_autocorrelation(seq, 0) == static_cast<long>(seq.size()),
                     "autocorrelation peak wrong at m=" + std::to_string(m));
        for (std::size_t shift = 1; shift < seq.size(); ++shift) {
            if (oracle::pm1_autocorrelation(seq, shift) != -1) {
                REQUIRE_THAT(false, "autocorrelation sidelobe wrong at m=" + std::to_string(m));
                break;
            }
        }
    }

    // Gaussian clip fraction vs Q(3).
    {
        RealWaveform x;
        x.samples.resize(1'000'000);
        StreamRng g({607, 0, 0, StreamRole::Generic});
        for (auto& v : x.samples) v = g.gaussian();
        const auto r = dsp::dc_bias_and_clip(x, 3.0);
        const double expect = oracle::q_function(3.0);
        std::ostringstream detail;
        detail << "clip fraction " << r.stats.clipped_fraction << " vs Q(3) " << expect;
        out.detail = detail.str();
        REQUIRE_THAT(r.stats.clipped_fraction > 0.8 * expect &&
                         r.stats.clipped_fraction < 1.2 * expect,
                     "Gaussian clip fraction outside Q(3) +- 20%");
    }
    return out;
}

Outcome criterion7() {
    Outcome out;

    // Two-carrier water-filling vs a fine grid search.
    AllocationProblem two;
    two.comm_gains = {1.0, 4.0};
    two.sense_gains = {0.0, 0.0};
    two.weight_alpha = 1.0;
    const auto powers = allocate_power(two);
    double best = -1e300, best_p0 = 0.0;
    const std::size_t steps = 200'000;
    for (std::size_t i = 0; i <= steps; ++i) {
        const double p0 = static_cast<double>(i) / static_cast<double>(steps);
        const double val = std::log2(1.0 + p0 * 1.0) + std::log2(1.0 + (1.0 - p0) * 4.0);
        if (val > best) {
            best = val;
            best_p0 = p0;
        }
    }
    REQUIRE_THAT(std::abs(powers[0] - best_p0) < 1e-4, "water-filling deviates from grid search");
    REQUIRE_THAT(std::abs(powers[0] - 0.125) < 1e-6 && std::abs(powers[1] - 0.875) < 1e-6,
                 "water-filling deviates from the closed form");

    // KKT + conservation on a random mixed problem.
    AllocationProblem p;
    StreamRng rng({707, 0, 0, StreamRole::Generic});
    p.weight_alpha = 0.4;
    p.noise_variance = 0.5;
    p.total_power = 2.0;
    for (int k = 0; k < 48; ++k) {
        p.comm_gains.push_back(rng.uniform01() < 0.15 ? 0.0 : 4.0 * rng.uniform01());
        p.sense_gains.push_back(rng.uniform01() < 0.15 ? 0.0 : 4.0 * rng.uniform01());
    }
    const auto alloc = allocate_power(p);
    double sum = 0.0;
    for (double v : alloc) sum += v;
    REQUIRE_THAT(std::abs(sum - p.total_power) <= 1e-6 * p.total_power,
                 "power not conserved to 1e-6 relative");

    auto marginal = [&](std::size_t k, double power) {
        const double a = p.comm_gains[k] / p.noise_variance;
        const double b = p.sense_gains[k] / p.noise_variance;
        return p.weight_alpha * a / (1.0 + a * power) +
               (1.0 - p.weight_alpha) * b / (1.0 + b * power);
    };
    double level = -1.0;
    for (std::size_t k = 0; k < alloc.size(); ++k) {
        if (alloc[k] > 1e-9) {
            const double u = marginal(k, alloc[k]);
            if (level < 0.0) {
                level = u;
            } else {
                REQUIRE_THAT(std::abs(u - level) <= 1e-6 * level,
                             "active marginal utilities differ beyond 1e-6");
            }
        }
    }
    for (std::size_t k = 0; k < alloc.size(); ++k) {
        if (alloc[k] <= 1e-9) {
            REQUIRE_THAT(marginal(k, 0.0) <= level * (1.0 + 1e-6),
                         "inactive subcarrier beats the water level");
        }
    }
    out.detail = "water-filling, grid search, KKT and conservation within stated tolerances";
    return out;
}

Outcome criterion8() {
    Outcome out;
    SweepSpec spec;
    spec.scheme = Scheme::DcoOfdm;
    spec.ofdm.n_fft = 128;
    spec.ofdm.cp_len = 32;
    spec.ofdm.n_symbols = 4;
    spec.snr_db_grid = {-5.0, 5.0, 15.0};
    spec.target_min_m = 1.0;
    spec.target_max_m = 4.0;
    spec.min_trials = spec.max_trials = 96;
    spec.master_seed = 808;

    std::vector<std::string> outputs;
    for (int threads : {1, 4, 8}) {
        spec.threads = threads;
        outputs.push_back(sweep_csv(spec, run_sweep(spec)));
    }
    REQUIRE_THAT(outputs[0] == outputs[1], "thread count 4 changes the CSV bytes");
    REQUIRE_THAT(outputs[0] == outputs[2], "thread count 8 changes the CSV bytes");
    out.detail = "byte-identical sweep.csv under thread counts {1, 4, 8}";
    return out;
}

struct Criterion {
    int number;
    const char* title;
    double budget_s;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "DCO-OFDM 4QAM BER reaches 1e-4, monotone", 300.0, criterion1},
    {2, "4QAM outperforms 16QAM wherever CIs are disjoint", 300.0, criterion2},
    {3, "sensing RMSE converges to the quantization floor early", 300.0, criterion3},
    {4, "DC bias trades BER against sensing efficiency (optical-total)", 600.0, criterion4},
    {5, "noiseless exactness: symbol elimination, chirp lags, PPM", 60.0, criterion5},
    {6, "DSP oracle suite: DFT, Hilbert, m-sequences, clip statistics", 60.0, criterion6},
    {7, "allocator: water-filling oracle, KKT, power conservation", 10.0, criterion7},
    {8, "determinism: byte-identical CSV under thread counts 1/4/8", 60.0, criterion8},
};

} // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (!wanted.empty() && !wanted.count(c.number)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail += std::string("; exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            out.pass = false;
            out.detail += "; over the " + std::to_string(c.budget_s) + " s budget";
        }
        std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", out.pass ? "PASS" : "FAIL",
                    c.number, c.title, secs, out.detail.empty() ? "" : " -- ",
                    out.detail.c_str());
        std::fflush(stdout);
        failures += out.pass ? 0 : 1;
    }
    return failures;
}
