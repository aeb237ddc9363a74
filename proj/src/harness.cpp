#include "oisac/harness.hpp"

#include "oisac/dsp.hpp"
#include "oisac/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>

namespace oisac {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::DcoOfdm: return "dco_ofdm";
        case Scheme::LfmCpm: return "lfm_cpm";
        case Scheme::Ppm: return "ppm";
    }
    return "unknown";
}

namespace {

std::int64_t max_delay_samples(const SweepSpec& spec) {
    return static_cast<std::int64_t>(
        std::llround(2.0 * spec.target_max_m * spec.channel.sample_rate_hz / kSpeedOfLight));
}

} // namespace

void SweepSpec::validate() const {
    channel.validate();
    if (snr_db_grid.empty()) {
        throw ConfigError("sweep: snr_db_grid must not be empty");
    }
    for (std::size_t i = 1; i < snr_db_grid.size(); ++i) {
        if (!(snr_db_grid[i] > snr_db_grid[i - 1])) {
            throw ConfigError("sweep: snr_db_grid must be strictly increasing");
        }
    }
    if (min_trials < 1) {
        throw ConfigError("sweep: min_trials must be >= 1");
    }
    if (max_trials < min_trials) {
        throw ConfigError("sweep: max_trials must be >= min_trials");
    }
    if (!(target_min_m > 0.0) || !(target_max_m >= target_min_m)) {
        throw ConfigError("sweep: target distance interval is invalid");
    }
    if (threads < 1) {
        throw ConfigError("sweep: threads must be >= 1");
    }

    const auto d_max = max_delay_samples(*this);
    switch (scheme) {
        case Scheme::DcoOfdm:
            ofdm.validate();
            if (static_cast<std::uint64_t>(d_max) > ofdm.cp_len) {
                throw ConfigError("sweep: cyclic prefix (" + std::to_string(ofdm.cp_len) +
                                  ") shorter than the worst-case echo delay (" +
                                  std::to_string(d_max) + " samples)");
            }
            break;
        case Scheme::LfmCpm:
            lfm.validate();
            if (lfm.sample_rate_hz != channel.sample_rate_hz) {
                throw ConfigError("sweep: lfm_cpm and channel sample rates differ");
            }
            break;
        case Scheme::Ppm:
            ppm.validate();
            break;
    }
}

std::uint64_t SweepSpec::bits_per_trial() const {
    switch (scheme) {
        case Scheme::DcoOfdm: return ofdm.bits_per_frame();
        case Scheme::LfmCpm: return lfm.n_symbols;
        case Scheme::Ppm: return ppm.bits_per_frame();
    }
    return 0;
}

std::size_t SweepSpec::sense_window() const {
    std::size_t frame = 0;
    switch (scheme) {
        case Scheme::DcoOfdm: frame = ofdm.frame_samples(); break;
        case Scheme::LfmCpm: frame = lfm.frame_samples(); break;
        case Scheme::Ppm: frame = ppm.frame_samples(); break;
    }
    const std::size_t needed = frame + static_cast<std::size_t>(max_delay_samples(*this)) + 1;
    return dsp::next_power_of_two(needed);
}

namespace {

struct TrialContext {
    const SweepSpec& spec;
    std::uint64_t trial;
    double snr_db;
    ChannelSpec channel; // per-trial copy carrying the drawn target distance
    double true_distance_m;
};

// The trial streams deliberately use point index 0: common random numbers
// across SNR points, so only the noise scale differs along the grid.
SeedSpec stream(const SweepSpec& spec, std::uint64_t trial, StreamRole role) {
    return SeedSpec{spec.master_seed, 0, trial, role};
}

double draw_target_distance(const SweepSpec& spec, std::uint64_t trial) {
    StreamRng rng(stream(spec, trial, StreamRole::Target));
    return rng.uniform(spec.target_min_m, spec.target_max_m);
}

RealWaveform pad_for_sensing(const RealWaveform& tx, std::size_t window) {
    RealWaveform padded = tx;
    padded.samples.resize(window, 0.0);
    return padded;
}

std::uint64_t count_bit_errors(const std::vector<std::uint8_t>& a,
                               const std::vector<std::uint8_t>& b) {
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < a.size(); ++i) errors += a[i] != b[i];
    return errors;
}

TrialRecord run_ofdm_trial(const TrialContext& ctx) {
    const SweepSpec& spec = ctx.spec;
    const OfdmConfig& cfg = spec.ofdm;

    StreamRng payload(stream(spec, ctx.trial, StreamRole::Payload));
    std::vector<std::uint8_t> bits(cfg.bits_per_frame());
    for (auto& b : bits) b = static_cast<std::uint8_t>(payload.bits() & 1);

    QamSymbolGrid grid;
    grid.n_symbols = cfg.n_symbols;
    grid.n_carriers = cfg.data_carriers();
    grid.cells = qam_map(bits, cfg.qam_order);
    const auto tx = ofdm_modulate(grid, cfg, spec.channel.sample_rate_hz);

    TrialRecord rec;
    rec.bits = bits.size();
    rec.clip_fraction = tx.clip.clipped_fraction;

    const double comm_gain = ctx.channel.responsivity * ctx.channel.comm_gain;
    const double comm_var =
        noise_variance_for_snr(tx.optical, ctx.snr_db, spec.convention, comm_gain);
    const auto rx = comm_propagate(tx.optical, ctx.channel, {comm_var, spec.convention},
                                   stream(spec, ctx.trial, StreamRole::CommNoise));
    const auto rx_grid = ofdm_demodulate(rx, cfg, 0, comm_gain);
    rec.bit_errors = count_bit_errors(bits, qam_demap(rx_grid.cells, cfg.qam_order));

    // Echo delay always fits inside the cyclic prefix (validated), so no
    // listening pad is needed on this path.
    const double sense_gain = ctx.channel.responsivity * ctx.channel.sensing_gain();
    const double sense_var =
        noise_variance_for_snr(tx.optical, ctx.snr_db, spec.convention, sense_gain);
    const auto echo = sense_propagate(tx.optical, ctx.channel, {sense_var, spec.convention},
                                      stream(spec, ctx.trial, StreamRole::SenseNoise));
    const auto est = symbol_eliminate_range(echo, grid, cfg, ctx.channel.sample_rate_hz);
    const double err = est.distance_m - ctx.true_distance_m;
    rec.sq_range_error_m2 = err * err;
    return rec;
}

TrialRecord run_lfm_trial(const TrialContext& ctx) {
    const SweepSpec& spec = ctx.spec;
    const LfmCpmConfig& cfg = spec.lfm;

    StreamRng payload(stream(spec, ctx.trial, StreamRole::Payload));
    std::vector<std::uint8_t> bits(cfg.n_symbols);
    for (auto& b : bits) b = static_cast<std::uint8_t>(payload.bits() & 1);
    const auto tx = lfm_cpm_transmit(bits, cfg);

    TrialRecord rec;
    rec.bits = bits.size();
    rec.clip_fraction = tx.clip.clipped_fraction;

    const double comm_gain = ctx.channel.responsivity * ctx.channel.comm_gain;
    const double comm_var =
        noise_variance_for_snr(tx.optical, ctx.snr_db, spec.convention, comm_gain);
    const auto rx = comm_propagate(tx.optical, ctx.channel, {comm_var, spec.convention},
                                   stream(spec, ctx.trial, StreamRole::CommNoise));
    const auto decoded = dechirp_viterbi_decode(lfm_cpm_front_end(rx, cfg), cfg);
    rec.bit_errors = count_bit_errors(bits, decoded);

    const double sense_gain = ctx.channel.responsivity * ctx.channel.sensing_gain();
    const double sense_var =
        noise_variance_for_snr(tx.optical, ctx.snr_db, spec.convention, sense_gain);
    const auto padded = pad_for_sensing(tx.optical, spec.sense_window());
    const auto echo = sense_propagate(padded, ctx.channel, {sense_var, spec.convention},
                                      stream(spec, ctx.trial, StreamRole::SenseNoise));
    const double d_hat =
        xcorr_range_estimate(echo, tx.reference, cfg, ctx.channel.sample_rate_hz);
    const double err = d_hat - ctx.true_distance_m;
    rec.sq_range_error_m2 = err * err;
    return rec;
}

TrialRecord run_ppm_trial(const TrialContext& ctx) {
    const SweepSpec& spec = ctx.spec;
    const PpmConfig& cfg = spec.ppm;

    StreamRng payload(stream(spec, ctx.trial, StreamRole::Payload));
    std::vector<int> symbols(cfg.n_symbols);
    for (int& s : symbols) s = static_cast<int>(payload.below(cfg.slots_per_symbol));
    const auto tx = ppm_modulate(symbols, cfg, spec.channel.sample_rate_hz);

    TrialRecord rec;
    rec.bits = cfg.bits_per_frame();
    rec.clip_fraction = 0.0; // non-negative by construction, nothing clips

    const double comm_gain = ctx.channel.responsivity * ctx.channel.comm_gain;
    const double comm_var = noise_variance_for_snr(tx, ctx.snr_db, spec.convention, comm_gain);
    auto rx = comm_propagate(tx, ctx.channel, {comm_var, spec.convention},
                             stream(spec, ctx.trial, StreamRole::CommNoise));
    if (!spec.mui.interferers.empty()) {
        rx = inject_mui(rx, spec.mui, cfg, stream(spec, ctx.trial, StreamRole::MuiComm));
    }
    const auto decoded = ppm_demodulate(rx, cfg);
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        errors += static_cast<std::uint64_t>(
            __builtin_popcount(static_cast<unsigned>(symbols[i] ^ decoded[i])));
    }
    rec.bit_errors = errors;

    const double sense_gain = ctx.channel.responsivity * ctx.channel.sensing_gain();
    const double sense_var = noise_variance_for_snr(tx, ctx.snr_db, spec.convention, sense_gain);
    const auto padded = pad_for_sensing(tx, spec.sense_window());
    auto echo = sense_propagate(padded, ctx.channel, {sense_var, spec.convention},
                                stream(spec, ctx.trial, StreamRole::SenseNoise));
    if (!spec.mui.interferers.empty()) {
        echo = inject_mui(echo, spec.mui, cfg, stream(spec, ctx.trial, StreamRole::MuiSense));
    }
    const double d_hat = ppm_tof_estimate(echo, tx, cfg, ctx.channel.sample_rate_hz);
    const double err = d_hat - ctx.true_distance_m;
    rec.sq_range_error_m2 = err * err;
    return rec;
}

} // namespace

TrialRecord run_trial(const SweepSpec& spec, std::size_t point_index,
                      std::uint64_t trial_index) {
    TrialContext ctx{spec, trial_index, spec.snr_db_grid.at(point_index), spec.channel, 0.0};
    ctx.true_distance_m = draw_target_distance(spec, trial_index);
    ctx.channel.target_distance_m = ctx.true_distance_m;

    switch (spec.scheme) {
        case Scheme::DcoOfdm: return run_ofdm_trial(ctx);
        case Scheme::LfmCpm: return run_lfm_trial(ctx);
        case Scheme::Ppm: return run_ppm_trial(ctx);
    }
    throw ConfigError("run_trial: unknown scheme");
}

WilsonInterval wilson95(std::uint64_t errors, std::uint64_t bits) {
    WilsonInterval w;
    if (bits == 0) return w;
    const double z = 1.959963984540054;
    const double n = static_cast<double>(bits);
    const double k = static_cast<double>(errors);
    const double z2 = z * z;
    const double center = (k + z2 / 2.0) / (n + z2);
    const double spread = z * std::sqrt(k * (n - k) / n + z2 / 4.0) / (n + z2);
    w.lo = std::max(0.0, center - spread);
    w.hi = std::min(1.0, center + spread);
    w.half_width = spread;
    return w;
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    result.points.resize(spec.snr_db_grid.size());

    // Trials run in fixed-size batches; the stop rule is evaluated at batch
    // boundaries on the in-order fold, so thread count and scheduling can
    // never change the number of trials or the aggregate.
    constexpr std::uint64_t kBatch = 64;

    for (std::size_t pt = 0; pt < spec.snr_db_grid.size(); ++pt) {
        const auto t0 = std::chrono::steady_clock::now();
        SweepPoint& point = result.points[pt];
        point.snr_db = spec.snr_db_grid[pt];

        std::uint64_t trials = 0;
        std::uint64_t bits = 0;
        std::uint64_t errors = 0;
        double sq_err_sum = 0.0;
        double clip_sum = 0.0;

        std::vector<TrialRecord> batch(kBatch);
        while (trials < spec.max_trials) {
            const std::uint64_t n_batch = std::min(kBatch, spec.max_trials - trials);
            const int n_threads = static_cast<int>(
                std::min<std::uint64_t>(static_cast<std::uint64_t>(spec.threads), n_batch));
            if (n_threads <= 1) {
                for (std::uint64_t i = 0; i < n_batch; ++i) {
                    batch[i] = run_trial(spec, pt, trials + i);
                }
            } else {
                std::vector<std::thread> pool;
                pool.reserve(static_cast<std::size_t>(n_threads));
                for (int th = 0; th < n_threads; ++th) {
                    pool.emplace_back([&, th] {
                        for (std::uint64_t i = static_cast<std::uint64_t>(th); i < n_batch;
                             i += static_cast<std::uint64_t>(n_threads)) {
                            batch[i] = run_trial(spec, pt, trials + i);
                        }
                    });
                }
                for (auto& th : pool) th.join();
            }

            for (std::uint64_t i = 0; i < n_batch; ++i) {
                bits += batch[i].bits;
                errors += batch[i].bit_errors;
                sq_err_sum += batch[i].sq_range_error_m2;
                clip_sum += batch[i].clip_fraction;
            }
            trials += n_batch;

            const bool floor_reached = trials >= spec.min_trials && bits >= spec.min_bits;
            if (floor_reached && errors >= spec.target_error_events) break;
        }

        point.n_trials = trials;
        point.n_bits = bits;
        point.n_error_events = errors;
        point.ber = bits > 0 ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0;
        point.ber_ci95 = wilson95(errors, bits).half_width;
        point.rmse_m = std::sqrt(sq_err_sum / static_cast<double>(trials));
        point.clip_fraction = clip_sum / static_cast<double>(trials);
        point.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
    }
    return result;
}

BiasScanResult bias_tradeoff_scan(const SweepSpec& base, std::span<const double> bias_factors) {
    if (base.scheme != Scheme::DcoOfdm) {
        throw ConfigError("bias scan: only DCO-OFDM exposes a bias factor");
    }
    if (bias_factors.empty()) {
        throw ConfigError("bias scan: empty bias factor list");
    }
    BiasScanResult result;
    for (double kappa : bias_factors) {
        SweepSpec spec = base;
        spec.convention = SnrConvention::OpticalTotal;
        spec.ofdm.bias_factor = kappa;
        result.bias_factors.push_back(kappa);
        result.sweeps.push_back(run_sweep(spec));
    }
    return result;
}

} // namespace oisac
