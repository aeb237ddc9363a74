// Batch front door: parse an experiment config, run it, write CSV results.
// Exit codes: 0 success, 2 configuration error, 3 runtime/data error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "oisac/config.hpp"
#include "oisac/csv.hpp"
#include "oisac/harness.hpp"
#include "oisac/rng.hpp"
#include "oisac/selftest.hpp"

namespace fs = std::filesystem;
using namespace oisac;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", args.config_path, "experiment config file");
    if (needs_config) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", args.seed, "master seed (overrides config)");
    cmd->add_option("--threads", args.threads, "worker threads (overrides config)");
}

ExperimentConfig load(const CommonArgs& args, ExperimentConfig::Kind expected,
                      const char* kind_name) {
    ExperimentConfig cfg = parse_config(args.config_path);
    if (cfg.kind != expected) {
        throw ConfigError(std::string("config kind does not match the subcommand; expected "
                                      "kind = ") +
                          kind_name);
    }
    if (args.seed) cfg.sweep.master_seed = *args.seed;
    if (args.threads) cfg.sweep.threads = *args.threads;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    return cfg;
}

fs::path prepare_out_dir(const ExperimentConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create output directory: " + dir.string());
    }
    return dir;
}

void write_meta(const fs::path& dir, const ExperimentConfig& cfg, const char* name) {
    std::string meta = "tool_version = ";
    meta += kToolVersion;
    meta += "\n";
    meta += describe_config(cfg);
    write_file((dir / name).string(), meta);
}

std::string bias_tag(double kappa) {
    std::string tag = format_number(kappa);
    for (char& c : tag) {
        if (c == '.') c = 'p';
    }
    return tag;
}

int cmd_sweep(const CommonArgs& args) {
    const auto cfg = load(args, ExperimentConfig::Kind::Sweep, "sweep");
    const auto dir = prepare_out_dir(cfg);
    const auto result = run_sweep(cfg.sweep);
    write_file((dir / "sweep.csv").string(), sweep_csv(cfg.sweep, result));
    write_meta(dir, cfg, "sweep.meta");
    std::cout << "wrote " << (dir / "sweep.csv").string() << " (" << result.points.size()
              << " points)\n";
    return 0;
}

int cmd_scan_bias(const CommonArgs& args) {
    const auto cfg = load(args, ExperimentConfig::Kind::ScanBias, "scan_bias");
    const auto dir = prepare_out_dir(cfg);
    const auto scan = bias_tradeoff_scan(cfg.sweep, cfg.scan_bias_factors);

    std::string combined;
    for (std::size_t i = 0; i < scan.bias_factors.size(); ++i) {
        SweepSpec spec = cfg.sweep;
        spec.convention = SnrConvention::OpticalTotal;
        spec.ofdm.bias_factor = scan.bias_factors[i];
        const std::string csv = sweep_csv(spec, scan.sweeps[i]);
        const std::string name = "sweep_kappa_" + bias_tag(scan.bias_factors[i]) + ".csv";
        write_file((dir / name).string(), csv);
        if (i == 0) {
            combined = csv;
        } else {
            combined += csv.substr(csv.find('\n') + 1); // drop the repeated header
        }
    }
    write_file((dir / "scan.csv").string(), combined);
    write_meta(dir, cfg, "scan.meta");
    std::cout << "wrote " << (dir / "scan.csv").string() << " (" << scan.bias_factors.size()
              << " bias factors)\n";
    return 0;
}

int cmd_allocate(const CommonArgs& args) {
    const auto cfg = load(args, ExperimentConfig::Kind::Allocate, "allocate");
    const auto dir = prepare_out_dir(cfg);
    const auto powers = allocate_power(cfg.alloc);
    write_file((dir / "alloc.csv").string(), alloc_csv(cfg.alloc, powers));
    write_meta(dir, cfg, "alloc.meta");
    std::cout << "wrote " << (dir / "alloc.csv").string() << " (" << powers.size()
              << " subcarriers)\n";
    return 0;
}

int cmd_dump_waveform(const CommonArgs& args) {
    const auto cfg = load(args, ExperimentConfig::Kind::DumpWaveform, "dump_waveform");
    const auto dir = prepare_out_dir(cfg);
    const SweepSpec& s = cfg.sweep;
    StreamRng payload({cfg.dump_payload_seed, 0, 0, StreamRole::Payload});

    WaveformDump dump;
    switch (s.scheme) {
        case Scheme::DcoOfdm: {
            std::vector<std::uint8_t> bits(s.ofdm.bits_per_frame());
            for (auto& b : bits) b = static_cast<std::uint8_t>(payload.bits() & 1);
            QamSymbolGrid grid;
            grid.n_symbols = s.ofdm.n_symbols;
            grid.n_carriers = s.ofdm.data_carriers();
            grid.cells = qam_map(bits, s.ofdm.qam_order);
            auto tx = ofdm_modulate(grid, s.ofdm, s.channel.sample_rate_hz);
            dump.optical = std::move(tx.optical);
            dump.baseband = std::move(tx.baseband);
            break;
        }
        case Scheme::LfmCpm: {
            std::vector<std::uint8_t> bits(s.lfm.n_symbols);
            for (auto& b : bits) b = static_cast<std::uint8_t>(payload.bits() & 1);
            auto tx = lfm_cpm_transmit(bits, s.lfm);
            dump.optical = std::move(tx.optical);
            dump.baseband = std::move(tx.reference);
            break;
        }
        case Scheme::Ppm: {
            std::vector<int> syms(s.ppm.n_symbols);
            for (int& v : syms) v = static_cast<int>(payload.below(s.ppm.slots_per_symbol));
            dump.optical = ppm_modulate(syms, s.ppm, s.channel.sample_rate_hz);
            break;
        }
    }
    write_file((dir / "waveform.csv").string(), waveform_csv(dump));
    write_meta(dir, cfg, "waveform.meta");
    std::cout << "wrote " << (dir / "waveform.csv").string() << " (" << dump.optical.size()
              << " samples)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"oisac: optical ISAC physical-layer simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* sweep = app.add_subcommand("sweep", "run a BER/RMSE-versus-SNR sweep");
    add_common(sweep, args);
    auto* scan = app.add_subcommand("scan-bias", "sweep per DC bias factor (optical-total SNR)");
    add_common(scan, args);
    auto* alloc = app.add_subcommand("allocate", "solve a per-subcarrier power allocation");
    add_common(alloc, args);
    auto* dump = app.add_subcommand("dump-waveform", "write one modulated frame as CSV");
    add_common(dump, args);
    auto* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(args);
        if (scan->parsed()) return cmd_scan_bias(args);
        if (alloc->parsed()) return cmd_allocate(args);
        if (dump->parsed()) return cmd_dump_waveform(args);
        if (selftest->parsed()) {
            const int failures = run_selftest(std::cout);
            std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
            return failures == 0 ? 0 : 3;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
