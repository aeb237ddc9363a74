#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oisac/config.hpp"
#include "oisac/csv.hpp"

using namespace oisac;

namespace {

bool mentions(const ConfigError& e, const std::string& needle) {
    return std::any_of(e.issues.begin(), e.issues.end(), [&](const std::string& issue) {
        return issue.find(needle) != std::string::npos;
    });
}

} // namespace

TEST_CASE("config: minimal DCO-OFDM sweep fills the documented defaults") {
    const auto cfg = parse_config_text(R"(
        [experiment]
        kind = sweep
        [scheme]
        name = dco_ofdm
    )");
    CHECK(cfg.kind == ExperimentConfig::Kind::Sweep);
    CHECK(cfg.sweep.scheme == Scheme::DcoOfdm);
    CHECK(cfg.sweep.ofdm.n_fft == 256);
    CHECK(cfg.sweep.ofdm.cp_len == 64);
    CHECK(cfg.sweep.ofdm.qam_order == 4);
    CHECK(cfg.sweep.ofdm.bias_factor == 3.0);
    CHECK(cfg.sweep.channel.sample_rate_hz == 1e9);
    CHECK_FALSE(cfg.sweep.snr_db_grid.empty());
}

TEST_CASE("config: full sweep round-trips every field") {
    const auto cfg = parse_config_text(R"(
        # fully keyed sweep
        [experiment]
        kind = sweep
        seed = 92
        threads = 4
        out_dir = results

        [scheme]
        name = dco_ofdm
        n_fft = 128
        cp_len = 32
        qam_order = 16
        bias_factor = 2.5
        n_symbols = 8

        [channel]
        comm_gain = 0.7
        reflectance = 0.4
        sample_rate_hz = 2e9

        [sweep]
        snr_db_grid = 0:5:20
        snr_convention = optical_total
        target_distance_min_m = 1.0
        target_distance_max_m = 2.0
        min_trials = 10
        max_trials = 50
        min_bits = 1000
        target_error_events = 20
    )");
    CHECK(cfg.sweep.master_seed == 92);
    CHECK(cfg.sweep.threads == 4);
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.sweep.ofdm.qam_order == 16);
    CHECK(cfg.sweep.convention == SnrConvention::OpticalTotal);
    REQUIRE(cfg.sweep.snr_db_grid.size() == 5);
    CHECK(cfg.sweep.snr_db_grid.back() == 20.0);
    CHECK(cfg.sweep.channel.sample_rate_hz == 2e9);
    CHECK(cfg.sweep.min_trials == 10);
}

TEST_CASE("config: decreasing snr grid is rejected with the right message") {
    try {
        parse_config_text(R"(
            [experiment]
            kind = sweep
            [scheme]
            name = dco_ofdm
            [sweep]
            snr_db_grid = 10, 5
        )");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "strictly increasing"));
    }
}

TEST_CASE("config: bad qam order lists the allowed set") {
    try {
        parse_config_text(R"(
            [experiment]
            kind = sweep
            [scheme]
            name = dco_ofdm
            qam_order = 8
        )");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "{4, 16}"));
    }
}

TEST_CASE("config: all violations are reported at once") {
    try {
        parse_config_text(R"(
            [experiment]
            kind = sweep
            bogus_key = 1
            [scheme]
            name = dco_ofdm
            qam_order = 8
            made_up = 2
            [mystery]
            x = 1
        )");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.issues.size() >= 4);
        CHECK(mentions(e, "bogus_key"));
        CHECK(mentions(e, "made_up"));
        CHECK(mentions(e, "mystery"));
        CHECK(mentions(e, "qam_order"));
    }
}

TEST_CASE("config: lfm scheme resolves chirp defaults from the channel rate") {
    const auto cfg = parse_config_text(R"(
        [experiment]
        kind = sweep
        [scheme]
        name = lfm_cpm
        samples_per_symbol = 8
        n_symbols = 256
        [channel]
        sample_rate_hz = 1e9
        [sweep]
        snr_db_grid = 0, 10
    )");
    CHECK(cfg.sweep.scheme == Scheme::LfmCpm);
    CHECK(cfg.sweep.lfm.sample_rate_hz == 1e9);
    CHECK(cfg.sweep.lfm.intermediate_freq_hz == doctest::Approx(1.25e8));
    // Excursion fs/4 over the 2048-sample frame.
    const double excursion =
        cfg.sweep.lfm.chirp_rate_hz_per_s * cfg.sweep.lfm.frame_period_s();
    CHECK(excursion == doctest::Approx(2.5e8));
    CHECK(cfg.sweep.lfm.mod_index.num == 1);
    CHECK(cfg.sweep.lfm.mod_index.den == 2);
}

TEST_CASE("config: ppm spreading and interferers") {
    const auto cfg = parse_config_text(R"(
        [experiment]
        kind = sweep
        [scheme]
        name = ppm
        slots_per_symbol = 8
        spreading_m = 5
        spreading_phase = 3
        mui_interferers = 2
        mui_amplitude = 0.25
    )");
    CHECK(cfg.sweep.scheme == Scheme::Ppm);
    REQUIRE(cfg.sweep.ppm.spreading.has_value());
    CHECK(cfg.sweep.ppm.spreading->degree == 5);
    CHECK(cfg.sweep.ppm.spreading->phase == 3);
    REQUIRE(cfg.sweep.mui.interferers.size() == 2);
    CHECK(cfg.sweep.mui.interferers[0].amplitude == 0.25);
}

TEST_CASE("config: allocate kind parses gain lists") {
    const auto cfg = parse_config_text(R"(
        [experiment]
        kind = allocate
        [allocate]
        alpha = 1.0
        total_power = 1.0
        noise_variance = 1.0
        gains_comm = 1.0, 4.0
        gains_sense = 0.0, 0.0
    )");
    CHECK(cfg.kind == ExperimentConfig::Kind::Allocate);
    REQUIRE(cfg.alloc.comm_gains.size() == 2);
    CHECK(cfg.alloc.comm_gains[1] == 4.0);
}

TEST_CASE("config: missing file and mismatched gain lengths fail") {
    CHECK_THROWS_AS(parse_config("/nonexistent/path.cfg"), ConfigError);
    try {
        parse_config_text(R"(
            [experiment]
            kind = allocate
            [allocate]
            gains_comm = 1.0, 2.0
            gains_sense = 1.0
        )");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "match gains_comm"));
    }
}

TEST_CASE("config: describe_config echoes the resolved experiment") {
    const auto cfg = parse_config_text(R"(
        [experiment]
        kind = sweep
        seed = 5
        [scheme]
        name = dco_ofdm
        n_fft = 64
        cp_len = 16
        [sweep]
        snr_db_grid = 0, 5
        target_distance_min_m = 0.9
        target_distance_max_m = 2.0
    )");
    const auto text = describe_config(cfg);
    CHECK(text.find("scheme = dco_ofdm") != std::string::npos);
    CHECK(text.find("n_fft = 64") != std::string::npos);
    CHECK(text.find("seed = 5") != std::string::npos);
}

TEST_CASE("csv: sweep table has the exact pinned header and row shape") {
    SweepSpec spec;
    spec.ofdm.n_fft = 64;
    spec.ofdm.cp_len = 16;
    spec.snr_db_grid = {0.0};
    spec.master_seed = 3;
    SweepResult result;
    SweepPoint p;
    p.snr_db = 0.0;
    p.ber = 0.125;
    p.ber_ci95 = 0.01;
    p.rmse_m = 0.5;
    p.n_bits = 1000;
    p.n_trials = 10;
    p.clip_fraction = 0.001;
    result.points.push_back(p);

    const auto csv = sweep_csv(spec, result);
    const auto first_line = csv.substr(0, csv.find('\n'));
    CHECK(first_line ==
          "scheme,snr_db,snr_convention,qam_order,bias_factor,ber,ber_ci95,rmse_m,n_bits,"
          "n_trials,clip_fraction,seed");
    CHECK(csv.find("dco_ofdm,0,electrical_ac,4,3,0.125,0.01,0.5,1000,10,0.001,3\n") !=
          std::string::npos);
    // One header plus one data row, LF endings only.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("csv: waveform dump emits baseband columns only when present") {
    WaveformDump with;
    with.optical.samples = {0.0, 1.0};
    with.baseband.samples = {cplx(0.5, -0.5), cplx(1.0, 0.0)};
    const auto a = waveform_csv(with);
    CHECK(a.find("index,optical_intensity,baseband_re,baseband_im") == 0);
    CHECK(a.find("1,1,1,0\n") != std::string::npos);

    WaveformDump without;
    without.optical.samples = {2.0};
    const auto b = waveform_csv(without);
    CHECK(b.find("index,optical_intensity\n") == 0);
    CHECK(b.find("0,2\n") != std::string::npos);
}
