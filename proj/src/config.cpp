#include "oisac/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace oisac {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// section -> key -> (value, consumed)
struct RawConfig {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::vector<std::string> issues;
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                raw.issues.push_back("line " + std::to_string(line_no) +
                                     ": malformed section header '" + line + "'");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            raw.sections[section]; // materialize even when empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            raw.issues.push_back("line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            raw.issues.push_back("line " + std::to_string(line_no) + ": key '" + key +
                                 "' appears before any [section]");
            continue;
        }
        if (key.empty() || value.empty()) {
            raw.issues.push_back("line " + std::to_string(line_no) + ": empty key or value");
            continue;
        }
        if (!raw.sections[section].emplace(key, value).second) {
            raw.issues.push_back(section + "." + key + ": duplicate key");
        }
    }
    return raw;
}

// Tracks which keys were read so leftovers can be reported as unknown.
class SectionReader {
public:
    SectionReader(RawConfig& raw, std::string section, std::vector<std::string>& issues)
        : raw_(raw), section_(std::move(section)), issues_(issues) {}

    bool present() const { return raw_.sections.count(section_) > 0; }

    bool has(const std::string& key) const {
        const auto it = raw_.sections.find(section_);
        return it != raw_.sections.end() && it->second.count(key) > 0;
    }

    std::string get(const std::string& key) {
        consumed_.insert(key);
        return raw_.sections.at(section_).at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const std::string v = get(key);
        try {
            std::size_t pos = 0;
            const double out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            issues_.push_back(section_ + "." + key + ": not a number: '" + v + "'");
            return fallback;
        }
    }

    std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const std::string v = get(key);
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            issues_.push_back(section_ + "." + key + ": not a non-negative integer: '" + v + "'");
            return fallback;
        }
        return out;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        return has(key) ? get(key) : fallback;
    }

    // "a,b,c" or "start:step:stop" (inclusive).
    std::vector<double> number_list(const std::string& key) {
        std::vector<double> out;
        if (!has(key)) return out;
        const std::string v = get(key);
        const auto colons = std::count(v.begin(), v.end(), ':');
        try {
            if (colons == 2) {
                const auto c1 = v.find(':');
                const auto c2 = v.find(':', c1 + 1);
                const double start = std::stod(v.substr(0, c1));
                const double step = std::stod(v.substr(c1 + 1, c2 - c1 - 1));
                const double stop = std::stod(v.substr(c2 + 1));
                if (!(step > 0.0)) throw std::invalid_argument("step");
                for (double x = start; x <= stop + 1e-9 * std::abs(step); x += step) {
                    out.push_back(x);
                }
                return out;
            }
            std::istringstream items(v);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (item.empty()) throw std::invalid_argument("empty item");
                out.push_back(std::stod(item));
            }
        } catch (const std::exception&) {
            issues_.push_back(section_ + "." + key +
                              ": expected 'a,b,c' or 'start:step:stop', got '" + v + "'");
            out.clear();
        }
        return out;
    }

    void finish(std::initializer_list<const char*> required = {}) {
        for (const char* key : required) {
            if (!has(key)) {
                issues_.push_back(section_ + "." + key + ": required key is missing");
            }
        }
        const auto it = raw_.sections.find(section_);
        if (it == raw_.sections.end()) return;
        for (const auto& [key, value] : it->second) {
            if (!consumed_.count(key)) {
                issues_.push_back(section_ + "." + key + ": unknown key");
            }
        }
    }

private:
    RawConfig& raw_;
    std::string section_;
    std::vector<std::string>& issues_;
    std::set<std::string> consumed_;
};

Rational parse_rational(const std::string& v, std::vector<std::string>& issues) {
    const auto slash = v.find('/');
    try {
        if (slash == std::string::npos) {
            // Accept plain 0.5 for convenience; only halves/quarters etc.
            // that map to small rationals are representable.
            const double x = std::stod(v);
            for (int den = 1; den <= 16; ++den) {
                const double num = x * den;
                if (std::abs(num - std::round(num)) < 1e-12 && std::round(num) >= 1.0) {
                    return Rational{static_cast<int>(std::round(num)), den};
                }
            }
            throw std::invalid_argument(v);
        }
        const int num = std::stoi(v.substr(0, slash));
        const int den = std::stoi(v.substr(slash + 1));
        return Rational{num, den};
    } catch (const std::exception&) {
        issues.push_back("scheme.mod_index: expected a small rational like 1/2, got '" + v + "'");
        return Rational{1, 2};
    }
}

void parse_scheme(RawConfig& raw, ExperimentConfig& cfg, std::vector<std::string>& issues) {
    SectionReader scheme(raw, "scheme", issues);
    if (!scheme.present()) {
        issues.push_back("scheme: section is required for this experiment kind");
        return;
    }
    const std::string name = scheme.text("name", "");
    if (name == "dco_ofdm") {
        cfg.sweep.scheme = Scheme::DcoOfdm;
        auto& o = cfg.sweep.ofdm;
        o.n_fft = scheme.integer("n_fft", o.n_fft);
        o.cp_len = scheme.integer("cp_len", o.cp_len);
        o.qam_order = static_cast<int>(scheme.integer("qam_order", 4));
        if (o.qam_order != 4 && o.qam_order != 16) {
            issues.push_back("scheme.qam_order: allowed values are {4, 16}");
        }
        o.bias_factor = scheme.number("bias_factor", o.bias_factor);
        o.n_symbols = scheme.integer("n_symbols", o.n_symbols);
    } else if (name == "lfm_cpm") {
        cfg.sweep.scheme = Scheme::LfmCpm;
        auto& l = cfg.sweep.lfm;
        l.samples_per_symbol = scheme.integer("samples_per_symbol", l.samples_per_symbol);
        l.n_symbols = scheme.integer("n_symbols", l.n_symbols);
        if (scheme.has("mod_index")) {
            l.mod_index = parse_rational(scheme.get("mod_index"), issues);
        }
        l.chirp_rate_hz_per_s = scheme.number("chirp_rate_hz_per_s", 0.0);
        l.intermediate_freq_hz = scheme.number("intermediate_freq_hz", 0.0);
        l.bias_factor = scheme.number("bias_factor", l.bias_factor);
    } else if (name == "ppm") {
        cfg.sweep.scheme = Scheme::Ppm;
        auto& p = cfg.sweep.ppm;
        p.slots_per_symbol = scheme.integer("slots_per_symbol", p.slots_per_symbol);
        p.samples_per_slot = scheme.integer("samples_per_slot", p.samples_per_slot);
        p.n_symbols = scheme.integer("n_symbols", p.n_symbols);
        p.pulse_amplitude = scheme.number("pulse_amplitude", p.pulse_amplitude);
        if (scheme.has("spreading_m")) {
            PpmSpreading s;
            s.degree = static_cast<int>(scheme.integer("spreading_m", 6));
            s.phase = static_cast<int>(scheme.integer("spreading_phase", 0));
            p.spreading = s;
        } else if (scheme.has("spreading_phase")) {
            issues.push_back("scheme.spreading_phase: requires spreading_m");
            scheme.get("spreading_phase");
        }
        const auto n_mui = scheme.integer("mui_interferers", 0);
        const double mui_amp = scheme.number("mui_amplitude", 1.0);
        for (std::uint64_t i = 0; i < n_mui; ++i) {
            MuiInterferer user;
            user.spreading_phase = static_cast<int>(17 * (i + 1));
            user.amplitude = mui_amp;
            cfg.sweep.mui.interferers.push_back(user);
        }
    } else {
        issues.push_back("scheme.name: expected dco_ofdm | lfm_cpm | ppm, got '" + name + "'");
    }
    scheme.finish({"name"});
}

void parse_channel(RawConfig& raw, ExperimentConfig& cfg, std::vector<std::string>& issues) {
    SectionReader ch(raw, "channel", issues);
    if (!ch.present()) return; // defaults are a valid channel
    auto& c = cfg.sweep.channel;
    c.comm_gain = ch.number("comm_gain", c.comm_gain);
    c.reflectance = ch.number("reflectance", c.reflectance);
    c.aperture_gain_m2 = ch.number("aperture_gain_m2", c.aperture_gain_m2);
    c.responsivity = ch.number("responsivity", c.responsivity);
    c.sample_rate_hz = ch.number("sample_rate_hz", c.sample_rate_hz);
    c.target_distance_m = ch.number("target_distance_m", c.target_distance_m);
    ch.finish();
}

void parse_sweep(RawConfig& raw, ExperimentConfig& cfg, std::vector<std::string>& issues) {
    SectionReader sw(raw, "sweep", issues);
    auto& s = cfg.sweep;
    if (sw.present()) {
        if (sw.has("snr_db_grid")) {
            s.snr_db_grid = sw.number_list("snr_db_grid");
        }
        const std::string conv = sw.text("snr_convention", "electrical_ac");
        if (conv == "electrical_ac") {
            s.convention = SnrConvention::ElectricalAc;
        } else if (conv == "optical_total") {
            s.convention = SnrConvention::OpticalTotal;
        } else {
            issues.push_back("sweep.snr_convention: expected electrical_ac | optical_total");
        }
        s.target_min_m = sw.number("target_distance_min_m", s.target_min_m);
        s.target_max_m = sw.number("target_distance_max_m", s.target_max_m);
        s.min_bits = sw.integer("min_bits", s.min_bits);
        s.min_trials = sw.integer("min_trials", s.min_trials);
        s.max_trials = sw.integer("max_trials", s.max_trials);
        s.target_error_events = sw.integer("target_error_events", s.target_error_events);
        sw.finish();
    }
    if (s.snr_db_grid.empty()) {
        s.snr_db_grid = {-30, -28, -26, -24, -22, -20, -18, -16, -14, -12, -10, -8,
                         -6,  -4,  -2,  0,   2,   4,   6,   8,   10,  12,  14};
    }
    for (std::size_t i = 1; i < s.snr_db_grid.size(); ++i) {
        if (!(s.snr_db_grid[i] > s.snr_db_grid[i - 1])) {
            issues.push_back("sweep.snr_db_grid: must be strictly increasing");
            break;
        }
    }
}

void parse_scan(RawConfig& raw, ExperimentConfig& cfg, std::vector<std::string>& issues) {
    SectionReader sc(raw, "scan", issues);
    if (sc.present()) {
        cfg.scan_bias_factors = sc.number_list("bias_factors");
        sc.finish({"bias_factors"});
    }
    if (cfg.scan_bias_factors.empty()) cfg.scan_bias_factors = {1.0, 2.0, 3.0};
}

void parse_alloc(RawConfig& raw, ExperimentConfig& cfg, std::vector<std::string>& issues) {
    SectionReader al(raw, "allocate", issues);
    if (!al.present()) {
        issues.push_back("allocate: section is required for kind = allocate");
        return;
    }
    auto& a = cfg.alloc;
    a.weight_alpha = al.number("alpha", a.weight_alpha);
    a.total_power = al.number("total_power", a.total_power);
    a.noise_variance = al.number("noise_variance", a.noise_variance);
    a.comm_gains = al.number_list("gains_comm");
    a.sense_gains = al.number_list("gains_sense");
    al.finish({"gains_comm", "gains_sense"});
    if (a.comm_gains.size() != a.sense_gains.size()) {
        issues.push_back("allocate.gains_sense: must match gains_comm in length");
    }
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    RawConfig raw = tokenize(text);
    std::vector<std::string> issues = std::move(raw.issues);
    ExperimentConfig cfg;

    SectionReader exp(raw, "experiment", issues);
    std::string kind;
    if (exp.present()) {
        kind = exp.text("kind", "");
        cfg.sweep.master_seed = exp.integer("seed", cfg.sweep.master_seed);
        cfg.sweep.threads = static_cast<int>(exp.integer("threads", 1));
        cfg.out_dir = exp.text("out_dir", cfg.out_dir);
        exp.finish({"kind"});
    } else {
        issues.push_back("experiment: section is required");
    }

    if (kind == "sweep") {
        cfg.kind = ExperimentConfig::Kind::Sweep;
        parse_scheme(raw, cfg, issues);
        parse_channel(raw, cfg, issues);
        parse_sweep(raw, cfg, issues);
    } else if (kind == "scan_bias") {
        cfg.kind = ExperimentConfig::Kind::ScanBias;
        parse_scheme(raw, cfg, issues);
        parse_channel(raw, cfg, issues);
        parse_sweep(raw, cfg, issues);
        parse_scan(raw, cfg, issues);
        if (cfg.sweep.scheme != Scheme::DcoOfdm && issues.empty()) {
            issues.push_back("scan_bias: scheme.name must be dco_ofdm");
        }
        cfg.sweep.convention = SnrConvention::OpticalTotal;
    } else if (kind == "allocate") {
        cfg.kind = ExperimentConfig::Kind::Allocate;
        parse_alloc(raw, cfg, issues);
    } else if (kind == "dump_waveform") {
        cfg.kind = ExperimentConfig::Kind::DumpWaveform;
        parse_scheme(raw, cfg, issues);
        parse_channel(raw, cfg, issues);
        SectionReader dump(raw, "dump", issues);
        if (dump.present()) {
            cfg.dump_payload_seed = dump.integer("payload_seed", cfg.dump_payload_seed);
            dump.finish();
        }
    } else if (exp.present()) {
        issues.push_back(
            "experiment.kind: expected sweep | scan_bias | allocate | dump_waveform, got '" +
            kind + "'");
    }

    // Unknown sections.
    static const std::set<std::string> known = {"experiment", "scheme",   "channel",
                                                "sweep",      "scan",     "allocate",
                                                "dump"};
    for (const auto& [name, _] : raw.sections) {
        if (!known.count(name)) issues.push_back(name + ": unknown section");
    }

    // Cross-field resolution and invariant validation.
    if (issues.empty()) {
        cfg.sweep.lfm.sample_rate_hz = cfg.sweep.channel.sample_rate_hz;
        cfg.sweep.lfm.resolve_defaults();
        try {
            switch (cfg.kind) {
                case ExperimentConfig::Kind::Sweep:
                case ExperimentConfig::Kind::ScanBias:
                    cfg.sweep.validate();
                    break;
                case ExperimentConfig::Kind::Allocate:
                    cfg.alloc.validate();
                    break;
                case ExperimentConfig::Kind::DumpWaveform:
                    cfg.sweep.channel.validate();
                    switch (cfg.sweep.scheme) {
                        case Scheme::DcoOfdm: cfg.sweep.ofdm.validate(); break;
                        case Scheme::LfmCpm: cfg.sweep.lfm.validate(); break;
                        case Scheme::Ppm: cfg.sweep.ppm.validate(); break;
                    }
                    break;
            }
        } catch (const ConfigError& e) {
            issues.push_back(e.what());
        }
    }

    if (!issues.empty()) {
        std::string msg = "configuration rejected with " + std::to_string(issues.size()) +
                          " issue(s):";
        for (const auto& issue : issues) msg += "\n  - " + issue;
        throw ConfigError(msg, issues);
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

const char* kind_name(ExperimentConfig::Kind k) {
    switch (k) {
        case ExperimentConfig::Kind::Sweep: return "sweep";
        case ExperimentConfig::Kind::ScanBias: return "scan_bias";
        case ExperimentConfig::Kind::Allocate: return "allocate";
        case ExperimentConfig::Kind::DumpWaveform: return "dump_waveform";
    }
    return "unknown";
}

} // namespace

std::string describe_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "kind = " << kind_name(cfg.kind) << "\n";
    out << "seed = " << cfg.sweep.master_seed << "\n";
    out << "threads = " << cfg.sweep.threads << "\n";
    if (cfg.kind == ExperimentConfig::Kind::Allocate) {
        out << "alpha = " << cfg.alloc.weight_alpha << "\n";
        out << "total_power = " << cfg.alloc.total_power << "\n";
        out << "noise_variance = " << cfg.alloc.noise_variance << "\n";
        out << "subcarriers = " << cfg.alloc.comm_gains.size() << "\n";
        return out.str();
    }

    const SweepSpec& s = cfg.sweep;
    out << "scheme = " << scheme_name(s.scheme) << "\n";
    switch (s.scheme) {
        case Scheme::DcoOfdm:
            out << "n_fft = " << s.ofdm.n_fft << "\n";
            out << "cp_len = " << s.ofdm.cp_len << "\n";
            out << "qam_order = " << s.ofdm.qam_order << "\n";
            out << "bias_factor = " << s.ofdm.bias_factor << "\n";
            out << "n_symbols = " << s.ofdm.n_symbols << "\n";
            break;
        case Scheme::LfmCpm:
            out << "samples_per_symbol = " << s.lfm.samples_per_symbol << "\n";
            out << "n_symbols = " << s.lfm.n_symbols << "\n";
            out << "mod_index = " << s.lfm.mod_index.num << "/" << s.lfm.mod_index.den << "\n";
            out << "chirp_rate_hz_per_s = " << s.lfm.chirp_rate_hz_per_s << "\n";
            out << "intermediate_freq_hz = " << s.lfm.intermediate_freq_hz << "\n";
            out << "bias_factor = " << s.lfm.bias_factor << "\n";
            break;
        case Scheme::Ppm:
            out << "slots_per_symbol = " << s.ppm.slots_per_symbol << "\n";
            out << "samples_per_slot = " << s.ppm.samples_per_slot << "\n";
            out << "n_symbols = " << s.ppm.n_symbols << "\n";
            out << "pulse_amplitude = " << s.ppm.pulse_amplitude << "\n";
            if (s.ppm.spreading) {
                out << "spreading_m = " << s.ppm.spreading->degree << "\n";
                out << "spreading_phase = " << s.ppm.spreading->phase << "\n";
            }
            out << "mui_interferers = " << s.mui.interferers.size() << "\n";
            break;
    }
    out << "comm_gain = " << s.channel.comm_gain << "\n";
    out << "reflectance = " << s.channel.reflectance << "\n";
    out << "aperture_gain_m2 = " << s.channel.aperture_gain_m2 << "\n";
    out << "responsivity = " << s.channel.responsivity << "\n";
    out << "sample_rate_hz = " << s.channel.sample_rate_hz << "\n";
    out << "target_distance_m = " << s.channel.target_distance_m << "\n";

    if (cfg.kind != ExperimentConfig::Kind::DumpWaveform) {
        out << "snr_convention = "
            << (s.convention == SnrConvention::ElectricalAc ? "electrical_ac" : "optical_total")
            << "\n";
        out << "snr_db_grid =";
        for (double v : s.snr_db_grid) out << " " << v;
        out << "\n";
        out << "target_distance_min_m = " << s.target_min_m << "\n";
        out << "target_distance_max_m = " << s.target_max_m << "\n";
        out << "min_bits = " << s.min_bits << "\n";
        out << "min_trials = " << s.min_trials << "\n";
        out << "max_trials = " << s.max_trials << "\n";
        out << "target_error_events = " << s.target_error_events << "\n";
    } else {
        out << "payload_seed = " << cfg.dump_payload_seed << "\n";
    }
    if (cfg.kind == ExperimentConfig::Kind::ScanBias) {
        out << "bias_factors =";
        for (double v : cfg.scan_bias_factors) out << " " << v;
        out << "\n";
    }
    return out.str();
}

} // namespace oisac
