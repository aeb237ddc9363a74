#include "oisac/csv.hpp"

#include <charconv>
#include <fstream>

namespace oisac {

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_number(std::uint64_t v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

const char* convention_name(SnrConvention c) {
    return c == SnrConvention::ElectricalAc ? "electrical_ac" : "optical_total";
}

int scheme_qam_order(const SweepSpec& spec) {
    return spec.scheme == Scheme::DcoOfdm ? spec.ofdm.qam_order : 0;
}

double scheme_bias_factor(const SweepSpec& spec) {
    switch (spec.scheme) {
        case Scheme::DcoOfdm: return spec.ofdm.bias_factor;
        case Scheme::LfmCpm: return spec.lfm.bias_factor;
        case Scheme::Ppm: return 0.0;
    }
    return 0.0;
}

} // namespace

std::string sweep_csv(const SweepSpec& spec, const SweepResult& result) {
    std::string out =
        "scheme,snr_db,snr_convention,qam_order,bias_factor,ber,ber_ci95,rmse_m,"
        "n_bits,n_trials,clip_fraction,seed\n";
    for (const SweepPoint& p : result.points) {
        out += scheme_name(spec.scheme);
        out += ',';
        out += format_number(p.snr_db);
        out += ',';
        out += convention_name(spec.convention);
        out += ',';
        out += format_number(static_cast<std::uint64_t>(scheme_qam_order(spec)));
        out += ',';
        out += format_number(scheme_bias_factor(spec));
        out += ',';
        out += format_number(p.ber);
        out += ',';
        out += format_number(p.ber_ci95);
        out += ',';
        out += format_number(p.rmse_m);
        out += ',';
        out += format_number(p.n_bits);
        out += ',';
        out += format_number(p.n_trials);
        out += ',';
        out += format_number(p.clip_fraction);
        out += ',';
        out += format_number(spec.master_seed);
        out += '\n';
    }
    return out;
}

std::string alloc_csv(const AllocationProblem& problem, const std::vector<double>& powers) {
    std::string out = "subcarrier,gain_comm,gain_sense,power\n";
    for (std::size_t k = 0; k < powers.size(); ++k) {
        out += format_number(static_cast<std::uint64_t>(k));
        out += ',';
        out += format_number(problem.comm_gains[k]);
        out += ',';
        out += format_number(problem.sense_gains[k]);
        out += ',';
        out += format_number(powers[k]);
        out += '\n';
    }
    return out;
}

std::string waveform_csv(const WaveformDump& dump) {
    const bool with_baseband = !dump.baseband.samples.empty();
    std::string out = with_baseband ? "index,optical_intensity,baseband_re,baseband_im\n"
                                    : "index,optical_intensity\n";
    for (std::size_t i = 0; i < dump.optical.size(); ++i) {
        out += format_number(static_cast<std::uint64_t>(i));
        out += ',';
        out += format_number(dump.optical.samples[i]);
        if (with_baseband) {
            out += ',';
            if (i < dump.baseband.size()) {
                out += format_number(dump.baseband.samples[i].real());
                out += ',';
                out += format_number(dump.baseband.samples[i].imag());
            } else {
                out += "0,0";
            }
        }
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write output file: " + path);
    }
    out << content;
    if (!out) {
        throw DataError("write failed for: " + path);
    }
}

} // namespace oisac
