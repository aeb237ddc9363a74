#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace oisac {

/// Which consumer of randomness a stream feeds. Each role gets its own
/// statistically independent stream so that, e.g., communication noise and
/// sensing noise never share draws.
enum class StreamRole : std::uint32_t {
    Payload = 1,
    CommNoise = 2,
    SenseNoise = 3,
    Target = 4,
    MuiComm = 5,
    MuiSense = 6,
    Generic = 7,
};

/// Addresses one random stream: identical (master_seed, point_index,
/// trial_index, role) always reproduce the same draws, regardless of thread
/// count or execution order.
struct SeedSpec {
    std::uint64_t master_seed = 1;
    std::uint32_t point_index = 0;
    std::uint64_t trial_index = 0;
    StreamRole role = StreamRole::Generic;
};

namespace detail {

// SplitMix64 finalizer; used to turn the tag tuple into a well-mixed seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_seed(const SeedSpec& s) {
    std::uint64_t h = splitmix64(s.master_seed);
    h = splitmix64(h ^ (0xa0761d6478bd642fULL + s.point_index));
    h = splitmix64(h ^ (0xe7037ed1a0b428dbULL + s.trial_index));
    h = splitmix64(h ^ (0x8ebc6af09c88c6e3ULL + static_cast<std::uint64_t>(s.role)));
    return h;
}

} // namespace detail

/// Deterministic per-stream random source. Gaussian variates use Box-Muller
/// on top of mt19937_64 so the full draw sequence is pinned by the seed spec
/// alone (no implementation-defined distribution state).
class StreamRng {
public:
    explicit StreamRng(const SeedSpec& spec) : engine_(detail::derive_stream_seed(spec)) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() {
        // 53 random mantissa bits.
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Modulo bias is < 2^-50 for the n used here (frame lengths, slots).
        return engine_() % n;
    }

    /// Standard normal variate.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace oisac
