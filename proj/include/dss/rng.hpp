#pragma once

#include <cmath>
#include <cstdint>

namespace dss {

// Small counter-based RNG used everywhere randomness is needed.  The standard
// <random> distributions are implementation-defined, which would break the
// "same seed, same bytes" guarantee across toolchains, so we keep the whole
// chain explicit: splitmix64 core, uniform doubles from the top 53 bits,
// normals by Box-Muller.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so that small seeds do not produce correlated first draws
        splitmix64(state_);
        splitmix64(state_);
    }

    /// Derive an independent stream, e.g. one per grid cell or per run.
    Rng fork(std::uint64_t stream) const {
        std::uint64_t s = state_ ^ (0x709c5d1c3e8a7f93ull * (stream + 1));
        return Rng(s);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal (Box-Muller, one value per call, mate cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        // avoid log(0)
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace dss
