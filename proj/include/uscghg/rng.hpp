#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "uscghg/common.hpp"

namespace uscghg {

// Deterministic, platform-independent random streams. Every consumer derives
// its own stream from (master_seed, trial_id, label) so toggling one damage
// source or feedback never perturbs the draws of another.

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xCBF29CE484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline uint64_t stream_seed(uint64_t master_seed, uint64_t trial_id, std::string_view label) {
    uint64_t h = fnv1a64(label);
    uint64_t s = master_seed ^ (h + 0x9E3779B97F4A7C15ULL);
    // two mixing rounds so nearby (seed, trial) pairs decorrelate
    splitmix64(s);
    s ^= trial_id * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL;
    splitmix64(s);
    return s;
}

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}
    Rng(uint64_t master_seed, uint64_t trial_id, std::string_view label)
        : state_(stream_seed(master_seed, trial_id, label)) {}

    uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; the spare is cached so draw order stays reproducible.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Normal truncated at zero via rejection; exact and deterministic.
    double truncated_normal_nonneg(double mean, double sd) {
        if (sd < 0.0) throw ConfigError("truncated normal: sd < 0");
        if (sd == 0.0) {
            if (mean < 0.0) throw ConfigError("truncated normal: degenerate mass below zero");
            return mean;
        }
        for (int i = 0; i < 100000; ++i) {
            const double x = normal(mean, sd);
            if (x >= 0.0) return x;
        }
        throw ConfigError("truncated normal: acceptance region unreachable (mean/sd too negative)");
    }

    double lognormal(double mu_log, double sd_log) { return std::exp(normal(mu_log, sd_log)); }

    // Inverse-CDF triangular on [lo, hi] with mode.
    double triangular(double lo, double mode, double hi) {
        if (!(lo <= mode && mode <= hi && lo < hi))
            throw ConfigError("triangular: require lo <= mode <= hi, lo < hi");
        const double u = uniform();
        const double fc = (mode - lo) / (hi - lo);
        if (u < fc) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
        return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace uscghg
