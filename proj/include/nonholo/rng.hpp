// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace nonholo {

/// Counter-based PRNG: output i of stream s under seed k is
/// mix(mix(k ^ mix(s)) + i * 0x9E3779B97F4A7C15) with the SplitMix64
/// finalizer as mix(). Pure integer arithmetic, so identical streams on
/// every platform, and substreams are independent by construction.
inline std::uint64_t splitmix_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(splitmix_finalize(seed ^ splitmix_finalize(stream + 0xD1B54A32D192ED03ULL))) {}

    std::uint64_t next_u64() { return splitmix_finalize(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one value per pair, second discarded
    /// to keep the stream position independent of call parity).
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace nonholo
