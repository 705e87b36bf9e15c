#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace temple {

/// Counter-based pseudorandom generator built on the SplitMix64 finalizer.
///
/// A generator is a (key, counter) pair; the n-th draw is a hash of both, so
/// a stream is fully determined by its key and can be replayed or copied
/// freely. Sub-streams are derived with sub(), forming a deterministic tree
/// rooted at the run seed: harness code uses one branch per (seed, task
/// index, purpose), which keeps environment sampling identical across
/// learners that consume different amounts of randomness elsewhere.
///
/// Sampling helpers are implemented here rather than with <random>
/// distributions because distribution output is implementation-defined and
/// the experiment harness promises byte-identical output across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ kKeySalt)) {}

    /// Derives an independent child stream. Children of distinct ids (or of
    /// distinct parents) never share draws with each other or the parent.
    Rng sub(std::uint64_t stream_id) const {
        return Rng(FromKey{}, mix(key_ ^ mix(stream_id + kSubSalt)));
    }

    std::uint64_t next_u64() {
        counter_ += kGolden;
        return mix(key_ + counter_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Lemire multiply-shift; n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be > 0");
        return static_cast<std::uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    /// Samples an index from an (unnormalized up to rounding) probability
    /// vector by inverse CDF. Returns the last index with positive mass if
    /// accumulated rounding leaves the draw past the end.
    int categorical(std::span<const double> probs) {
        if (probs.empty()) throw std::invalid_argument("Rng::categorical: empty");
        const double u = uniform();
        double acc = 0.0;
        int last_positive = -1;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > 0.0) last_positive = static_cast<int>(i);
            acc += probs[i];
            if (u < acc) return static_cast<int>(i);
        }
        if (last_positive < 0)
            throw std::invalid_argument("Rng::categorical: all-zero vector");
        return last_positive;
    }

    /// Standard normal via Box-Muller (two uniforms per draw, no caching).
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    struct FromKey {};
    Rng(FromKey, std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kKeySalt = 0x8BADF00D5EEDULL;
    static constexpr std::uint64_t kSubSalt = 0x632BE59BD9B4E019ULL;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace temple
