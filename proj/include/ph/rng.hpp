#pragma once

// Counter-based random number generation (Philox4x32-10).
//
// Every random draw in this project is a pure function of
// (master seed, stream path, counter), so results are reproducible
// independent of scheduling or worker count. Streams are derived
// hierarchically:
//
//     master seed
//       -> derive(master, tag)                 one stream per purpose
//       -> derive(derive(master, tag), i)      per replication / site / step
//
// `derive` is a splitmix64-style hash chain; distinct paths give
// statistically independent Philox keys.

#include <array>
#include <cstdint>
#include <vector>

namespace ph {

inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline uint64_t derive(uint64_t parent, uint64_t child) {
    return mix64(parent ^ mix64(child + 0x51AFD7ED558CCD65ull));
}

namespace detail {

inline void philox_round(std::array<uint32_t, 4>& c, const std::array<uint32_t, 2>& k) {
    const uint64_t p0 = 0xD2511F53ull * c[0];
    const uint64_t p1 = 0xCD9E8D57ull * c[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> ctr,
                                             std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, key);
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
    }
    return ctr;
}

} // namespace detail

// One independent random stream. Copyable; copies continue from the same
// counter, so pass by reference when a consumer should advance the stream.
class RngStream {
public:
    explicit RngStream(uint64_t key) : key_(key) {}

    uint64_t next_u64() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const std::array<uint32_t, 4> block = detail::philox4x32_10(
            {static_cast<uint32_t>(counter_), static_cast<uint32_t>(counter_ >> 32),
             static_cast<uint32_t>(key_), static_cast<uint32_t>(key_ >> 32)},
            {static_cast<uint32_t>(key_ * 0x9E3779B97F4A7C15ull),
             static_cast<uint32_t>((key_ * 0x9E3779B97F4A7C15ull) >> 32)});
        ++counter_;
        spare_ = (static_cast<uint64_t>(block[2]) << 32) | block[3];
        have_spare_ = true;
        return (static_cast<uint64_t>(block[0]) << 32) | block[1];
    }

    // Uniform double in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_uniform(double a, double b) { return a + next_unit() * (b - a); }

    // Index into a discrete distribution given by nonnegative weights.
    size_t next_discrete(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = next_unit() * total;
        for (size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    uint64_t key() const { return key_; }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
    uint64_t spare_ = 0;
    bool have_spare_ = false;
};

// Purpose tags for stream derivation. Samplers keep hidden-state draws and
// coordinate draws on separate streams so that the hidden path is a function
// of the seed alone, never of the continuous coordinates.
enum StreamTag : uint64_t {
    kStreamHidden = 1,
    kStreamCoord = 2,
    kStreamProposal = 3,
    kStreamReplication = 4,
    kStreamSubset = 5,
    kStreamQuery = 6,
};

inline RngStream make_stream(uint64_t seed, uint64_t tag) { return RngStream(derive(seed, tag)); }

inline RngStream make_stream(uint64_t seed, uint64_t tag, uint64_t index) {
    return RngStream(derive(derive(seed, tag), index));
}

} // namespace ph
