#pragma once

// Deterministic, platform-independent random numbers. SplitMix64 is used both
// as the generator and as the stream-splitting hash: the RNG for stream i of
// an experiment with master seed s is SplitMix64(mix(s, i)). uniform() maps
// the top 53 bits onto [0,1), so sequences are bit-identical everywhere.

#include <cstdint>

namespace endolab {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    // uniform in {0, ..., n-1} by rejection-free scaling (n is tiny here)
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 h(master ^ (0xD1B54A32D192ED03ull * (stream + 1)));
    return h.next();
}

inline SplitMix64 stream_rng(std::uint64_t master, std::uint64_t stream) {
    return SplitMix64(mix_seed(master, stream));
}

}  // namespace endolab
