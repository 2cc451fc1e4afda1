#pragma once

#include <cstdint>

namespace schwinger {

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so trajectory / shot i reproduces the same numbers
// regardless of which worker runs it or in which order.
//
//   key   = splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15))
//   draw  = splitmix64(key + counter * 0x9E3779B97F4A7C15)
//   u     = (draw >> 11) * 2^-53            in [0, 1)

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15ULL));
}

constexpr double unit_interval(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t draw = splitmix64(stream_key(seed, stream) + counter * 0x9E3779B97F4A7C15ULL);
    return static_cast<double>(draw >> 11) * 0x1.0p-53;
}

/// Sequential view on one stream.
class StreamRng {
  public:
    StreamRng(std::uint64_t seed, std::uint64_t stream) : key_(stream_key(seed, stream)) {}

    double uniform() {
        const std::uint64_t draw = splitmix64(key_ + counter_++ * 0x9E3779B97F4A7C15ULL);
        return static_cast<double>(draw >> 11) * 0x1.0p-53;
    }

    /// Uniform on [-half_width, half_width).
    double symmetric(double half_width) { return half_width * (2.0 * uniform() - 1.0); }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace schwinger
