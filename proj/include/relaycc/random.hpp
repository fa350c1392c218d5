#pragma once

#include <cstdint>
#include <random>

namespace relaycc {

/// A keyed pseudo-random stream.
///
/// Every stream is identified by a 64-bit key; substream(k) derives a new
/// key from (key, k) without touching the parent's state, so any tree of
/// (seed, fading index, term, summation index) maps to the same numbers no
/// matter which worker evaluates it or in which order.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    RandomStream substream(std::uint64_t index) const;
    std::uint64_t key() const noexcept { return key_; }

    std::mt19937_64& engine() noexcept { return engine_; }

    /// Zero-mean real Gaussian with the given standard deviation.
    double gaussian(double stddev);

private:
    struct FromKey {};
    RandomStream(FromKey, std::uint64_t key);

    std::uint64_t key_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace relaycc
