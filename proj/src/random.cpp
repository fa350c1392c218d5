#include "relaycc/random.hpp"

namespace relaycc {

std::uint64_t mix64(std::uint64_t x) noexcept {
    // splitmix64 finalizer
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : RandomStream(FromKey{}, mix64(seed)) {}

RandomStream::RandomStream(FromKey, std::uint64_t key) : key_(key), engine_(mix64(key)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
    return RandomStream(FromKey{}, mix64(key_ ^ mix64(index ^ 0xD1B54A32D192ED03ULL)));
}

double RandomStream::gaussian(double stddev) { return stddev * normal_(engine_); }

}  // namespace relaycc
