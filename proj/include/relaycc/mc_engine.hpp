#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "relaycc/channel.hpp"
#include "relaycc/random.hpp"

namespace relaycc {

struct McConfig {
    std::size_t fading_samples = 2000;
    std::size_t noise_samples = 500;
    std::uint64_t seed = 0;
    /// Worker count; 0 means RELAYCC_THREADS or the hardware concurrency.
    unsigned threads = 0;

    void validate() const;
};

/// Monte-Carlo mean of one rate quantity, in bits.
struct RateEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t fading_samples = 0;
    std::size_t noise_samples = 0;
};

/// Sub-keys under a fading index's stream.
enum class StreamTag : std::uint64_t {
    Fading = 0,
    R1 = 1, R2, R3, R4, R5, R6, R7, R8, R9,
    User = 100,
};

/// Stream for fading index `index` under `seed`. Fading magnitudes are drawn
/// from its StreamTag::Fading substream; estimators use their own tags.
RandomStream fading_stream(std::uint64_t seed, std::size_t index);
FadingDraw fading_draw(const ChannelParams& params, std::uint64_t seed, std::size_t index);

unsigned resolve_worker_count(unsigned requested);

/// Per-draw samples of several quantities that share the same fading draws.
class SampleMatrix {
public:
    SampleMatrix() = default;
    SampleMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<double> column(std::size_t c) const;
    /// Per-row linear combination sum_k weights[k] * row[k].
    std::vector<double> combine(std::span<const double> weights) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

using TermFunction =
    std::function<void(const FadingDraw&, const RandomStream&, std::span<double>)>;

/// Evaluates `inner` on cfg.fading_samples fading draws. Row k holds the
/// values for draw k, computed from substreams of fading_stream(seed, k).
/// The index space is split into contiguous blocks, one per worker, so the
/// result does not depend on the worker count.
SampleMatrix sample_terms(std::size_t n_terms, const TermFunction& inner,
                          const ChannelParams& params, const McConfig& cfg);

/// Mean and standard error (sample std / sqrt(n)), summed in index order.
RateEstimate summarize(std::span<const double> samples, std::size_t noise_samples = 0);

/// Single-quantity convenience wrapper around sample_terms + summarize.
RateEstimate estimate_expectation(
    const std::function<double(const FadingDraw&, const RandomStream&)>& inner,
    const ChannelParams& params, const McConfig& cfg);

}  // namespace relaycc
