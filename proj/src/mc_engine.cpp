#include "relaycc/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "relaycc/errors.hpp"

namespace relaycc {

void McConfig::validate() const {
    if (fading_samples < 1) throw InvalidArgument("fading_samples must be at least 1");
    if (noise_samples < 1) throw InvalidArgument("noise_samples must be at least 1");
}

RandomStream fading_stream(std::uint64_t seed, std::size_t index) {
    return RandomStream(seed).substream(index);
}

FadingDraw fading_draw(const ChannelParams& params, std::uint64_t seed, std::size_t index) {
    auto rng = fading_stream(seed, index).substream(static_cast<std::uint64_t>(StreamTag::Fading));
    return sample_fading(params, rng);
}

unsigned resolve_worker_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RELAYCC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> SampleMatrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

std::vector<double> SampleMatrix::combine(std::span<const double> weights) const {
    std::vector<double> out(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < cols_ && c < weights.size(); ++c) {
            if (weights[c] != 0.0) s += weights[c] * at(r, c);
        }
        out[r] = s;
    }
    return out;
}

SampleMatrix sample_terms(std::size_t n_terms, const TermFunction& inner,
                          const ChannelParams& params, const McConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.fading_samples;
    SampleMatrix m(n, n_terms);

    const std::size_t workers =
        std::min<std::size_t>(resolve_worker_count(cfg.threads), n);
    std::vector<std::exception_ptr> errors(workers);

    auto run_block = [&](std::size_t w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        try {
            for (std::size_t k = begin; k < end; ++k) {
                const RandomStream stream = fading_stream(cfg.seed, k);
                auto fading_rng = stream.substream(static_cast<std::uint64_t>(StreamTag::Fading));
                const FadingDraw draw = sample_fading(params, fading_rng);
                inner(draw, stream, m.row(k));
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    if (workers <= 1) {
        run_block(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
    }
    // Lowest block first, so the reported failure is the same for any worker count.
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < n_terms; ++c) {
            if (!std::isfinite(m.at(k, c))) {
                throw NumericalError("non-finite value for term " + std::to_string(c) +
                                         " at fading draw " + std::to_string(k),
                                     k);
            }
        }
    }
    return m;
}

RateEstimate summarize(std::span<const double> samples, std::size_t noise_samples) {
    RateEstimate est;
    est.fading_samples = samples.size();
    est.noise_samples = noise_samples;
    if (samples.empty()) return est;
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples) sum += v;
    est.mean = sum / n;
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double v : samples) ss += (v - est.mean) * (v - est.mean);
        est.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return est;
}

RateEstimate estimate_expectation(
    const std::function<double(const FadingDraw&, const RandomStream&)>& inner,
    const ChannelParams& params, const McConfig& cfg) {
    const auto m = sample_terms(
        1,
        [&](const FadingDraw& d, const RandomStream& s, std::span<double> out) {
            out[0] = inner(d, s);
        },
        params, cfg);
    return summarize(m.column(0), cfg.noise_samples);
}

}  // namespace relaycc
