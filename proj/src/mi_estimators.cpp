#include "relaycc/mi_estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "relaycc/errors.hpp"

namespace relaycc {

namespace {

constexpr std::array<std::string_view, 9> kTermNames = {"r1", "r2", "r3", "r4", "r5",
                                                        "r6", "r7", "r8", "r9"};

bool all_rows_equal(std::span<const cdouble> signals, std::size_t dims) {
    for (std::size_t k = dims; k < signals.size(); k += dims) {
        for (std::size_t d = 0; d < dims; ++d) {
            if (signals[k + d] != signals[d]) return false;
        }
    }
    return true;
}

// Noise-free outputs for single-observation terms: u_i = c * x_i.
std::vector<cdouble> single_link(const Constellation& s, double c) {
    std::vector<cdouble> u;
    u.reserve(s.size());
    for (const auto& x : s.points()) u.push_back(c * x);
    return u;
}

// Two observations of the same symbol: (c_a x_i, c_b x_i).
std::vector<cdouble> two_links(const Constellation& s, double c_a, double c_b) {
    std::vector<cdouble> u;
    u.reserve(2 * s.size());
    for (const auto& x : s.points()) {
        u.push_back(c_a * x);
        u.push_back(c_b * x);
    }
    return u;
}

// Superposition at the destination: c_s x_i + c_r x_j, index i * M_r + j.
std::vector<cdouble> superposed(const Constellation& s, double c_s, const Constellation& r,
                                double c_r) {
    std::vector<cdouble> u;
    u.reserve(s.size() * r.size());
    for (const auto& x : s.points()) {
        for (const auto& y : r.points()) u.push_back(c_s * x + c_r * y);
    }
    return u;
}

const Constellation& require_relay(const MiContext& ctx, std::string_view term) {
    if (!ctx.relay) {
        throw InvalidArgument(std::string(term) + " needs a relay constellation");
    }
    return *ctx.relay;
}

MiEstimate run(const std::vector<cdouble>& u, std::size_t dims, const MiContext& ctx,
               std::string_view term) {
    auto est = signal_set_mi(u, dims, ctx.noise_samples, ctx.stream);
    if (!std::isfinite(est.bits) || !std::isfinite(est.std_error)) {
        throw NumericalError(std::string(term) + " produced a non-finite estimate");
    }
    return est;
}

}  // namespace

std::string_view to_string(RateTerm t) noexcept {
    return kTermNames[static_cast<std::size_t>(t) - 1];
}

std::optional<RateTerm> parse_rate_term(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kTermNames.size(); ++i) {
        std::string_view n = kTermNames[i];
        if (name == n || (name.size() == 2 && name[0] == 'R' && name[1] == n[1])) {
            return static_cast<RateTerm>(i + 1);
        }
    }
    return std::nullopt;
}

MiEstimate signal_set_mi(std::span<const cdouble> signals, std::size_t dims,
                         std::size_t noise_samples, const RandomStream& stream) {
    if (dims == 0 || signals.size() % dims != 0 || signals.size() < dims) {
        throw InvalidArgument("signal table size must be a positive multiple of dims");
    }
    if (noise_samples == 0) throw InvalidArgument("noise_samples must be at least 1");
    const std::size_t m = signals.size() / dims;
    if (m < 2 || all_rows_equal(signals, dims)) return {};

    const double noise_sd = std::sqrt(0.5);
    std::vector<cdouble> w(signals.size());
    std::vector<double> w_norm(m);
    std::vector<double> expo(m);
    std::vector<cdouble> z(dims);

    double mean_sum = 0.0;
    double var_sum = 0.0;
    for (std::size_t k1 = 0; k1 < m; ++k1) {
        for (std::size_t k = 0; k < m; ++k) {
            double nrm = 0.0;
            for (std::size_t d = 0; d < dims; ++d) {
                w[k * dims + d] = signals[k1 * dims + d] - signals[k * dims + d];
                nrm += std::norm(w[k * dims + d]);
            }
            w_norm[k] = nrm;
        }

        RandomStream rng = stream.substream(k1);
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t s = 0; s < noise_samples; ++s) {
            for (std::size_t d = 0; d < dims; ++d) {
                const double re = rng.gaussian(noise_sd);
                const double im = rng.gaussian(noise_sd);
                z[d] = {re, im};
            }
            // -|z + w|^2 + |z|^2 = -|w|^2 - 2 Re(z conj(w))
            double top = -INFINITY;
            for (std::size_t k = 0; k < m; ++k) {
                double e = -w_norm[k];
                for (std::size_t d = 0; d < dims; ++d) {
                    const cdouble& wk = w[k * dims + d];
                    e -= 2.0 * (z[d].real() * wk.real() + z[d].imag() * wk.imag());
                }
                expo[k] = e;
                top = std::max(top, e);
            }
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                // exp(-50) is far below one ulp of acc >= 1
                const double x = expo[k] - top;
                if (x > -50.0) acc += std::exp(x);
            }
            const double t = top + std::log(acc);

            const double delta = t - mean;
            mean += delta / double(s + 1);
            m2 += delta * (t - mean);
        }
        mean_sum += mean;
        if (noise_samples > 1) {
            var_sum += m2 / double(noise_samples - 1) / double(noise_samples);
        }
    }

    const double md = static_cast<double>(m);
    const double nats = std::log(md) - mean_sum / md;
    return {nats / std::numbers::ln2, std::sqrt(var_sum) / md / std::numbers::ln2};
}

MiEstimate r1(const MiContext& ctx) {
    const auto& relay = require_relay(ctx, "r1");
    return run(superposed(ctx.source, ctx.fading.c_ds, relay, ctx.fading.c_dr), 1, ctx, "r1");
}

// Yr does not depend on Xr, so conditioning on it changes nothing.
MiEstimate r2(const MiContext& ctx) {
    return run(single_link(ctx.source, ctx.fading.c_rs), 1, ctx, "r2");
}

MiEstimate r3(const MiContext& ctx) {
    return run(two_links(ctx.source, ctx.fading.c_rs, ctx.fading.c_ds), 2, ctx, "r3");
}

MiEstimate r4(const MiContext& ctx) {
    return run(single_link(ctx.source, ctx.fading.c_rs), 1, ctx, "r4");
}

MiEstimate r5(const MiContext& ctx) {
    return run(single_link(ctx.source, ctx.fading.c_ds), 1, ctx, "r5");
}

MiEstimate r6(const MiContext& ctx) {
    return run(single_link(ctx.source, ctx.fading.c_ds), 1, ctx, "r6");
}

MiEstimate r7(const MiContext& ctx) {
    const auto& relay = require_relay(ctx, "r7");
    return run(superposed(ctx.source, ctx.fading.c_ds, relay, ctx.fading.c_dr), 1, ctx, "r7");
}

MiEstimate r8(const MiContext& ctx) {
    return run(two_links(ctx.source, ctx.fading.c_rs, ctx.fading.c_ds), 2, ctx, "r8");
}

MiEstimate r9(const MiContext& ctx) {
    return run(single_link(ctx.source, ctx.fading.c_ds), 1, ctx, "r9");
}

MiEstimate estimate_rate(RateTerm term, const MiContext& ctx) {
    switch (term) {
        case RateTerm::R1: return r1(ctx);
        case RateTerm::R2: return r2(ctx);
        case RateTerm::R3: return r3(ctx);
        case RateTerm::R4: return r4(ctx);
        case RateTerm::R5: return r5(ctx);
        case RateTerm::R6: return r6(ctx);
        case RateTerm::R7: return r7(ctx);
        case RateTerm::R8: return r8(ctx);
        case RateTerm::R9: return r9(ctx);
    }
    throw InvalidArgument("unknown rate term");
}

double rate_cap_bits(RateTerm term, const MiContext& ctx) {
    double m = static_cast<double>(ctx.source.size());
    if (uses_relay_constellation(term)) m *= static_cast<double>(require_relay(ctx, to_string(term)).size());
    return std::log2(m);
}

FadingUse fading_use(RateTerm term) noexcept {
    switch (term) {
        case RateTerm::R1:
        case RateTerm::R7: return {true, false, true};
        case RateTerm::R2:
        case RateTerm::R4: return {false, true, false};
        case RateTerm::R3:
        case RateTerm::R8: return {true, true, false};
        case RateTerm::R5:
        case RateTerm::R6:
        case RateTerm::R9: return {true, false, false};
    }
    return {};
}

bool uses_relay_constellation(RateTerm term) noexcept {
    return term == RateTerm::R1 || term == RateTerm::R7;
}

}  // namespace relaycc
