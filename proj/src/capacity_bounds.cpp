#include "relaycc/capacity_bounds.hpp"

#include <cmath>

#include "relaycc/errors.hpp"
#include "relaycc/mi_estimators.hpp"

namespace relaycc {

namespace {

struct Want {
    bool cc = true;
    bool gauss = true;
    bool direct_cc = true;
    bool direct_gauss = true;
};

// Column layout of the per-draw sample matrix.
namespace fd {
enum Col : std::size_t { R1, R2, R3, G_MAC, G_SR, G_BC, kCount };
}
namespace hd {
enum Col : std::size_t { R4, R5, R6, R8, G_SR, G_SD, G_BC, kBase };
// then per alpha: R7, G_MAC
constexpr std::size_t kPerAlpha = 2;
}
namespace dir {
enum Col : std::size_t { R9, G_DIR, kCount };
}

constexpr std::uint64_t kIndependentArmSalt = 0xA5A5F00DCAFE1234ULL;

std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

MiContext context(const Constellation& source, const FadingDraw& f, const McConfig& cfg,
                  const RandomStream& draw_stream, StreamTag t,
                  const Constellation* relay = nullptr) {
    MiContext ctx{source, std::nullopt, f, cfg.noise_samples, draw_stream.substream(tag(t))};
    if (relay) ctx.relay = *relay;
    return ctx;
}

RateEstimate summarize_cc(const std::vector<double>& s, const McConfig& cfg) {
    return summarize(s, cfg.noise_samples);
}

struct Selected {
    RateEstimate estimate;
    Branch branch;
    std::vector<double> samples;
};

// min taken after the fading expectation; ties keep the broadcast branch.
Selected select_min(std::vector<double> broadcast, std::vector<double> mac, std::size_t noise) {
    RateEstimate b = summarize(broadcast, noise);
    RateEstimate m = summarize(mac, noise);
    if (m.mean < b.mean) return {m, Branch::Mac, std::move(mac)};
    return {b, Branch::Broadcast, std::move(broadcast)};
}

std::vector<double> weighted(const SampleMatrix& mat, std::initializer_list<std::pair<std::size_t, double>> terms) {
    std::vector<double> w(mat.cols(), 0.0);
    for (const auto& [col, weight] : terms) w[col] += weight;
    return mat.combine(w);
}

void check_constellations(const ConstellationSpec* spec, const Want& want) {
    if ((want.cc || want.direct_cc) && spec == nullptr) {
        throw InvalidArgument("constellation bounds need a constellation spec");
    }
}

// Direct arm: R9 at source power 2P and C(2 c_ds^2 P).
SampleMatrix direct_samples(const ChannelParams& params, const Constellation* source,
                            const McConfig& cfg, const Want& want) {
    const double p = params.power();
    std::optional<Constellation> src2p;
    if (want.direct_cc) src2p = scale(*source, 2.0 * p);
    return sample_terms(
        dir::kCount,
        [&](const FadingDraw& f, const RandomStream& st, std::span<double> out) {
            out[dir::R9] = want.direct_cc ? r9(context(*src2p, f, cfg, st, StreamTag::R9)).bits : 0.0;
            out[dir::G_DIR] = want.direct_gauss ? gaussian_capacity(2.0 * f.c_ds * f.c_ds * p) : 0.0;
        },
        params, cfg);
}

void fill_direct(DetailedBounds& d, const SampleMatrix& direct, const McConfig& cfg) {
    d.direct_cc_samples = direct.column(dir::R9);
    d.direct_gauss_samples = direct.column(dir::G_DIR);
    d.bounds.direct_cc = summarize_cc(d.direct_cc_samples, cfg);
    d.bounds.direct_gauss = summarize(d.direct_gauss_samples);
}

std::vector<DetailedBounds> compute_fd(const ChannelParams& params, const ConstellationSpec* spec,
                                       const McConfig& cfg, const BoundOptions& opts,
                                       const Want& want) {
    const double p = params.power();
    std::optional<Constellation> src, rel, src2p;
    if (want.cc) {
        src = scale(spec->source, p);
        rel = scale(spec->relay, p);
    }
    const bool coupled = opts.common_random_numbers;
    if (coupled && want.direct_cc) src2p = scale(spec->source, 2.0 * p);

    const std::size_t cols = fd::kCount + (coupled ? std::size_t{dir::kCount} : std::size_t{0});
    const SampleMatrix mat = sample_terms(
        cols,
        [&](const FadingDraw& f, const RandomStream& st, std::span<double> out) {
            if (want.cc) {
                out[fd::R1] = r1(context(*src, f, cfg, st, StreamTag::R1, &*rel)).bits;
                out[fd::R2] = r2(context(*src, f, cfg, st, StreamTag::R2)).bits;
                out[fd::R3] = r3(context(*src, f, cfg, st, StreamTag::R3)).bits;
            }
            if (want.gauss) {
                const double ds2 = f.c_ds * f.c_ds, rs2 = f.c_rs * f.c_rs, dr2 = f.c_dr * f.c_dr;
                out[fd::G_MAC] = gaussian_capacity((ds2 + dr2) * p);
                out[fd::G_SR] = gaussian_capacity(rs2 * p);
                out[fd::G_BC] = gaussian_capacity((rs2 + ds2) * p);
            }
            if (coupled) {
                auto d = out.subspan(fd::kCount);
                d[dir::R9] = want.direct_cc ? r9(context(*src2p, f, cfg, st, StreamTag::R9)).bits : 0.0;
                d[dir::G_DIR] = want.direct_gauss ? gaussian_capacity(2.0 * f.c_ds * f.c_ds * p) : 0.0;
            }
        },
        params, cfg);

    DetailedBounds d;
    d.alpha = params.alpha;
    d.coupled = coupled;
    if (want.cc) {
        auto lo = select_min(mat.column(fd::R2), mat.column(fd::R1), cfg.noise_samples);
        auto up = select_min(mat.column(fd::R3), mat.column(fd::R1), cfg.noise_samples);
        d.bounds.lower_cc = lo.estimate;
        d.bounds.lower_branch = lo.branch;
        d.lower_cc_samples = std::move(lo.samples);
        d.bounds.upper_cc = up.estimate;
        d.bounds.upper_branch = up.branch;
    }
    if (want.gauss) {
        auto lo = select_min(mat.column(fd::G_SR), mat.column(fd::G_MAC), 0);
        auto up = select_min(mat.column(fd::G_BC), mat.column(fd::G_MAC), 0);
        d.bounds.lower_gauss = lo.estimate;
        d.bounds.lower_gauss_branch = lo.branch;
        d.lower_gauss_samples = std::move(lo.samples);
        d.bounds.upper_gauss = up.estimate;
        d.bounds.upper_gauss_branch = up.branch;
    }
    if (want.direct_cc || want.direct_gauss) {
        if (coupled) {
            SampleMatrix direct(mat.rows(), dir::kCount);
            for (std::size_t r = 0; r < mat.rows(); ++r) {
                for (std::size_t c = 0; c < dir::kCount; ++c) direct.row(r)[c] = mat.at(r, fd::kCount + c);
            }
            fill_direct(d, direct, cfg);
        } else {
            McConfig other = cfg;
            other.seed = mix64(cfg.seed ^ kIndependentArmSalt);
            fill_direct(d, direct_samples(params, spec ? &spec->source : nullptr, other, want), cfg);
        }
    }
    return {std::move(d)};
}

std::vector<DetailedBounds> compute_hd(const ChannelParams& params, std::span<const double> alphas,
                                       const ConstellationSpec* spec, const McConfig& cfg,
                                       const BoundOptions& opts, const Want& want) {
    for (double a : alphas) {
        ChannelParams check = params;
        check.alpha = a;
        check.validate(true);
    }
    const double p = params.power();
    const std::size_t na = alphas.size();
    std::optional<Constellation> s1, s2, src2p;
    std::vector<Constellation> relay_by_alpha;
    if (want.cc) {
        s1 = scale(spec->source, p);
        s2 = scale(spec->source_phase2, p);
        for (double a : alphas) {
            relay_by_alpha.push_back(scale(spec->relay, opts.relay_alpha_scaling ? p / (1.0 - a) : p));
        }
    }
    const bool coupled = opts.common_random_numbers;
    if (coupled && want.direct_cc) src2p = scale(spec->source, 2.0 * p);

    const std::size_t dir_offset = hd::kBase + hd::kPerAlpha * na;
    const std::size_t cols = dir_offset + (coupled ? std::size_t{dir::kCount} : std::size_t{0});
    const SampleMatrix mat = sample_terms(
        cols,
        [&](const FadingDraw& f, const RandomStream& st, std::span<double> out) {
            const double ds2 = f.c_ds * f.c_ds, rs2 = f.c_rs * f.c_rs, dr2 = f.c_dr * f.c_dr;
            if (want.cc) {
                out[hd::R4] = r4(context(*s1, f, cfg, st, StreamTag::R4)).bits;
                out[hd::R5] = r5(context(*s2, f, cfg, st, StreamTag::R5)).bits;
                out[hd::R6] = r6(context(*s1, f, cfg, st, StreamTag::R6)).bits;
                out[hd::R8] = r8(context(*s1, f, cfg, st, StreamTag::R8)).bits;
            }
            if (want.gauss) {
                out[hd::G_SR] = gaussian_capacity(rs2 * p);
                out[hd::G_SD] = gaussian_capacity(ds2 * p);
                out[hd::G_BC] = gaussian_capacity((ds2 + rs2) * p);
            }
            for (std::size_t ia = 0; ia < na; ++ia) {
                const std::size_t base = hd::kBase + hd::kPerAlpha * ia;
                if (want.cc) {
                    out[base] = r7(context(*s2, f, cfg, st, StreamTag::R7, &relay_by_alpha[ia])).bits;
                }
                if (want.gauss) {
                    out[base + 1] = gaussian_capacity(ds2 * p + dr2 * p / (1.0 - alphas[ia]));
                }
            }
            if (coupled) {
                auto d = out.subspan(dir_offset);
                d[dir::R9] = want.direct_cc ? r9(context(*src2p, f, cfg, st, StreamTag::R9)).bits : 0.0;
                d[dir::G_DIR] = want.direct_gauss ? gaussian_capacity(2.0 * ds2 * p) : 0.0;
            }
        },
        params, cfg);

    std::optional<SampleMatrix> direct;
    if (want.direct_cc || want.direct_gauss) {
        if (coupled) {
            direct.emplace(mat.rows(), dir::kCount);
            for (std::size_t r = 0; r < mat.rows(); ++r) {
                for (std::size_t c = 0; c < dir::kCount; ++c) direct->row(r)[c] = mat.at(r, dir_offset + c);
            }
        } else {
            McConfig other = cfg;
            other.seed = mix64(cfg.seed ^ kIndependentArmSalt);
            direct = direct_samples(params, spec ? &spec->source : nullptr, other, want);
        }
    }

    std::vector<DetailedBounds> result;
    result.reserve(na);
    for (std::size_t ia = 0; ia < na; ++ia) {
        const double a = alphas[ia];
        const std::size_t r7 = hd::kBase + hd::kPerAlpha * ia;
        const std::size_t g_mac = r7 + 1;
        DetailedBounds d;
        d.alpha = a;
        d.coupled = coupled;
        if (want.cc) {
            auto mac = weighted(mat, {{hd::R6, a}, {r7, 1.0 - a}});
            auto lo = select_min(weighted(mat, {{hd::R4, a}, {hd::R5, 1.0 - a}}), mac, cfg.noise_samples);
            auto up = select_min(weighted(mat, {{hd::R8, a}, {hd::R5, 1.0 - a}}), mac, cfg.noise_samples);
            d.bounds.lower_cc = lo.estimate;
            d.bounds.lower_branch = lo.branch;
            d.lower_cc_samples = std::move(lo.samples);
            d.bounds.upper_cc = up.estimate;
            d.bounds.upper_branch = up.branch;
        }
        if (want.gauss) {
            auto mac = weighted(mat, {{hd::G_SD, a}, {g_mac, 1.0 - a}});
            auto lo = select_min(weighted(mat, {{hd::G_SR, a}, {hd::G_SD, 1.0 - a}}), mac, 0);
            auto up = select_min(weighted(mat, {{hd::G_BC, a}, {hd::G_SD, 1.0 - a}}), mac, 0);
            d.bounds.lower_gauss = lo.estimate;
            d.bounds.lower_gauss_branch = lo.branch;
            d.lower_gauss_samples = std::move(lo.samples);
            d.bounds.upper_gauss = up.estimate;
            d.bounds.upper_gauss_branch = up.branch;
        }
        if (direct) fill_direct(d, *direct, cfg);
        result.push_back(std::move(d));
    }
    return result;
}

std::vector<DetailedBounds> compute(RelayMode mode, const ChannelParams& params,
                                    std::span<const double> alphas, const ConstellationSpec* spec,
                                    const McConfig& cfg, const BoundOptions& opts, const Want& want) {
    cfg.validate();
    params.validate(false);
    check_constellations(spec, want);
    if (mode == RelayMode::FullDuplex) return compute_fd(params, spec, cfg, opts, want);
    return compute_hd(params, alphas, spec, cfg, opts, want);
}

BoundPair cc_pair(const DetailedBounds& d) {
    return {d.bounds.lower_cc, d.bounds.upper_cc, d.bounds.lower_branch, d.bounds.upper_branch};
}

BoundPair gauss_pair(const DetailedBounds& d) {
    return {d.bounds.lower_gauss, d.bounds.upper_gauss, d.bounds.lower_gauss_branch,
            d.bounds.upper_gauss_branch};
}

}  // namespace

std::string_view to_string(RelayMode m) noexcept {
    return m == RelayMode::FullDuplex ? "fd" : "hd";
}

std::string_view to_string(Branch b) noexcept { return b == Branch::Broadcast ? "bc" : "mac"; }

double gaussian_capacity(double snr) noexcept { return std::log2(1.0 + snr); }

BoundPair fd_bounds_cc(const ChannelParams& params, const Constellation& source,
                       const Constellation& relay, const McConfig& cfg) {
    const ConstellationSpec spec{source, relay, source};
    const Want want{true, false, false, false};
    return cc_pair(compute(RelayMode::FullDuplex, params, {}, &spec, cfg, {}, want).front());
}

BoundPair fd_bounds_gauss(const ChannelParams& params, const McConfig& cfg) {
    const Want want{false, true, false, false};
    return gauss_pair(compute(RelayMode::FullDuplex, params, {}, nullptr, cfg, {}, want).front());
}

BoundPair hd_bounds_cc(const ChannelParams& params, const Constellation& source_phase1,
                       const Constellation& source_phase2, const Constellation& relay,
                       const McConfig& cfg, const BoundOptions& opts) {
    const ConstellationSpec spec{source_phase1, relay, source_phase2};
    const Want want{true, false, false, false};
    const double alpha[] = {params.alpha};
    return cc_pair(compute(RelayMode::HalfDuplex, params, alpha, &spec, cfg, opts, want).front());
}

BoundPair hd_bounds_gauss(const ChannelParams& params, const McConfig& cfg) {
    const Want want{false, true, false, false};
    const double alpha[] = {params.alpha};
    return gauss_pair(compute(RelayMode::HalfDuplex, params, alpha, nullptr, cfg, {}, want).front());
}

RateEstimate direct_capacity(const ChannelParams& params, const std::optional<Constellation>& source,
                             const McConfig& cfg) {
    cfg.validate();
    params.validate(false);
    const Want want{false, false, source.has_value(), !source.has_value()};
    const auto mat = direct_samples(params, source ? &*source : nullptr, cfg, want);
    if (source) return summarize(mat.column(dir::R9), cfg.noise_samples);
    return summarize(mat.column(dir::G_DIR));
}

std::vector<DetailedBounds> evaluate_bounds(RelayMode mode, const ChannelParams& params,
                                            std::span<const double> alphas,
                                            const ConstellationSpec& constellations,
                                            const McConfig& cfg, const BoundOptions& opts) {
    return compute(mode, params, alphas, &constellations, cfg, opts, Want{});
}

DetailedBounds evaluate_bounds(RelayMode mode, const ChannelParams& params,
                               const ConstellationSpec& constellations, const McConfig& cfg,
                               const BoundOptions& opts) {
    const double alpha[] = {params.alpha};
    return evaluate_bounds(mode, params, alpha, constellations, cfg, opts).front();
}

}  // namespace relaycc
