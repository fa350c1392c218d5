#include "relay_gain_internal.hpp"

#include <cmath>
#include <string>

#include "relaycc/errors.hpp"

#ifndef RELAYCC_VERSION
#define RELAYCC_VERSION "dev"
#endif

namespace relaycc {

namespace {

RateEstimate difference(const std::vector<double>& with_relay, const std::vector<double>& direct,
                        const RateEstimate& a, const RateEstimate& b, bool coupled) {
    if (coupled && with_relay.size() == direct.size()) {
        std::vector<double> diff(with_relay.size());
        for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = with_relay[k] - direct[k];
        RateEstimate est = summarize(diff, a.noise_samples);
        // Same value as a.mean - b.mean up to rounding; keep it exact.
        est.mean = a.mean - b.mean;
        return est;
    }
    RateEstimate est;
    est.mean = a.mean - b.mean;
    est.std_error = std::hypot(a.std_error, b.std_error);
    est.fading_samples = a.fading_samples;
    est.noise_samples = a.noise_samples;
    return est;
}

void check_grid(std::span<const double> grid, const char* what) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) && !(grid[i] == -INFINITY && i == 0)) {
            throw InvalidArgument(std::string(what) + " grid has a non-finite value");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InvalidArgument(std::string(what) + " grid must be strictly increasing");
        }
    }
}

SweepMetadata metadata(RelayMode mode, const ChannelParams& params,
                       const ConstellationSpec& constellations, const McConfig& cfg,
                       const BoundOptions& opts) {
    SweepMetadata meta;
    meta.mode = mode;
    meta.scenario = params;
    meta.constellation = constellations.source.label();
    if (constellations.relay.label() != constellations.source.label() ||
        (mode == RelayMode::HalfDuplex &&
         constellations.source_phase2.label() != constellations.source.label())) {
        meta.constellation += "/" + constellations.relay.label();
        if (mode == RelayMode::HalfDuplex) meta.constellation += "/" + constellations.source_phase2.label();
    }
    meta.cfg = cfg;
    meta.options = opts;
    meta.tool_version = tool_version();
    return meta;
}

}  // namespace

std::string tool_version() { return RELAYCC_VERSION; }

GainPoint gain_from_bounds(const DetailedBounds& detail, double p_db, std::optional<double> alpha) {
    GainPoint g;
    g.p_db = p_db;
    g.alpha = alpha;
    const auto& b = detail.bounds;
    g.gain_cc = difference(detail.lower_cc_samples, detail.direct_cc_samples, b.lower_cc,
                           b.direct_cc, detail.coupled);
    g.gain_gauss = difference(detail.lower_gauss_samples, detail.direct_gauss_samples,
                              b.lower_gauss, b.direct_gauss, detail.coupled);
    g.lower_branch = b.lower_branch;
    g.upper_branch = b.upper_branch;
    return g;
}

SweepRow evaluate_row(RelayMode mode, const ChannelParams& params,
                      const ConstellationSpec& constellations, const McConfig& cfg,
                      const BoundOptions& opts) {
    const DetailedBounds d = evaluate_bounds(mode, params, constellations, cfg, opts);
    std::optional<double> alpha;
    if (mode == RelayMode::HalfDuplex) alpha = params.alpha;
    return {gain_from_bounds(d, params.p_db, alpha), d.bounds};
}

GainPoint relay_gain(RelayMode mode, const ChannelParams& params,
                     const ConstellationSpec& constellations, const McConfig& cfg,
                     const BoundOptions& opts) {
    return evaluate_row(mode, params, constellations, cfg, opts).gain;
}

SweepTable sweep_p(RelayMode mode, const ChannelParams& params,
                   const ConstellationSpec& constellations, std::span<const double> p_grid_db,
                   const McConfig& cfg, const BoundOptions& opts) {
    check_grid(p_grid_db, "P");
    SweepTable table;
    table.meta = metadata(mode, params, constellations, cfg, opts);
    table.rows.reserve(p_grid_db.size());
    for (double p : p_grid_db) {
        ChannelParams at = params;
        at.p_db = p;
        try {
            table.rows.push_back(evaluate_row(mode, at, constellations, cfg, opts));
        } catch (const NumericalError& e) {
            throw NumericalError("p_db=" + std::to_string(p) + ": " + e.what(), e.fading_index());
        }
    }
    return table;
}

std::vector<SweepTable> sweep_alpha(const ChannelParams& params,
                                    const ConstellationSpec& constellations,
                                    std::span<const double> alpha_grid,
                                    std::span<const double> p_grid_db, const McConfig& cfg,
                                    const BoundOptions& opts) {
    check_grid(p_grid_db, "P");
    std::vector<SweepTable> tables(alpha_grid.size());
    for (std::size_t ia = 0; ia < alpha_grid.size(); ++ia) {
        ChannelParams with_alpha = params;
        with_alpha.alpha = alpha_grid[ia];
        tables[ia].meta = metadata(RelayMode::HalfDuplex, with_alpha, constellations, cfg, opts);
    }
    for (double p : p_grid_db) {
        ChannelParams at = params;
        at.p_db = p;
        std::vector<DetailedBounds> details;
        try {
            details = evaluate_bounds(RelayMode::HalfDuplex, at, alpha_grid, constellations, cfg, opts);
        } catch (const NumericalError& e) {
            throw NumericalError("p_db=" + std::to_string(p) + ": " + e.what(), e.fading_index());
        }
        for (std::size_t ia = 0; ia < details.size(); ++ia) {
            tables[ia].rows.push_back(
                {gain_from_bounds(details[ia], p, alpha_grid[ia]), details[ia].bounds});
        }
    }
    return tables;
}

PeakGain find_max_gain(const SweepTable& table, Alphabet alphabet) {
    if (table.rows.empty()) throw InvalidArgument("cannot find the peak of an empty table");
    auto gain_of = [&](const SweepRow& r) -> const RateEstimate& {
        return alphabet == Alphabet::Constellation ? r.gain.gain_cc : r.gain.gain_gauss;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (gain_of(table.rows[i]).mean > gain_of(table.rows[best]).mean) best = i;
    }
    const auto& g = gain_of(table.rows[best]);
    return {best, table.rows[best].gain.p_db, g.mean, g.std_error};
}

PeakGain refine_max_gain(const SweepTable& table, const ConstellationSpec& constellations,
                         Alphabet alphabet) {
    const PeakGain coarse = find_max_gain(table, alphabet);
    McConfig fine = table.meta.cfg;
    fine.fading_samples *= 4;
    const std::size_t lo = coarse.index == 0 ? 0 : coarse.index - 1;
    const std::size_t hi = std::min(table.rows.size() - 1, coarse.index + 1);
    PeakGain best;
    bool first = true;
    for (std::size_t i = lo; i <= hi; ++i) {
        ChannelParams at = table.meta.scenario;
        at.p_db = table.rows[i].gain.p_db;
        const GainPoint g = relay_gain(table.meta.mode, at, constellations, fine, table.meta.options);
        const RateEstimate& e = alphabet == Alphabet::Constellation ? g.gain_cc : g.gain_gauss;
        if (first || e.mean > best.gain) {
            best = {i, at.p_db, e.mean, e.std_error};
            first = false;
        }
    }
    return best;
}

}  // namespace relaycc
