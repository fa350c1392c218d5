#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaycc/capacity_bounds.hpp"

namespace relaycc {

/// Lower bound with the relay minus direct capacity at source power 2P.
struct GainPoint {
    double p_db = 0.0;
    std::optional<double> alpha;
    RateEstimate gain_cc;
    RateEstimate gain_gauss;
    Branch lower_branch = Branch::Broadcast;
    Branch upper_branch = Branch::Broadcast;
};

struct SweepRow {
    GainPoint gain;
    BoundSet bounds;
};

struct SweepMetadata {
    RelayMode mode = RelayMode::FullDuplex;
    ChannelParams scenario;
    std::string constellation;
    McConfig cfg;
    BoundOptions options;
    std::string tool_version;
};

/// Rows are in strictly increasing p_db order.
struct SweepTable {
    SweepMetadata meta;
    std::vector<SweepRow> rows;
};

std::string tool_version();

/// Gain from an evaluated point. Coupled samples give the paired standard
/// error; otherwise the two arms' errors add in quadrature.
GainPoint gain_from_bounds(const DetailedBounds& detail, double p_db,
                           std::optional<double> alpha);

GainPoint relay_gain(RelayMode mode, const ChannelParams& params,
                     const ConstellationSpec& constellations, const McConfig& cfg,
                     const BoundOptions& opts = {});

SweepTable sweep_p(RelayMode mode, const ChannelParams& params,
                   const ConstellationSpec& constellations, std::span<const double> p_grid_db,
                   const McConfig& cfg, const BoundOptions& opts = {});

/// One HD P-sweep per alpha, in alpha_grid order.
std::vector<SweepTable> sweep_alpha(const ChannelParams& params,
                                    const ConstellationSpec& constellations,
                                    std::span<const double> alpha_grid,
                                    std::span<const double> p_grid_db, const McConfig& cfg,
                                    const BoundOptions& opts = {});

enum class Alphabet { Constellation, Gaussian };

struct PeakGain {
    std::size_t index = 0;
    double p_db = 0.0;
    double gain = 0.0;
    double std_error = 0.0;
};

/// Grid argmax of the mean gain; ties go to the smaller p_db.
PeakGain find_max_gain(const SweepTable& table, Alphabet alphabet = Alphabet::Constellation);

/// Re-evaluates the peak and its grid neighbours with 4x fading samples and
/// returns the best of those.
PeakGain refine_max_gain(const SweepTable& table, const ConstellationSpec& constellations,
                         Alphabet alphabet = Alphabet::Constellation);

}  // namespace relaycc
