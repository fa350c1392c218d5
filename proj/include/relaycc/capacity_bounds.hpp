#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "relaycc/channel.hpp"
#include "relaycc/constellation.hpp"
#include "relaycc/mc_engine.hpp"

namespace relaycc {

enum class RelayMode { FullDuplex, HalfDuplex };

std::string_view to_string(RelayMode m) noexcept;

/// Constellations for every transmit slot. FD reads `source` and `relay`;
/// HD uses `source` in phase 1 and `source_phase2` in phase 2.
struct ConstellationSpec {
    Constellation source;
    Constellation relay;
    Constellation source_phase2;

    static ConstellationSpec uniform(const Constellation& c) { return {c, c, c}; }
};

/// The two terms of every min(): the broadcast side (source to relay, or the
/// cut around the source) and the multiple-access side at the destination.
enum class Branch { Broadcast, Mac };

std::string_view to_string(Branch b) noexcept;

struct BoundOptions {
    /// Scale the HD relay constellation by 1/(1-alpha) inside R7.
    bool relay_alpha_scaling = true;
    /// Evaluate the direct arm on the same fading draws as the relay arm.
    bool common_random_numbers = true;
};

/// Lower and upper bound for one alphabet. The standard error of a min is
/// that of the branch it selected.
struct BoundPair {
    RateEstimate lower;
    RateEstimate upper;
    Branch lower_branch = Branch::Broadcast;
    Branch upper_branch = Branch::Broadcast;
};

struct BoundSet {
    RateEstimate lower_cc, upper_cc;
    RateEstimate lower_gauss, upper_gauss;
    RateEstimate direct_cc, direct_gauss;
    Branch lower_branch = Branch::Broadcast;
    Branch upper_branch = Branch::Broadcast;
    Branch lower_gauss_branch = Branch::Broadcast;
    Branch upper_gauss_branch = Branch::Broadcast;
};

/// A BoundSet together with the per-draw values of the selected lower-bound
/// branches and of the direct arm; relay gains are built from these.
struct DetailedBounds {
    double alpha = 0.0;
    BoundSet bounds;
    std::vector<double> lower_cc_samples;
    std::vector<double> lower_gauss_samples;
    std::vector<double> direct_cc_samples;
    std::vector<double> direct_gauss_samples;
    /// False when the direct arm used its own fading draws.
    bool coupled = true;
};

/// Gaussian-alphabet capacity helper C(a) = log2(1 + a).
double gaussian_capacity(double snr) noexcept;

BoundPair fd_bounds_cc(const ChannelParams& params, const Constellation& source,
                       const Constellation& relay, const McConfig& cfg);
BoundPair fd_bounds_gauss(const ChannelParams& params, const McConfig& cfg);

BoundPair hd_bounds_cc(const ChannelParams& params, const Constellation& source_phase1,
                       const Constellation& source_phase2, const Constellation& relay,
                       const McConfig& cfg, const BoundOptions& opts = {});
BoundPair hd_bounds_gauss(const ChannelParams& params, const McConfig& cfg);

/// Direct transmission with source power 2P: E[R9] for a constellation,
/// E[C(2 c_ds^2 P)] when `source` is empty (Gaussian alphabet).
RateEstimate direct_capacity(const ChannelParams& params,
                             const std::optional<Constellation>& source, const McConfig& cfg);

/// Every bound and the direct capacity for one power, sharing fading draws.
/// For HD one entry per alpha in `alphas` (params.alpha is ignored); the
/// alpha-independent terms are evaluated once. For FD `alphas` is ignored
/// and a single entry is returned.
std::vector<DetailedBounds> evaluate_bounds(RelayMode mode, const ChannelParams& params,
                                            std::span<const double> alphas,
                                            const ConstellationSpec& constellations,
                                            const McConfig& cfg, const BoundOptions& opts = {});

DetailedBounds evaluate_bounds(RelayMode mode, const ChannelParams& params,
                               const ConstellationSpec& constellations, const McConfig& cfg,
                               const BoundOptions& opts = {});

}  // namespace relaycc
