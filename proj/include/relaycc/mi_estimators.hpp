#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "relaycc/channel.hpp"
#include "relaycc/constellation.hpp"
#include "relaycc/random.hpp"

namespace relaycc {

/// The nine conditional-fading rate terms.
///
///   R1  I(Xs, Xr; Yd)          FD, destination multiple access
///   R2  I(Xs; Yr | Xr)         FD, source to relay
///   R3  I(Xs; Yr, Yd | Xr)     FD, broadcast cut
///   R4  I(Xs1; Yr)             HD phase 1, source to relay
///   R5  I(Xs2; Yd2 | Xr)       HD phase 2, source to destination
///   R6  I(Xs1; Yd1)            HD phase 1, source to destination
///   R7  I(Xs2, Xr; Yd2)        HD phase 2, multiple access
///   R8  I(Xs1; Yr, Yd1)        HD phase 1, broadcast cut
///   R9  I(Xs; Yd)              direct transmission
enum class RateTerm { R1 = 1, R2, R3, R4, R5, R6, R7, R8, R9 };

std::string_view to_string(RateTerm t) noexcept;
std::optional<RateTerm> parse_rate_term(std::string_view name) noexcept;

/// Inputs of one estimator call. Constellations are already power-scaled;
/// `source` plays the role of Xs, Xs1 or Xs2 depending on the term and
/// `relay` is only read by R1 and R7.
struct MiContext {
    Constellation source;
    std::optional<Constellation> relay;
    FadingDraw fading;
    std::size_t noise_samples = 500;
    RandomStream stream{0};
};

struct MiEstimate {
    double bits = 0.0;
    /// Standard error of the inner (noise) Monte-Carlo average.
    double std_error = 0.0;
};

/// Mutual information between a uniform index k and Y = u_k + Z, where u_k
/// is the k-th row of `signals` (row-major, `dims` complex components per
/// row) and Z has i.i.d. unit-variance complex Gaussian entries.
///
/// Estimated as log M - (1/M) sum_k1 E_Z[ log sum_k exp(-|Z + u_k1 - u_k|^2 + |Z|^2) ]
/// with `noise_samples` draws per k1, each from stream.substream(k1), and
/// a max-shifted log-sum-exp. Returns exactly zero if all rows coincide.
MiEstimate signal_set_mi(std::span<const cdouble> signals, std::size_t dims,
                         std::size_t noise_samples, const RandomStream& stream);

MiEstimate r1(const MiContext& ctx);
MiEstimate r2(const MiContext& ctx);
MiEstimate r3(const MiContext& ctx);
MiEstimate r4(const MiContext& ctx);
MiEstimate r5(const MiContext& ctx);
MiEstimate r6(const MiContext& ctx);
MiEstimate r7(const MiContext& ctx);
MiEstimate r8(const MiContext& ctx);
MiEstimate r9(const MiContext& ctx);

MiEstimate estimate_rate(RateTerm term, const MiContext& ctx);

/// Entropy ceiling log2(M) of the inputs the term measures.
double rate_cap_bits(RateTerm term, const MiContext& ctx);

/// Which fading magnitudes a term reads, in (c_ds, c_rs, c_dr) order.
struct FadingUse {
    bool ds = false;
    bool rs = false;
    bool dr = false;
};
FadingUse fading_use(RateTerm term) noexcept;
bool uses_relay_constellation(RateTerm term) noexcept;

}  // namespace relaycc
