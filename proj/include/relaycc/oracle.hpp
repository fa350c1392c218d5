#pragma once

#include <cstddef>
#include <functional>

#include "relaycc/mi_estimators.hpp"

namespace relaycc {

struct QuadratureConfig {
    std::size_t nodes_per_dimension = 32;
    /// Upper limit on quadrature nodes times constellation index tuples.
    double evaluation_budget = 2.0e9;
};

/// Deterministic value of a rate term at fixed fading: tensor Gauss-Hermite
/// over the real and imaginary parts of every noise sample, exact sums over
/// the constellation indices. Ignores ctx.noise_samples and ctx.stream.
/// Throws InvalidArgument if a constellation has more than 8 points, the
/// node count is below 16 or the budget would be exceeded.
double oracle_rate(RateTerm term, const MiContext& ctx, const QuadratureConfig& qcfg = {});

/// E[f(c)] with c Rayleigh, E[c^2] = variance, by Gauss-Laguerre on c^2.
double oracle_rayleigh_expectation(const std::function<double(double)>& f, double variance,
                                   const QuadratureConfig& qcfg = {});

/// Binary antipodal input +-sqrt(snr) on a real Gaussian channel with noise
/// variance 1/2, written through the log-likelihood ratio. Used to cross
/// check the complex-noise oracle for BPSK.
double oracle_binary_input_mi(double snr, std::size_t nodes = 64);

}  // namespace relaycc
