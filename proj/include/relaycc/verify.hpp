#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "relaycc/mi_estimators.hpp"
#include "relaycc/oracle.hpp"

namespace relaycc {

using RateEstimator = std::function<MiEstimate(RateTerm, const MiContext&)>;

struct VerifyOptions {
    std::vector<RateTerm> terms = {RateTerm::R1, RateTerm::R2, RateTerm::R3,
                                   RateTerm::R4, RateTerm::R5, RateTerm::R6,
                                   RateTerm::R7, RateTerm::R8, RateTerm::R9};
    std::vector<std::string> constellations = {"bpsk", "qam4"};
    std::size_t points = 5;
    std::size_t noise_samples = 20000;
    std::uint64_t seed = 0;
    std::size_t nodes = 48;
    /// Absolute floor of the tolerance, in bits.
    double min_tolerance = 1e-3;
    double se_multiplier = 3.0;
};

struct VerifyCase {
    RateTerm term = RateTerm::R1;
    std::string constellation;
    FadingDraw fading;
    double power = 0.0;
    MiEstimate mc;
    double oracle_bits = 0.0;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyCase> cases;
    bool all_pass = true;
    /// Index of the case with the largest deviation/tolerance ratio.
    std::size_t worst = 0;
};

/// Compares `estimator` against oracle_rate() at randomized fading
/// magnitudes and powers. Each constellation gets `points` draws; the same
/// draws are used for every term.
VerifyReport run_verify_suite(const VerifyOptions& opts,
                              const RateEstimator& estimator = estimate_rate);

}  // namespace relaycc
