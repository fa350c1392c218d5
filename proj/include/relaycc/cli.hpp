#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "relaycc/verify.hpp"

namespace relaycc::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kNumerical = 3 };

/// Entry point behind the `relaycc` executable. args excludes the program
/// name. Subcommands: bounds, gain, verify, constellations.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Same, with `verify` checking `estimator` instead of the built-in one.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const RateEstimator& estimator);

/// Parses a grid: "a:b:step" (inclusive within half a step), "a,b,c" or a
/// single number.
std::vector<double> parse_grid(const std::string& text);

}  // namespace relaycc::cli
