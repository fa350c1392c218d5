#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "relaycc/random.hpp"

namespace relaycc {

double db_to_linear(double x_db) noexcept;
double linear_to_db(double x) noexcept;

/// Scenario: link variances in dB, power P in dB, HD duty cycle.
///
/// The variances are those of the complex fading coefficients; the phases
/// are assumed cancelled, so only the magnitudes are ever sampled.
struct ChannelParams {
    double sigma_ds_db = 0.0;
    double sigma_rs_db = 0.0;
    double sigma_dr_db = 0.0;
    double p_db = 0.0;
    double alpha = 0.5;

    double var_ds() const noexcept { return db_to_linear(sigma_ds_db); }
    double var_rs() const noexcept { return db_to_linear(sigma_rs_db); }
    double var_dr() const noexcept { return db_to_linear(sigma_dr_db); }
    double power() const noexcept { return db_to_linear(p_db); }

    /// Throws InvalidArgument on NaN or +inf link variances, NaN power, or
    /// (when require_alpha) alpha outside (0, 1).
    void validate(bool require_alpha) const;
};

/// One realization of the fading magnitudes.
struct FadingDraw {
    double c_ds = 0.0;
    double c_rs = 0.0;
    double c_dr = 0.0;
};

/// Magnitude of a zero-mean complex Gaussian of total variance `variance`.
double sample_rayleigh(double variance, RandomStream& rng);

FadingDraw sample_fading(const ChannelParams& params, RandomStream& rng);

/// Circularly-symmetric complex Gaussian noise, variance 1/2 per dimension.
std::vector<std::complex<double>> sample_noise(std::size_t count, RandomStream& rng);

/// Scenario file: {"sigma_ds_db", "sigma_rs_db", "sigma_dr_db", "alpha"}.
/// Missing keys keep the values already in `base`.
ChannelParams load_scenario(const std::filesystem::path& path, ChannelParams base = {});
ChannelParams scenario_from_json_text(std::string_view text, ChannelParams base = {});

}  // namespace relaycc
