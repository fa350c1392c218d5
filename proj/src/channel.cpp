#include "relaycc/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relaycc/errors.hpp"

namespace relaycc {

double db_to_linear(double x_db) noexcept { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) noexcept { return 10.0 * std::log10(x); }

void ChannelParams::validate(bool require_alpha) const {
    auto check_db = [](double v, const char* name) {
        // -inf is the zero-variance (or zero-power) limit and is allowed.
        if (std::isnan(v) || v == INFINITY) {
            throw InvalidArgument(std::string(name) + " must be finite or -inf, got " +
                                  std::to_string(v));
        }
    };
    check_db(sigma_ds_db, "sigma_ds_db");
    check_db(sigma_rs_db, "sigma_rs_db");
    check_db(sigma_dr_db, "sigma_dr_db");
    check_db(p_db, "p_db");
    if (require_alpha && !(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

double sample_rayleigh(double variance, RandomStream& rng) {
    const double s = std::sqrt(variance / 2.0);
    const double re = rng.gaussian(1.0);
    const double im = rng.gaussian(1.0);
    return s * std::hypot(re, im);
}

FadingDraw sample_fading(const ChannelParams& params, RandomStream& rng) {
    FadingDraw d;
    d.c_ds = sample_rayleigh(params.var_ds(), rng);
    d.c_rs = sample_rayleigh(params.var_rs(), rng);
    d.c_dr = sample_rayleigh(params.var_dr(), rng);
    return d;
}

std::vector<std::complex<double>> sample_noise(std::size_t count, RandomStream& rng) {
    const double s = std::sqrt(0.5);
    std::vector<std::complex<double>> z;
    z.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double re = rng.gaussian(s);
        const double im = rng.gaussian(s);
        z.emplace_back(re, im);
    }
    return z;
}

ChannelParams scenario_from_json_text(std::string_view text, ChannelParams base) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("scenario file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw InvalidArgument("scenario file must be a JSON object");
    auto read = [&](const char* key, double& field) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) throw InvalidArgument(std::string("scenario key '") + key + "' must be a number");
        field = j[key].get<double>();
    };
    read("sigma_ds_db", base.sigma_ds_db);
    read("sigma_rs_db", base.sigma_rs_db);
    read("sigma_dr_db", base.sigma_dr_db);
    read("alpha", base.alpha);
    return base;
}

ChannelParams load_scenario(const std::filesystem::path& path, ChannelParams base) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_json_text(ss.str(), base);
}

}  // namespace relaycc
