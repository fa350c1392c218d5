#include "relaycc/constellation.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "relaycc/errors.hpp"

namespace relaycc {

namespace {

// Rounds away the last-ulp residue that trig leaves on axis points.
double snap(double x) { return std::abs(x) < 1e-15 ? 0.0 : x; }

void validate_points(const std::vector<cdouble>& points, const std::string& label) {
    if (points.size() < 2) {
        throw InvalidArgument("constellation '" + label + "' needs at least 2 points, got " +
                              std::to_string(points.size()));
    }
    double energy = 0.0;
    for (const auto& p : points) {
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
            throw InvalidArgument("constellation '" + label + "' has a non-finite point");
        }
        energy += std::norm(p);
    }
    const double scale = std::sqrt(energy / static_cast<double>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (std::abs(points[i] - points[j]) <= 1e-12 * scale) {
                throw InvalidArgument("constellation '" + label + "' has coincident points " +
                                      std::to_string(i) + " and " + std::to_string(j));
            }
        }
    }
}

}  // namespace

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::QAM: return "qam";
        case Family::PSK: return "psk";
        case Family::PAM: return "pam";
    }
    return "?";
}

Constellation Constellation::from_points(std::vector<cdouble> points, std::string label,
                                         bool normalize) {
    validate_points(points, label);
    if (normalize) {
        double energy = 0.0;
        for (const auto& p : points) energy += std::norm(p);
        const double g = 1.0 / std::sqrt(energy / static_cast<double>(points.size()));
        for (auto& p : points) p *= g;
    }
    return Constellation(std::move(points), std::move(label));
}

double Constellation::mean_energy() const noexcept {
    double s = 0.0;
    for (const auto& p : points_) s += std::norm(p);
    return s / static_cast<double>(points_.size());
}

bool Constellation::is_degenerate() const noexcept {
    for (const auto& p : points_) {
        if (p != points_.front()) return false;
    }
    return true;
}

Constellation make_standard(Family family, std::size_t size) {
    auto unsupported = [&] {
        return InvalidArgument("unsupported " + std::string(to_string(family)) + " size " +
                               std::to_string(size));
    };
    std::vector<cdouble> pts;
    std::string label = std::string(to_string(family)) + std::to_string(size);
    switch (family) {
        case Family::QAM: {
            if (size == 2) return make_standard(Family::PSK, 2);
            const auto side = static_cast<std::size_t>(std::llround(std::sqrt(double(size))));
            if (size < 4 || side * side != size || side % 2 != 0) throw unsupported();
            const double half = static_cast<double>(side - 1);
            for (std::size_t row = 0; row < side; ++row) {
                for (std::size_t col = 0; col < side; ++col) {
                    pts.emplace_back(2.0 * double(col) - half, half - 2.0 * double(row));
                }
            }
            break;
        }
        case Family::PSK: {
            if (size < 2) throw unsupported();
            for (std::size_t k = 0; k < size; ++k) {
                const double phi = 2.0 * std::numbers::pi * double(k) / double(size);
                pts.emplace_back(snap(std::cos(phi)), snap(std::sin(phi)));
            }
            break;
        }
        case Family::PAM: {
            if (size < 2) throw unsupported();
            for (std::size_t k = 0; k < size; ++k) {
                pts.emplace_back(2.0 * double(k) - double(size - 1), 0.0);
            }
            break;
        }
    }
    return Constellation::from_points(std::move(pts), std::move(label), true);
}

Constellation scale(const Constellation& c, double power) {
    if (!(power >= 0.0) || !std::isfinite(power)) {
        throw InvalidArgument("constellation power must be finite and nonnegative, got " +
                              std::to_string(power));
    }
    const double g = std::sqrt(power);
    std::vector<cdouble> pts(c.points().begin(), c.points().end());
    for (auto& p : pts) p *= g;
    return Constellation(std::move(pts), c.label());
}

Constellation parse_standard(std::string_view name) {
    std::string lower(name);
    for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (lower == "bpsk") return make_standard(Family::PSK, 2);
    if (lower == "qpsk") return make_standard(Family::QAM, 4);
    struct Prefix {
        std::string_view text;
        Family family;
    };
    for (const auto& [text, family] : {Prefix{"qam", Family::QAM}, Prefix{"psk", Family::PSK},
                                       Prefix{"pam", Family::PAM}}) {
        if (lower.starts_with(text) && lower.size() > text.size()) {
            const std::string digits = lower.substr(text.size());
            if (digits.find_first_not_of("0123456789") != std::string::npos) break;
            return make_standard(family, std::stoul(digits));
        }
    }
    throw InvalidArgument("unknown constellation '" + std::string(name) +
                          "' (expected e.g. qam4, psk8, pam4, bpsk)");
}

Constellation constellation_from_json_text(std::string_view text, std::string label,
                                           bool normalize) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("constellation file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_array()) throw InvalidArgument("constellation file must be a JSON array");
    std::vector<cdouble> pts;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
            throw InvalidArgument("constellation entries must be [re, im] number pairs");
        }
        pts.emplace_back(item[0].get<double>(), item[1].get<double>());
    }
    return Constellation::from_points(std::move(pts), std::move(label), normalize);
}

Constellation load_constellation(const std::filesystem::path& path, bool normalize) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open constellation file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return constellation_from_json_text(ss.str(), path.stem().string(), normalize);
}

std::string constellation_to_json_text(const Constellation& c) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : c.points()) j.push_back({p.real(), p.imag()});
    return j.dump();
}

}  // namespace relaycc
