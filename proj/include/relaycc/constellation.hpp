#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relaycc {

using cdouble = std::complex<double>;

enum class Family { QAM, PSK, PAM };

std::string_view to_string(Family f) noexcept;

/// Finite complex input alphabet used with uniform probabilities.
///
/// Constellations built through make_standard() or from_points() are
/// validated (at least two distinct points) and, unless asked otherwise,
/// normalized to unit mean energy. scale() is the only way to change the
/// energy afterwards; a zero-power scale collapses every point onto the
/// origin, which is allowed.
class Constellation {
public:
    static Constellation from_points(std::vector<cdouble> points, std::string label,
                                     bool normalize = true);

    std::span<const cdouble> points() const noexcept { return points_; }
    const cdouble& operator[](std::size_t i) const { return points_[i]; }
    std::size_t size() const noexcept { return points_.size(); }
    const std::string& label() const noexcept { return label_; }

    double mean_energy() const noexcept;
    /// True when every point coincides (e.g. after scaling by zero power).
    bool is_degenerate() const noexcept;

    friend bool operator==(const Constellation&, const Constellation&) = default;

private:
    Constellation(std::vector<cdouble> points, std::string label)
        : points_(std::move(points)), label_(std::move(label)) {}

    friend Constellation scale(const Constellation& c, double power);

    std::vector<cdouble> points_;
    std::string label_;
};

/// Standard unit-energy constellations.
///
/// Orderings: QAM is row-major from the top-left corner (imaginary part
/// descending, real part ascending within a row); PSK runs counterclockwise
/// from angle 0; PAM is ascending. QAM of size 2 is an alias for BPSK.
Constellation make_standard(Family family, std::size_t size);

/// Multiplies every point by sqrt(power), so the mean energy becomes power.
Constellation scale(const Constellation& c, double power);

/// Parses names such as "qam4", "psk8", "pam4" or "bpsk".
Constellation parse_standard(std::string_view name);

/// Loads a JSON array of [re, im] pairs.
Constellation load_constellation(const std::filesystem::path& path, bool normalize = true);
Constellation constellation_from_json_text(std::string_view text, std::string label,
                                           bool normalize = true);
std::string constellation_to_json_text(const Constellation& c);

}  // namespace relaycc
