#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace relaycc {

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an estimator or expectation produces a non-finite value.
/// Carries the fading index at which it happened, when known.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what,
                            std::optional<std::size_t> fading_index = std::nullopt)
        : std::runtime_error(what), fading_index_(fading_index) {}

    std::optional<std::size_t> fading_index() const noexcept { return fading_index_; }

private:
    std::optional<std::size_t> fading_index_;
};

}  // namespace relaycc
