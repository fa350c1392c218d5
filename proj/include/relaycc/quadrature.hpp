#pragma once

#include <cstddef>
#include <vector>

namespace relaycc {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule for integral of f(x) exp(-x^2) over the real line
/// (Golub-Welsch on the Hermite Jacobi matrix).
QuadratureRule gauss_hermite(std::size_t n);

/// n-point rule for integral of f(t) exp(-t) over [0, inf).
QuadratureRule gauss_laguerre(std::size_t n);

}  // namespace relaycc
