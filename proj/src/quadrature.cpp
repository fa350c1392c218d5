#include "relaycc/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "relaycc/errors.hpp"

namespace relaycc {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights are
// mu0 times the squared first components of the normalized eigenvectors.
QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double mu0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NumericalError("Golub-Welsch eigensolver failed");
    const auto n = static_cast<std::size_t>(diag.size());
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        rule.nodes[i] = solver.eigenvalues()(ii);
        const double v0 = solver.eigenvectors()(0, ii);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

}  // namespace

QuadratureRule gauss_hermite(std::size_t n) {
    if (n == 0) throw InvalidArgument("quadrature order must be positive");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
    for (std::size_t k = 1; k < n; ++k) sub(static_cast<Eigen::Index>(k - 1)) = std::sqrt(double(k) / 2.0);
    return golub_welsch(diag, sub, std::sqrt(std::numbers::pi));
}

QuadratureRule gauss_laguerre(std::size_t n) {
    if (n == 0) throw InvalidArgument("quadrature order must be positive");
    Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
    for (std::size_t k = 0; k < n; ++k) diag(static_cast<Eigen::Index>(k)) = 2.0 * double(k) + 1.0;
    for (std::size_t k = 1; k < n; ++k) sub(static_cast<Eigen::Index>(k - 1)) = double(k);
    return golub_welsch(diag, sub, 1.0);
}

}  // namespace relaycc
