#include "fopa/numerics/gauss_hermite.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "fopa/core/error.hpp"

namespace fopa::numerics {

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("Gauss-Hermite order must be positive");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace fopa::numerics
