#pragma once

#include <vector>

namespace fopa::numerics {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Physicists' Gauss-Hermite rule: integral of exp(-x^2) f(x) ~ sum w_k f(x_k). Golub-Welsch.
QuadratureRule gauss_hermite(int n);

}  // namespace fopa::numerics
