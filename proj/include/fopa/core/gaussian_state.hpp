#pragma once

#include <Eigen/Core>

namespace fopa {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Quadrature ordering (x_s, p_s, x_i, p_i) with x = a + a^dag, p = i(a^dag - a).
// Vacuum covariance is the identity; mean photon number is (|d|^2 + tr V_j)/4 - 1/2.

/// Two-mode Gaussian state (signal, idler). Means and variances are in photons per pulse.
class GaussianTwoModeState {
 public:
  GaussianTwoModeState();  // vacuum
  GaussianTwoModeState(const Vec4& mean, const Mat4& cov);

  const Vec4& mean() const { return mean_; }
  const Mat4& cov() const { return cov_; }

  /// Smallest eigenvalue of cov + i*Omega, scaled by max(1, ||cov||).
  double physicality_margin() const;
  bool is_physical(double tol = 1e-9) const;

  static GaussianTwoModeState vacuum() { return {}; }
  static GaussianTwoModeState coherent(double alpha_s, double alpha_i = 0.0);

 private:
  Vec4 mean_;
  Mat4 cov_;
};

/// Linear bosonic channel: mean -> T mean, cov -> T cov T^T + N.
struct GaussianChannel {
  Mat4 transfer = Mat4::Identity();
  Mat4 noise = Mat4::Zero();

  GaussianTwoModeState apply(const GaussianTwoModeState& s) const;
  GaussianChannel then(const GaussianChannel& next) const;
};

Mat4 symplectic_form();

struct PhotonStatistics {
  double mean_s = 0.0;
  double mean_i = 0.0;
  double var_s = 0.0;
  double var_i = 0.0;
  double cov_si = 0.0;

  double difference_variance() const { return var_s + var_i - 2.0 * cov_si; }
};

/// Exact photon-number moments of a Gaussian state (Isserlis factorisation of the fourth-order
/// quadrature moments). Throws DomainError for an unphysical covariance.
PhotonStatistics photon_statistics(const GaussianTwoModeState& s);

}  // namespace fopa
