#include "fopa/core/gaussian_state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "fopa/core/error.hpp"

namespace fopa {

GaussianTwoModeState::GaussianTwoModeState() : mean_(Vec4::Zero()), cov_(Mat4::Identity()) {}

GaussianTwoModeState::GaussianTwoModeState(const Vec4& mean, const Mat4& cov) : mean_(mean), cov_(cov) {
  if (!mean_.allFinite() || !cov_.allFinite()) throw DomainError("non-finite Gaussian state");
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("covariance matrix is not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose());
}

GaussianTwoModeState GaussianTwoModeState::coherent(double alpha_s, double alpha_i) {
  return {Vec4(2.0 * alpha_s, 0.0, 2.0 * alpha_i, 0.0), Mat4::Identity()};
}

Mat4 symplectic_form() {
  Mat4 omega = Mat4::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

double GaussianTwoModeState::physicality_margin() const {
  const Eigen::Matrix4cd h = cov_.cast<std::complex<double>>() +
                             std::complex<double>(0.0, 1.0) * symplectic_form().cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() / scale;
}

bool GaussianTwoModeState::is_physical(double tol) const { return physicality_margin() >= -tol; }

GaussianTwoModeState GaussianChannel::apply(const GaussianTwoModeState& s) const {
  return {transfer * s.mean(), transfer * s.cov() * transfer.transpose() + noise};
}

GaussianChannel GaussianChannel::then(const GaussianChannel& next) const {
  return {next.transfer * transfer, next.transfer * noise * next.transfer.transpose() + next.noise};
}

PhotonStatistics photon_statistics(const GaussianTwoModeState& s) {
  if (!s.is_physical()) throw DomainError("unphysical covariance: cov + i*Omega is not positive");
  const Vec4& d = s.mean();
  const Mat4& v = s.cov();
  const auto ds = d.segment<2>(0);
  const auto di = d.segment<2>(2);
  const auto vss = v.block<2, 2>(0, 0);
  const auto vii = v.block<2, 2>(2, 2);
  const auto vsi = v.block<2, 2>(0, 2);

  PhotonStatistics st;
  st.mean_s = (ds.squaredNorm() + vss.trace()) / 4.0 - 0.5;
  st.mean_i = (di.squaredNorm() + vii.trace()) / 4.0 - 0.5;
  st.var_s = ((vss * vss).trace() - 2.0) / 8.0 + ds.dot(vss * ds) / 4.0;
  st.var_i = ((vii * vii).trace() - 2.0) / 8.0 + di.dot(vii * di) / 4.0;
  st.cov_si = (vsi * vsi.transpose()).trace() / 8.0 + ds.dot(vsi * di) / 4.0;
  return st;
}

}  // namespace fopa
