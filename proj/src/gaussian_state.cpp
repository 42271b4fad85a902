#include "cvqss/gaussian_state.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace cvqss {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

GaussianState::GaussianState(Vec mean, Mat cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  require(mean_.size() > 0 && mean_.size() % 2 == 0, "mean length must be 2*modes");
  require(cov_.rows() == mean_.size() && cov_.cols() == mean_.size(),
          "covariance dimension must match mean");
  require(mean_.allFinite() && cov_.allFinite(), "non-finite moments");
  mode_count_ = static_cast<int>(mean_.size() / 2);
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
  const Vec nu = symplectic_eigenvalues(cov_);
  require(nu.minCoeff() >= 0.5 - 1e-9, "covariance violates the uncertainty relation");
}

GaussianState vacuum(int modes) {
  require(modes >= 1, "vacuum: need at least one mode");
  return GaussianState(Vec::Zero(2 * modes), 0.5 * Mat::Identity(2 * modes, 2 * modes));
}

GaussianState coherent(Complex alpha) {
  Vec mean(2);
  mean << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
  return GaussianState(mean, 0.5 * Mat::Identity(2, 2));
}

GaussianState thermal(double nbar) {
  require(nbar >= 0.0, "thermal: nbar must be non-negative");
  return GaussianState(Vec::Zero(2), (nbar + 0.5) * Mat::Identity(2, 2));
}

double eta_to_nbar(double eta) {
  require(eta >= 0.0 && eta < 1.0, "eta_to_nbar: eta must lie in [0, 1)");
  return eta * eta / (1.0 - eta * eta);
}

GaussianState two_mode_squeezed(double r) {
  require(r >= 0.0, "two_mode_squeezed: r must be non-negative");
  const double c = 0.5 * std::cosh(2.0 * r);
  const double s = 0.5 * std::sinh(2.0 * r);
  Mat cov = Mat::Zero(4, 4);
  cov(0, 0) = cov(1, 1) = cov(2, 2) = cov(3, 3) = c;
  cov(0, 1) = cov(1, 0) = s;   // x-x correlated
  cov(2, 3) = cov(3, 2) = -s;  // p-p anti-correlated
  return GaussianState(Vec::Zero(4), cov);
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int ma = a.mode_count(), mb = b.mode_count(), m = ma + mb;
  Vec mean = Vec::Zero(2 * m);
  Mat cov = Mat::Zero(2 * m, 2 * m);
  // x block then p block, a's modes first.
  mean.segment(0, ma) = a.mean().segment(0, ma);
  mean.segment(ma, mb) = b.mean().segment(0, mb);
  mean.segment(m, ma) = a.mean().segment(ma, ma);
  mean.segment(m + ma, mb) = b.mean().segment(mb, mb);
  auto scatter = [&](const GaussianState& s, int offset) {
    const int ms = s.mode_count();
    const int idx[2] = {offset, m + offset};
    for (int bi = 0; bi < 2; ++bi)
      for (int bj = 0; bj < 2; ++bj)
        cov.block(idx[bi], idx[bj], ms, ms) =
            s.cov().block(bi * ms, bj * ms, ms, ms);
  };
  scatter(a, 0);
  scatter(b, ma);
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState partial_trace(const GaussianState& state, std::span<const int> keep) {
  require(!keep.empty(), "partial_trace: keep set must be non-empty");
  const int m = state.mode_count();
  const int k = static_cast<int>(keep.size());
  for (int mode : keep) require(mode >= 0 && mode < m, "partial_trace: mode out of range");
  Eigen::VectorXi idx(2 * k);
  for (int i = 0; i < k; ++i) {
    idx(i) = keep[i];
    idx(k + i) = keep[i] + m;
  }
  Vec mean(2 * k);
  Mat cov(2 * k, 2 * k);
  for (int i = 0; i < 2 * k; ++i) {
    mean(i) = state.mean()(idx(i));
    for (int j = 0; j < 2 * k; ++j) cov(i, j) = state.cov()(idx(i), idx(j));
  }
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState displaced(const GaussianState& state, Complex alpha, int mode) {
  require(mode >= 0 && mode < state.mode_count(), "displaced: mode out of range");
  Vec mean = state.mean();
  mean(mode) += std::sqrt(2.0) * alpha.real();
  mean(mode + state.mode_count()) += std::sqrt(2.0) * alpha.imag();
  return GaussianState(std::move(mean), state.cov());
}

double fidelity_coherent(const GaussianState& rho, Complex alpha) {
  require(rho.mode_count() == 1, "fidelity_coherent: state must be single-mode");
  const Mat a = rho.cov() + 0.5 * Mat::Identity(2, 2);
  Eigen::LLT<Mat> llt(a);
  require(llt.info() == Eigen::Success, "fidelity_coherent: invalid state");
  Vec delta = rho.mean() - coherent(alpha).mean();
  const double quad = delta.dot(llt.solve(delta));
  return std::exp(-0.5 * quad) / std::sqrt(a.determinant());
}

double fidelity_gaussian(const GaussianState& a, const GaussianState& b) {
  require(a.mode_count() == b.mode_count(),
          "fidelity_gaussian: mode counts must match");
  const Mat vsum = a.cov() + b.cov();
  const Vec delta = a.mean() - b.mean();
  const double expo = std::exp(-0.5 * delta.dot(vsum.ldlt().solve(delta)));

  const double cov_gap = (a.cov() - b.cov()).cwiseAbs().maxCoeff();
  if (cov_gap < 1e-10) return expo;  // displaced copies of one state

  if (a.mode_count() == 1) {
    // Single-mode closed form, stated in units where the vacuum covariance
    // is the identity (sigma = 2 V).
    const double det_sum = (2.0 * vsum).determinant();
    const double lam = (4.0 * a.cov().determinant() - 1.0) *
                       (4.0 * b.cov().determinant() - 1.0);
    return 2.0 / (std::sqrt(det_sum + lam) - std::sqrt(std::max(lam, 0.0))) * expo;
  }

  if (is_pure(a) || is_pure(b)) {
    // <psi| rho |psi> = det(V_a + V_b)^{-1/2} exp(...)
    return expo / std::sqrt(vsum.determinant());
  }

  throw std::invalid_argument(
      "fidelity_gaussian: multi-mode mixed states with unequal covariances "
      "are not supported");
}

Vec symplectic_eigenvalues(const Mat& cov) {
  const int n = static_cast<int>(cov.rows());
  require(n > 0 && n % 2 == 0 && cov.cols() == n, "covariance must be 2m x 2m");
  const int m = n / 2;
  Mat omega = Mat::Zero(n, n);
  omega.block(0, m, m, m) = Mat::Identity(m, m);
  omega.block(m, 0, m, m) = -Mat::Identity(m, m);
  Eigen::EigenSolver<Mat> es(omega * cov, /*computeEigenvectors=*/false);
  Vec mags = es.eigenvalues().cwiseAbs();
  std::sort(mags.data(), mags.data() + n);
  Vec nu(m);
  for (int i = 0; i < m; ++i) nu(m - 1 - i) = 0.5 * (mags(2 * i) + mags(2 * i + 1));
  return nu;
}

bool is_pure(const GaussianState& state, double tol) {
  return symplectic_eigenvalues(state.cov()).maxCoeff() <= 0.5 + tol;
}

}  // namespace cvqss
