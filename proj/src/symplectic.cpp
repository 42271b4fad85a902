#include "cvqss/symplectic.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace cvqss {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

// Quadrature map of the Bogoliubov transformation a' = E a + F conj(a):
// x' = Re(E + F) x - Im(E - F) p,  p' = Im(E + F) x + Re(E - F) p.
Mat from_bogoliubov(const Eigen::MatrixXcd& e, const Eigen::MatrixXcd& f) {
  const int m = static_cast<int>(e.rows());
  Mat s(2 * m, 2 * m);
  s.block(0, 0, m, m) = (e + f).real();
  s.block(0, m, m, m) = -(e - f).imag();
  s.block(m, 0, m, m) = (e + f).imag();
  s.block(m, m, m, m) = (e - f).real();
  return s;
}

}  // namespace

Mat symplectic_form(int modes) {
  Mat omega = Mat::Zero(2 * modes, 2 * modes);
  omega.block(0, modes, modes, modes) = Mat::Identity(modes, modes);
  omega.block(modes, 0, modes, modes) = -Mat::Identity(modes, modes);
  return omega;
}

SymplecticTransform::SymplecticTransform(Mat matrix) : matrix_(std::move(matrix)) {
  const int n = static_cast<int>(matrix_.rows());
  require(n > 0 && n % 2 == 0 && matrix_.cols() == n, "symplectic matrix must be 2m x 2m");
  require(matrix_.allFinite(), "symplectic matrix must be finite");
  mode_count_ = n / 2;
  const Mat omega = symplectic_form(mode_count_);
  const double defect = (matrix_ * omega * matrix_.transpose() - omega).norm();
  require(defect < 1e-10, "matrix does not preserve the symplectic form");
}

SymplecticTransform SymplecticTransform::inverse() const {
  const Mat omega = symplectic_form(mode_count_);
  // S^{-1} = Omega^T S^T Omega
  return SymplecticTransform(omega.transpose() * matrix_.transpose() * omega);
}

SymplecticTransform operator*(const SymplecticTransform& lhs,
                              const SymplecticTransform& rhs) {
  require(lhs.mode_count() == rhs.mode_count(), "mode count mismatch in composition");
  return SymplecticTransform(lhs.matrix() * rhs.matrix());
}

SymplecticTransform symplectic_identity(int modes) {
  require(modes >= 1, "need at least one mode");
  return SymplecticTransform(Mat::Identity(2 * modes, 2 * modes));
}

SymplecticTransform symplectic_from_position_map(const Mat& t) {
  const int k = static_cast<int>(t.rows());
  require(k >= 1 && t.cols() == k, "position map must be square");
  Eigen::JacobiSVD<Mat> svd(t);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  require(std::abs(t.determinant()) > 1e-12 && smin > 0.0,
          "position map is singular");
  require(smax / smin <= 1e10, "position map is ill-conditioned");
  Mat s = Mat::Zero(2 * k, 2 * k);
  s.block(0, 0, k, k) = t;
  s.block(k, k, k, k) = t.transpose().inverse();
  return SymplecticTransform(std::move(s));
}

SymplecticTransform beamsplitter(double theta, double phi) {
  Eigen::MatrixXcd w(2, 2);
  const Complex iphi(0.0, phi);
  w << std::cos(theta), -std::exp(iphi) * std::sin(theta),
      std::exp(-iphi) * std::sin(theta), std::cos(theta);
  return SymplecticTransform(from_bogoliubov(w, Eigen::MatrixXcd::Zero(2, 2)));
}

SymplecticTransform phase_shifter(double phi) {
  Eigen::MatrixXcd w(1, 1);
  w << std::exp(Complex(0.0, phi));
  return SymplecticTransform(from_bogoliubov(w, Eigen::MatrixXcd::Zero(1, 1)));
}

SymplecticTransform single_mode_squeezer(double r, double phi) {
  Eigen::MatrixXcd e(1, 1), f(1, 1);
  e << std::cosh(r);
  f << std::exp(Complex(0.0, phi)) * std::sinh(r);
  return SymplecticTransform(from_bogoliubov(e, f));
}

SymplecticTransform two_mode_squeezer(double r, double phi) {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Identity(2, 2) * std::cosh(r);
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(2, 2);
  f(0, 1) = f(1, 0) = -std::exp(Complex(0.0, phi)) * std::sinh(r);
  return SymplecticTransform(from_bogoliubov(e, f));
}

SymplecticTransform embed(const SymplecticTransform& s, int total_modes,
                          std::span<const int> modes) {
  const int k = static_cast<int>(modes.size());
  require(k == s.mode_count(), "embed: mode list does not match transform size");
  require(total_modes >= k, "embed: too few target modes");
  std::unordered_set<int> seen;
  for (int mode : modes) {
    require(mode >= 0 && mode < total_modes, "embed: mode index out of range");
    require(seen.insert(mode).second, "embed: repeated mode index");
  }
  Eigen::VectorXi idx(2 * k);
  for (int i = 0; i < k; ++i) {
    idx(i) = modes[i];
    idx(k + i) = modes[i] + total_modes;
  }
  Mat full = Mat::Identity(2 * total_modes, 2 * total_modes);
  for (int i = 0; i < 2 * k; ++i) {
    full.row(idx(i)).setZero();
    for (int j = 0; j < 2 * k; ++j) full(idx(i), idx(j)) = s.matrix()(i, j);
  }
  return SymplecticTransform(std::move(full));
}

GaussianState apply(const SymplecticTransform& s, const GaussianState& state,
                    std::span<const int> modes) {
  const SymplecticTransform full = embed(s, state.mode_count(), modes);
  return GaussianState(full.matrix() * state.mean(),
                       full.matrix() * state.cov() * full.matrix().transpose());
}

GaussianState apply(const SymplecticTransform& s, const GaussianState& state) {
  require(s.mode_count() == state.mode_count(), "apply: mode count mismatch");
  return GaussianState(s.matrix() * state.mean(),
                       s.matrix() * state.cov() * s.matrix().transpose());
}

bool is_passive(const SymplecticTransform& s, double tol) {
  const int n = 2 * s.mode_count();
  return (s.matrix() * s.matrix().transpose() - Mat::Identity(n, n)).norm() < tol;
}

}  // namespace cvqss
