#include "cvqss/fock.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace cvqss {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

long dim_of(int modes, int cutoff) {
  long d = 1;
  for (int i = 0; i < modes; ++i) d *= cutoff + 1;
  return d;
}

long stride_of(int mode, int cutoff) {
  long s = 1;
  for (int i = 0; i < mode; ++i) s *= cutoff + 1;
  return s;
}

// exp(G) for anti-Hermitian G, via the spectral decomposition of iG.
MatrixXcd expm_antihermitian(const MatrixXcd& g) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Complex(0, 1) * g);
  const VectorXcd phases =
      (Complex(0, -1) * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// U with U^dag a U = cosh(r) a + e^{i phi} sinh(r) a^dag.
MatrixXcd sq_unitary(int cutoff, double r, double phi) {
  const int d = cutoff + 1;
  MatrixXcd g = MatrixXcd::Zero(d, d);
  const Complex up = 0.5 * r * std::exp(Complex(0, phi));
  for (int n = 0; n + 2 < d + 1 && n + 2 <= cutoff; ++n) {
    const double w = std::sqrt(double(n + 1) * double(n + 2));
    g(n + 2, n) += up * w;
    g(n, n + 2) += -std::conj(up) * w;
  }
  return expm_antihermitian(g);
}

MatrixXcd displacement_unitary(int cutoff, Complex beta) {
  const int d = cutoff + 1;
  MatrixXcd g = MatrixXcd::Zero(d, d);
  for (int n = 0; n + 1 <= cutoff; ++n) {
    const double w = std::sqrt(double(n + 1));
    g(n + 1, n) += beta * w;
    g(n, n + 1) += -std::conj(beta) * w;
  }
  return expm_antihermitian(g);
}

// U with U^dag a U = e^{i phi} a.
MatrixXcd phase_unitary(int cutoff, double phi) {
  const int d = cutoff + 1;
  MatrixXcd u = MatrixXcd::Zero(d, d);
  for (int n = 0; n < d; ++n) u(n, n) = std::exp(Complex(0, phi * n));
  return u;
}

// Two-mode unitaries on the flat basis |n_a, n_b> -> n_a * (cutoff+1) + n_b.
// Both generators are block-diagonal in a conserved quantity (total photon
// number for the beamsplitter, photon-number difference for the two-mode
// squeezer); each block is exponentiated exactly.
MatrixXcd bs_unitary(int cutoff, double theta, double phi) {
  const int d = cutoff + 1;
  MatrixXcd u = MatrixXcd::Zero(d * d, d * d);
  const Complex up = -theta * std::exp(Complex(0, phi));
  for (int total = 0; total <= 2 * cutoff; ++total) {
    const int n_min = std::max(0, total - cutoff);
    const int n_max = std::min(cutoff, total);
    const int size = n_max - n_min + 1;
    MatrixXcd g = MatrixXcd::Zero(size, size);
    for (int n = n_min; n < n_max; ++n) {
      // a^dag b : |n, total-n> -> |n+1, total-n-1>
      const double w = std::sqrt(double(n + 1) * double(total - n));
      g(n + 1 - n_min, n - n_min) += up * w;
      g(n - n_min, n + 1 - n_min) += -std::conj(up) * w;
    }
    const MatrixXcd ub = expm_antihermitian(g);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        u((n_min + i) * d + (total - n_min - i), (n_min + j) * d + (total - n_min - j)) =
            ub(i, j);
  }
  return u;
}

MatrixXcd tms_unitary(int cutoff, double r, double phi) {
  const int d = cutoff + 1;
  MatrixXcd u = MatrixXcd::Zero(d * d, d * d);
  const Complex down = r * std::exp(Complex(0, -phi));
  for (int diff = -cutoff; diff <= cutoff; ++diff) {
    const int n_min = std::max(0, diff);
    const int n_max = std::min(cutoff, cutoff + diff);
    const int size = n_max - n_min + 1;
    MatrixXcd g = MatrixXcd::Zero(size, size);
    for (int n = n_min + 1; n <= n_max; ++n) {
      // a b : |n, n-diff> -> |n-1, n-diff-1>
      const double w = std::sqrt(double(n) * double(n - diff));
      g(n - 1 - n_min, n - n_min) += down * w;
      g(n - n_min, n - 1 - n_min) += -std::conj(down) * w;
    }
    const MatrixXcd ub = expm_antihermitian(g);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        u((n_min + i) * d + (n_min + i - diff), (n_min + j) * d + (n_min + j - diff)) =
            ub(i, j);
  }
  return u;
}

// Applies a single-mode operator to one mode of the amplitude tensor.
void apply_one_mode(VectorXcd& amps, const MatrixXcd& op, int mode, int modes,
                    int cutoff) {
  const int d = cutoff + 1;
  const long dim = dim_of(modes, cutoff);
  const long stride = stride_of(mode, cutoff);
  VectorXcd slice(d), out(d);
  for (long base = 0; base < dim; ++base) {
    if ((base / stride) % d != 0) continue;
    for (int n = 0; n < d; ++n) slice(n) = amps(base + n * stride);
    out.noalias() = op * slice;
    for (int n = 0; n < d; ++n) amps(base + n * stride) = out(n);
  }
}

void apply_two_mode(VectorXcd& amps, const MatrixXcd& op, int mode_a, int mode_b,
                    int modes, int cutoff) {
  const int d = cutoff + 1;
  const long dim = dim_of(modes, cutoff);
  const long sa = stride_of(mode_a, cutoff), sb = stride_of(mode_b, cutoff);
  VectorXcd slice(d * d), out(d * d);
  for (long base = 0; base < dim; ++base) {
    if ((base / sa) % d != 0 || (base / sb) % d != 0) continue;
    for (int na = 0; na < d; ++na)
      for (int nb = 0; nb < d; ++nb)
        slice(na * d + nb) = amps(base + na * sa + nb * sb);
    out.noalias() = op * slice;
    for (int na = 0; na < d; ++na)
      for (int nb = 0; nb < d; ++nb)
        amps(base + na * sa + nb * sb) = out(na * d + nb);
  }
}

// Probability mass on the truncation boundary of the listed modes.
double boundary_mass(const VectorXcd& amps, std::span<const int> modes, int mode_count,
                     int cutoff) {
  const int d = cutoff + 1;
  const long dim = dim_of(mode_count, cutoff);
  double mass = 0.0;
  for (long i = 0; i < dim; ++i) {
    for (int mode : modes) {
      if ((i / stride_of(mode, cutoff)) % d == cutoff) {
        mass += std::norm(amps(i));
        break;
      }
    }
  }
  return mass;
}

void check_leakage(double leakage) {
  if (leakage > 1e-6)
    throw std::domain_error("fock state exceeded the truncation-leakage budget");
}

VectorXcd annihilate(const FockVector& state, int mode) {
  const int d = state.cutoff + 1;
  const long dim = state.amps.size();
  const long stride = stride_of(mode, state.cutoff);
  VectorXcd out = VectorXcd::Zero(dim);
  for (long i = 0; i < dim; ++i) {
    const int n = static_cast<int>((i / stride) % d);
    if (n > 0) out(i - stride) += std::sqrt(double(n)) * state.amps(i);
  }
  return out;
}

std::pair<Vec, Mat> moments_from_ladders(
    int m, const std::vector<VectorXcd>& a_psi, const VectorXcd& psi,
    const std::function<VectorXcd(const VectorXcd&, int)>& annihilate_vec) {
  Eigen::VectorXcd first(m);
  MatrixXcd g(m, m), s2(m, m);
  for (int i = 0; i < m; ++i) first(i) = psi.dot(a_psi[i]);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      g(i, j) = a_psi[i].dot(a_psi[j]);                 // <a_i^dag a_j>
      s2(i, j) = psi.dot(annihilate_vec(a_psi[j], i));  // <a_i a_j>
    }
  Vec mean(2 * m);
  Mat cov(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    mean(i) = std::sqrt(2.0) * first(i).real();
    mean(m + i) = std::sqrt(2.0) * first(i).imag();
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double delta = i == j ? 0.5 : 0.0;
      cov(i, j) = s2(i, j).real() + g(i, j).real() + delta - mean(i) * mean(j);
      cov(m + i, m + j) =
          -s2(i, j).real() + g(i, j).real() + delta - mean(m + i) * mean(m + j);
      cov(i, m + j) = s2(i, j).imag() + g(i, j).imag() - mean(i) * mean(m + j);
      cov(m + j, i) = cov(i, m + j);
    }
  return {std::move(mean), (cov + cov.transpose()).eval() / 2.0};
}

}  // namespace

FockVector vacuum_fock(int modes, int cutoff) {
  require(modes >= 1 && cutoff >= 1, "vacuum_fock: bad dimensions");
  FockVector v{modes, cutoff, VectorXcd::Zero(dim_of(modes, cutoff)), 0.0};
  v.amps(0) = 1.0;
  return v;
}

FockVector coherent_fock(Complex alpha, int cutoff) {
  require(cutoff >= 1, "coherent_fock: cutoff must be >= 1");
  if (std::norm(alpha) > cutoff / 2.0)
    throw std::domain_error("coherent_fock: amplitude too large for this truncation");
  FockVector v{1, cutoff, VectorXcd::Zero(cutoff + 1), 0.0};
  Complex term = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n <= cutoff; ++n) {
    v.amps(n) = term;
    term *= alpha / std::sqrt(double(n + 1));
  }
  v.leakage = std::max(0.0, 1.0 - v.amps.squaredNorm());
  return v;
}

FockVector two_mode_squeezed_fock(double r, int cutoff) {
  require(r >= 0.0, "two_mode_squeezed_fock: r must be non-negative");
  require(cutoff >= 1, "two_mode_squeezed_fock: cutoff must be >= 1");
  const double eta = std::tanh(r);
  if (std::pow(eta, 2.0 * cutoff) >= 1e-12)
    throw std::domain_error("two_mode_squeezed_fock: squeezing too large for cutoff");
  const int d = cutoff + 1;
  FockVector v{2, cutoff, VectorXcd::Zero(long(d) * d), 0.0};
  const double base = std::sqrt(1.0 - eta * eta);
  for (int n = 0; n <= cutoff; ++n) v.amps(n + long(n) * d) = base * std::pow(eta, n);
  v.leakage = std::max(0.0, 1.0 - v.amps.squaredNorm());
  return v;
}

FockVector tensor_fock(const FockVector& a, const FockVector& b) {
  require(a.cutoff == b.cutoff, "tensor_fock: cutoffs must match");
  FockVector v{a.mode_count + b.mode_count, a.cutoff,
               VectorXcd::Zero(a.amps.size() * b.amps.size()),
               a.leakage + b.leakage};
  for (long ib = 0; ib < b.amps.size(); ++ib)
    for (long ia = 0; ia < a.amps.size(); ++ia)
      v.amps(ia + ib * a.amps.size()) = a.amps(ia) * b.amps(ib);
  return v;
}

FockVector apply_element_fock(const FockVector& state, const CircuitElement& element) {
  FockVector out = state;
  const int cutoff = state.cutoff;
  std::vector<int> touched;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          apply_two_mode(out.amps, bs_unitary(cutoff, e.theta, e.phi), e.mode_a,
                         e.mode_b, state.mode_count, cutoff);
          touched = {e.mode_a, e.mode_b};
        } else if constexpr (std::is_same_v<T, PhaseShifter>) {
          apply_one_mode(out.amps, phase_unitary(cutoff, e.phi), e.mode, state.mode_count,
                         cutoff);
        } else if constexpr (std::is_same_v<T, SingleModeSqueezer>) {
          apply_one_mode(out.amps, sq_unitary(cutoff, e.r, e.phi), e.mode,
                         state.mode_count, cutoff);
          touched = {e.mode};
        } else {
          apply_two_mode(out.amps, tms_unitary(cutoff, e.r, e.phi), e.mode_a, e.mode_b,
                         state.mode_count, cutoff);
          touched = {e.mode_a, e.mode_b};
        }
      },
      element);
  if (!touched.empty())
    out.leakage += boundary_mass(out.amps, touched, state.mode_count, cutoff);
  check_leakage(out.leakage);
  return out;
}

FockDensity apply_element_fock(const FockDensity& state, const CircuitElement& element) {
  require(state.mode_count <= 2, "density evolution supports at most two modes");
  // Reuse the vector machinery column by column: rho -> U rho U^dag.
  FockDensity out = state;
  auto evolve_columns = [&](MatrixXcd& rho) {
    for (long col = 0; col < rho.cols(); ++col) {
      FockVector column{state.mode_count, state.cutoff, rho.col(col), 0.0};
      rho.col(col) = apply_element_fock(column, element).amps;
    }
  };
  evolve_columns(out.rho);
  out.rho.adjointInPlace();
  evolve_columns(out.rho);
  out.rho.adjointInPlace();
  out.rho = ((out.rho + out.rho.adjoint()) / 2.0).eval();
  return out;
}

FockDensity density_from_vector(const FockVector& state) {
  return {state.mode_count, state.cutoff, state.amps * state.amps.adjoint(),
          state.leakage};
}

FockDensity partial_trace_fock(const FockVector& state, std::span<const int> keep) {
  require(!keep.empty(), "partial_trace_fock: keep set must be non-empty");
  for (int mode : keep)
    require(mode >= 0 && mode < state.mode_count, "partial_trace_fock: bad mode");
  const int d = state.cutoff + 1;
  std::vector<int> traced;
  for (int mode = 0; mode < state.mode_count; ++mode)
    if (std::find(keep.begin(), keep.end(), mode) == keep.end()) traced.push_back(mode);
  const long dim_keep = dim_of(static_cast<int>(keep.size()), state.cutoff);
  const long dim_env = dim_of(static_cast<int>(traced.size()), state.cutoff);
  auto flat_index = [&](long kept_digits, long env_digits) {
    long idx = 0;
    long kd = kept_digits;
    for (int mode : keep) {
      idx += (kd % d) * stride_of(mode, state.cutoff);
      kd /= d;
    }
    long ed = env_digits;
    for (int mode : traced) {
      idx += (ed % d) * stride_of(mode, state.cutoff);
      ed /= d;
    }
    return idx;
  };
  FockDensity out{static_cast<int>(keep.size()), state.cutoff,
                  MatrixXcd::Zero(dim_keep, dim_keep), state.leakage};
  for (long i = 0; i < dim_keep; ++i)
    for (long j = 0; j < dim_keep; ++j) {
      Complex sum = 0.0;
      for (long e = 0; e < dim_env; ++e)
        sum += state.amps(flat_index(i, e)) * std::conj(state.amps(flat_index(j, e)));
      out.rho(i, j) = sum;
    }
  return out;
}

FockDensity density_from_gaussian(const GaussianState& state, int cutoff) {
  require(state.mode_count() == 1, "density_from_gaussian: single-mode only");
  require(cutoff >= 2, "density_from_gaussian: cutoff too small");
  const Mat v = state.cov();
  const double nu = std::sqrt(std::max(v.determinant(), 0.25));
  const double nbar = std::max(nu - 0.5, 0.0);

  Eigen::SelfAdjointEigenSolver<Mat> es(v / nu);
  const double r0 = 0.5 * std::log(es.eigenvalues()(1));
  Mat rot(2, 2);
  rot.col(0) = es.eigenvectors().col(1);
  rot.col(1) = es.eigenvectors().col(0);
  if (rot.determinant() < 0) rot.col(1) *= -1.0;
  const double phi0 = std::atan2(rot(1, 0), rot(0, 0));
  const Complex beta((state.mean()(0) + Complex(0, 1) * state.mean()(1)) /
                     std::sqrt(2.0));

  const int d = cutoff + 1;
  MatrixXcd rho = MatrixXcd::Zero(d, d);
  const double q = nbar / (nbar + 1.0);
  for (int n = 0; n < d; ++n) rho(n, n) = std::pow(q, n) / (nbar + 1.0);
  const MatrixXcd u = displacement_unitary(cutoff, beta) *
                      phase_unitary(cutoff, phi0) * sq_unitary(cutoff, r0, 0.0);
  rho = u * rho * u.adjoint();
  return {1, cutoff, std::move(rho), std::pow(q, d)};
}

std::pair<Vec, Mat> moments(const FockVector& state) {
  const int m = state.mode_count;
  std::vector<VectorXcd> a_psi(m);
  for (int i = 0; i < m; ++i) a_psi[i] = annihilate(state, i);
  auto lower = [&](const VectorXcd& vec, int mode) {
    FockVector tmp{state.mode_count, state.cutoff, vec, 0.0};
    return annihilate(tmp, mode);
  };
  return moments_from_ladders(m, a_psi, state.amps, lower);
}

std::pair<Vec, Mat> moments(const FockDensity& state) {
  require(state.mode_count == 1, "density moments implemented for one mode");
  const int d = state.cutoff + 1;
  MatrixXcd a = MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  const Complex first = (a * state.rho).trace();
  const Complex sq = (a * a * state.rho).trace();
  double nbar = 0.0;
  for (int n = 0; n < d; ++n) nbar += n * state.rho(n, n).real();
  Vec mean(2);
  mean << std::sqrt(2.0) * first.real(), std::sqrt(2.0) * first.imag();
  Mat cov(2, 2);
  cov(0, 0) = sq.real() + nbar + 0.5 - mean(0) * mean(0);
  cov(1, 1) = -sq.real() + nbar + 0.5 - mean(1) * mean(1);
  cov(0, 1) = cov(1, 0) = sq.imag() - mean(0) * mean(1);
  return {std::move(mean), std::move(cov)};
}

double fidelity_fock(const FockVector& a, const FockVector& b) {
  require(a.amps.size() == b.amps.size(), "fidelity_fock: dimension mismatch");
  return std::norm(a.amps.dot(b.amps));
}

double fidelity_fock(const FockDensity& rho, const FockVector& psi) {
  require(rho.rho.rows() == psi.amps.size(), "fidelity_fock: dimension mismatch");
  return std::real(psi.amps.dot(rho.rho * psi.amps));
}

double fidelity_fock(const FockDensity& a, const FockDensity& b) {
  require(a.rho.rows() == b.rho.rows(), "fidelity_fock: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> ea(a.rho);
  const Vec clipped = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const MatrixXcd sqrt_a =
      ea.eigenvectors() * clipped.asDiagonal() * ea.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> em(sqrt_a * b.rho * sqrt_a);
  const double root_sum = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

double trace_distance_fock(const FockDensity& a, const FockDensity& b) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(a.rho - b.rho);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Vec photon_distribution(const FockDensity& rho) {
  require(rho.mode_count == 1, "photon_distribution: single-mode only");
  return rho.rho.diagonal().real();
}

}  // namespace cvqss
