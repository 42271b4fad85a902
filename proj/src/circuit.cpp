#include "cvqss/circuit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cvqss {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

double wrap_angle(double phi) {
  while (phi > std::numbers::pi) phi -= 2.0 * std::numbers::pi;
  while (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
  return phi;
}

// Unitary m x m matrix equivalent to a passive symplectic [[X, -Y], [Y, X]].
Eigen::MatrixXcd passive_to_unitary(const SymplecticTransform& k) {
  const int m = k.mode_count();
  const Mat& s = k.matrix();
  require(is_passive(k), "expected a passive (orthogonal) symplectic");
  const Mat x = 0.5 * (s.block(0, 0, m, m) + s.block(m, m, m, m));
  const Mat y = 0.5 * (s.block(m, 0, m, m) - s.block(0, m, m, m));
  const double structure_defect =
      (s.block(0, 0, m, m) - s.block(m, m, m, m)).norm() +
      (s.block(m, 0, m, m) + s.block(0, m, m, m)).norm();
  require(structure_defect < 1e-8, "expected a passive (orthogonal) symplectic");
  return x + Complex(0, 1) * y;
}

SymplecticTransform unitary_to_passive(const Eigen::MatrixXcd& w) {
  const int m = static_cast<int>(w.rows());
  Mat k(2 * m, 2 * m);
  k.block(0, 0, m, m) = w.real();
  k.block(0, m, m, m) = -w.imag();
  k.block(m, 0, m, m) = w.imag();
  k.block(m, m, m, m) = w.real();
  return SymplecticTransform(std::move(k));
}

// Projects an approximately orthogonal-symplectic matrix onto an exactly
// unitary-equivalent one.
SymplecticTransform polish_passive(const Mat& q) {
  const int m = static_cast<int>(q.rows()) / 2;
  const Mat x = 0.5 * (q.block(0, 0, m, m) + q.block(m, m, m, m));
  const Mat y = 0.5 * (q.block(m, 0, m, m) - q.block(0, m, m, m));
  Eigen::MatrixXcd w = x + Complex(0, 1) * y;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return unitary_to_passive(svd.matrixU() * svd.matrixV().adjoint());
}

void format_number(std::string& out, double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  out += buf;
}

}  // namespace

SymplecticTransform element_symplectic(const CircuitElement& element, int mode_count) {
  return std::visit(
      [mode_count](const auto& e) -> SymplecticTransform {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          require(std::isfinite(e.theta) && std::isfinite(e.phi),
                  "beamsplitter parameters must be finite");
          const int modes[2] = {e.mode_a, e.mode_b};
          return embed(beamsplitter(e.theta, e.phi), mode_count, modes);
        } else if constexpr (std::is_same_v<T, PhaseShifter>) {
          require(std::isfinite(e.phi), "phase-shifter parameter must be finite");
          const int modes[1] = {e.mode};
          return embed(phase_shifter(e.phi), mode_count, modes);
        } else if constexpr (std::is_same_v<T, SingleModeSqueezer>) {
          require(std::isfinite(e.r) && std::isfinite(e.phi),
                  "squeezer parameters must be finite");
          const int modes[1] = {e.mode};
          return embed(single_mode_squeezer(e.r, e.phi), mode_count, modes);
        } else {
          require(std::isfinite(e.r) && std::isfinite(e.phi),
                  "squeezer parameters must be finite");
          const int modes[2] = {e.mode_a, e.mode_b};
          return embed(two_mode_squeezer(e.r, e.phi), mode_count, modes);
        }
      },
      element);
}

SymplecticTransform replay(const Circuit& circuit) {
  require(circuit.mode_count >= 1, "replay: circuit needs at least one mode");
  SymplecticTransform total = symplectic_identity(circuit.mode_count);
  for (const CircuitElement& e : circuit.elements)
    total = element_symplectic(e, circuit.mode_count) * total;
  return total;
}

SymplecticTransform squeezer_diagonal(const Vec& r) {
  const int m = static_cast<int>(r.size());
  Vec d(2 * m);
  for (int i = 0; i < m; ++i) {
    d(i) = std::exp(r(i));
    d(m + i) = std::exp(-r(i));
  }
  return SymplecticTransform(d.asDiagonal());
}

BlochMessiahFactors bloch_messiah(const SymplecticTransform& s) {
  const int m = s.mode_count();
  const int n = 2 * m;
  const Mat omega = symplectic_form(m);

  // Polar part P = sqrt(S S^T): symmetric positive-definite and symplectic,
  // with eigenvalues in reciprocal pairs (e^{r}, e^{-r}).
  Eigen::SelfAdjointEigenSolver<Mat> es(s.matrix() * s.matrix().transpose());
  const Vec lambda = es.eigenvalues().cwiseSqrt();  // ascending
  const Mat w = es.eigenvectors();
  const Mat p_inv = w * lambda.cwiseInverse().asDiagonal() * w.transpose();
  const Mat ortho = p_inv * s.matrix();

  constexpr double kActiveTol = 1e-10;
  struct ActivePair {
    double r;
    Vec v;
  };
  std::vector<ActivePair> active;
  for (int i = n - 1; i >= 0 && lambda(i) > 1.0 + kActiveTol; --i)
    active.push_back({std::log(lambda(i)), w.col(i)});
  const int n_active = static_cast<int>(active.size());
  require(n_active <= m, "polar spectrum is not reciprocal-paired");
  // Descending eigenvalue order from the solver is already descending in r;
  // enforce it anyway for stable ties.
  std::stable_sort(active.begin(), active.end(),
                   [](const ActivePair& a, const ActivePair& b) { return a.r > b.r; });

  Mat qx(n, m), qp(n, m);
  for (int i = 0; i < n_active; ++i) {
    qx.col(i) = active[i].v;
    qp.col(i) = -omega * active[i].v;  // eigenvector for the reciprocal eigenvalue
  }

  // The near-unit eigenvalue cluster carries no squeezing; split it into
  // symplectically paired directions (u, -Omega u).
  const int n_passive = m - n_active;
  if (n_passive > 0) {
    Mat cluster = w.block(0, n_active, n, n - 2 * n_active);
    std::vector<Vec> chosen;
    chosen.reserve(2 * n_passive);
    auto orthogonalize = [&](Vec v) {
      for (const Vec& c : chosen) v -= c.dot(v) * c;
      return v;
    };
    int next_col = 0;
    for (int pair = 0; pair < n_passive; ++pair) {
      Vec u;
      double norm = 0.0;
      do {
        require(next_col < cluster.cols(), "failed to span the passive subspace");
        u = orthogonalize(cluster.col(next_col++));
        norm = u.norm();
      } while (norm < 1e-6);
      u /= norm;
      Vec v = orthogonalize(-omega * u);
      require(v.norm() > 0.5, "passive subspace is not symplectically closed");
      v.normalize();
      qx.col(n_active + pair) = u;
      qp.col(n_active + pair) = v;
      chosen.push_back(u);
      chosen.push_back(v);
    }
  }

  Mat q(n, n);
  q.block(0, 0, n, m) = qx;
  q.block(0, m, n, m) = qp;

  Vec squeezing = Vec::Zero(m);
  for (int i = 0; i < n_active; ++i) squeezing(i) = active[i].r;

  SymplecticTransform passive_out = polish_passive(q);
  SymplecticTransform passive_in =
      polish_passive(q.transpose() * ortho);
  return {std::move(passive_out), std::move(squeezing), std::move(passive_in)};
}

std::vector<CircuitElement> passive_to_mesh(const SymplecticTransform& k) {
  const int m = k.mode_count();
  Eigen::MatrixXcd a = passive_to_unitary(k);

  struct Rotation {
    int col_a, col_b;
    double theta, phi;
  };
  std::vector<Rotation> rotations;

  // Null the strictly lower triangle by right-multiplied column rotations;
  // what remains of a unitary is then a diagonal of phases.
  constexpr double kTiny = 1e-12;
  for (int i = m - 1; i >= 1; --i) {
    for (int j = 0; j < i; ++j) {
      const Complex low = a(i, j);
      if (std::abs(low) < kTiny) continue;
      const Complex diag = a(i, i);
      double theta, phi;
      if (std::abs(diag) < kTiny) {
        theta = std::numbers::pi / 2;
        phi = 0.0;
      } else {
        theta = std::atan(std::abs(low) / std::abs(diag));
        phi = -std::arg(-low / diag);
      }
      const Complex c = std::cos(theta);
      const Complex es = std::exp(Complex(0, -phi)) * std::sin(theta);
      const Eigen::VectorXcd col_j = a.col(j), col_i = a.col(i);
      a.col(j) = c * col_j + es * col_i;
      a.col(i) = -std::conj(es) * col_j + c * col_i;
      rotations.push_back({j, i, theta, phi});
    }
  }

  std::vector<CircuitElement> mesh;
  for (const Rotation& rot : rotations)
    mesh.push_back(BeamSplitter{rot.col_a, rot.col_b, rot.theta,
                                wrap_angle(rot.phi + std::numbers::pi)});
  for (int i = 0; i < m; ++i) {
    const double phi = std::arg(a(i, i));
    if (std::abs(phi) > kTiny) mesh.push_back(PhaseShifter{i, phi});
  }
  return mesh;
}

Circuit compile(const SymplecticTransform& s) {
  const BlochMessiahFactors f = bloch_messiah(s);
  Circuit circuit{s.mode_count(), {}};
  auto append = [&](std::vector<CircuitElement> v) {
    circuit.elements.insert(circuit.elements.end(), v.begin(), v.end());
  };
  append(passive_to_mesh(f.passive_in));
  for (int i = 0; i < f.squeezing.size(); ++i)
    if (f.squeezing(i) > 1e-12)
      circuit.elements.push_back(SingleModeSqueezer{i, f.squeezing(i), 0.0});
  append(passive_to_mesh(f.passive_out));
  return circuit;
}

std::string write_netlist(const Circuit& circuit) {
  std::string out = "MODES " + std::to_string(circuit.mode_count) + "\n";
  for (const CircuitElement& e : circuit.elements) {
    std::visit(
        [&out](const auto& el) {
          using T = std::decay_t<decltype(el)>;
          if constexpr (std::is_same_v<T, BeamSplitter>) {
            out += "BS " + std::to_string(el.mode_a + 1) + " " +
                   std::to_string(el.mode_b + 1) + " ";
            format_number(out, el.theta);
            out += " ";
            format_number(out, el.phi);
          } else if constexpr (std::is_same_v<T, PhaseShifter>) {
            out += "PS " + std::to_string(el.mode + 1) + " ";
            format_number(out, el.phi);
          } else if constexpr (std::is_same_v<T, SingleModeSqueezer>) {
            out += "SQ " + std::to_string(el.mode + 1) + " ";
            format_number(out, el.r);
            out += " ";
            format_number(out, el.phi);
          } else {
            out += "TMS " + std::to_string(el.mode_a + 1) + " " +
                   std::to_string(el.mode_b + 1) + " ";
            format_number(out, el.r);
            out += " ";
            format_number(out, el.phi);
          }
          out += "\n";
        },
        e);
  }
  return out;
}

Circuit parse_netlist(std::istream& in) {
  Circuit circuit;
  bool have_header = false;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("netlist line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string kind;
    if (!(tokens >> kind)) continue;
    auto read_mode = [&]() {
      int v = 0;
      if (!(tokens >> v)) fail("expected a mode index");
      if (!have_header) fail("element before MODES header");
      if (v < 1 || v > circuit.mode_count) fail("mode index out of range");
      return v - 1;
    };
    auto read_real = [&]() {
      double v = 0;
      if (!(tokens >> v)) fail("expected a real parameter");
      return v;
    };
    if (kind == "MODES") {
      if (have_header) fail("duplicate MODES header");
      int m = 0;
      if (!(tokens >> m) || m < 1) fail("invalid mode count");
      circuit.mode_count = m;
      have_header = true;
    } else if (kind == "BS") {
      const int i = read_mode(), j = read_mode();
      const double theta = read_real(), phi = read_real();
      circuit.elements.push_back(BeamSplitter{i, j, theta, phi});
    } else if (kind == "PS") {
      const int i = read_mode();
      circuit.elements.push_back(PhaseShifter{i, read_real()});
    } else if (kind == "SQ") {
      const int i = read_mode();
      const double r = read_real(), phi = read_real();
      circuit.elements.push_back(SingleModeSqueezer{i, r, phi});
    } else if (kind == "TMS") {
      const int i = read_mode(), j = read_mode();
      const double r = read_real(), phi = read_real();
      circuit.elements.push_back(TwoModeSqueezer{i, j, r, phi});
    } else {
      fail("unknown element '" + kind + "'");
    }
    std::string rest;
    if (tokens >> rest) fail("trailing tokens");
  }
  if (!have_header) throw std::runtime_error("netlist: missing MODES header");
  return circuit;
}

Circuit parse_netlist(const std::string& text) {
  std::istringstream in(text);
  return parse_netlist(in);
}

}  // namespace cvqss
