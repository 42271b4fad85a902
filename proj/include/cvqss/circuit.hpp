#ifndef CVQSS_CIRCUIT_HPP
#define CVQSS_CIRCUIT_HPP

#include "cvqss/symplectic.hpp"

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace cvqss {

struct BeamSplitter {
  int mode_a, mode_b;
  double theta, phi;
};

struct PhaseShifter {
  int mode;
  double phi;
};

struct SingleModeSqueezer {
  int mode;
  double r, phi;
};

struct TwoModeSqueezer {
  int mode_a, mode_b;
  double r, phi;
};

using CircuitElement =
    std::variant<BeamSplitter, PhaseShifter, SingleModeSqueezer, TwoModeSqueezer>;

/// Ordered optical-element list; elements are applied left to right.
struct Circuit {
  int mode_count = 0;
  std::vector<CircuitElement> elements;
};

/// Symplectic of one element embedded on a circuit of `mode_count` modes.
SymplecticTransform element_symplectic(const CircuitElement& element, int mode_count);

/// Composes the circuit's elements in application order.
SymplecticTransform replay(const Circuit& circuit);

/// S = passive_out * D * passive_in with D = diag(e^{r_1}..e^{r_m},
/// e^{-r_1}..e^{-r_m}), r_i >= 0 sorted descending, and both passive
/// factors orthogonal symplectic.
struct BlochMessiahFactors {
  SymplecticTransform passive_out;
  Vec squeezing;
  SymplecticTransform passive_in;
};

BlochMessiahFactors bloch_messiah(const SymplecticTransform& s);

/// Diagonal squeezer symplectic for a vector of per-mode squeezings.
SymplecticTransform squeezer_diagonal(const Vec& r);

/// Triangular beamsplitter/phase-shifter mesh realizing a passive
/// symplectic: at most m(m-1)/2 beamsplitters plus m trailing phase
/// shifters. Elements within 1e-12 of the identity are omitted.
std::vector<CircuitElement> passive_to_mesh(const SymplecticTransform& k);

/// Full compilation: mesh(passive_in), per-mode squeezers, mesh(passive_out).
Circuit compile(const SymplecticTransform& s);

/// Line-oriented netlist: header `MODES m`, then one element per line
/// (`BS i j theta phi`, `PS i phi`, `SQ i r phi`, `TMS i j r phi`) with
/// 1-based mode indices and 12-significant-digit parameters.
std::string write_netlist(const Circuit& circuit);
Circuit parse_netlist(std::istream& in);
Circuit parse_netlist(const std::string& text);

}  // namespace cvqss

#endif  // CVQSS_CIRCUIT_HPP
