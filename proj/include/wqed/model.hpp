#pragma once

// Single-excitation sector of two-level emitters attached to a 1D resonator
// lattice through purely imaginary couplings -i*kappa. The basis is fixed
// once and for all: emitters first in declaration order, then photon sites
// in lattice order. In this basis the Hamiltonian is complex symmetric and
// satisfies eta H eta = H^dagger with the signature metric eta built below.

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace wqed {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class LatticeKind { UniformChain, SSH };
enum class Boundary { Periodic, Open };
enum class Sublattice { A, B };

/// Photon lattice. `num_sites` counts sites for the uniform chain and unit
/// cells for SSH (two sites per cell). Detunings, couplings and eigenvalues
/// are handled in units of J throughout; J itself is kept for display and
/// for quoting band edges in absolute units.
struct LatticeSpec {
  LatticeKind kind = LatticeKind::UniformChain;
  Boundary boundary = Boundary::Periodic;
  double J = 1.0;
  double delta = 0.0;  // SSH dimerization, |delta| < 1
  int num_sites = 400;

  int photon_dimension() const {
    return kind == LatticeKind::SSH ? 2 * num_sites : num_sites;
  }
};

/// One emitter. `site` is a site index on the uniform chain and a unit-cell
/// index on SSH (together with `sublattice`). All emitters of a system must
/// share the same coupling strength.
struct EmitterSpec {
  double detuning = 0.0;  // Delta, units of J
  double coupling = 0.1;  // kappa >= 0, units of J
  int site = 0;
  Sublattice sublattice = Sublattice::A;
};

struct SystemSpec {
  LatticeSpec lattice;
  std::vector<EmitterSpec> emitters;

  int num_emitters() const { return static_cast<int>(emitters.size()); }
  int dimension() const { return num_emitters() + lattice.photon_dimension(); }
};

/// Row layout: emitter m -> m, flat photon site s -> num_emitters + s.
/// SSH flattening: (cell 0, A), (cell 0, B), (cell 1, A), ...
struct BasisIndex {
  int num_emitters = 0;
  int num_photon_sites = 0;

  int dimension() const { return num_emitters + num_photon_sites; }
  int emitter(int m) const { return m; }
  int photon(int flat_site) const { return num_emitters + flat_site; }
};

/// Flat photon-site index of an emitter's attachment point.
int attachment_site(const LatticeSpec& lattice, const EmitterSpec& emitter);

/// eta = diag(+1 on emitters, -1 on photons); eta = eta^dagger = eta^-1.
struct PseudoMetric {
  Eigen::VectorXd diag;
};

struct HamiltonianMatrix {
  Eigen::MatrixXcd entries;  // dense, complex symmetric in this basis
  BasisIndex basis;
  SystemSpec spec;  // provenance copy

  Eigen::Index dim() const { return entries.rows(); }
};

/// Throws std::invalid_argument with a message naming the offending field or
/// emitter index.
void validate_spec(const SystemSpec& spec);

HamiltonianMatrix build_hamiltonian(const SystemSpec& spec);
PseudoMetric build_pseudo_metric(const SystemSpec& spec);

/// omega_k = -2 J cos k.
double dispersion(double J, double k);

/// -J[(1+delta)+(1-delta)cos k] sigma_x - J(1-delta) sin k sigma_y.
Eigen::Matrix2cd bloch_hamiltonian(double J, double delta, double k);

struct BandInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Photonic bands in absolute energy: [-2J, 2J] for the uniform chain, two
/// symmetric bands with |E| in [2J|delta|, 2J] for SSH (merged when delta=0).
std::vector<BandInterval> band_edges(const LatticeSpec& lattice);

/// Debug dump: first line the dimension D, then D rows of D "re,im" pairs.
void write_matrix_text(std::ostream& os, const Eigen::MatrixXcd& m);

}  // namespace wqed
