#include "wqed/model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wqed {

int attachment_site(const LatticeSpec& lattice, const EmitterSpec& emitter) {
  if (lattice.kind == LatticeKind::SSH)
    return 2 * emitter.site + (emitter.sublattice == Sublattice::B ? 1 : 0);
  return emitter.site;
}

void validate_spec(const SystemSpec& spec) {
  const LatticeSpec& lat = spec.lattice;
  std::ostringstream err;
  if (!(lat.J > 0.0))
    err << "lattice: J must be positive, got " << lat.J;
  else if (lat.num_sites < 4)
    err << "lattice: num_sites must be >= 4, got " << lat.num_sites;
  else if (!(std::abs(lat.delta) < 1.0))
    err << "lattice: |delta| must be < 1, got " << lat.delta;
  else if (spec.emitters.empty())
    err << "at least one emitter is required";
  if (!err.str().empty()) throw std::invalid_argument(err.str());

  std::set<int> taken;
  for (size_t m = 0; m < spec.emitters.size(); ++m) {
    const EmitterSpec& e = spec.emitters[m];
    if (e.coupling < 0.0) {
      err << "emitter " << m << ": coupling must be >= 0, got " << e.coupling;
      break;
    }
    if (e.coupling != spec.emitters[0].coupling) {
      err << "emitter " << m << ": coupling " << e.coupling
          << " differs from emitter 0 (" << spec.emitters[0].coupling
          << "); all emitters share one kappa";
      break;
    }
    if (e.site < 0 || e.site >= lat.num_sites) {
      err << "emitter " << m << ": "
          << (lat.kind == LatticeKind::SSH ? "cell " : "site ") << e.site
          << " outside lattice (num_sites = " << lat.num_sites << ")";
      break;
    }
    int flat = attachment_site(lat, e);
    if (!taken.insert(flat).second) {
      err << "emitter " << m << ": attachment site already used by another emitter";
      break;
    }
  }
  if (!err.str().empty()) throw std::invalid_argument(err.str());
}

HamiltonianMatrix build_hamiltonian(const SystemSpec& spec) {
  validate_spec(spec);
  const LatticeSpec& lat = spec.lattice;
  const int M = spec.num_emitters();
  const int P = lat.photon_dimension();
  const int D = M + P;

  BasisIndex basis{M, P};
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(D, D);

  // Photon block, in units of J.
  auto hop = [&](int a, int b, double t) {
    H(basis.photon(a), basis.photon(b)) = -t;
    H(basis.photon(b), basis.photon(a)) = -t;
  };
  if (lat.kind == LatticeKind::UniformChain) {
    for (int n = 0; n + 1 < lat.num_sites; ++n) hop(n, n + 1, 1.0);
    if (lat.boundary == Boundary::Periodic) hop(lat.num_sites - 1, 0, 1.0);
  } else {
    for (int j = 0; j < lat.num_sites; ++j) {
      hop(2 * j, 2 * j + 1, 1.0 + lat.delta);  // intracell A-B
      if (j + 1 < lat.num_sites) hop(2 * j + 1, 2 * j + 2, 1.0 - lat.delta);
    }
    if (lat.boundary == Boundary::Periodic)
      hop(2 * lat.num_sites - 1, 0, 1.0 - lat.delta);
  }

  // Emitters: real detuning on the diagonal, -i*kappa to the attachment site
  // in both directions (the interaction is dissipative, not Hermitian).
  for (int m = 0; m < M; ++m) {
    const EmitterSpec& e = spec.emitters[m];
    H(m, m) = e.detuning;
    int p = basis.photon(attachment_site(lat, e));
    H(m, p) = Complex(0.0, -e.coupling);
    H(p, m) = Complex(0.0, -e.coupling);
  }

  return HamiltonianMatrix{std::move(H), basis, spec};
}

PseudoMetric build_pseudo_metric(const SystemSpec& spec) {
  validate_spec(spec);
  const int M = spec.num_emitters();
  const int D = spec.dimension();
  Eigen::VectorXd diag = -Eigen::VectorXd::Ones(D);
  diag.head(M).setOnes();
  return PseudoMetric{std::move(diag)};
}

double dispersion(double J, double k) { return -2.0 * J * std::cos(k); }

Eigen::Matrix2cd bloch_hamiltonian(double J, double delta, double k) {
  const double hx = -J * ((1.0 + delta) + (1.0 - delta) * std::cos(k));
  const double hy = -J * (1.0 - delta) * std::sin(k);
  Eigen::Matrix2cd h;
  h << 0.0, Complex(hx, -hy), Complex(hx, hy), 0.0;
  return h;
}

std::vector<BandInterval> band_edges(const LatticeSpec& lattice) {
  const double J = lattice.J;
  if (lattice.kind == LatticeKind::UniformChain || lattice.delta == 0.0)
    return {{-2.0 * J, 2.0 * J}};
  const double gap = 2.0 * J * std::abs(lattice.delta);
  return {{-2.0 * J, -gap}, {gap, 2.0 * J}};
}

void write_matrix_text(std::ostream& os, const Eigen::MatrixXcd& m) {
  os << m.rows() << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
      os << buf << (j + 1 < m.cols() ? " " : "\n");
    }
  }
}

}  // namespace wqed
