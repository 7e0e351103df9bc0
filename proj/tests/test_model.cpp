#include <doctest.h>

#include <complex>
#include <random>
#include <sstream>

#include "wqed/model.hpp"

using namespace wqed;

namespace {

SystemSpec one_emitter(int n, double detuning, double kappa, int site,
                       Boundary boundary = Boundary::Periodic) {
  SystemSpec spec;
  spec.lattice.num_sites = n;
  spec.lattice.boundary = boundary;
  spec.emitters = {EmitterSpec{detuning, kappa, site, Sublattice::A}};
  return spec;
}

double pseudo_metric_defect(const HamiltonianMatrix& H) {
  PseudoMetric eta = build_pseudo_metric(H.spec);
  const Eigen::MatrixXcd d = eta.diag.cast<Complex>().asDiagonal();
  return (d * H.entries * d - H.entries.adjoint()).cwiseAbs().maxCoeff();
}

// Independent band-edge oracle: extrema of the Bloch eigenvalues +-|h_k| on a
// dense momentum grid.
std::pair<double, double> ssh_band_extrema_oracle(double J, double delta) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double k = -kPi + 2.0 * kPi * i / 20000.0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(bloch_hamiltonian(J, delta, k));
    const double e = es.eigenvalues()[1];  // the positive branch
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {lo, hi};
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("decoupled 4-site ring is Hermitian with the ring spectrum") {
  HamiltonianMatrix H = build_hamiltonian(one_emitter(4, 0.0, 0.0, 0));
  REQUIRE(H.dim() == 5);
  CHECK((H.entries - H.entries.adjoint()).cwiseAbs().maxCoeff() == 0.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.entries.bottomRightCorner(4, 4));
  const double expected[4] = {-2.0, 0.0, 0.0, 2.0};
  for (int i = 0; i < 4; ++i) CHECK(es.eigenvalues()[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("coupling enters as -i kappa in both directions") {
  HamiltonianMatrix H = build_hamiltonian(one_emitter(4, 0.0, 0.3, 0));
  CHECK(H.entries(0, 1) == Complex(0.0, -0.3));
  CHECK(H.entries(1, 0) == Complex(0.0, -0.3));
  CHECK(pseudo_metric_defect(H) <= 1e-14);
}

TEST_CASE("pseudo-metric layout") {
  SystemSpec spec = one_emitter(4, 0.0, 0.1, 0);
  PseudoMetric eta = build_pseudo_metric(spec);
  REQUIRE(eta.diag.size() == 5);
  CHECK(eta.diag[0] == 1.0);
  for (int i = 1; i < 5; ++i) CHECK(eta.diag[i] == -1.0);

  SystemSpec two = one_emitter(6, 0.0, 0.1, 0);
  two.emitters.push_back(EmitterSpec{0.0, 0.1, 3, Sublattice::A});
  PseudoMetric eta2 = build_pseudo_metric(two);
  REQUIRE(eta2.diag.size() == 8);
  CHECK(eta2.diag[0] == 1.0);
  CHECK(eta2.diag[1] == 1.0);
  for (int i = 2; i < 8; ++i) CHECK(eta2.diag[i] == -1.0);
}

TEST_CASE("pseudo-Hermiticity holds for random valid specs") {
  std::mt19937 rng(99);
  auto uni = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  for (int trial = 0; trial < 40; ++trial) {
    SystemSpec spec;
    const bool ssh = trial % 2 == 0;
    spec.lattice.kind = ssh ? LatticeKind::SSH : LatticeKind::UniformChain;
    spec.lattice.num_sites = std::uniform_int_distribution<int>(4, 24)(rng);
    spec.lattice.delta = ssh ? uni(-0.8, 0.8) : 0.0;
    spec.lattice.boundary = trial % 3 == 0 ? Boundary::Open : Boundary::Periodic;
    spec.emitters = {EmitterSpec{uni(-2.0, 2.0), 0.7, 1,
                                 ssh ? Sublattice::B : Sublattice::A}};
    HamiltonianMatrix H = build_hamiltonian(spec);
    CHECK(pseudo_metric_defect(H) <= 1e-13 * H.entries.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("kappa = 0 gives an exactly Hermitian matrix") {
  HamiltonianMatrix H = build_hamiltonian(one_emitter(12, 1.3, 0.0, 5));
  CHECK((H.entries - H.entries.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("periodic photon block has the cosine spectrum") {
  const int n = 12;
  HamiltonianMatrix H = build_hamiltonian(one_emitter(n, 0.0, 0.0, 0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.entries.bottomRightCorner(n, n));
  std::vector<double> expected;
  for (int q = 0; q < n; ++q) expected.push_back(dispersion(1.0, 2.0 * kPi * q / n));
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < n; ++i)
    CHECK(std::abs(es.eigenvalues()[i] - expected[i]) <= 1e-12);
}

TEST_CASE("unitary DFT diagonalizes the periodic photon block to omega_k") {
  const int n = 16;
  HamiltonianMatrix H = build_hamiltonian(one_emitter(n, 0.0, 0.0, 0));
  Eigen::MatrixXcd F(n, n);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m)
      F(k, m) = std::exp(Complex(0.0, -2.0 * kPi * k * m / n)) / std::sqrt(double(n));
  Eigen::MatrixXcd diag = F * H.entries.bottomRightCorner(n, n) * F.adjoint();
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      if (k == m)
        CHECK(std::abs(diag(k, k) - dispersion(1.0, 2.0 * kPi * k / n)) <= 1e-12);
      else
        CHECK(std::abs(diag(k, m)) <= 1e-12);
    }
}

TEST_CASE("dispersion values") {
  CHECK(dispersion(1.0, 0.0) == doctest::Approx(-2.0));
  CHECK(dispersion(1.0, kPi / 2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(dispersion(1.0, kPi) == doctest::Approx(2.0));
}

TEST_CASE("bloch hamiltonian eigenvalues") {
  {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(bloch_hamiltonian(1.0, 0.25, 0.0));
    CHECK(es.eigenvalues()[0] == doctest::Approx(-2.0));
    CHECK(es.eigenvalues()[1] == doctest::Approx(2.0));
    CHECK(std::abs(bloch_hamiltonian(1.0, 0.25, 0.0)(0, 1)) == doctest::Approx(2.0));
  }
  {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(bloch_hamiltonian(1.0, 0.25, kPi));
    CHECK(es.eigenvalues()[0] == doctest::Approx(-0.5));
    CHECK(es.eigenvalues()[1] == doctest::Approx(0.5));
  }
  for (double k : {0.3, 1.1, 2.7}) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(bloch_hamiltonian(1.0, 0.0, k));
    CHECK(es.eigenvalues()[1] == doctest::Approx(2.0 * std::abs(std::cos(k / 2.0))));
  }
  Eigen::Matrix2cd h = bloch_hamiltonian(1.0, 0.25, 0.7);
  CHECK(std::abs(h.trace()) == 0.0);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("band edges against the momentum-grid oracle") {
  LatticeSpec uniform;
  auto bands = band_edges(uniform);
  REQUIRE(bands.size() == 1);
  CHECK(bands[0].lo == doctest::Approx(-2.0));
  CHECK(bands[0].hi == doctest::Approx(2.0));

  LatticeSpec ssh;
  ssh.kind = LatticeKind::SSH;
  ssh.delta = 0.25;
  auto ssh_bands = band_edges(ssh);
  REQUIRE(ssh_bands.size() == 2);
  auto [lo, hi] = ssh_band_extrema_oracle(1.0, 0.25);
  CHECK(ssh_bands[1].lo == doctest::Approx(lo).epsilon(1e-6));
  CHECK(ssh_bands[1].hi == doctest::Approx(hi).epsilon(1e-6));
  CHECK(ssh_bands[0].lo == doctest::Approx(-hi).epsilon(1e-6));
  CHECK(ssh_bands[0].hi == doctest::Approx(-lo).epsilon(1e-6));
  CHECK(ssh_bands[1].lo == doctest::Approx(0.5));
  CHECK(ssh_bands[1].hi == doctest::Approx(2.0));

  ssh.delta = 0.0;
  auto closed = band_edges(ssh);
  REQUIRE(closed.size() == 1);  // gap closes into a single band
  CHECK(closed[0].lo == doctest::Approx(-2.0));
  CHECK(closed[0].hi == doctest::Approx(2.0));
}

TEST_CASE("SSH 50-cell finite spectrum matches the Bloch band edges") {
  SystemSpec spec;
  spec.lattice.kind = LatticeKind::SSH;
  spec.lattice.boundary = Boundary::Open;
  spec.lattice.delta = 0.25;
  spec.lattice.num_sites = 50;
  spec.emitters = {EmitterSpec{0.0, 1.0, 25, Sublattice::A}};
  HamiltonianMatrix H = build_hamiltonian(spec);
  REQUIRE(H.dim() == 101);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.entries.bottomRightCorner(100, 100));
  auto [lo, hi] = ssh_band_extrema_oracle(1.0, 0.25);
  CHECK(std::abs(es.eigenvalues().maxCoeff() - hi) <= 1e-2);
  // lowest positive-band state sits near the inner edge (finite-size offset)
  double inner = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i)
    if (es.eigenvalues()[i] > 0.1) inner = std::min(inner, es.eigenvalues()[i]);
  CHECK(std::abs(inner - lo) <= 1e-2);
}

TEST_CASE("invalid specs are rejected with a named emitter") {
  SystemSpec bad = one_emitter(8, 0.0, 0.1, 9);
  CHECK_THROWS_WITH_AS(build_hamiltonian(bad),
                       doctest::Contains("emitter 0"), std::invalid_argument);

  SystemSpec dup = one_emitter(8, 0.0, 0.1, 3);
  dup.emitters.push_back(EmitterSpec{0.5, 0.1, 3, Sublattice::A});
  CHECK_THROWS_WITH_AS(build_hamiltonian(dup),
                       doctest::Contains("emitter 1"), std::invalid_argument);

  SystemSpec unequal = one_emitter(8, 0.0, 0.1, 3);
  unequal.emitters.push_back(EmitterSpec{0.5, 0.2, 4, Sublattice::A});
  CHECK_THROWS_AS(build_hamiltonian(unequal), std::invalid_argument);

  SystemSpec none = one_emitter(8, 0.0, 0.1, 0);
  none.emitters.clear();
  CHECK_THROWS_AS(build_hamiltonian(none), std::invalid_argument);

  SystemSpec tiny = one_emitter(3, 0.0, 0.1, 0);
  CHECK_THROWS_AS(build_hamiltonian(tiny), std::invalid_argument);

  SystemSpec steep = one_emitter(8, 0.0, 0.1, 0);
  steep.lattice.kind = LatticeKind::SSH;
  steep.lattice.delta = 1.0;
  CHECK_THROWS_AS(build_hamiltonian(steep), std::invalid_argument);
}

TEST_CASE("matrix text export") {
  HamiltonianMatrix H = build_hamiltonian(one_emitter(4, 0.5, 0.3, 1));
  std::ostringstream os;
  write_matrix_text(os, H.entries);
  std::istringstream in(os.str());
  int dim = 0;
  in >> dim;
  REQUIRE(dim == 5);
  std::string token;
  int count = 0;
  while (in >> token) {
    double re, im;
    REQUIRE(std::sscanf(token.c_str(), "%lf,%lf", &re, &im) == 2);
    const int i = count / 5, j = count % 5;
    CHECK(Complex(re, im) == H.entries(i, j));
    ++count;
  }
  CHECK(count == 25);
}

}  // TEST_SUITE
