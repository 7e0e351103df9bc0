#include <doctest.h>

#include <random>
#include <sstream>

#include "wqed/analytic.hpp"
#include "wqed/spectral.hpp"

using namespace wqed;

namespace {

SystemSpec uniform_spec(int n, double detuning, double kappa, int site,
                        Boundary boundary = Boundary::Periodic) {
  SystemSpec spec;
  spec.lattice.num_sites = n;
  spec.lattice.boundary = boundary;
  spec.emitters = {EmitterSpec{detuning, kappa, site, Sublattice::A}};
  return spec;
}

SystemSpec ssh_spec(int cells, double delta, int j0, double kappa,
                    Sublattice sub = Sublattice::A) {
  SystemSpec spec;
  spec.lattice.kind = LatticeKind::SSH;
  spec.lattice.boundary = Boundary::Open;
  spec.lattice.delta = delta;
  spec.lattice.num_sites = cells;
  spec.emitters = {EmitterSpec{0.0, kappa, j0, sub}};
  return spec;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("Hermitian limit: unbroken phase, unit phase rigidity") {
  HamiltonianMatrix H = build_hamiltonian(uniform_spec(40, 1.2, 0.0, 7));
  Spectrum s = eigendecompose(H);
  CHECK(s.phase == Phase::Unbroken);
  CHECK(classify_phase(s) == Phase::Unbroken);
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    CHECK(s.is_real(i));
    CHECK(phase_rigidity(s, i) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("eigenpairs satisfy the residual contract, right and left") {
  HamiltonianMatrix H = build_hamiltonian(uniform_spec(60, 0.7, 0.4, 11, Boundary::Open));
  Spectrum s = eigendecompose(H);
  const double scale = H.entries.norm();
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    CHECK((H.entries * s.right_vectors.col(i) - s.eigenvalues[i] * s.right_vectors.col(i))
              .norm() <= 1e-10 * scale);
    CHECK((H.entries.adjoint() * s.left_vectors.col(i) -
           std::conj(s.eigenvalues[i]) * s.left_vectors.col(i))
              .norm() <= 1e-10 * scale);
  }
}

TEST_CASE("band regime: exactly one conjugate pair at the closed-form energy") {
  HamiltonianMatrix H = build_hamiltonian(uniform_spec(200, 0.0, 0.3, 100));
  Spectrum s = eigendecompose(H);
  CHECK(s.phase == Phase::Broken);
  int complex_count = 0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (std::abs(s.eigenvalues[i].imag()) <= s.eps_real) continue;
    ++complex_count;
    const Eigen::Index partner = s.conj_partner[i];
    REQUIRE(partner >= 0);
    CHECK(std::abs(s.eigenvalues[partner] - std::conj(s.eigenvalues[i])) <= 1e-9);
    CHECK(std::abs(s.eigenvalues[i].real()) <= 1e-9);
    // N = 200 carries a visible finite-size offset from the closed form
    CHECK(std::abs(std::abs(s.eigenvalues[i].imag()) - 0.0449886) <= 1.5e-3);
  }
  CHECK(complex_count == 2);
}

TEST_CASE("phase classification follows the EP threshold") {
  CHECK(eigendecompose(build_hamiltonian(uniform_spec(200, 2.1, 0.3, 100))).phase ==
        Phase::Broken);
  CHECK(eigendecompose(build_hamiltonian(uniform_spec(200, 2.1, 0.05, 100))).phase ==
        Phase::Unbroken);
  CHECK(eigendecompose(build_hamiltonian(uniform_spec(200, 0.0, 0.3, 100))).phase ==
        Phase::Broken);
}

TEST_CASE("conjugate closure over random specs") {
  std::mt19937 rng(5150);
  auto uni = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  for (int trial = 0; trial < 20; ++trial) {
    SystemSpec spec = uniform_spec(std::uniform_int_distribution<int>(20, 80)(rng),
                                   uni(-2.5, 2.5), uni(0.0, 1.0), 5);
    Spectrum s = eigendecompose(build_hamiltonian(spec));
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < s.eigenvalues.size(); ++j)
        best = std::min(best, std::abs(s.eigenvalues[j] - std::conj(s.eigenvalues[i])));
      CHECK(best <= 1e-9);
    }
  }
}

TEST_CASE("localization fit recovers a synthetic exponential") {
  Eigen::VectorXcd profile(101);
  for (int n = 0; n < 101; ++n) profile[n] = std::exp(-std::abs(n - 50) / 10.0);
  LocalizationFit fit = localization_length(profile, 50, Boundary::Open);
  REQUIRE(fit.estimable);
  CHECK(std::abs(fit.lambda - 10.0) <= 0.01);
  CHECK(fit.r_squared > 0.9999);
}

TEST_CASE("localization fit refuses starved windows") {
  Eigen::VectorXcd tiny = Eigen::VectorXcd::Zero(10);
  tiny[5] = 1.0;
  CHECK_FALSE(localization_length(tiny, 5, Boundary::Open).estimable);
}

TEST_CASE("band-regime bound states: population 1/2 and lambda ~ 44.46") {
  HamiltonianMatrix H = build_hamiltonian(uniform_spec(800, 0.0, 0.3, 400));
  Spectrum s = eigendecompose(H);
  auto states = extract_bound_states(s, H);
  REQUIRE(states.size() == 2);
  for (const auto& st : states) {
    CHECK(std::abs(st.emitter_population - 0.5) <= 1e-6);
    CHECK(std::abs(std::abs(st.energy.imag()) - 0.0449886) <= 1e-4);
    CHECK(std::abs(st.localization_length - 44.46) <= 0.5);
    CHECK(st.fit_r_squared >= 0.999);
  }
}

TEST_CASE("gap-regime bound states: level attraction, populations leave 1/2") {
  HamiltonianMatrix H = build_hamiltonian(uniform_spec(400, 2.1, 0.1, 200));
  Spectrum s = eigendecompose(H);
  auto states = extract_bound_states(s, H);
  REQUIRE(states.size() == 2);
  const double e_ep = ep_energy(2.1);
  CHECK(states[0].energy.real() < e_ep);
  CHECK(states[1].energy.real() > e_ep);
  for (const auto& st : states) {
    CHECK(std::abs(st.energy.real() - e_ep) < 0.1);
    CHECK(std::abs(st.emitter_population - 0.5) > 0.01);
  }
  // the gap-regime cloud is much tighter than the band-regime one
  HamiltonianMatrix Hb = build_hamiltonian(uniform_spec(400, 2.1, 0.3, 200));
  Spectrum sb = eigendecompose(Hb);
  auto broken = extract_bound_states(sb, Hb);
  REQUIRE(broken.size() == 2);
  CHECK(broken[1].localization_length < 44.0);
}

TEST_CASE("kappa = 0 leaves no bound states at zero detuning") {
  HamiltonianMatrix H = build_hamiltonian(uniform_spec(200, 0.0, 0.0, 100));
  Spectrum s = eigendecompose(H);
  CHECK(extract_bound_states(s, H).empty());
}

TEST_CASE("level attraction is monotonic below the EP") {
  double previous_gap = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 15; ++i) {
    const double kappa = 0.01 * i;
    HamiltonianMatrix H = build_hamiltonian(uniform_spec(400, 2.1, kappa, 200));
    Spectrum s = eigendecompose(H);
    auto states = extract_bound_states(s, H);
    REQUIRE(states.size() == 2);
    const double gap = states[1].energy.real() - states[0].energy.real();
    CHECK(gap < previous_gap);
    previous_gap = gap;
  }
}

TEST_CASE("finite-size insensitivity of tightly localized bound states") {
  // The N = 200 vs N = 400 agreement quoted for kappa >= 0.1 only holds once
  // the localization length is far below the ring size; at kappa <= 0.3 the
  // residual wrap coupling still shifts the energies by much more than 1e-6
  // (see the acceptance suite's zero-detuning criterion for the measured
  // values), so the property is pinned where its premise applies.
  for (double kappa : {0.5, 0.7, 1.0}) {
    auto energy_at = [&](int n) {
      HamiltonianMatrix H = build_hamiltonian(uniform_spec(n, 0.0, kappa, n / 2));
      Spectrum s = eigendecompose(H);
      Eigen::Index i_max = 0;
      s.eigenvalues.imag().maxCoeff(&i_max);
      return s.eigenvalues[i_max];
    };
    CHECK(std::abs(energy_at(200) - energy_at(400)) <= 1e-6);
  }
}

TEST_CASE("phase rigidity collapses next to the gap EP") {
  const double k_ep = ep_coupling(2.1);
  for (double kappa : {k_ep * (1.0 - 1e-3), k_ep * (1.0 + 1e-3)}) {
    HamiltonianMatrix H = build_hamiltonian(uniform_spec(400, 2.1, kappa, 200));
    Spectrum s = eigendecompose(H);
    auto states = extract_bound_states(s, H);
    REQUIRE(states.size() == 2);
    for (const auto& st : states) CHECK(phase_rigidity(s, st.eigen_index) < 0.1);
  }
}

TEST_CASE("phase rigidity collapses next to the SSH triple point") {
  HamiltonianMatrix H = build_hamiltonian(ssh_spec(60, 0.25, 25, 0.999));
  Spectrum s = eigendecompose(H);
  auto states = extract_bound_states(s, H);
  REQUIRE(states.size() == 3);
  for (const auto& st : states) CHECK(phase_rigidity(s, st.eigen_index) < 0.1);
}

TEST_CASE("find_ep agrees with the closed form in the gap regime") {
  SystemSpec spec = uniform_spec(200, 2.1, 0.1, 100);
  EPEstimate est = find_ep(spec, 0.05, 0.3, 2);
  CHECK(std::abs(est.coupling - ep_coupling(2.1)) <= 2e-3);
  CHECK(est.order == 2);
  CHECK(std::abs(est.energy - Complex(ep_energy(2.1), 0.0)) <= 2e-2);
  CHECK(est.residual <= 0.05);
}

TEST_CASE("find_ep locates the SSH triple point with order 3") {
  SystemSpec spec = ssh_spec(60, 0.25, 25, 1.0);
  EPEstimate est = find_ep(spec, 0.8, 1.2, 3);
  CHECK(std::abs(est.coupling - 1.0) <= 2e-3);
  CHECK(est.order == 3);
  CHECK(std::abs(est.energy) <= 2e-2);
}

TEST_CASE("find_ep rejects a range without an onset") {
  // band regime: broken for any kappa > 0, so no unbroken lower endpoint
  SystemSpec spec = uniform_spec(200, 0.0, 0.1, 100);
  CHECK_THROWS_WITH_AS(find_ep(spec, 0.01, 0.3, 2), doctest::Contains("no onset"),
                       std::runtime_error);
  // and entirely unbroken ranges fail on the upper endpoint
  SystemSpec gap = uniform_spec(200, 2.1, 0.1, 100);
  CHECK_THROWS_WITH_AS(find_ep(gap, 0.01, 0.05, 2), doctest::Contains("no onset"),
                       std::runtime_error);
}

TEST_CASE("cluster eigenvector reproduces the dressed state at the triple point") {
  SystemSpec spec = ssh_spec(60, 0.25, 25, 1.0);
  HamiltonianMatrix H = build_hamiltonian(spec);
  Eigen::VectorXcd v = cluster_eigenvector(H.entries, Complex(0.0, 0.0));
  Eigen::VectorXcd vds = vds_state(0.25, 25, 60).to_state_vector(60);
  vds /= vds.norm();
  CHECK(std::abs(v.dot(vds)) >= 1.0 - 1e-10);
}

TEST_CASE("sublattice weights: chirality at the triple point and its mirror") {
  SystemSpec spec = ssh_spec(60, 0.25, 25, 1.0);
  HamiltonianMatrix H = build_hamiltonian(spec);
  Eigen::VectorXcd v = cluster_eigenvector(H.entries, Complex(0.0, 0.0));
  BoundState probe;
  probe.photon_profile = v.tail(120);
  probe.anchor_site = attachment_site(spec.lattice, spec.emitters[0]);
  SublatticeWeights w = sublattice_weights(probe, spec.lattice);
  CHECK(w.w_A <= 1e-10);
  CHECK(w.w_right / (w.w_left + w.w_right) >= 1.0 - 1e-8);

  // mirrored configuration: emitter on B, the dressed state flips to the left
  SystemSpec mirror = ssh_spec(60, 0.25, 34, 1.0, Sublattice::B);
  HamiltonianMatrix Hm = build_hamiltonian(mirror);
  Eigen::VectorXcd vm = cluster_eigenvector(Hm.entries, Complex(0.0, 0.0));
  BoundState probe_m;
  probe_m.photon_profile = vm.tail(120);
  probe_m.anchor_site = attachment_site(mirror.lattice, mirror.emitters[0]);
  SublatticeWeights wm = sublattice_weights(probe_m, mirror.lattice);
  CHECK(wm.w_B <= 1e-10);
  CHECK(wm.w_left / (wm.w_left + wm.w_right) >= 1.0 - 1e-8);
}

TEST_CASE("sublattice weights balance for bulk band states") {
  SystemSpec spec = ssh_spec(40, 0.25, 20, 0.0);
  HamiltonianMatrix H = build_hamiltonian(spec);
  Spectrum s = eigendecompose(H);
  // pick a mid-band eigenstate (positive band, away from the edges)
  Eigen::Index pick = -1;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    if (s.eigenvalues[i].real() > 1.0 && s.eigenvalues[i].real() < 1.6) pick = i;
  REQUIRE(pick >= 0);
  BoundState probe;
  probe.photon_profile = s.right_vectors.col(pick).tail(80);
  probe.anchor_site = 40;
  SublatticeWeights w = sublattice_weights(probe, spec.lattice);
  CHECK(std::abs(w.w_A - w.w_B) <= 0.05);
}

TEST_CASE("sublattice weights reject uniform chains") {
  SystemSpec spec = uniform_spec(20, 0.0, 0.1, 10);
  BoundState probe;
  probe.photon_profile = Eigen::VectorXcd::Ones(20);
  CHECK_THROWS_AS(sublattice_weights(probe, spec.lattice), std::invalid_argument);
}

TEST_CASE("csv export is deterministic and NaN-stable") {
  HamiltonianMatrix H = build_hamiltonian(uniform_spec(30, 2.1, 0.1, 15));
  Spectrum s = eigendecompose(H);
  auto states = extract_bound_states(s, H);
  std::ostringstream a, b;
  write_spectrum_csv(a, s, H);
  write_spectrum_csv(b, s, H);
  const std::string text = a.str();
  CHECK(text == b.str());
  CHECK(text.find("re_E,im_E,emitter_population,lambda,r_squared,phase_rigidity") == 0);
  CHECK(text.find("NaN") != std::string::npos);

  std::ostringstream c;
  write_bound_states_csv(c, states, s, H.spec.lattice);
  const std::string bound_text = c.str();
  CHECK(std::count(bound_text.begin(), bound_text.end(), '\n') == 1 + (long)states.size());
}

}  // TEST_SUITE
