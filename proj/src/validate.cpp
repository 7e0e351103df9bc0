#include "wqed/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "wqed/analytic.hpp"
#include "wqed/dynamics.hpp"
#include "wqed/sweep.hpp"

namespace wqed {

namespace {

using Clock = std::chrono::steady_clock;

struct Ctx {
  int jobs = 0;
  Clock::time_point suite_start;
  bool full_run = true;
};

SystemSpec uniform_spec(int n, Boundary boundary, double detuning, double kappa, int site) {
  SystemSpec spec;
  spec.lattice.kind = LatticeKind::UniformChain;
  spec.lattice.boundary = boundary;
  spec.lattice.num_sites = n;
  spec.emitters = {EmitterSpec{detuning, kappa, site, Sublattice::A}};
  return spec;
}

SystemSpec ssh_spec(int cells, double delta, int j0, double detuning, double kappa,
                    Sublattice sub = Sublattice::A) {
  SystemSpec spec;
  spec.lattice.kind = LatticeKind::SSH;
  spec.lattice.boundary = Boundary::Open;
  spec.lattice.delta = delta;
  spec.lattice.num_sites = cells;
  spec.emitters = {EmitterSpec{detuning, kappa, j0, sub}};
  return spec;
}

Eigen::VectorXd linspace(double lo, double hi, int n) {
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) t[i] = lo + (hi - lo) * i / (n - 1);
  return t;
}

double conjugation_closure_defect(const Eigen::VectorXcd& eigenvalues) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const Complex target = std::conj(eigenvalues[i]);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j)
      best = std::min(best, std::abs(eigenvalues[j] - target));
    worst = std::max(worst, best);
  }
  return worst;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// 1. Pseudo-Hermiticity and conjugate closure over 200 random specs.
CriterionResult criterion_1(const Ctx&) {
  std::mt19937 rng(12345);
  auto uni = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };

  double worst_metric = 0.0, worst_closure = 0.0;
  bool pass = true;
  for (int trial = 0; trial < 200; ++trial) {
    SystemSpec spec;
    const bool ssh = trial % 2 == 1;
    spec.lattice.kind = ssh ? LatticeKind::SSH : LatticeKind::UniformChain;
    spec.lattice.boundary = pick(0, 1) == 0 ? Boundary::Periodic : Boundary::Open;
    spec.lattice.num_sites = ssh ? pick(4, 20) : pick(4, 40);
    spec.lattice.delta = ssh ? uni(-0.9, 0.9) : 0.0;
    const double kappa = uni(0.0, 1.5);
    const int m_count = std::min(pick(1, 3), spec.lattice.num_sites);
    std::vector<int> sites(spec.lattice.num_sites);
    std::iota(sites.begin(), sites.end(), 0);
    std::shuffle(sites.begin(), sites.end(), rng);
    for (int m = 0; m < m_count; ++m) {
      EmitterSpec e;
      e.detuning = uni(-3.0, 3.0);
      e.coupling = kappa;
      e.site = sites[m];
      e.sublattice = ssh && pick(0, 1) == 1 ? Sublattice::B : Sublattice::A;
      spec.emitters.push_back(e);
    }

    HamiltonianMatrix H = build_hamiltonian(spec);
    PseudoMetric eta = build_pseudo_metric(spec);
    const Eigen::MatrixXcd lhs =
        eta.diag.asDiagonal() * H.entries * eta.diag.asDiagonal();
    const double metric_defect = (lhs - H.entries.adjoint()).cwiseAbs().maxCoeff();
    const double h_max = H.entries.cwiseAbs().maxCoeff();
    worst_metric = std::max(worst_metric, metric_defect / h_max);
    if (metric_defect > 1e-13 * h_max) pass = false;

    Spectrum s = eigendecompose(H);
    const double closure = conjugation_closure_defect(s.eigenvalues);
    worst_closure = std::max(worst_closure, closure);
    if (closure > 1e-9) pass = false;
  }
  return {1, "pseudo-hermiticity property (200 random specs)", pass,
          "max |eta H eta - H^dag|/|H| = " + fmt(worst_metric) +
              ", max conjugation defect = " + fmt(worst_closure) + " J",
          0.0};
}

// 2. Numeric EP location against the closed form, gap regime, N = 400.
CriterionResult criterion_2(const Ctx&) {
  const SystemSpec spec = uniform_spec(400, Boundary::Periodic, 2.1, 0.1, 200);
  const double analytic = ep_coupling(2.1);
  EPEstimate est = find_ep(spec, 0.05, 0.30, 2);
  const double dev = std::abs(est.coupling - analytic);
  const bool pass = dev <= 2e-3 && std::abs(analytic - 0.1561) <= 1e-3 && est.order == 2;
  return {2, "EP location, gap regime (Delta = 2.1 J, N = 400)", pass,
          "kappa* = " + fmt(est.coupling) + ", analytic = " + fmt(analytic) +
              ", |diff| = " + fmt(dev) + " J, order " + std::to_string(est.order),
          0.0};
}

// 3. EP energy: printed formula, double root, eigensolver match.
CriterionResult criterion_3(const Ctx&) {
  const double e_ep = ep_energy(2.1);
  const double k_ep = ep_coupling(2.1);
  PoleProblem problem{2.1, k_ep, std::nullopt};
  const double residual = std::abs(e_ep - 2.1 - self_energy(problem, e_ep).real());

  HamiltonianMatrix H = build_hamiltonian(uniform_spec(400, Boundary::Periodic, 2.1, k_ep, 200));
  Spectrum s = eigendecompose(H);
  double eig_dev = std::numeric_limits<double>::infinity();
  std::vector<double> close;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double d = std::abs(s.eigenvalues[i] - Complex(e_ep, 0.0));
    if (d < 0.02) close.push_back(d);
  }
  if (close.size() >= 2) {
    std::sort(close.begin(), close.end());
    eig_dev = close[1];  // both coalescing eigenvalues within tolerance
  }
  const bool pass = std::abs(e_ep - 2.0335) <= 1e-4 && residual <= 1e-10 && eig_dev <= 1e-5;
  return {3, "EP energy (double root at E_ep = 2.0335 J)", pass,
          "E_ep = " + fmt(e_ep) + " J, pole residual = " + fmt(residual) +
              ", eigensolver |diff| = " + fmt(eig_dev) + " J",
          0.0};
}

// 4. Broken-phase population identity on a 100-point (Delta, kappa) sample.
CriterionResult criterion_4(const Ctx&) {
  std::mt19937 rng(777);
  auto uni = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  double worst = 0.0;
  int states_checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    SystemSpec spec;
    spec.lattice.num_sites = 200;
    if (trial < 60) {
      spec.emitters = {EmitterSpec{uni(-1.9, 1.9), uni(0.05, 0.8), 100, Sublattice::A}};
    } else {
      const double kappa = uni(0.05, 0.8);
      const int separation = std::uniform_int_distribution<int>(1, 79)(rng);
      spec.emitters = {EmitterSpec{uni(-1.9, 1.9), kappa, 60, Sublattice::A},
                       EmitterSpec{uni(-1.9, 1.9), kappa, 60 + separation, Sublattice::A}};
    }
    HamiltonianMatrix H = build_hamiltonian(spec);
    Spectrum s = eigendecompose(H);
    for (const auto& st : extract_bound_states(s, H)) {
      if (std::abs(st.energy.imag()) <= s.eps_real) continue;
      worst = std::max(worst, std::abs(st.emitter_population - 0.5));
      ++states_checked;
    }
  }
  const bool pass = states_checked > 0 && worst <= 1e-6;
  return {4, "population identity |sum_m |c_m|^2 - 1/2| in the broken phase", pass,
          std::to_string(states_checked) + " complex bound states, worst deviation = " +
              fmt(worst),
          0.0};
}

// 5. Localization length of the zero-detuning bound state.
CriterionResult criterion_5(const Ctx&) {
  HamiltonianMatrix H = build_hamiltonian(uniform_spec(800, Boundary::Periodic, 0.0, 0.3, 400));
  Spectrum s = eigendecompose(H);
  double lambda_band = 0.0, r2 = 0.0;
  for (const auto& st : extract_bound_states(s, H))
    if (st.energy.imag() > s.eps_real) {
      lambda_band = st.localization_length;
      r2 = st.fit_r_squared;
    }

  HamiltonianMatrix Hg = build_hamiltonian(uniform_spec(400, Boundary::Periodic, 2.1, 0.3, 200));
  Spectrum sg = eigendecompose(Hg);
  double lambda_gap = 0.0;
  for (const auto& st : extract_bound_states(sg, Hg))
    if (st.energy.imag() > sg.eps_real) lambda_gap = st.localization_length;

  const bool pass =
      std::abs(lambda_band - 44.46) <= 0.5 && r2 >= 0.999 && lambda_band > lambda_gap;
  return {5, "localization length (Delta = 0, kappa = 0.3 J)", pass,
          "lambda = " + fmt(lambda_band) + " sites (R^2 = " + fmt(r2) +
              "), gap-regime lambda = " + fmt(lambda_gap),
          0.0};
}

// 6. Zero-detuning closed form against the eigensolver at N = 400.
// The kappa = 0.5 point converges; at kappa <= 0.3 the remaining deviation is
// the genuine finite-size mismatch between the N = 400 ring and the
// thermodynamic-limit formula (the eigensolver agrees with the finite-N pole
// equation to machine precision), so this criterion documents the defect
// rather than hiding it.
CriterionResult criterion_6(const Ctx&) {
  bool pass = true;
  std::ostringstream detail;
  for (double kappa : {0.1, 0.2, 0.3, 0.5}) {
    HamiltonianMatrix H =
        build_hamiltonian(uniform_spec(400, Boundary::Periodic, 0.0, kappa, 200));
    Spectrum s = eigendecompose(H);
    Eigen::Index i_max = 0;
    s.eigenvalues.imag().maxCoeff(&i_max);
    const Complex pair = s.eigenvalues[i_max];
    const Complex formula = bs_energy_zero_detuning(kappa).first;
    const double dev = std::abs(pair - formula);
    if (dev > 1e-6 || std::abs(pair.real()) > 1e-8) pass = false;
    detail << "kappa=" << kappa << ": |diff|=" << fmt(dev) << " ";
  }
  const double y = bs_energy_zero_detuning(0.1).first.imag();
  const double golden = std::abs(fermi_golden_rate(0.0, 0.1));
  const double fgr_rel = std::abs(y - golden) / golden;
  if (fgr_rel > 0.01) pass = false;
  detail << "| FGR rel dev at kappa=0.1: " << fmt(fgr_rel);
  return {6, "zero-detuning closed form vs eigensolver (N = 400)", pass, detail.str(), 0.0};
}

// 7. Single-emitter dynamics on both sides of the EP.
CriterionResult criterion_7(const Ctx&) {
  const Eigen::VectorXd times = linspace(0.0, 200.0, 2001);

  HamiltonianMatrix Hb = build_hamiltonian(uniform_spec(400, Boundary::Periodic, 0.0, 0.3, 200));
  TrajectoryRecord broken = evolve_pure(Hb, emitter_excited(Hb.basis, 0), times);
  const double final_pop = broken.emitter_populations(times.size() - 1, 0);
  const bool pass_broken = std::abs(final_pop - 0.5) <= 1e-3;

  HamiltonianMatrix Hu =
      build_hamiltonian(uniform_spec(400, Boundary::Periodic, 2.1, 0.05, 200));
  TrajectoryRecord unbroken = evolve_pure(Hu, emitter_excited(Hu.basis, 0), times);
  double best_rise = 0.0;
  for (Eigen::Index i = 1; i + 1 < times.size(); ++i) {
    const double p = unbroken.emitter_populations(i, 0);
    if (p < unbroken.emitter_populations(i - 1, 0) &&
        p < unbroken.emitter_populations(i + 1, 0)) {
      double peak = p;
      for (Eigen::Index j = i + 1; j < times.size(); ++j)
        peak = std::max(peak, unbroken.emitter_populations(j, 0));
      best_rise = std::max(best_rise, peak - p);
    }
  }
  double average = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < times.size(); ++i)
    if (times[i] >= 100.0) {
      average += unbroken.emitter_populations(i, 0);
      ++count;
    }
  average /= count;
  const bool pass_unbroken = best_rise >= 0.02 && average > 0.05;

  return {7, "single-QE dynamics transition across the EP", pass_broken && pass_unbroken,
          "broken: |c_e(200)|^2 = " + fmt(final_pop) + "; unbroken: retrieval rise = " +
              fmt(best_rise) + ", late average = " + fmt(average),
          0.0};
}

// 8. Two-emitter transfer at zero detuning, odd and even separation.
CriterionResult criterion_8(const Ctx&) {
  auto two_qe = [&](int separation) {
    SystemSpec spec;
    spec.lattice.num_sites = 400;
    spec.emitters = {EmitterSpec{0.0, 0.3, 180, Sublattice::A},
                     EmitterSpec{0.0, 0.3, 180 + separation, Sublattice::A}};
    return build_hamiltonian(spec);
  };
  const Eigen::VectorXd times = linspace(0.0, 400.0, 4001);

  HamiltonianMatrix Hodd = two_qe(41);
  Spectrum s = eigendecompose(Hodd);
  const double im_max = s.eigenvalues.imag().maxCoeff();
  Complex e_sym = 0.0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.eigenvalues[i].imag() < im_max - 1e-6) continue;
    const Complex c1 = s.right_vectors(0, i), c2 = s.right_vectors(1, i);
    if (std::abs(c1 + c2) > std::abs(c1 - c2)) e_sym = s.eigenvalues[i];
  }
  TrajectoryRecord odd = evolve_pure(Hodd, emitter_excited(Hodd.basis, 0), times);
  TransferReport report = two_qe_transfer_metrics(odd, e_sym, transient_cutoff(s));
  const double expected = std::abs(e_sym.real());
  const bool pass_odd = report.oscillatory && report.fit_ok &&
                        std::abs(report.frequency - expected) <= 0.01 * expected &&
                        std::abs(report.late_time_sum - 0.5) <= 1e-3;

  HamiltonianMatrix Heven = two_qe(40);
  Spectrum se = eigendecompose(Heven);
  TrajectoryRecord even = evolve_pure(Heven, emitter_excited(Heven.basis, 0), times);
  TransferReport report_even = two_qe_transfer_metrics(even, 0.0, transient_cutoff(se));
  const bool pass_even = !report_even.oscillatory &&
                         std::abs(report_even.late_time_sum - 0.5) <= 1e-3;

  return {8, "two-QE transfer (n12 = 41 oscillates, n12 = 40 settles)", pass_odd && pass_even,
          "odd: freq = " + fmt(report.frequency) + " vs Re E_s = " + fmt(expected) +
              ", sum = " + fmt(report.late_time_sum) +
              "; even: sum = " + fmt(report_even.late_time_sum),
          0.0};
}

// 9. Lindblad no-jump oracle equals normalized H_eff evolution.
CriterionResult criterion_9(const Ctx&) {
  std::mt19937 rng(4242);
  auto uni = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  const Eigen::VectorXd times = linspace(0.0, 50.0, 251);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    SystemSpec spec;
    spec.lattice.num_sites = 16;
    spec.lattice.boundary = trial % 2 == 0 ? Boundary::Periodic : Boundary::Open;
    const double kappa = uni(0.05, 0.5);
    const int site = std::uniform_int_distribution<int>(0, 15)(rng);
    spec.emitters = {EmitterSpec{uni(-2.0, 2.0), kappa, site, Sublattice::A}};
    if (trial >= 7)
      spec.emitters.push_back(
          EmitterSpec{uni(-2.0, 2.0), kappa, (site + 7) % 16, Sublattice::A});

    HamiltonianMatrix H = build_hamiltonian(spec);
    InitialState psi0 = emitter_excited(H.basis, 0);
    TrajectoryRecord pure = evolve_pure(H, psi0, times);
    TrajectoryRecord oracle = evolve_nojump_oracle(spec, psi0, times);
    const double dev =
        (pure.emitter_populations - oracle.emitter_populations).cwiseAbs().maxCoeff();
    const double dev_ph = (pure.photon_weight - oracle.photon_weight).cwiseAbs().maxCoeff();
    worst = std::max({worst, dev, dev_ph});
  }
  return {9, "no-jump oracle equivalence (10 random N = 16 configs)", worst <= 1e-8,
          "max population deviation = " + fmt(worst), 0.0};
}

// 10. SSH third-order EP: location, coalesced state, chirality, dispersion.
CriterionResult criterion_10(const Ctx&) {
  const double delta = 0.25;
  const int cells = 60, j0 = 25;
  const double k3 = ssh_ep3_coupling(delta);  // = 1 exactly for delta = 0.25
  const SystemSpec base = ssh_spec(cells, delta, j0, 0.0, k3);

  EPEstimate est = find_ep(base, 0.8, 1.2, 3);
  const bool pass_location = std::abs(est.coupling - 1.0) <= 2e-3 && est.order == 3;

  HamiltonianMatrix H = build_hamiltonian(base);
  Spectrum s = eigendecompose(H);
  std::vector<BoundState> gap_states = extract_bound_states(s, H);
  Eigen::VectorXcd vds = vds_state(delta, j0, cells).to_state_vector(cells);
  vds /= vds.norm();
  double min_fidelity = 1.0;
  Complex mean = 0.0;
  for (const auto& st : gap_states) {
    min_fidelity =
        std::min(min_fidelity, std::abs(vds.dot(s.right_vectors.col(st.eigen_index))));
    mean += st.energy;
  }
  const bool pass_fidelity = gap_states.size() == 3 && min_fidelity >= 1.0 - 1e-6;
  mean /= static_cast<double>(std::max<size_t>(1, gap_states.size()));

  Eigen::VectorXcd coalesced = cluster_eigenvector(H.entries, mean);
  BoundState probe;
  probe.photon_profile = coalesced.tail(2 * cells);
  probe.anchor_site = attachment_site(base.lattice, base.emitters[0]);
  SublatticeWeights w = sublattice_weights(probe, base.lattice);
  const double right_fraction = w.w_right / (w.w_left + w.w_right);
  const bool pass_chirality = w.w_A <= 1e-10 && right_fraction >= 1.0 - 1e-8;

  // square-root dispersion of the approaching pair below the triple point
  std::vector<double> log_x, log_e;
  for (int i = 0; i < 10; ++i) {
    const double g = 1e-3 * std::pow(100.0, i / 9.0);  // kappa deficit, log-spaced
    SystemSpec spec = base;
    spec.emitters[0].coupling = k3 * (1.0 - g);
    HamiltonianMatrix Hg = build_hamiltonian(spec);
    Spectrum sg = eigendecompose(Hg);
    double e_plus = 0.0;
    for (const auto& st : extract_bound_states(sg, Hg))
      if (st.energy.real() > 1e-6) e_plus = std::max(e_plus, st.energy.real());
    log_x.push_back(std::log(k3 * g));
    log_e.push_back(std::log(e_plus));
  }
  const double n = log_x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < log_x.size(); ++i) {
    sx += log_x[i];
    sy += log_e[i];
    sxx += log_x[i] * log_x[i];
    sxy += log_x[i] * log_e[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const bool pass_slope = std::abs(slope - 0.5) <= 0.02;

  return {10, "SSH third-order EP (delta = 0.25)",
          pass_location && pass_fidelity && pass_chirality && pass_slope,
          "kappa* = " + fmt(est.coupling) + ", min vds fidelity = " + fmt(min_fidelity) +
              ", w_A = " + fmt(w.w_A) + ", right fraction = " + fmt(right_fraction) +
              ", dispersion exponent = " + fmt(slope),
          0.0};
}

// 11. The vds eigenvalue is pinned at zero for any coupling. At kappa = 1 the
// zero eigenvalue is defective (triple point), where dense-solver point
// estimates spread as eps^(1/3); the eigenvalue's presence is certified by
// the residual of the extracted null vector.
CriterionResult criterion_11(const Ctx&) {
  bool pass = true;
  std::ostringstream detail;
  for (double kappa : {0.2, 1.0, 1.7}) {
    HamiltonianMatrix H = build_hamiltonian(ssh_spec(60, 0.25, 25, 0.0, kappa));
    Eigen::VectorXcd mode = cluster_eigenvector(H.entries, Complex(0.0, 0.0));
    const double residual = (H.entries * mode).norm();
    if (residual > 1e-10) pass = false;
    detail << "kappa=" << kappa << ": residual=" << fmt(residual) << " ";
  }
  return {11, "vds coupling independence (zero eigenvalue)", pass, detail.str(), 0.0};
}

// 12. Phase diagram: numeric boundary tracks the closed form; band strip is
// broken for every kappa > 0; full suite stays within the time budget.
CriterionResult criterion_12(const Ctx& ctx) {
  SweepPlan plan;
  plan.base = uniform_spec(400, Boundary::Periodic, 2.1, 0.1, 200);
  plan.axes = {SweepAxis{SweepParameter::Detuning, 2.05, 2.45, 9},
               SweepAxis{SweepParameter::Kappa, 0.025, 0.5, 20}};
  plan.outputs = SweepOutputs{true, false, false, false};
  plan.jobs = ctx.jobs;
  SweepResult sweep = run_sweep(plan);

  const double cell = plan.axes[1].value(1) - plan.axes[1].value(0);
  double worst_boundary = 0.0;
  bool pass_boundary = true;
  for (int i = 0; i < plan.axes[0].count; ++i) {
    const double detuning = plan.axes[0].value(i);
    double numeric = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j < plan.axes[1].count; ++j) {
      const SweepPoint& p = sweep.points[static_cast<size_t>(i) * plan.axes[1].count + j];
      if (p.ok && p.phase == Phase::Broken) {
        numeric = p.coord2;
        break;
      }
    }
    const double analytic = ep_coupling(detuning);
    if (std::isnan(numeric)) {
      pass_boundary = false;
      continue;
    }
    worst_boundary = std::max(worst_boundary, std::abs(numeric - analytic));
    if (std::abs(numeric - analytic) > cell) pass_boundary = false;
  }

  bool pass_band = true;
  for (double detuning : {-1.9, -1.2, -0.5, 0.5, 1.2, 1.9})
    for (double kappa : {0.025, 0.1, 0.3}) {
      Spectrum s = eigendecompose(
          build_hamiltonian(uniform_spec(400, Boundary::Periodic, detuning, kappa, 200)));
      if (s.phase != Phase::Broken) pass_band = false;
    }
  Spectrum control = eigendecompose(
      build_hamiltonian(uniform_spec(400, Boundary::Periodic, 1.0, 0.0, 200)));
  const bool pass_control = control.phase == Phase::Unbroken;

  double total = std::chrono::duration<double>(Clock::now() - ctx.suite_start).count();
  const bool pass_budget = !ctx.full_run || total <= 600.0;

  return {12, "phase diagram boundary + band strip + runtime budget",
          pass_boundary && pass_band && pass_control && pass_budget,
          "worst boundary offset = " + fmt(worst_boundary) + " J (cell " + fmt(cell) +
              "), band strip broken = " + (pass_band ? "yes" : "no") +
              (ctx.full_run ? ", suite wall clock = " + fmt(total) + " s (limit 600)" : ""),
          0.0};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& log, int jobs,
                                            const std::vector<int>& only) {
  using Fn = std::function<CriterionResult(const Ctx&)>;
  const std::pair<int, Fn> table[] = {
      {1, criterion_1}, {2, criterion_2},  {3, criterion_3},  {4, criterion_4},
      {5, criterion_5}, {6, criterion_6},  {7, criterion_7},  {8, criterion_8},
      {9, criterion_9}, {10, criterion_10}, {11, criterion_11}, {12, criterion_12}};

  Ctx ctx;
  ctx.jobs = jobs;
  ctx.suite_start = Clock::now();
  ctx.full_run = only.empty();

  std::vector<CriterionResult> results;
  for (const auto& [id, fn] : table) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = fn(ctx);
    } catch (const std::exception& e) {
      r = CriterionResult{id, "criterion " + std::to_string(id), false,
                          std::string("exception: ") + e.what(), 0.0};
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    results.push_back(r);
    log << (r.pass ? "[PASS] " : "[FAIL] ") << (r.id < 10 ? "0" : "") << r.id << " "
        << r.name << "  --  " << r.detail << "  (" << fmt(r.seconds) << " s)\n";
    log.flush();
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace wqed
