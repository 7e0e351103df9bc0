#include "wqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "wqed/csv.hpp"

namespace wqed {

namespace {

InitialState make_state(InitialState::Kind kind, Eigen::VectorXcd v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw std::invalid_argument("initial state: zero vector");
  v /= n;
  return InitialState{kind, std::move(v)};
}

}  // namespace

InitialState emitter_excited(const BasisIndex& basis, int m) {
  if (m < 0 || m >= basis.num_emitters)
    throw std::invalid_argument("initial state: emitter index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dimension());
  v[basis.emitter(m)] = 1.0;
  return make_state(InitialState::Kind::SingleEmitterExcited, std::move(v));
}

InitialState two_emitter_superposition(const BasisIndex& basis, Complex a0, Complex a1) {
  if (basis.num_emitters < 2)
    throw std::invalid_argument("initial state: need at least two emitters");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dimension());
  v[basis.emitter(0)] = a0;
  v[basis.emitter(1)] = a1;
  return make_state(InitialState::Kind::TwoEmitterSuperposition, std::move(v));
}

InitialState photon_at_site(const BasisIndex& basis, int flat_site) {
  if (flat_site < 0 || flat_site >= basis.num_photon_sites)
    throw std::invalid_argument("initial state: photon site out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dimension());
  v[basis.photon(flat_site)] = 1.0;
  return make_state(InitialState::Kind::PhotonAtSite, std::move(v));
}

InitialState custom_state(Eigen::VectorXcd v) {
  return make_state(InitialState::Kind::Custom, std::move(v));
}

namespace {

void check_times(const Eigen::VectorXd& times) {
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
      throw std::invalid_argument("evolve: times must be sorted and nonnegative");
  }
}

void record_state(TrajectoryRecord& record, Eigen::Index row, const Eigen::VectorXcd& state,
                  int num_emitters) {
  const Eigen::VectorXcd psi = state / state.norm();
  for (int m = 0; m < num_emitters; ++m)
    record.emitter_populations(row, m) = std::norm(psi[m]);
  record.photon_weight[row] = psi.tail(psi.size() - num_emitters).squaredNorm();
  if (!std::isfinite(record.photon_weight[row]))
    throw std::runtime_error("evolve: state became non-finite");
}

// Cheap condition estimate from the LU pivots; only used to decide between
// the spectral propagator and the expm fallback.
double condition_estimate(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu) {
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  const double lo = diag.minCoeff();
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return diag.maxCoeff() / lo;
}

}  // namespace

TrajectoryRecord evolve_pure(const HamiltonianMatrix& H, const InitialState& psi0,
                             const Eigen::VectorXd& times, const EvolveOptions& opt) {
  check_times(times);
  if (psi0.vector.size() != H.dim())
    throw std::invalid_argument("evolve_pure: state dimension mismatch");
  const int M = H.basis.num_emitters;

  TrajectoryRecord record;
  record.times = times;
  record.emitter_populations.resize(times.size(), M);
  record.photon_weight.resize(times.size());

  std::vector<double> snaps = opt.snapshot_times;
  std::sort(snaps.begin(), snaps.end());

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H.entries, true);
  bool spectral_ok = es.info() == Eigen::Success;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  if (spectral_ok) {
    lu.compute(es.eigenvectors());
    spectral_ok = condition_estimate(lu) <= opt.condition_limit;
  }

  if (spectral_ok) {
    const Eigen::VectorXcd w = lu.solve(psi0.vector);
    const Eigen::VectorXcd& ev = es.eigenvalues();
    const double im_max = ev.imag().maxCoeff();
    auto state_at = [&](double t) -> Eigen::VectorXcd {
      // Scaled by exp(-im_max t) so growing modes cannot overflow; the global
      // factor drops out after normalization.
      Eigen::VectorXcd phases(ev.size());
      for (Eigen::Index j = 0; j < ev.size(); ++j)
        phases[j] = std::exp(Complex(0.0, -1.0) * ev[j] * t - im_max * t) * w[j];
      return es.eigenvectors() * phases;
    };
    for (Eigen::Index i = 0; i < times.size(); ++i)
      record_state(record, i, state_at(times[i]), M);
    for (double t : snaps) {
      Eigen::VectorXcd s = state_at(t);
      record.snapshots.emplace_back(t, s / s.norm());
    }
    return record;
  }

  // expm fallback: march over the merged time list, renormalizing as we go.
  std::vector<std::pair<double, int>> schedule;  // (time, kind): 0 output, 1 snapshot
  for (Eigen::Index i = 0; i < times.size(); ++i) schedule.push_back({times[i], 0});
  for (double t : snaps) schedule.push_back({t, 1});
  std::stable_sort(schedule.begin(), schedule.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  const double h_norm = H.entries.cwiseAbs().rowwise().sum().maxCoeff();
  std::map<double, Eigen::MatrixXcd> propagators;
  auto step = [&](Eigen::VectorXcd& psi, double dt) {
    if (dt == 0.0) return;
    int pieces = std::max(1, static_cast<int>(std::ceil(h_norm * dt / 20.0)));
    const double piece = dt / pieces;
    auto it = propagators.find(piece);
    if (it == propagators.end()) {
      Eigen::MatrixXcd gen = Complex(0.0, -piece) * H.entries;
      it = propagators.emplace(piece, gen.exp()).first;
    }
    for (int p = 0; p < pieces; ++p) {
      psi = it->second * psi;
      psi /= psi.norm();
    }
  };

  Eigen::VectorXcd psi = psi0.vector;
  double t_now = 0.0;
  Eigen::Index out_row = 0;
  for (const auto& [t, kind] : schedule) {
    step(psi, t - t_now);
    t_now = t;
    if (kind == 0)
      record_state(record, out_row++, psi, M);
    else
      record.snapshots.emplace_back(t, psi / psi.norm());
  }
  return record;
}

TrajectoryRecord evolve_nojump_oracle(const SystemSpec& spec, const InitialState& psi0,
                                      const Eigen::VectorXd& times) {
  check_times(times);
  if (spec.dimension() > 64)
    throw std::invalid_argument("evolve_nojump_oracle: dimension > 64");
  HamiltonianMatrix H = build_hamiltonian(spec);
  if (psi0.vector.size() != H.dim())
    throw std::invalid_argument("evolve_nojump_oracle: state dimension mismatch");
  const int M = H.basis.num_emitters;
  const double kappa = spec.emitters[0].coupling;

  // Single excitation everywhere, so the background loss is -i*kappa*identity.
  Eigen::MatrixXcd H_nj =
      H.entries - Complex(0.0, kappa) * Eigen::MatrixXcd::Identity(H.dim(), H.dim());

  TrajectoryRecord record;
  record.times = times;
  record.emitter_populations.resize(times.size(), M);
  record.photon_weight.resize(times.size());
  record.trace.resize(times.size());

  Eigen::MatrixXcd rho = psi0.vector * psi0.vector.adjoint();
  double log_trace = 0.0;
  std::map<double, Eigen::MatrixXcd> propagators;
  double t_now = 0.0;
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    const double dt = times[i] - t_now;
    if (dt > 0.0) {
      auto it = propagators.find(dt);
      if (it == propagators.end()) {
        Eigen::MatrixXcd gen = Complex(0.0, -dt) * H_nj;
        it = propagators.emplace(dt, gen.exp()).first;
      }
      rho = it->second * rho * it->second.adjoint();
      const double tr = rho.trace().real();
      if (!(tr > 0.0) || !std::isfinite(tr))
        throw std::runtime_error("evolve_nojump_oracle: trace collapsed");
      log_trace += std::log(tr);
      rho /= tr;
      t_now = times[i];
    }
    const double tr_now = rho.trace().real();
    for (int m = 0; m < M; ++m)
      record.emitter_populations(i, m) = rho(m, m).real() / tr_now;
    double photon = 0.0;
    for (Eigen::Index n = M; n < H.dim(); ++n) photon += rho(n, n).real();
    record.photon_weight[i] = photon / tr_now;
    record.trace[i] = std::exp(log_trace);
  }
  return record;
}

double transient_cutoff(const Spectrum& s) {
  const double im_max = s.eigenvalues.imag().maxCoeff();
  double im_next = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double im = s.eigenvalues[i].imag();
    if (im < im_max - 1e-6 && im > im_next) im_next = im;
  }
  const double gap = im_max - im_next;
  if (!(gap > 0.0) || !std::isfinite(gap)) return std::numeric_limits<double>::infinity();
  return 5.0 / gap;
}

TransferReport two_qe_transfer_metrics(const TrajectoryRecord& record, Complex symmetric_energy,
                                       double t_transient) {
  if (record.emitter_populations.cols() != 2)
    throw std::invalid_argument("two_qe_transfer_metrics: record must have two emitters");
  (void)symmetric_energy;  // carried by the caller's report; the fit is independent of it

  TransferReport report;
  report.t_transient = t_transient;

  std::vector<double> t, y1, sum;
  for (Eigen::Index i = 0; i < record.times.size(); ++i) {
    if (record.times[i] < t_transient) continue;
    t.push_back(record.times[i]);
    y1.push_back(record.emitter_populations(i, 0));
    sum.push_back(record.emitter_populations(i, 0) + record.emitter_populations(i, 1));
  }
  if (t.size() < 32) return report;

  report.late_time_sum = std::accumulate(sum.begin(), sum.end(), 0.0) / sum.size();

  // Persistent exchange keeps its amplitude into the tail of the window; a
  // settling system only carries the decaying remnant of the transient there.
  const size_t tail = y1.size() - y1.size() / 3;
  const double tail_max = *std::max_element(y1.begin() + tail, y1.end());
  const double tail_min = *std::min_element(y1.begin() + tail, y1.end());
  const double amplitude = 0.5 * (tail_max - tail_min);
  if (amplitude < 1e-3) {
    report.oscillatory = false;  // populations settled: single dominant state
    return report;
  }
  report.oscillatory = true;

  // Base frequency from mean crossings, then least-squares refinement of
  // y1 ~ c0 + a cos(w t) + b sin(w t); populations oscillate at w = 2 * freq.
  const double mean = std::accumulate(y1.begin(), y1.end(), 0.0) / y1.size();
  int crossings = 0;
  for (size_t i = 1; i < y1.size(); ++i)
    if ((y1[i] - mean) * (y1[i - 1] - mean) < 0.0) ++crossings;
  const double span = t.back() - t.front();
  if (crossings == 0 || span <= 0.0) return report;
  const double w_est = kPi * crossings / span;

  auto ssr_at = [&](double w) {
    // normal equations for (c0, a, b)
    double s_c = 0, s_s = 0, s_cc = 0, s_ss = 0, s_cs = 0, s_y = 0, s_yc = 0, s_ys = 0;
    const double n = static_cast<double>(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
      const double c = std::cos(w * t[i]), s = std::sin(w * t[i]);
      s_c += c;
      s_s += s;
      s_cc += c * c;
      s_ss += s * s;
      s_cs += c * s;
      s_y += y1[i];
      s_yc += y1[i] * c;
      s_ys += y1[i] * s;
    }
    Eigen::Matrix3d A;
    A << n, s_c, s_s, s_c, s_cc, s_cs, s_s, s_cs, s_ss;
    Eigen::Vector3d rhs(s_y, s_yc, s_ys);
    Eigen::Vector3d coeff = A.fullPivLu().solve(rhs);
    double ssr = 0;
    for (size_t i = 0; i < t.size(); ++i) {
      const double fitv =
          coeff[0] + coeff[1] * std::cos(w * t[i]) + coeff[2] * std::sin(w * t[i]);
      ssr += (y1[i] - fitv) * (y1[i] - fitv);
    }
    return ssr;
  };

  double best_w = w_est, best_ssr = ssr_at(w_est);
  for (int pass = 0; pass < 2; ++pass) {
    const double width = pass == 0 ? 0.5 : 0.02;
    const int steps = pass == 0 ? 201 : 201;
    const double center = best_w;
    for (int i = 0; i < steps; ++i) {
      const double w = center * (1.0 - width + 2.0 * width * i / (steps - 1));
      const double ssr = ssr_at(w);
      if (ssr < best_ssr) {
        best_ssr = ssr;
        best_w = w;
      }
    }
  }

  report.frequency = best_w / 2.0;
  report.residual = std::sqrt(best_ssr / t.size());
  report.fit_ok = report.residual <= 0.2 * amplitude;
  return report;
}

DominantStates long_time_dominant_state(const HamiltonianMatrix& H, const SpectralOptions& opt) {
  Spectrum s = eigendecompose(H, opt);
  if (s.phase == Phase::Unbroken)
    throw std::runtime_error("long_time_dominant_state: unbroken phase, no dominant growing mode");
  const double im_max = s.eigenvalues.imag().maxCoeff();
  DominantStates out;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    if (s.eigenvalues[i].imag() >= im_max - 1e-6) {
      out.indices.push_back(i);
      out.energies.push_back(s.eigenvalues[i]);
    }
  out.states.resize(H.dim(), static_cast<Eigen::Index>(out.indices.size()));
  for (size_t j = 0; j < out.indices.size(); ++j)
    out.states.col(static_cast<Eigen::Index>(j)) = s.right_vectors.col(out.indices[j]);
  return out;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record) {
  const Eigen::Index M = record.emitter_populations.cols();
  os << "t";
  for (Eigen::Index m = 0; m < M; ++m) os << ",pop_e_" << m;
  os << ",photon_weight\n";
  for (Eigen::Index i = 0; i < record.times.size(); ++i) {
    os << csv_number(record.times[i]);
    for (Eigen::Index m = 0; m < M; ++m)
      os << "," << csv_number(record.emitter_populations(i, m));
    os << "," << csv_number(record.photon_weight[i]) << "\n";
  }
}

void write_snapshot_csv(std::ostream& os, const Eigen::VectorXcd& state, const BasisIndex& basis,
                        const LatticeSpec& lattice) {
  os << "site_index,sublattice,re_c,im_c\n";
  for (int n = 0; n < basis.num_photon_sites; ++n) {
    const Complex c = state[basis.photon(n)];
    const char* sub = lattice.kind == LatticeKind::SSH ? (n % 2 == 0 ? "A" : "B") : "-";
    os << n << "," << sub << "," << csv_number(c.real()) << "," << csv_number(c.imag()) << "\n";
  }
}

}  // namespace wqed
