#include "wqed/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "wqed/csv.hpp"

namespace wqed {

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

void pair_conjugates(Spectrum& s) {
  const Eigen::Index D = s.eigenvalues.size();
  s.conj_partner.assign(D, -1);
  std::vector<Eigen::Index> order(D);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return std::abs(s.eigenvalues[i].imag()) > std::abs(s.eigenvalues[j].imag());
  });
  std::vector<char> used(D, 0);
  for (Eigen::Index i : order) {
    if (used[i] || std::abs(s.eigenvalues[i].imag()) <= s.eps_real) continue;
    const Complex target = std::conj(s.eigenvalues[i]);
    Eigen::Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < D; ++j) {
      if (used[j] || j == i) continue;
      const double d = std::abs(s.eigenvalues[j] - target);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best >= 0) {
      s.conj_partner[i] = best;
      s.conj_partner[best] = i;
      used[i] = used[best] = 1;
    }
  }
}

}  // namespace

Spectrum eigendecompose(const HamiltonianMatrix& H, const SpectralOptions& opt) {
  const Eigen::MatrixXcd& A = H.entries;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, true);
  if (es.info() != Eigen::Success) {
    std::ostringstream err;
    err << "eigendecompose: solver did not converge (dim " << A.rows() << ", |H|_max "
        << max_abs(A) << ")";
    throw std::runtime_error(err.str());
  }

  Spectrum s;
  s.eigenvalues = es.eigenvalues();
  s.right_vectors = es.eigenvectors();

  // In this basis H is complex symmetric, so the left eigenvectors are the
  // conjugated right ones. Keep a generic fallback for externally supplied
  // matrices.
  const double asym = max_abs(A - A.transpose());
  if (asym <= 1e-12 * std::max(1.0, max_abs(A))) {
    s.left_vectors = s.right_vectors.conjugate();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> esl(A.adjoint(), true);
    if (esl.info() != Eigen::Success)
      throw std::runtime_error("eigendecompose: left-vector solve did not converge");
    const Eigen::Index D = A.rows();
    s.left_vectors.resize(D, D);
    std::vector<char> used(D, 0);
    for (Eigen::Index i = 0; i < D; ++i) {
      Eigen::Index best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < D; ++j) {
        if (used[j]) continue;
        const double d = std::abs(std::conj(esl.eigenvalues()[j]) - s.eigenvalues[i]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      used[best] = 1;
      s.left_vectors.col(i) = esl.eigenvectors().col(best);
    }
  }

  const double radius = s.eigenvalues.cwiseAbs().maxCoeff();
  s.eps_real = opt.eps_real_scale * std::max(1.0, radius);
  pair_conjugates(s);
  s.phase = classify_phase(s);
  return s;
}

Phase classify_phase(const Spectrum& s) {
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    if (std::abs(s.eigenvalues[i].imag()) > s.eps_real) return Phase::Broken;
  return Phase::Unbroken;
}

LocalizationFit localization_length(const Eigen::VectorXcd& profile, int anchor_site,
                                    Boundary boundary) {
  LocalizationFit fit;
  const int N = static_cast<int>(profile.size());
  if (N == 0) return fit;
  const double amax = profile.cwiseAbs().maxCoeff();
  if (amax <= 0.0) return fit;

  const double floor = 1e-8 * amax;
  const double cap = 1e-1 * amax;
  const int d_max = static_cast<int>(0.33 * N);

  std::vector<double> xs, ys;
  for (int n = 0; n < N; ++n) {
    const double a = std::abs(profile[n]);
    if (a < floor || a > cap) continue;
    int d = std::abs(n - anchor_site);
    if (boundary == Boundary::Periodic) d = std::min(d, N - d);
    if (d <= 3 || d > d_max) continue;
    xs.push_back(d);
    ys.push_back(std::log(a));
  }
  if (xs.size() < 6) return fit;

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = n * sxx - sx * sx;
  if (det <= 0.0) return fit;
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / n;
  if (!(slope < 0.0)) return fit;

  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (slope * xs[i] + intercept);
    ss_res += r * r;
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }

  fit.lambda = -1.0 / slope;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  fit.estimable = true;
  return fit;
}

std::vector<BoundState> extract_bound_states(const Spectrum& s, const HamiltonianMatrix& H,
                                             const SpectralOptions& opt) {
  const int M = H.basis.num_emitters;
  const int P = H.basis.num_photon_sites;
  const double J = H.spec.lattice.J;
  // Unperturbed lattice levels never leave the ideal bands, so any real
  // eigenvalue beyond them by more than a few reality tolerances is coupling-
  // induced. A margin on the 1/N level-spacing scale instead would swallow
  // weakly bound states hugging a band edge.
  const double eps_band = opt.band_margin_factor * s.eps_real;

  std::vector<BandInterval> bands = band_edges(H.spec.lattice);
  for (auto& b : bands) {
    b.lo = b.lo / J - eps_band;
    b.hi = b.hi / J + eps_band;
  }

  std::vector<BoundState> out;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const Complex e = s.eigenvalues[i];
    const bool complex_energy = std::abs(e.imag()) > s.eps_real;
    bool in_band = false;
    for (const auto& b : bands)
      if (e.real() >= b.lo && e.real() <= b.hi) in_band = true;
    if (!complex_energy && in_band) continue;

    BoundState st;
    st.energy = e;
    st.eigen_index = i;
    st.emitter_amplitudes = s.right_vectors.col(i).head(M);
    st.photon_profile = s.right_vectors.col(i).tail(P);
    st.emitter_population = st.emitter_amplitudes.squaredNorm();

    int dominant = 0;
    for (int m = 1; m < M; ++m)
      if (std::abs(st.emitter_amplitudes[m]) > std::abs(st.emitter_amplitudes[dominant]))
        dominant = m;
    st.anchor_site = attachment_site(H.spec.lattice, H.spec.emitters[dominant]);

    LocalizationFit fit =
        localization_length(st.photon_profile, st.anchor_site, H.spec.lattice.boundary);
    if (fit.estimable) {
      st.localization_length = fit.lambda;
      st.fit_r_squared = fit.r_squared;
    }
    out.push_back(std::move(st));
  }

  std::sort(out.begin(), out.end(), [](const BoundState& a, const BoundState& b) {
    if (a.energy.real() != b.energy.real()) return a.energy.real() < b.energy.real();
    return a.energy.imag() < b.energy.imag();
  });
  return out;
}

double phase_rigidity(const Spectrum& s, Eigen::Index i) {
  const Eigen::VectorXcd& l = s.left_vectors.col(i);
  const Eigen::VectorXcd& r = s.right_vectors.col(i);
  return std::abs(l.dot(r)) / (l.norm() * r.norm());
}

Eigen::VectorXcd cluster_eigenvector(const Eigen::MatrixXcd& H, Complex cluster_mean) {
  const Eigen::Index D = H.rows();
  Complex shift = cluster_mean;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Eigen::MatrixXcd shifted = H - shift * Eigen::MatrixXcd::Identity(D, D);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    Eigen::VectorXcd v(D);
    for (Eigen::Index i = 0; i < D; ++i)
      v[i] = Complex(std::cos(0.7 * static_cast<double>(i) + 0.3),
                     std::sin(0.4 * static_cast<double>(i) + 0.1));
    v.normalize();
    bool ok = true;
    for (int it = 0; it < 6; ++it) {
      Eigen::VectorXcd w = lu.solve(v);
      if (!w.allFinite() || w.norm() == 0.0) {
        ok = false;
        break;
      }
      v = w.normalized();
    }
    if (ok) return v;
    shift += Complex(1e-13, 1e-13) * std::max(1.0, std::abs(shift));
  }
  throw std::runtime_error("cluster_eigenvector: inverse iteration failed");
}

namespace {

SystemSpec with_coupling(SystemSpec s, double kappa) {
  for (auto& e : s.emitters) e.coupling = kappa;
  return s;
}

std::vector<Complex> bound_energies(const Spectrum& s, const HamiltonianMatrix& H,
                                    const SpectralOptions& opt) {
  std::vector<Complex> es;
  for (const auto& st : extract_bound_states(s, H, opt)) es.push_back(st.energy);
  return es;
}

}  // namespace

EPEstimate find_ep(const SystemSpec& spec_template, double kappa_lo, double kappa_hi,
                   int expected_order, const SpectralOptions& opt) {
  if (!(kappa_lo >= 0.0) || !(kappa_hi > kappa_lo))
    throw std::invalid_argument("find_ep: need 0 <= kappa_lo < kappa_hi");

  auto decompose = [&](double k) {
    return eigendecompose(build_hamiltonian(with_coupling(spec_template, k)), opt);
  };
  auto max_im = [](const Spectrum& s) { return s.eigenvalues.imag().maxCoeff(); };

  if (decompose(kappa_lo).phase == Phase::Broken)
    throw std::runtime_error("find_ep: no onset in range (already broken at kappa_lo)");
  if (decompose(kappa_hi).phase == Phase::Unbroken)
    throw std::runtime_error("find_ep: no onset in range (still unbroken at kappa_hi)");

  double a = kappa_lo, b = kappa_hi;
  for (int it = 0; it < 12; ++it) {
    const double mid = 0.5 * (a + b);
    (decompose(mid).phase == Phase::Broken ? b : a) = mid;
  }

  // Just above the onset Im E grows like sqrt(kappa - kappa*), so
  // max|Im E|^2 is linear in kappa and extrapolates cleanly to zero.
  const double h = std::max(b - a, 2e-4);
  const int n_grid = 8;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n_grid; ++i) {
    const double k = b + i * h;
    const double y = std::pow(max_im(decompose(k)), 2);
    sx += k;
    sy += y;
    sxx += k * k;
    sxy += k * y;
  }
  const double det = n_grid * sxx - sx * sx;
  const double slope = (n_grid * sxy - sx * sy) / det;
  double kappa_star = 0.5 * (a + b);
  EPMethod method = EPMethod::ImSquaredExtrapolation;
  if (slope > 0.0) {
    const double intercept = (sy - slope * sx) / n_grid;
    const double extrapolated = -intercept / slope;
    if (extrapolated > kappa_lo && extrapolated < kappa_hi) kappa_star = extrapolated;
  }

  // Refine on the phase-rigidity minimum of the coalescing bound modes.
  auto min_rigidity = [&](double k) {
    HamiltonianMatrix H = build_hamiltonian(with_coupling(spec_template, k));
    Spectrum s = eigendecompose(H, opt);
    double r = 1.0;
    for (const auto& st : extract_bound_states(s, H, opt))
      r = std::min(r, phase_rigidity(s, st.eigen_index));
    return r;
  };
  {
    double lo = std::max(kappa_lo, kappa_star - 2.0 * h);
    double hi = std::min(kappa_hi, kappa_star + 2.0 * h);
    if (hi > lo) {
      const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = hi - inv_phi * (hi - lo);
      double x2 = lo + inv_phi * (hi - lo);
      double f1 = min_rigidity(x1);
      double f2 = min_rigidity(x2);
      for (int it = 0; it < 10; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - inv_phi * (hi - lo);
          f1 = min_rigidity(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + inv_phi * (hi - lo);
          f2 = min_rigidity(x2);
        }
      }
      const double refined = f1 < f2 ? x1 : x2;
      if (std::min(f1, f2) < 0.5) {
        kappa_star = refined;
        method = EPMethod::RigidityMinimum;
      }
    }
  }

  // Order from eigenvalue clustering at kappa*. The coalescence energy is
  // anchored on the complex pair just above the onset.
  Spectrum s_above = decompose(b + h);
  Eigen::Index i_max = 0;
  s_above.eigenvalues.imag().maxCoeff(&i_max);
  const double center0 = s_above.eigenvalues[i_max].real();

  HamiltonianMatrix H_star = build_hamiltonian(with_coupling(spec_template, kappa_star));
  Spectrum s_star = eigendecompose(H_star, opt);
  std::vector<Complex> bound = bound_energies(s_star, H_star, opt);

  const double r3 = 10.0 * std::cbrt(h);
  const double r2 = 10.0 * std::sqrt(h);
  Complex mean = 0.0;
  int count = 0;
  for (Complex e : bound)
    if (std::abs(e - Complex(center0, 0.0)) <= r3) {
      mean += e;
      ++count;
    }
  if (count == 0) throw std::runtime_error("find_ep: no bound cluster at kappa*");
  mean /= static_cast<double>(count);

  std::vector<Complex> cluster3, cluster2;
  for (Complex e : bound) {
    if (std::abs(e - mean) <= r3) cluster3.push_back(e);
    if (std::abs(e - mean) <= r2) cluster2.push_back(e);
  }

  int order = 0;
  std::vector<Complex> cluster;
  if (cluster3.size() >= 3) {
    order = 3;
    cluster = cluster3;
  } else if (cluster2.size() >= 2) {
    order = 2;
    cluster = cluster2;
  }
  auto describe = [](const std::vector<Complex>& es) {
    std::ostringstream os;
    for (Complex e : es) os << " (" << e.real() << "," << e.imag() << ")";
    return os.str();
  };
  if (order == 0 || (order == 3 && cluster3.size() > 3) ||
      (order == 2 && cluster2.size() > 2)) {
    throw std::runtime_error("find_ep: ambiguous eigenvalue clustering at kappa* =" +
                             std::to_string(kappa_star) + "; cluster:" + describe(cluster));
  }
  if (order != expected_order) {
    throw std::runtime_error("find_ep: clustering gives order " + std::to_string(order) +
                             ", expected " + std::to_string(expected_order) + "; cluster:" +
                             describe(cluster));
  }

  Complex energy = 0.0;
  for (Complex e : cluster) energy += e;
  energy /= static_cast<double>(cluster.size());
  double residual = 0.0;
  for (size_t i = 0; i < cluster.size(); ++i)
    for (size_t j = i + 1; j < cluster.size(); ++j)
      residual = std::max(residual, std::abs(cluster[i] - cluster[j]));

  return EPEstimate{kappa_star, energy, order, residual, method};
}

SublatticeWeights sublattice_weights(const BoundState& state, const LatticeSpec& lattice) {
  if (lattice.kind != LatticeKind::SSH)
    throw std::invalid_argument("sublattice_weights: SSH lattice required");
  SublatticeWeights w;
  for (Eigen::Index sflat = 0; sflat < state.photon_profile.size(); ++sflat) {
    const double p = std::norm(state.photon_profile[sflat]);
    (sflat % 2 == 0 ? w.w_A : w.w_B) += p;
    (sflat <= state.anchor_site ? w.w_left : w.w_right) += p;
  }
  return w;
}

namespace {

constexpr const char* kCsvHeader =
    "re_E,im_E,emitter_population,lambda,r_squared,phase_rigidity,w_A,w_B,w_left,w_right\n";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void csv_row(std::ostream& os, const double (&cols)[10]) {
  for (int i = 0; i < 10; ++i) os << csv_number(cols[i]) << (i < 9 ? "," : "\n");
}

}  // namespace

void write_spectrum_csv(std::ostream& os, const Spectrum& s, const HamiltonianMatrix& H) {
  const int M = H.basis.num_emitters;
  const bool ssh = H.spec.lattice.kind == LatticeKind::SSH;
  os << kCsvHeader;
  std::vector<Eigen::Index> order(s.eigenvalues.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    const Complex a = s.eigenvalues[i], b = s.eigenvalues[j];
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  for (Eigen::Index i : order) {
    const Complex e = s.eigenvalues[i];
    double w_A = kNaN, w_B = kNaN;
    if (ssh) {
      w_A = w_B = 0.0;
      const auto photon = s.right_vectors.col(i).tail(H.basis.num_photon_sites);
      for (Eigen::Index n = 0; n < photon.size(); ++n)
        (n % 2 == 0 ? w_A : w_B) += std::norm(photon[n]);
    }
    const double cols[10] = {e.real(),
                             e.imag(),
                             s.right_vectors.col(i).head(M).squaredNorm(),
                             kNaN,
                             kNaN,
                             phase_rigidity(s, i),
                             w_A,
                             w_B,
                             kNaN,
                             kNaN};
    csv_row(os, cols);
  }
}

void write_bound_states_csv(std::ostream& os, const std::vector<BoundState>& states,
                            const Spectrum& s, const LatticeSpec& lattice) {
  const bool ssh = lattice.kind == LatticeKind::SSH;
  os << kCsvHeader;
  for (const auto& st : states) {
    double w_A = kNaN, w_B = kNaN, w_left = kNaN, w_right = kNaN;
    if (ssh) {
      const SublatticeWeights w = sublattice_weights(st, lattice);
      w_A = w.w_A;
      w_B = w.w_B;
      w_left = w.w_left;
      w_right = w.w_right;
    }
    const double cols[10] = {st.energy.real(),
                             st.energy.imag(),
                             st.emitter_population,
                             st.localization_length,
                             st.fit_r_squared,
                             phase_rigidity(s, st.eigen_index),
                             w_A,
                             w_B,
                             w_left,
                             w_right};
    csv_row(os, cols);
  }
}

}  // namespace wqed
