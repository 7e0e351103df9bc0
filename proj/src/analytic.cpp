#include "wqed/analytic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wqed {

namespace {

// sqrt(E-2)*sqrt(E+2) with principal square roots: cut exactly on [-2, 2],
// asymptotically ~ E, so -kappa^2/g has the retarded large-E behaviour.
Complex branch_sqrt(Complex energy) {
  return std::sqrt(energy - 2.0) * std::sqrt(energy + 2.0);
}

double distance_to_band_cut(Complex energy) {
  if (std::abs(energy.real()) <= 2.0) return std::abs(energy.imag());
  return std::min(std::abs(energy - Complex(2.0, 0.0)),
                  std::abs(energy + Complex(2.0, 0.0)));
}

}  // namespace

Complex self_energy(const PoleProblem& problem, Complex energy) {
  const double k2 = problem.coupling * problem.coupling;
  if (problem.finite_num_sites) {
    const int N = *problem.finite_num_sites;
    if (N < 4) throw std::invalid_argument("self_energy: finite_num_sites must be >= 4");
    Complex sum = 0.0;
    for (int q = 0; q < N; ++q) {
      const double w = dispersion(1.0, 2.0 * kPi * q / N);
      if (std::abs(energy - w) < 1e-12)
        throw std::domain_error("self_energy: E within 1e-12 of a lattice mode");
      sum += 1.0 / (energy - w);
    }
    return -(k2 / N) * sum;
  }
  if (distance_to_band_cut(energy) < 1e-12)
    throw std::domain_error("self_energy: E within 1e-12 of the band cut");
  return -k2 / branch_sqrt(energy);
}

std::vector<Complex> pole_roots(const PoleProblem& problem) {
  if (problem.finite_num_sites)
    throw std::invalid_argument("pole_roots: thermodynamic limit only");
  const double a = problem.detuning;
  const double k2 = problem.coupling * problem.coupling;
  const double k4 = k2 * k2;

  // (E-a)^2 (E^2-4) = kappa^4, expanded to a monic quartic.
  const double c3 = -2.0 * a;
  const double c2 = a * a - 4.0;
  const double c1 = 8.0 * a;
  const double c0 = -(4.0 * a * a + k4);
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(0, 3) = -c0;
  companion(1, 3) = -c1;
  companion(2, 3) = -c2;
  companion(3, 3) = -c3;
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> es(companion, false);

  auto branch_residual = [&](Complex e) { return e - a + k2 / branch_sqrt(e); };
  auto branch_slope = [&](Complex e) {
    const Complex g = branch_sqrt(e);
    return Complex(1.0, 0.0) - k2 * e / (g * g * g);
  };
  // Evaluating sqrt(E^2-4) next to the band edge cancels catastrophically;
  // the acceptance threshold carries that irreducible noise floor.
  auto noise_floor = [&](Complex e) {
    const double g2 = std::abs(e * e - 4.0);
    const double sigma = g2 > 0.0 ? k2 / std::sqrt(g2) : 0.0;
    return 1e-10 + 64.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(e) + sigma * (1.0 + std::norm(e) / std::max(g2, 1e-300)));
  };

  std::vector<Complex> roots;
  for (int i = 0; i < 4; ++i) {
    Complex e = es.eigenvalues()[i];
    if (distance_to_band_cut(e) < 1e-12) continue;  // on the continuum
    // Guarded Newton polish on the branch-resolved equation: companion roots
    // of near-double or edge-hugging quartics carry errors well above the
    // filter, while one or two corrected steps land on the true root.
    Complex best = e;
    double best_f = std::abs(branch_residual(e));
    Complex x = e;
    for (int it = 0; it < 12; ++it) {
      const Complex slope = branch_slope(x);
      if (std::abs(slope) < 1e-8) break;  // double-root neighbourhood
      Complex next = x - branch_residual(x) / slope;
      if (distance_to_band_cut(next) < 1e-12) break;
      if (std::abs(next - e) > 1e-3 * (1.0 + std::abs(e))) break;  // left the basin
      const double f = std::abs(branch_residual(next));
      x = next;
      if (f < best_f) {
        best_f = f;
        best = next;
      }
      if (f < 1e-14 * (1.0 + std::abs(next))) break;
    }
    if (best_f <= noise_floor(best)) roots.push_back(best);
  }

  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  // Polishing can drive two quartic candidates onto the same simple root;
  // collapse those while keeping genuinely double roots (which arrive as two
  // distinct machine-precision copies) intact.
  std::vector<Complex> unique;
  for (Complex e : roots) {
    if (!unique.empty() && std::abs(e - unique.back()) <= 1e-11 * (1.0 + std::abs(e)))
      continue;
    unique.push_back(e);
  }
  return unique;
}

double ep_energy(double detuning) {
  return (detuning + std::sqrt(detuning * detuning + 32.0)) / 4.0;
}

double ep_coupling(double detuning) {
  if (detuning <= 2.0) {
    std::ostringstream err;
    err << "ep_coupling: Delta = " << detuning
        << " is not in the upper gap (Delta > 2J); in the band the symmetry "
           "breaks at kappa = 0+";
    throw std::domain_error(err.str());
  }
  const double e = ep_energy(detuning);
  return std::sqrt(-(e - detuning) * std::sqrt(e * e - 4.0));
}

std::pair<Complex, Complex> bs_energy_zero_detuning(double kappa) {
  const double y = std::sqrt(std::sqrt(4.0 + std::pow(kappa, 4)) - 2.0);
  return {Complex(0.0, y), Complex(0.0, -y)};
}

double fermi_golden_rate(double detuning, double kappa) {
  if (std::abs(detuning) >= 2.0)
    throw std::domain_error("fermi_golden_rate: |Delta| >= 2J, no resonant mode");
  const double k = std::acos(-detuning / 2.0);
  const double vg = 2.0 * std::sin(k);
  return -kappa * kappa / vg;
}

std::pair<Complex, Complex> ssh_bs_energies(double delta, double kappa) {
  const double e2 = 2.0 * (1.0 + delta * delta) -
                    std::sqrt(4.0 * std::pow(1.0 - delta * delta, 2) + std::pow(kappa, 4));
  if (e2 >= 0.0) {
    const double e = std::sqrt(e2);
    return {Complex(e, 0.0), Complex(-e, 0.0)};
  }
  const double y = std::sqrt(-e2);
  return {Complex(0.0, y), Complex(0.0, -y)};
}

double ssh_ep3_coupling(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("ssh_ep3_coupling: requires 0 < delta < 1");
  return 2.0 * std::sqrt(delta);
}

namespace {

int min_cells_right(double delta) {
  return static_cast<int>(std::ceil(10.0 / std::log((1.0 + delta) / (1.0 - delta))));
}

void check_vds_args(double delta, int j0, int num_cells) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("vds: requires 0 < delta < 1");
  const int right = num_cells - j0;
  const int need = min_cells_right(delta);
  if (j0 < 0 || right < need) {
    std::ostringstream err;
    err << "vds: cell " << j0 << " leaves " << right << " cells to the right, need >= "
        << need << " for a tail norm below threshold";
    throw std::invalid_argument(err.str());
  }
}

}  // namespace

Eigen::VectorXcd VdsState::to_state_vector(int num_cells) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1 + 2 * num_cells);
  v[0] = emitter_amplitude;
  for (int j = 0; j < photon_amplitudes_B.size(); ++j)
    v[1 + 2 * (j0 + j) + 1] = photon_amplitudes_B[j];
  return v;
}

VdsState vds_state(double delta, int j0, int num_cells) {
  check_vds_args(delta, j0, num_cells);
  const int count = num_cells - j0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  VdsState s;
  s.delta = delta;
  s.j0 = j0;
  s.emitter_amplitude = inv_sqrt2;
  s.photon_amplitudes_B.resize(count);
  for (int j = 0; j < count; ++j) {
    const double b = 2.0 * std::sqrt(delta) * std::pow(delta - 1.0, j) /
                     std::pow(1.0 + delta, j + 1);
    s.photon_amplitudes_B[j] = Complex(0.0, -inv_sqrt2) * b;
  }
  return s;
}

Eigen::VectorXcd vds_zero_mode(double delta, double kappa, int j0, int num_cells) {
  check_vds_args(delta, j0, num_cells);
  const double rho = kappa / (2.0 * std::sqrt(delta));
  const double alpha = 1.0 / std::sqrt(1.0 + rho * rho);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1 + 2 * num_cells);
  v[0] = alpha;
  for (int j = 0; j < num_cells - j0; ++j) {
    const double b = 2.0 * std::sqrt(delta) * std::pow(delta - 1.0, j) /
                     std::pow(1.0 + delta, j + 1);
    v[1 + 2 * (j0 + j) + 1] = Complex(0.0, -alpha * rho) * b;
  }
  return v;
}

}  // namespace wqed
