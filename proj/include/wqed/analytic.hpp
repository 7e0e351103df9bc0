#pragma once

// Closed-form layer: self-energy, pole-equation roots, exceptional-point
// formulas, SSH in-gap energies and the vacancy-like dressed state. Nothing
// here touches the dense eigensolver, so the two routes can cross-check each
// other. Energies in units of J.

#include <optional>
#include <utility>
#include <vector>

#include "wqed/model.hpp"

namespace wqed {

struct PoleProblem {
  double detuning = 0.0;
  double coupling = 0.0;                // kappa >= 0
  std::optional<int> finite_num_sites;  // set: exact k-sum over k = 2*pi*q/N
};

/// Emitter self-energy Sigma_e(E) for the uniform chain. The finite case is
/// the exact momentum sum; the thermodynamic case is -kappa^2/sqrt(E^2-4)
/// with the cut on [-2, 2] and Sigma ~ -kappa^2/E at infinity (this branch
/// is the analytic continuation of the k-sum off the real axis).
/// Throws if E is within 1e-12 of a pole or of the cut.
Complex self_energy(const PoleProblem& problem, Complex energy);

/// Bound solutions of E - Delta - Sigma_e(E) = 0 in the thermodynamic limit.
/// Candidates come from the quartic (E-Delta)^2 (E^2-4) = kappa^4 via a
/// companion matrix; only those with branch-resolved residual <= 1e-10 are
/// kept. Conjugate partners are adjacent in the returned order.
std::vector<Complex> pole_roots(const PoleProblem& problem);

/// Gap-regime coalescence energy (Delta + sqrt(Delta^2 + 32))/4.
double ep_energy(double detuning);

/// Coupling where the two gap bound states merge, from the double-root
/// condition of the pole equation. Throws for Delta <= 2 (band regime:
/// symmetry breaks at kappa = 0+).
double ep_coupling(double detuning);

/// Zero-detuning pair +-i sqrt(sqrt(4 + kappa^4) - 2), purely imaginary.
std::pair<Complex, Complex> bs_energy_zero_detuning(double kappa);

/// Weak-coupling rate -kappa^2/|v_g| at the resonant momentum k(Delta) =
/// arccos(-Delta/2), v_g = 2 sin k. Requires |Delta| < 2.
double fermi_golden_rate(double detuning, double kappa);

/// SSH in-gap pair +-sqrt(2(1+delta^2) - sqrt(4(1-delta^2)^2 + kappa^4));
/// real below the triple coalescence, purely imaginary above it.
std::pair<Complex, Complex> ssh_bs_energies(double delta, double kappa);

/// Triple-coalescence coupling 2 sqrt(delta), 0 < delta < 1.
double ssh_ep3_coupling(double delta);

/// Equal-weight superposition of the excited emitter and the edge state the
/// emitter seeds on sublattice B of cells j >= j0. This is the coalesced
/// eigenstate at kappa = 2 sqrt(delta); its energy is pinned at zero.
struct VdsState {
  Complex emitter_amplitude;
  Eigen::VectorXcd photon_amplitudes_B;  // cells j0 .. num_cells-1
  double delta = 0.0;
  int j0 = 0;

  /// Full vector in the standard basis (one emitter + 2*num_cells sites).
  Eigen::VectorXcd to_state_vector(int num_cells) const;
};

/// Throws when fewer than ceil(10 / ln((1+delta)/(1-delta))) cells remain to
/// the right of j0 (truncated tail too heavy).
VdsState vds_state(double delta, int j0, int num_cells);

/// Zero mode of the coupled system at arbitrary kappa: the emitter/edge-state
/// weights rebalance with kappa while the eigenvalue stays at zero. Reduces
/// to vds_state's vector at kappa = 2 sqrt(delta).
Eigen::VectorXcd vds_zero_mode(double delta, double kappa, int j0, int num_cells);

}  // namespace wqed
