#pragma once

// Normalized nonunitary evolution: exp(-i H t) |psi0> renormalized at the
// output times, population time series, two-emitter transfer diagnostics,
// and a small-size density-matrix oracle with the uniform background loss
// kept in (it cancels under trace normalization).

#include <iosfwd>
#include <utility>
#include <vector>

#include "wqed/spectral.hpp"

namespace wqed {

struct InitialState {
  enum class Kind { SingleEmitterExcited, TwoEmitterSuperposition, PhotonAtSite, Custom };
  Kind kind = Kind::Custom;
  Eigen::VectorXcd vector;  // unit norm, single-excitation sector
};

InitialState emitter_excited(const BasisIndex& basis, int m);
InitialState two_emitter_superposition(const BasisIndex& basis, Complex a0, Complex a1);
InitialState photon_at_site(const BasisIndex& basis, int flat_site);
InitialState custom_state(Eigen::VectorXcd v);

struct TrajectoryRecord {
  Eigen::VectorXd times;
  Eigen::MatrixXd emitter_populations;  // one row per time, one column per emitter
  Eigen::VectorXd photon_weight;
  std::vector<std::pair<double, Eigen::VectorXcd>> snapshots;
  Eigen::VectorXd trace;  // no-jump oracle only: pre-normalization trace
};

struct EvolveOptions {
  // Spectral propagator while cond(V) stays below this; otherwise scaling-
  // and-squaring matrix exponentials per interval.
  double condition_limit = 1e8;
  std::vector<double> snapshot_times;
};

/// Times must be sorted and nonnegative.
TrajectoryRecord evolve_pure(const HamiltonianMatrix& H, const InitialState& psi0,
                             const Eigen::VectorXd& times, const EvolveOptions& opt = {});

/// Density-matrix evolution under the no-jump generator H - i*kappa*1 with
/// trace normalization; restricted to dimension <= 64. In the single-
/// excitation sector the populations must match evolve_pure exactly.
TrajectoryRecord evolve_nojump_oracle(const SystemSpec& spec, const InitialState& psi0,
                                      const Eigen::VectorXd& times);

struct TransferReport {
  bool oscillatory = false;  // false: populations settle to constants
  bool fit_ok = false;
  double frequency = 0.0;  // populations follow cos^2/sin^2 of (frequency * t)
  double residual = 0.0;   // rms misfit of the cos^2 law
  double late_time_sum = 0.0;
  double t_transient = 0.0;
};

/// Fits the late-time two-emitter populations to the half-weight cos^2/sin^2
/// exchange law. `symmetric_energy` is the dominant symmetric bound-state
/// energy; its real part is the expected fit frequency.
TransferReport two_qe_transfer_metrics(const TrajectoryRecord& record, Complex symmetric_energy,
                                       double t_transient);

/// 5 e-folds of subdominant-mode suppression.
double transient_cutoff(const Spectrum& spectrum);

struct DominantStates {
  std::vector<Eigen::Index> indices;
  std::vector<Complex> energies;
  Eigen::MatrixXcd states;  // columns, unit norm
};

/// Eigenstates of maximal Im E (two when degenerate within 1e-6). Throws in
/// the unbroken phase: no growing mode dominates.
DominantStates long_time_dominant_state(const HamiltonianMatrix& H,
                                        const SpectralOptions& opt = {});

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record);
void write_snapshot_csv(std::ostream& os, const Eigen::VectorXcd& state, const BasisIndex& basis,
                        const LatticeSpec& lattice);

}  // namespace wqed
