#pragma once

// Dense diagnostics on top of the model: eigendecomposition with bi-paired
// left/right vectors, phase classification, bound-state extraction with
// localization fits, phase rigidity, and numeric exceptional-point location.

#include <iosfwd>
#include <limits>
#include <vector>

#include "wqed/model.hpp"

namespace wqed {

struct SpectralOptions {
  // eps_real = eps_real_scale * max(1, spectral radius in J)
  double eps_real_scale = 1e-9;
  // band membership margin, in units of eps_real: lattice levels never leave
  // the ideal bands, so a few reality tolerances separate pushed-out bound
  // states from band states
  double band_margin_factor = 10.0;
};

enum class Phase { Unbroken, Broken };

struct Spectrum {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right_vectors;  // unit columns
  Eigen::MatrixXcd left_vectors;   // eigenvectors of H^dagger, column i paired with right column i
  std::vector<Eigen::Index> conj_partner;  // partner index, -1 marks a real eigenvalue
  Phase phase = Phase::Unbroken;
  double eps_real = 0.0;  // reality tolerance actually applied

  bool is_real(Eigen::Index i) const { return conj_partner[i] < 0; }
};

/// Throws std::runtime_error with condition info if the solver fails.
Spectrum eigendecompose(const HamiltonianMatrix& H, const SpectralOptions& opt = {});

Phase classify_phase(const Spectrum& spectrum);

struct BoundState {
  Complex energy;
  Eigen::VectorXcd emitter_amplitudes;
  Eigen::VectorXcd photon_profile;  // real-space, Euclidean normalization with the emitter part
  double emitter_population = 0.0;  // sum_m |c_m|^2
  double localization_length = std::numeric_limits<double>::quiet_NaN();
  double fit_r_squared = std::numeric_limits<double>::quiet_NaN();
  int anchor_site = 0;              // flat photon index of the dominant emitter's attachment
  Eigen::Index eigen_index = -1;    // column in the originating Spectrum
};

/// Eigenstates that are outside every photonic band by more than eps_band in
/// real part, or that carry |Im E| > eps_real. May be empty.
std::vector<BoundState> extract_bound_states(const Spectrum& spectrum,
                                             const HamiltonianMatrix& H,
                                             const SpectralOptions& opt = {});

struct LocalizationFit {
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double r_squared = std::numeric_limits<double>::quiet_NaN();
  bool estimable = false;
};

/// Least-squares slope of ln|c_n| against the site distance from the anchor.
/// Fit window: amplitudes within [1e-8, 1e-1] of the profile maximum, the 3
/// sites nearest the anchor skipped, distances capped at 0.33 N to stay clear
/// of wrap-around images (periodic) and end reflections (open). Fewer than 6
/// usable points: not estimable.
LocalizationFit localization_length(const Eigen::VectorXcd& profile, int anchor_site,
                                    Boundary boundary = Boundary::Open);

/// |<L_i|R_i>| / (|L_i| |R_i|): 1 for Hermitian-like modes, -> 0 at an EP.
double phase_rigidity(const Spectrum& spectrum, Eigen::Index i);

enum class EPMethod { ImSquaredExtrapolation, RigidityMinimum };

struct EPEstimate {
  double coupling = 0.0;
  Complex energy;
  int order = 0;
  double residual = 0.0;  // eigenvalue splitting left at kappa*
  EPMethod method = EPMethod::ImSquaredExtrapolation;
};

/// Locates the symmetry-breaking onset bracketed by [kappa_lo, kappa_hi]
/// (lower endpoint unbroken, upper broken, else throws). max|Im E|^2 is
/// sampled on a grid above the onset and extrapolated linearly to zero,
/// then refined on the phase-rigidity minimum. Order is read off from
/// eigenvalue clustering at kappa* and must match expected_order.
EPEstimate find_ep(const SystemSpec& spec_template, double kappa_lo, double kappa_hi,
                   int expected_order, const SpectralOptions& opt = {});

struct SublatticeWeights {
  double w_A = 0.0;
  double w_B = 0.0;
  double w_left = 0.0;   // flat site <= anchor
  double w_right = 0.0;  // flat site > anchor
};

/// Photon weight split by sublattice and by side of the emitter attachment.
/// Throws for non-SSH lattices.
SublatticeWeights sublattice_weights(const BoundState& state, const LatticeSpec& lattice);

/// Best single eigenvector of a (possibly defective) eigenvalue cluster: the
/// direction of smallest singular value of H - mean I, via inverse iteration.
Eigen::VectorXcd cluster_eigenvector(const Eigen::MatrixXcd& H, Complex cluster_mean);

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum, const HamiltonianMatrix& H);
void write_bound_states_csv(std::ostream& os, const std::vector<BoundState>& states,
                            const Spectrum& spectrum, const LatticeSpec& lattice);

}  // namespace wqed
