#pragma once

// Parameter-grid engine: map a 1- or 2-axis grid over build -> diagonalize ->
// classify -> extract, with per-point failure isolation, deterministic
// row-major output and a JSON run manifest.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "wqed/spectral.hpp"

namespace wqed {

enum class SweepParameter { Detuning, Kappa, Delta, Separation };

const char* sweep_parameter_name(SweepParameter p);

struct SweepAxis {
  SweepParameter parameter = SweepParameter::Kappa;
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  double value(int i) const { return min + (max - min) * i / (count - 1); }
};

struct SweepOutputs {
  bool phase = true;
  bool eigenvalues = false;
  bool bound_states = false;
  bool ep_markers = false;
};

struct SweepPlan {
  SystemSpec base;
  std::vector<SweepAxis> axes;  // 1 or 2; axis 0 is the outer (row) axis
  SweepOutputs outputs;
  int ep_expected_order = 0;  // 0: deduce (SSH -> 3, uniform -> 2)
  int jobs = 0;               // 0: hardware concurrency
};

/// Throws std::invalid_argument on malformed plans (bad axis counts, a grid
/// larger than 1e6 points, separation axis without two emitters, ...).
void validate_plan(const SweepPlan& plan);

struct SweepPoint {
  double coord1 = 0.0;
  double coord2 = 0.0;
  bool ok = false;
  std::string status;  // "ok" or the error text; failures never abort a sweep
  Phase phase = Phase::Unbroken;
  Eigen::VectorXcd eigenvalues;
  std::vector<BoundState> bound_states;
};

struct RunManifest {
  nlohmann::json plan_echo;
  nlohmann::json tolerances;
  int lattice_size = 0;
  std::string code_version;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> point_status;

  nlohmann::json to_json() const;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // row-major: axis0 outer, axis1 inner
  std::vector<EPEstimate> ep_markers;
  RunManifest manifest;
};

SweepResult run_sweep(const SweepPlan& plan, const SpectralOptions& opt = {});

nlohmann::json spec_to_json(const SystemSpec& spec);
nlohmann::json plan_to_json(const SweepPlan& plan);

void write_sweep_phase_csv(std::ostream& os, const SweepPlan& plan, const SweepResult& result);
void write_sweep_eigenvalues_csv(std::ostream& os, const SweepPlan& plan,
                                 const SweepResult& result);
void write_sweep_bound_states_csv(std::ostream& os, const SweepPlan& plan,
                                  const SweepResult& result);
void write_ep_markers_csv(std::ostream& os, const std::vector<EPEstimate>& markers);

}  // namespace wqed
