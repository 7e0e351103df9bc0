#include "wqed/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "wqed/csv.hpp"
#include "wqed/version.hpp"

namespace wqed {

const char* sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::Detuning: return "detuning";
    case SweepParameter::Kappa: return "kappa";
    case SweepParameter::Delta: return "delta";
    case SweepParameter::Separation: return "separation";
  }
  return "?";
}

void validate_plan(const SweepPlan& plan) {
  validate_spec(plan.base);
  if (plan.axes.empty() || plan.axes.size() > 2)
    throw std::invalid_argument("sweep: need 1 or 2 axes");
  long total = 1;
  for (const auto& axis : plan.axes) {
    if (axis.count < 2) throw std::invalid_argument("sweep: axis count must be >= 2");
    total *= axis.count;
    if (axis.parameter == SweepParameter::Kappa && axis.min < 0.0)
      throw std::invalid_argument("sweep: kappa axis must be nonnegative");
    if (axis.parameter == SweepParameter::Separation && plan.base.num_emitters() < 2)
      throw std::invalid_argument("sweep: separation axis needs two emitters");
    if (axis.parameter == SweepParameter::Delta &&
        plan.base.lattice.kind != LatticeKind::SSH)
      throw std::invalid_argument("sweep: delta axis needs an SSH lattice");
  }
  if (total > 1000000) throw std::invalid_argument("sweep: grid larger than 1e6 points");
  if (plan.axes.size() == 2 && plan.axes[0].parameter == plan.axes[1].parameter)
    throw std::invalid_argument("sweep: the two axes must differ");
  if (plan.outputs.ep_markers &&
      !(plan.axes.size() == 1 && plan.axes[0].parameter == SweepParameter::Kappa))
    throw std::invalid_argument("sweep: ep_markers need a single kappa axis");
}

namespace {

SystemSpec apply_parameter(SystemSpec spec, SweepParameter p, double value) {
  switch (p) {
    case SweepParameter::Detuning:
      for (auto& e : spec.emitters) e.detuning = value;
      break;
    case SweepParameter::Kappa:
      for (auto& e : spec.emitters) e.coupling = value;
      break;
    case SweepParameter::Delta:
      spec.lattice.delta = value;
      break;
    case SweepParameter::Separation:
      spec.emitters[1].site = spec.emitters[0].site + static_cast<int>(std::lround(value));
      break;
  }
  return spec;
}

void compute_point(const SweepPlan& plan, const SpectralOptions& opt, SweepPoint& point) {
  try {
    SystemSpec spec = apply_parameter(plan.base, plan.axes[0].parameter, point.coord1);
    if (plan.axes.size() == 2)
      spec = apply_parameter(spec, plan.axes[1].parameter, point.coord2);
    HamiltonianMatrix H = build_hamiltonian(spec);
    Spectrum s = eigendecompose(H, opt);
    point.phase = s.phase;
    if (plan.outputs.eigenvalues) {
      point.eigenvalues = s.eigenvalues;
      std::sort(point.eigenvalues.begin(), point.eigenvalues.end(),
                [](Complex a, Complex b) {
                  if (a.real() != b.real()) return a.real() < b.real();
                  return a.imag() < b.imag();
                });
    }
    if (plan.outputs.bound_states) point.bound_states = extract_bound_states(s, H, opt);
    point.ok = true;
    point.status = "ok";
  } catch (const std::exception& e) {
    point.ok = false;
    point.status = e.what();
  }
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, const SpectralOptions& opt) {
  validate_plan(plan);
  const auto t0 = std::chrono::steady_clock::now();

  SweepResult result;
  const int n1 = plan.axes[0].count;
  const int n2 = plan.axes.size() == 2 ? plan.axes[1].count : 1;
  result.points.resize(static_cast<size_t>(n1) * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      SweepPoint& p = result.points[static_cast<size_t>(i) * n2 + j];
      p.coord1 = plan.axes[0].value(i);
      p.coord2 = plan.axes.size() == 2 ? plan.axes[1].value(j) : 0.0;
    }

  int jobs = plan.jobs > 0 ? plan.jobs
                           : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(result.points.size())));
  if (jobs == 1) {
    for (auto& p : result.points) compute_point(plan, opt, p);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (size_t i = next++; i < result.points.size(); i = next++)
          compute_point(plan, opt, result.points[i]);
      });
    for (auto& th : pool) th.join();
  }

  if (plan.outputs.ep_markers) {
    // Locate the symmetry-breaking onset along the kappa axis, skipping the
    // kappa = 0 Hermitian control column.
    int order = plan.ep_expected_order;
    if (order == 0) order = plan.base.lattice.kind == LatticeKind::SSH ? 3 : 2;
    for (size_t i = 0; i + 1 < result.points.size(); ++i) {
      const SweepPoint& a = result.points[i];
      const SweepPoint& b = result.points[i + 1];
      if (!a.ok || !b.ok || a.coord1 <= 0.0) continue;
      if (a.phase == Phase::Unbroken && b.phase == Phase::Broken) {
        try {
          result.ep_markers.push_back(
              find_ep(plan.base, a.coord1, b.coord1, order, opt));
        } catch (const std::exception& e) {
          result.manifest.point_status.push_back(std::string("ep_marker: ") + e.what());
        }
      }
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  RunManifest& manifest = result.manifest;
  manifest.plan_echo = plan_to_json(plan);
  manifest.tolerances = {{"eps_real_scale", opt.eps_real_scale},
                         {"band_margin_factor", opt.band_margin_factor}};
  manifest.lattice_size = plan.base.lattice.num_sites;
  manifest.code_version = kVersion;
  manifest.wall_clock_seconds = std::chrono::duration<double>(t1 - t0).count();
  for (const auto& p : result.points) manifest.point_status.push_back(p.status);
  return result;
}

nlohmann::json spec_to_json(const SystemSpec& spec) {
  nlohmann::json j;
  j["lattice"] = {
      {"kind", spec.lattice.kind == LatticeKind::SSH ? "ssh" : "uniform"},
      {"boundary", spec.lattice.boundary == Boundary::Periodic ? "periodic" : "open"},
      {"J", spec.lattice.J},
      {"delta", spec.lattice.delta},
      {"num_sites", spec.lattice.num_sites}};
  j["emitters"] = nlohmann::json::array();
  for (const auto& e : spec.emitters)
    j["emitters"].push_back({{"detuning", e.detuning},
                             {"coupling", e.coupling},
                             {"site", e.site},
                             {"sublattice", e.sublattice == Sublattice::B ? "B" : "A"}});
  return j;
}

nlohmann::json plan_to_json(const SweepPlan& plan) {
  nlohmann::json j;
  j["base"] = spec_to_json(plan.base);
  j["axes"] = nlohmann::json::array();
  for (const auto& axis : plan.axes)
    j["axes"].push_back({{"parameter", sweep_parameter_name(axis.parameter)},
                         {"min", axis.min},
                         {"max", axis.max},
                         {"count", axis.count}});
  j["outputs"] = {{"phase", plan.outputs.phase},
                  {"eigenvalues", plan.outputs.eigenvalues},
                  {"bound_states", plan.outputs.bound_states},
                  {"ep_markers", plan.outputs.ep_markers}};
  return j;
}

nlohmann::json RunManifest::to_json() const {
  return nlohmann::json{{"plan", plan_echo},
                        {"tolerances", tolerances},
                        {"lattice_size", lattice_size},
                        {"code_version", code_version},
                        {"wall_clock_seconds", wall_clock_seconds},
                        {"point_status", point_status}};
}

namespace {

void write_coord_header(std::ostream& os, const SweepPlan& plan) {
  os << sweep_parameter_name(plan.axes[0].parameter);
  if (plan.axes.size() == 2) os << "," << sweep_parameter_name(plan.axes[1].parameter);
}

void write_coords(std::ostream& os, const SweepPlan& plan, const SweepPoint& p) {
  os << csv_number(p.coord1);
  if (plan.axes.size() == 2) os << "," << csv_number(p.coord2);
}

std::string sanitized(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

}  // namespace

void write_sweep_phase_csv(std::ostream& os, const SweepPlan& plan, const SweepResult& result) {
  write_coord_header(os, plan);
  os << ",phase,status\n";
  for (const auto& p : result.points) {
    write_coords(os, plan, p);
    os << "," << (!p.ok ? "error" : p.phase == Phase::Broken ? "broken" : "unbroken") << ","
       << sanitized(p.status) << "\n";
  }
}

void write_sweep_eigenvalues_csv(std::ostream& os, const SweepPlan& plan,
                                 const SweepResult& result) {
  write_coord_header(os, plan);
  os << ",re_E,im_E\n";
  for (const auto& p : result.points) {
    if (!p.ok) continue;
    for (Eigen::Index i = 0; i < p.eigenvalues.size(); ++i) {
      write_coords(os, plan, p);
      os << "," << csv_number(p.eigenvalues[i].real()) << ","
         << csv_number(p.eigenvalues[i].imag()) << "\n";
    }
  }
}

void write_sweep_bound_states_csv(std::ostream& os, const SweepPlan& plan,
                                  const SweepResult& result) {
  write_coord_header(os, plan);
  os << ",re_E,im_E,emitter_population,lambda,r_squared\n";
  for (const auto& p : result.points) {
    if (!p.ok) continue;
    for (const auto& st : p.bound_states) {
      write_coords(os, plan, p);
      os << "," << csv_number(st.energy.real()) << "," << csv_number(st.energy.imag()) << ","
         << csv_number(st.emitter_population) << "," << csv_number(st.localization_length)
         << "," << csv_number(st.fit_r_squared) << "\n";
    }
  }
}

void write_ep_markers_csv(std::ostream& os, const std::vector<EPEstimate>& markers) {
  os << "kappa_star,re_E,im_E,order,residual,method\n";
  for (const auto& m : markers) {
    os << csv_number(m.coupling) << "," << csv_number(m.energy.real()) << ","
       << csv_number(m.energy.imag()) << "," << m.order << "," << csv_number(m.residual)
       << ","
       << (m.method == EPMethod::RigidityMinimum ? "rigidity_minimum" : "im2_extrapolation")
       << "\n";
  }
}

}  // namespace wqed
