// wqed: spectra, phase diagrams, bound states and nonunitary dynamics of
// emitters dissipatively coupled to 1D resonator lattices.
//
// Units: energies (J, detuning, kappa, eigenvalues) in units of the hopping
// J; times in 1/J. Output: CSV datasets + manifest.json + summary.txt per
// run directory.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wqed/analytic.hpp"
#include "wqed/config.hpp"
#include "wqed/csv.hpp"
#include "wqed/validate.hpp"
#include "wqed/version.hpp"

namespace fs = std::filesystem;
using namespace wqed;

namespace {

struct CommandContext {
  RunConfig cfg;
  std::vector<std::string> written;  // dataset files, for the manifest
  fs::path out;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void write_text(const std::string& name, const std::string& content) {
    std::ofstream f(out / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (out / name).string());
    f << content;
    if (name != "manifest.json" && name != "summary.txt") written.push_back(name);
  }

  void finish(const std::string& summary) {
    nlohmann::json manifest;
    manifest["config"] = cfg.to_json();
    manifest["code_version"] = kVersion;
    manifest["lattice_size"] = cfg.system.lattice.num_sites;
    manifest["tolerances"] = {{"eps_real_scale", cfg.tolerances.eps_real_scale},
                              {"band_margin_factor", cfg.tolerances.band_margin_factor}};
    manifest["datasets"] = written;
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text("manifest.json", manifest.dump(2) + "\n");
    write_text("summary.txt", summary);
  }
};

CommandContext make_context(RunConfig cfg) {
  CommandContext ctx;
  ctx.cfg = std::move(cfg);
  ctx.out = ctx.cfg.output.dir;
  fs::create_directories(ctx.out);
  return ctx;
}

Eigen::VectorXd time_grid(const DynamicsSettings& d) {
  if (d.num_times < 2 || !(d.t_max > 0.0))
    throw ConfigError("dynamics: need num_times >= 2 and t_max > 0");
  Eigen::VectorXd t(d.num_times);
  for (int i = 0; i < d.num_times; ++i) t[i] = d.t_max * i / (d.num_times - 1);
  return t;
}

std::string capture(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

// ---------------------------------------------------------------- spectrum

void run_spectrum(CommandContext ctx) {
  std::ostringstream summary;
  summary << "spectrum run (energies in J)\n";
  if (ctx.cfg.axis1) {
    SweepPlan plan;
    plan.base = ctx.cfg.system;
    plan.axes = {*ctx.cfg.axis1};
    if (ctx.cfg.axis2) plan.axes.push_back(*ctx.cfg.axis2);
    plan.outputs.phase = true;
    plan.outputs.eigenvalues = true;
    plan.outputs.bound_states = true;
    plan.outputs.ep_markers =
        plan.axes.size() == 1 && plan.axes[0].parameter == SweepParameter::Kappa;
    plan.jobs = ctx.cfg.output.jobs;
    SweepResult result = run_sweep(plan, ctx.cfg.tolerances);

    ctx.write_text("spectrum.csv",
                   capture([&](std::ostream& os) { write_sweep_eigenvalues_csv(os, plan, result); }));
    ctx.write_text("bound_states.csv", capture([&](std::ostream& os) {
                     write_sweep_bound_states_csv(os, plan, result);
                   }));
    if (plan.outputs.ep_markers)
      ctx.write_text("ep_markers.csv", capture([&](std::ostream& os) {
                       write_ep_markers_csv(os, result.ep_markers);
                     }));
    int failed = 0;
    for (const auto& p : result.points) failed += p.ok ? 0 : 1;
    summary << "swept " << result.points.size() << " grid points (" << failed
            << " failures)\n";
    for (const auto& m : result.ep_markers)
      summary << "EP marker: kappa* = " << csv_number(m.coupling) << " J, E* = ("
              << csv_number(m.energy.real()) << ", " << csv_number(m.energy.imag())
              << "), order " << m.order << "\n";
  } else {
    HamiltonianMatrix H = build_hamiltonian(ctx.cfg.system);
    Spectrum s = eigendecompose(H, ctx.cfg.tolerances);
    std::vector<BoundState> bound = extract_bound_states(s, H, ctx.cfg.tolerances);
    ctx.write_text("spectrum.csv",
                   capture([&](std::ostream& os) { write_spectrum_csv(os, s, H); }));
    ctx.write_text("bound_states.csv", capture([&](std::ostream& os) {
                     write_bound_states_csv(os, bound, s, ctx.cfg.system.lattice);
                   }));
    summary << "phase: " << (s.phase == Phase::Broken ? "broken" : "unbroken") << "\n";
    summary << "bound states: " << bound.size() << "\n";
    for (const auto& st : bound)
      summary << "  E = (" << csv_number(st.energy.real()) << ", "
              << csv_number(st.energy.imag()) << ") J, emitter population "
              << csv_number(st.emitter_population) << ", lambda "
              << csv_number(st.localization_length) << "\n";
  }
  ctx.finish(summary.str());
}

// ------------------------------------------------------------ phase diagram

void run_phase_diagram(CommandContext ctx) {
  SweepPlan plan;
  plan.base = ctx.cfg.system;
  plan.axes = {ctx.cfg.axis1.value_or(SweepAxis{SweepParameter::Detuning, -3.0, 3.0, 121}),
               ctx.cfg.axis2.value_or(SweepAxis{SweepParameter::Kappa, 0.0, 0.5, 101})};
  plan.outputs = SweepOutputs{true, false, false, false};
  plan.jobs = ctx.cfg.output.jobs;
  SweepResult result = run_sweep(plan, ctx.cfg.tolerances);

  ctx.write_text("phase.csv", capture([&](std::ostream& os) {
                   write_sweep_phase_csv(os, plan, result);
                 }));

  // Analytic symmetry-breaking boundary in the gap region.
  std::ostringstream boundary;
  boundary << "detuning,kappa_ep\n";
  const SweepAxis& detuning_axis = plan.axes[0];
  for (int i = 0; i < detuning_axis.count; ++i) {
    const double d = detuning_axis.value(i);
    if (d <= 2.0) continue;
    boundary << csv_number(d) << "," << csv_number(ep_coupling(d)) << "\n";
  }
  ctx.write_text("boundary.csv", boundary.str());

  int broken = 0, failed = 0;
  for (const auto& p : result.points) {
    broken += p.ok && p.phase == Phase::Broken ? 1 : 0;
    failed += p.ok ? 0 : 1;
  }
  std::ostringstream summary;
  summary << "phase diagram: " << result.points.size() << " points, " << broken
          << " broken, " << failed << " failures\n";
  summary << "axes: " << sweep_parameter_name(plan.axes[0].parameter) << " x "
          << sweep_parameter_name(plan.axes[1].parameter) << "\n";
  ctx.finish(summary.str());
}

// ---------------------------------------------------------------- dynamics

struct DynamicsVariant {
  std::string tag;
  SystemSpec spec;
};

void run_dynamics(CommandContext ctx, const std::vector<DynamicsVariant>& variants,
                  bool with_oracle) {
  std::ostringstream summary;
  summary << "dynamics (times in 1/J)\n";
  const Eigen::VectorXd times = time_grid(ctx.cfg.dynamics);

  for (const auto& variant : variants) {
    HamiltonianMatrix H = build_hamiltonian(variant.spec);
    InitialState psi0 = make_initial_state(ctx.cfg.dynamics.initial, H.basis);
    EvolveOptions opt;
    opt.snapshot_times = ctx.cfg.dynamics.snapshot_times;
    TrajectoryRecord record = evolve_pure(H, psi0, times, opt);
    const std::string name =
        variants.size() == 1 ? "trajectory.csv" : "trajectory_" + variant.tag + ".csv";
    ctx.write_text(name, capture([&](std::ostream& os) { write_trajectory_csv(os, record); }));
    for (size_t i = 0; i < record.snapshots.size(); ++i) {
      std::ostringstream sname;
      sname << "snapshot_" << variant.tag << (variant.tag.empty() ? "" : "_") << "t"
            << record.snapshots[i].first << ".csv";
      ctx.write_text(sname.str(), capture([&](std::ostream& os) {
                       write_snapshot_csv(os, record.snapshots[i].second, H.basis,
                                          variant.spec.lattice);
                     }));
    }

    Spectrum s = eigendecompose(H, ctx.cfg.tolerances);
    summary << "[" << (variant.tag.empty() ? "run" : variant.tag) << "] phase "
            << (s.phase == Phase::Broken ? "broken" : "unbroken") << ", final populations:";
    for (int m = 0; m < H.basis.num_emitters; ++m)
      summary << " " << csv_number(record.emitter_populations(times.size() - 1, m));
    summary << "\n";

    if (H.basis.num_emitters == 2 && s.phase == Phase::Broken) {
      const double im_max = s.eigenvalues.imag().maxCoeff();
      Complex e_sym = 0.0;
      for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        if (s.eigenvalues[i].imag() < im_max - 1e-6) continue;
        const Complex c1 = s.right_vectors(0, i), c2 = s.right_vectors(1, i);
        if (std::abs(c1 + c2) > std::abs(c1 - c2)) e_sym = s.eigenvalues[i];
      }
      TransferReport report = two_qe_transfer_metrics(record, e_sym, transient_cutoff(s));
      std::ostringstream metrics;
      metrics << "tag,oscillatory,fit_ok,frequency,expected_frequency,residual,late_time_sum,"
                 "t_transient\n"
              << variant.tag << "," << (report.oscillatory ? 1 : 0) << ","
              << (report.fit_ok ? 1 : 0) << "," << csv_number(report.frequency) << ","
              << csv_number(std::abs(e_sym.real())) << "," << csv_number(report.residual)
              << "," << csv_number(report.late_time_sum) << ","
              << csv_number(report.t_transient) << "\n";
      ctx.write_text(variants.size() == 1 ? "transfer_metrics.csv"
                                          : "transfer_metrics_" + variant.tag + ".csv",
                     metrics.str());
      summary << "  transfer: "
              << (report.oscillatory ? "coherent oscillation" : "single dominant state")
              << ", fitted frequency " << csv_number(report.frequency) << " (Re E_s = "
              << csv_number(std::abs(e_sym.real())) << "), late-time sum "
              << csv_number(report.late_time_sum) << "\n";
    }

    if (with_oracle) {
      TrajectoryRecord oracle = evolve_nojump_oracle(variant.spec, psi0, times);
      ctx.write_text(variants.size() == 1 ? "trajectory_oracle.csv"
                                          : "trajectory_oracle_" + variant.tag + ".csv",
                     capture([&](std::ostream& os) { write_trajectory_csv(os, oracle); }));
      const double dev =
          (record.emitter_populations - oracle.emitter_populations).cwiseAbs().maxCoeff();
      summary << "  no-jump oracle max population deviation: " << csv_number(dev) << "\n";
    }
  }
  ctx.finish(summary.str());
}

// --------------------------------------------------------------------- ssh

void run_ssh(CommandContext ctx) {
  const LatticeSpec& lat = ctx.cfg.system.lattice;
  if (lat.kind != LatticeKind::SSH)
    throw ConfigError("ssh: lattice kind must be ssh");
  if (lat.delta == 0.0)
    throw ConfigError(
        "ssh: delta = 0 is the gapless uniform chain; the in-gap analysis needs a "
        "dimerized lattice (use the spectrum command instead)");
  if (lat.delta < 0.0)
    throw ConfigError(
        "ssh: delta < 0 puts the emitter-seeded edge state on the other sublattice; "
        "use delta > 0 with the emitter on sublattice A (or B for the mirrored setup)");

  const double k3 = ssh_ep3_coupling(lat.delta);
  std::ostringstream summary;
  summary << "ssh topological waveguide analysis (energies in J)\n";
  summary << "analytic triple-point coupling: " << csv_number(k3) << " J\n";

  SweepPlan plan;
  plan.base = ctx.cfg.system;
  plan.axes = {ctx.cfg.axis1.value_or(SweepAxis{SweepParameter::Kappa, 0.0, 1.6 * k3, 161})};
  plan.outputs = SweepOutputs{true, true, true, false};
  plan.jobs = ctx.cfg.output.jobs;
  SweepResult result = run_sweep(plan, ctx.cfg.tolerances);
  ctx.write_text("ssh_spectrum.csv", capture([&](std::ostream& os) {
                   write_sweep_eigenvalues_csv(os, plan, result);
                 }));
  ctx.write_text("bound_states.csv", capture([&](std::ostream& os) {
                   write_sweep_bound_states_csv(os, plan, result);
                 }));

  EPEstimate est = find_ep(ctx.cfg.system, 0.8 * k3, 1.2 * k3, 3, ctx.cfg.tolerances);
  ctx.write_text("ep_markers.csv", capture([&](std::ostream& os) {
                   write_ep_markers_csv(os, {est});
                 }));
  summary << "numeric EP3: kappa* = " << csv_number(est.coupling) << " J, order "
          << est.order << ", residual " << csv_number(est.residual) << "\n";

  // Coalesced state at the analytic triple point: fidelity against the
  // vacancy-like dressed state, chirality of the photon profile.
  SystemSpec at_ep = ctx.cfg.system;
  for (auto& e : at_ep.emitters) e.coupling = k3;
  HamiltonianMatrix H = build_hamiltonian(at_ep);
  Spectrum s = eigendecompose(H, ctx.cfg.tolerances);
  std::vector<BoundState> gap_states = extract_bound_states(s, H, ctx.cfg.tolerances);
  Eigen::VectorXcd vds =
      vds_state(lat.delta, at_ep.emitters[0].site, lat.num_sites).to_state_vector(lat.num_sites);
  vds /= vds.norm();
  double min_fidelity = 1.0;
  Complex mean = 0.0;
  for (const auto& st : gap_states) {
    min_fidelity = std::min(min_fidelity, std::abs(vds.dot(s.right_vectors.col(st.eigen_index))));
    mean += st.energy;
  }
  if (!gap_states.empty()) mean /= static_cast<double>(gap_states.size());
  Eigen::VectorXcd coalesced = cluster_eigenvector(H.entries, mean);
  ctx.write_text("profile.csv", capture([&](std::ostream& os) {
                   write_snapshot_csv(os, coalesced, H.basis, lat);
                 }));
  BoundState probe;
  probe.photon_profile = coalesced.tail(H.basis.num_photon_sites);
  probe.anchor_site = attachment_site(lat, at_ep.emitters[0]);
  SublatticeWeights w = sublattice_weights(probe, lat);
  summary << "in-gap states at kappa*: " << gap_states.size()
          << ", min fidelity vs dressed state: " << csv_number(min_fidelity) << "\n";
  summary << "photon weight: A " << csv_number(w.w_A) << ", B " << csv_number(w.w_B)
          << ", right fraction " << csv_number(w.w_right / (w.w_left + w.w_right)) << "\n";
  ctx.finish(summary.str());
}

// ---------------------------------------------------------------- validate

int run_validate(int jobs) {
  std::vector<CriterionResult> results = run_acceptance(std::cout, jobs);
  return all_passed(results) ? 0 : 3;
}

// ------------------------------------------------------------------- main

struct CliOverrides {
  double detuning = 0.0;
  double kappa = 0.0;
  double delta = 0.0;
  int num_sites = 0;
  int site = -1;
  std::string boundary, sublattice;
  double t_max = 0.0;
  int num_times = 0;
  std::string initial;
  double kappa_max = 0.0;
  int kappa_count = 0;
};

}  // namespace

int main(int argc, char** argv) {
  // Deterministic single-threaded BLAS; our own pool handles parallelism.
  setenv("OPENBLAS_NUM_THREADS", "1", 0);

  CLI::App app{"wqed: dissipative waveguide-QED lab (energies in units of J, times in 1/J)"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, preset;
  int jobs = 0;
  app.add_option("-c,--config", config_path, "run configuration file (key = value tables)");
  app.add_option("--out", out_dir, "output directory (default: 'out' or [output] dir)");
  app.add_option("--jobs", jobs, "worker threads for sweeps (default: all cores)");

  CliOverrides ov;
  auto add_system_flags = [&](CLI::App* cmd, bool delta_is_detuning) {
    if (delta_is_detuning)
      cmd->add_option("--delta,--detuning", ov.detuning,
                      "emitter detuning Delta in J (default 0)");
    else {
      cmd->add_option("--delta", ov.delta, "SSH dimerization delta (default 0.25)");
      cmd->add_option("--detuning", ov.detuning, "emitter detuning Delta in J (default 0)");
    }
    cmd->add_option("--kappa", ov.kappa, "coupling kappa in J (default 0.1)");
    cmd->add_option("--num-sites,--cells", ov.num_sites,
                    "lattice sites (uniform) or unit cells (ssh); default 400 / 60");
    cmd->add_option("--site,--cell", ov.site,
                    "emitter site (uniform) or cell (ssh); default lattice center");
    cmd->add_option("--boundary", ov.boundary, "periodic | open (default periodic; ssh: open)");
    cmd->add_option("--sublattice", ov.sublattice, "A | B (ssh, default A)");
  };

  CLI::App* c_spectrum = app.add_subcommand(
      "spectrum", "eigenvalues + bound states; presets: fig2 (kappa sweep at Delta=2.1J)");
  add_system_flags(c_spectrum, true);
  c_spectrum->add_option("--preset", preset, "fig2");
  c_spectrum->add_option("--kappa-max", ov.kappa_max, "sweep kappa in [0, kappa-max]");
  c_spectrum->add_option("--kappa-count", ov.kappa_count, "sweep point count (default 301)");

  CLI::App* c_phase = app.add_subcommand(
      "phase-diagram", "unbroken/broken phase over (Delta, kappa); presets: fig1c");
  add_system_flags(c_phase, true);
  c_phase->add_option("--preset", preset, "fig1c");

  CLI::App* c_dynamics = app.add_subcommand(
      "dynamics", "normalized population dynamics; presets: fig2d, fig3, fig3cd");
  add_system_flags(c_dynamics, true);
  c_dynamics->add_option("--preset", preset, "fig2d | fig3 | fig3cd");
  bool oracle = false;
  c_dynamics->add_flag("--oracle", oracle,
                       "also run the no-jump density-matrix oracle (dimension <= 64)");
  c_dynamics->add_option("--t-max", ov.t_max, "time span in 1/J (default 200)");
  c_dynamics->add_option("--num-times", ov.num_times, "time grid points (default 2001)");
  c_dynamics->add_option("--initial", ov.initial,
                         "emitter:<m> | photon:<site> | pair:<re,im,re,im> (default emitter:0)");

  CLI::App* c_ssh = app.add_subcommand(
      "ssh", "SSH topological waveguide: spectrum vs kappa, EP3, dressed state; presets: fig4");
  add_system_flags(c_ssh, false);
  c_ssh->add_option("--preset", preset, "fig4");

  CLI::App* c_validate = app.add_subcommand(
      "validate", "run the full acceptance suite; exit 3 on any FAIL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_validate->parsed()) return run_validate(jobs);

    RunConfig cfg = config_path.empty() ? default_config() : parse_config_file(config_path);

    // Subcommand-specific baseline before explicit flags land on top.
    if (c_phase->parsed() && config_path.empty()) {
      cfg.system.lattice.num_sites = 200;
      cfg.system.emitters[0].site = 100;
    }
    if (c_ssh->parsed() && config_path.empty()) {
      cfg.system.lattice.kind = LatticeKind::SSH;
      cfg.system.lattice.boundary = Boundary::Open;
      cfg.system.lattice.delta = 0.25;
      cfg.system.lattice.num_sites = 60;
      cfg.system.emitters[0].site = 25;
      cfg.system.emitters[0].detuning = 0.0;
      cfg.system.emitters[0].coupling = 1.0;
    }

    // Presets pin every unstated figure parameter in one place.
    if (!preset.empty()) {
      if (preset == "fig2" && c_spectrum->parsed()) {
        cfg.system = SystemSpec{};
        cfg.system.lattice.num_sites = 400;
        cfg.system.emitters = {EmitterSpec{2.1, 0.1, 200, Sublattice::A}};
        cfg.axis1 = SweepAxis{SweepParameter::Kappa, 0.0, 0.3, 301};
      } else if (preset == "fig1c" && c_phase->parsed()) {
        cfg.system = SystemSpec{};
        cfg.system.lattice.num_sites = 400;
        cfg.system.emitters = {EmitterSpec{0.0, 0.1, 200, Sublattice::A}};
        cfg.axis1 = SweepAxis{SweepParameter::Detuning, -3.0, 3.0, 121};
        cfg.axis2 = SweepAxis{SweepParameter::Kappa, 0.0, 0.5, 101};
      } else if (preset == "fig2d" && c_dynamics->parsed()) {
        cfg.system = SystemSpec{};
        cfg.system.lattice.num_sites = 400;
        cfg.system.emitters = {EmitterSpec{2.1, 0.05, 200, Sublattice::A}};
        cfg.dynamics.t_max = 200.0;
        cfg.dynamics.num_times = 2001;
      } else if ((preset == "fig3" || preset == "fig3cd") && c_dynamics->parsed()) {
        cfg.system = SystemSpec{};
        cfg.system.lattice.num_sites = 400;
        cfg.system.emitters = {EmitterSpec{0.0, 0.3, 180, Sublattice::A},
                               EmitterSpec{0.0, 0.3, 221, Sublattice::A}};
        cfg.dynamics.t_max = 400.0;
        cfg.dynamics.num_times = 4001;
      } else if (preset == "fig4" && c_ssh->parsed()) {
        cfg.system = SystemSpec{};
        cfg.system.lattice.kind = LatticeKind::SSH;
        cfg.system.lattice.boundary = Boundary::Open;
        cfg.system.lattice.delta = 0.25;
        cfg.system.lattice.num_sites = 60;
        cfg.system.emitters = {EmitterSpec{0.0, 1.0, 25, Sublattice::A}};
      } else {
        throw ConfigError("unknown preset '" + preset + "' for this subcommand");
      }
    }

    // Explicit flags override config and preset.
    CLI::App* active = c_spectrum->parsed()   ? c_spectrum
                       : c_phase->parsed()    ? c_phase
                       : c_dynamics->parsed() ? c_dynamics
                                              : c_ssh;
    auto set_all_detuning = [&](double v) {
      for (auto& e : cfg.system.emitters) e.detuning = v;
    };
    auto set_all_kappa = [&](double v) {
      for (auto& e : cfg.system.emitters) e.coupling = v;
    };
    if (active->count("--delta")) {
      if (c_ssh->parsed())
        cfg.system.lattice.delta = ov.delta;
      else
        set_all_detuning(ov.detuning);
    }
    if (active->count("--detuning")) set_all_detuning(ov.detuning);
    if (active->count("--kappa")) set_all_kappa(ov.kappa);
    if (active->count("--num-sites")) {
      cfg.system.lattice.num_sites = ov.num_sites;
      for (auto& e : cfg.system.emitters)
        e.site = std::min(e.site, ov.num_sites - 1);
      if (active->count("--site") == 0 && cfg.system.emitters.size() == 1)
        cfg.system.emitters[0].site = ov.num_sites / 2;
    }
    if (active->count("--site")) cfg.system.emitters[0].site = ov.site;
    if (active->count("--boundary")) {
      if (ov.boundary == "periodic")
        cfg.system.lattice.boundary = Boundary::Periodic;
      else if (ov.boundary == "open")
        cfg.system.lattice.boundary = Boundary::Open;
      else
        throw ConfigError("--boundary must be periodic or open");
    }
    if (active->count("--sublattice")) {
      if (ov.sublattice == "A" || ov.sublattice == "a")
        cfg.system.emitters[0].sublattice = Sublattice::A;
      else if (ov.sublattice == "B" || ov.sublattice == "b")
        cfg.system.emitters[0].sublattice = Sublattice::B;
      else
        throw ConfigError("--sublattice must be A or B");
    }
    if (c_dynamics->parsed()) {
      if (c_dynamics->count("--t-max")) cfg.dynamics.t_max = ov.t_max;
      if (c_dynamics->count("--num-times")) cfg.dynamics.num_times = ov.num_times;
      if (c_dynamics->count("--initial")) cfg.dynamics.initial = ov.initial;
    }
    if (c_spectrum->parsed() && (c_spectrum->count("--kappa-max"))) {
      cfg.axis1 = SweepAxis{SweepParameter::Kappa, 0.0, ov.kappa_max,
                            ov.kappa_count > 0 ? ov.kappa_count : 301};
    }
    if (c_ssh->parsed() && config_path.empty() && active->count("--num-sites") == 0 &&
        cfg.system.lattice.delta > 0.0 && cfg.system.lattice.delta < 1.0) {
      // Weak dimerization stretches the emitter-seeded edge state
      // (xi = 1/ln((1+delta)/(1-delta)) cells); grow the default lattice so
      // the dressed-state analysis keeps its truncation budget.
      const double delta = cfg.system.lattice.delta;
      const double xi = 1.0 / std::log((1.0 + delta) / (1.0 - delta));
      const int j0 = std::max(25, static_cast<int>(std::ceil(2.5 * xi)));
      const int cells = j0 + static_cast<int>(std::ceil(10.0 * xi)) + 5;
      if (cells > cfg.system.lattice.num_sites) {
        cfg.system.lattice.num_sites = cells;
        if (active->count("--site") == 0) cfg.system.emitters[0].site = j0;
      }
    }
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (jobs > 0) cfg.output.jobs = jobs;

    if (c_spectrum->parsed()) {
      run_spectrum(make_context(std::move(cfg)));
    } else if (c_phase->parsed()) {
      run_phase_diagram(make_context(std::move(cfg)));
    } else if (c_dynamics->parsed()) {
      std::vector<DynamicsVariant> variants;
      if (preset == "fig2d") {
        for (double kappa : {0.05, ep_coupling(2.1), 0.3}) {
          SystemSpec spec = cfg.system;
          spec.emitters[0].coupling = kappa;
          std::ostringstream tag;
          tag << "kappa" << kappa;
          variants.push_back({tag.str(), spec});
        }
      } else if (preset == "fig3" || preset == "fig3cd") {
        for (int separation : {40, 41}) {
          SystemSpec spec = cfg.system;
          spec.emitters[1].site = spec.emitters[0].site + separation;
          variants.push_back({"n12_" + std::to_string(separation), spec});
        }
      } else {
        variants.push_back({"", cfg.system});
      }
      run_dynamics(make_context(std::move(cfg)), variants, oracle);
    } else if (c_ssh->parsed()) {
      run_ssh(make_context(std::move(cfg)));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
