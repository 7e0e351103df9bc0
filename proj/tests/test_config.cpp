#include <doctest.h>

#include "wqed/config.hpp"

using namespace wqed;

TEST_SUITE("config") {

TEST_CASE("empty config gives the documented defaults") {
  RunConfig cfg = parse_config_text("", "empty.cfg");
  CHECK(cfg.system.lattice.kind == LatticeKind::UniformChain);
  CHECK(cfg.system.lattice.boundary == Boundary::Periodic);
  CHECK(cfg.system.lattice.num_sites == 400);
  REQUIRE(cfg.system.emitters.size() == 1);
  CHECK(cfg.system.emitters[0].detuning == 0.0);
  CHECK(cfg.system.emitters[0].coupling == 0.1);
  CHECK(cfg.system.emitters[0].site == 200);
  CHECK(cfg.dynamics.t_max == 200.0);
  CHECK(cfg.dynamics.num_times == 2001);
  CHECK(cfg.output.dir == "out");
  CHECK_FALSE(cfg.axis1.has_value());
}

TEST_CASE("full config parses to the right structure") {
  const std::string text = R"(# full run
[lattice]
kind = ssh
boundary = open
J = 1.0
delta = 0.25
num_sites = 60

[[emitter]]
detuning = 0.0
coupling = 0.5
cell = 25
sublattice = A

[[emitter]]
detuning = 0.1
coupling = 0.5
cell = 40
sublattice = B

[dynamics]
t_max = 100
num_times = 501
initial = emitter:1
snapshot_times = 10, 50

[sweep]
outputs = eigenvalues, bound_states

[sweep.axis1]
parameter = kappa
min = 0
max = 1.6
count = 33

[tolerances]
eps_real_scale = 1e-8

[output]
dir = results
jobs = 2
)";
  RunConfig cfg = parse_config_text(text, "full.cfg");
  CHECK(cfg.system.lattice.kind == LatticeKind::SSH);
  CHECK(cfg.system.lattice.delta == 0.25);
  REQUIRE(cfg.system.emitters.size() == 2);
  CHECK(cfg.system.emitters[0].site == 25);
  CHECK(cfg.system.emitters[1].sublattice == Sublattice::B);
  CHECK(cfg.dynamics.num_times == 501);
  REQUIRE(cfg.dynamics.snapshot_times.size() == 2);
  CHECK(cfg.dynamics.snapshot_times[1] == 50.0);
  REQUIRE(cfg.axis1.has_value());
  CHECK(cfg.axis1->parameter == SweepParameter::Kappa);
  CHECK(cfg.axis1->count == 33);
  CHECK_FALSE(cfg.outputs.phase);
  CHECK(cfg.outputs.eigenvalues);
  CHECK(cfg.outputs.bound_states);
  CHECK(cfg.tolerances.eps_real_scale == 1e-8);
  CHECK(cfg.output.dir == "results");
  CHECK(cfg.output.jobs == 2);
}

TEST_CASE("unknown keys and sections are rejected with line numbers") {
  CHECK_THROWS_WITH_AS(parse_config_text("[lattice]\nkapa = 3\n", "t.cfg"),
                       doctest::Contains("t.cfg:2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[lattice]\nkapa = 3\n", "t.cfg"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[nonsense]\n", "t.cfg"),
                       doctest::Contains("unknown section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("x = 3\n", "t.cfg"),
                       doctest::Contains("outside any section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[lattice]\nnum_sites = many\n", "t.cfg"),
                       doctest::Contains("t.cfg:2"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[lattice]\nkind = triangular\n", "t.cfg"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[lattice]\nnum_sites\n", "t.cfg"), ConfigError);
}

TEST_CASE("system round-trips through the config grammar") {
  SystemSpec spec;
  spec.lattice.kind = LatticeKind::SSH;
  spec.lattice.boundary = Boundary::Open;
  spec.lattice.delta = 0.3125;
  spec.lattice.num_sites = 48;
  spec.emitters = {EmitterSpec{0.125, 0.75, 20, Sublattice::A},
                   EmitterSpec{-0.5, 0.75, 31, Sublattice::B}};
  RunConfig cfg = parse_config_text(system_to_config_text(spec), "roundtrip.cfg");
  CHECK(cfg.system.lattice.kind == spec.lattice.kind);
  CHECK(cfg.system.lattice.delta == spec.lattice.delta);
  CHECK(cfg.system.lattice.num_sites == spec.lattice.num_sites);
  REQUIRE(cfg.system.emitters.size() == 2);
  for (size_t m = 0; m < 2; ++m) {
    CHECK(cfg.system.emitters[m].detuning == spec.emitters[m].detuning);
    CHECK(cfg.system.emitters[m].coupling == spec.emitters[m].coupling);
    CHECK(cfg.system.emitters[m].site == spec.emitters[m].site);
    CHECK(cfg.system.emitters[m].sublattice == spec.emitters[m].sublattice);
  }
}

TEST_CASE("config echo lands in the manifest json") {
  RunConfig cfg = parse_config_text("[lattice]\nnum_sites = 64\n", "echo.cfg");
  nlohmann::json j = cfg.to_json();
  CHECK(j["lattice"]["num_sites"] == 64);
  CHECK(j["dynamics"]["t_max"] == 200.0);
  CHECK(j["output"]["dir"] == "out");
}

TEST_CASE("initial state descriptors") {
  BasisIndex basis{2, 16};
  InitialState e1 = make_initial_state("emitter:1", basis);
  CHECK(e1.kind == InitialState::Kind::SingleEmitterExcited);
  CHECK(std::abs(e1.vector[1]) == 1.0);

  InitialState ph = make_initial_state("photon:3", basis);
  CHECK(std::abs(ph.vector[2 + 3]) == 1.0);

  InitialState pair = make_initial_state("pair:0.6,0,0,0.8", basis);
  CHECK(std::abs(pair.vector[0] - 0.6) <= 1e-12);
  CHECK(std::abs(pair.vector[1] - Complex(0.0, 0.8)) <= 1e-12);
  CHECK(std::abs(pair.vector.norm() - 1.0) <= 1e-12);

  CHECK_THROWS_AS(make_initial_state("emitter:7", basis), std::exception);
  CHECK_THROWS_AS(make_initial_state("banana", basis), ConfigError);
}

}  // TEST_SUITE
