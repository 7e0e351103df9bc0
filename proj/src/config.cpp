#include "wqed/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wqed {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Parser {
  std::string source;
  int line_no = 0;
  RunConfig cfg = default_config();
  std::string section;
  int emitter_index = -1;            // -1: no [[emitter]] block seen yet
  std::vector<bool> site_given;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(source + ":" + std::to_string(line_no) + ": " + msg);
  }

  double number(const std::string& v) const {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') fail("expected a number, got '" + v + "'");
    return x;
  }

  int integer(const std::string& v) const {
    const double x = number(v);
    const int i = static_cast<int>(std::lround(x));
    if (x != static_cast<double>(i)) fail("expected an integer, got '" + v + "'");
    return i;
  }

  std::vector<double> number_list(const std::string& v) const {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(number(item));
    }
    return out;
  }

  void open_section(const std::string& raw) {
    if (raw == "emitter") {
      // [[emitter]] appends one block
      if (emitter_index < 0) {
        cfg.system.emitters.clear();
        site_given.clear();
      }
      cfg.system.emitters.push_back(EmitterSpec{});
      site_given.push_back(false);
      ++emitter_index;
      section = "emitter";
      return;
    }
    static const char* known[] = {"lattice",     "dynamics", "sweep", "sweep.axis1",
                                  "sweep.axis2", "tolerances", "output"};
    for (const char* k : known)
      if (raw == k) {
        section = raw;
        if (raw == "sweep.axis1" && !cfg.axis1) cfg.axis1.emplace();
        if (raw == "sweep.axis2" && !cfg.axis2) cfg.axis2.emplace();
        return;
      }
    fail("unknown section [" + raw + "]");
  }

  SweepParameter sweep_parameter(const std::string& v) const {
    const std::string s = lower(v);
    if (s == "detuning") return SweepParameter::Detuning;
    if (s == "kappa") return SweepParameter::Kappa;
    if (s == "delta") return SweepParameter::Delta;
    if (s == "separation") return SweepParameter::Separation;
    fail("unknown sweep parameter '" + v + "' (detuning|kappa|delta|separation)");
  }

  void assign(const std::string& key, const std::string& value) {
    if (section.empty()) fail("key '" + key + "' outside any section");
    if (section == "lattice") {
      if (key == "kind") {
        const std::string v = lower(value);
        if (v == "uniform" || v == "uniform_chain")
          cfg.system.lattice.kind = LatticeKind::UniformChain;
        else if (v == "ssh")
          cfg.system.lattice.kind = LatticeKind::SSH;
        else
          fail("unknown lattice kind '" + value + "' (uniform|ssh)");
      } else if (key == "boundary") {
        const std::string v = lower(value);
        if (v == "periodic")
          cfg.system.lattice.boundary = Boundary::Periodic;
        else if (v == "open")
          cfg.system.lattice.boundary = Boundary::Open;
        else
          fail("unknown boundary '" + value + "' (periodic|open)");
      } else if (key == "j") {
        cfg.system.lattice.J = number(value);
      } else if (key == "delta") {
        cfg.system.lattice.delta = number(value);
      } else if (key == "num_sites") {
        cfg.system.lattice.num_sites = integer(value);
      } else {
        fail("unknown key '" + key + "' in [lattice]");
      }
    } else if (section == "emitter") {
      EmitterSpec& e = cfg.system.emitters.back();
      if (key == "detuning")
        e.detuning = number(value);
      else if (key == "coupling")
        e.coupling = number(value);
      else if (key == "site" || key == "cell") {
        e.site = integer(value);
        site_given.back() = true;
      } else if (key == "sublattice") {
        const std::string v = lower(value);
        if (v == "a")
          e.sublattice = Sublattice::A;
        else if (v == "b")
          e.sublattice = Sublattice::B;
        else
          fail("unknown sublattice '" + value + "' (A|B)");
      } else {
        fail("unknown key '" + key + "' in [[emitter]]");
      }
    } else if (section == "dynamics") {
      if (key == "t_max")
        cfg.dynamics.t_max = number(value);
      else if (key == "num_times")
        cfg.dynamics.num_times = integer(value);
      else if (key == "initial")
        cfg.dynamics.initial = value;
      else if (key == "snapshot_times")
        cfg.dynamics.snapshot_times = number_list(value);
      else
        fail("unknown key '" + key + "' in [dynamics]");
    } else if (section == "sweep") {
      if (key == "outputs") {
        cfg.outputs = SweepOutputs{false, false, false, false};
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const std::string v = lower(trim(item));
          if (v == "phase")
            cfg.outputs.phase = true;
          else if (v == "eigenvalues")
            cfg.outputs.eigenvalues = true;
          else if (v == "bound_states")
            cfg.outputs.bound_states = true;
          else if (v == "ep_markers")
            cfg.outputs.ep_markers = true;
          else
            fail("unknown sweep output '" + item + "'");
        }
      } else {
        fail("unknown key '" + key + "' in [sweep]");
      }
    } else if (section == "sweep.axis1" || section == "sweep.axis2") {
      SweepAxis& axis = section == "sweep.axis1" ? *cfg.axis1 : *cfg.axis2;
      if (key == "parameter")
        axis.parameter = sweep_parameter(value);
      else if (key == "min")
        axis.min = number(value);
      else if (key == "max")
        axis.max = number(value);
      else if (key == "count")
        axis.count = integer(value);
      else
        fail("unknown key '" + key + "' in [" + section + "]");
    } else if (section == "tolerances") {
      if (key == "eps_real_scale")
        cfg.tolerances.eps_real_scale = number(value);
      else if (key == "band_margin_factor")
        cfg.tolerances.band_margin_factor = number(value);
      else
        fail("unknown key '" + key + "' in [tolerances]");
    } else if (section == "output") {
      if (key == "dir")
        cfg.output.dir = value;
      else if (key == "jobs")
        cfg.output.jobs = integer(value);
      else
        fail("unknown key '" + key + "' in [output]");
    }
  }

  RunConfig run(const std::string& text) {
    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw)) {
      ++line_no;
      const size_t hash = raw.find('#');
      if (hash != std::string::npos) raw = raw.substr(0, hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.size() >= 4 && line[1] == '[') {
          if (line.substr(line.size() - 2) != "]]") fail("malformed section header");
          open_section(trim(line.substr(2, line.size() - 4)));
        } else {
          if (line.back() != ']') fail("malformed section header");
          open_section(lower(trim(line.substr(1, line.size() - 2))));
        }
        continue;
      }
      const size_t eq = line.find('=');
      if (eq == std::string::npos) fail("expected 'key = value'");
      const std::string key = lower(trim(line.substr(0, eq)));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) fail("empty key");
      assign(key, value);
    }
    // Unset emitter sites default to the middle of the lattice.
    for (size_t m = 0; m < cfg.system.emitters.size(); ++m) {
      const bool given = m < site_given.size() ? site_given[m] : true;
      if (!given || emitter_index < 0)
        cfg.system.emitters[m].site = cfg.system.lattice.num_sites / 2;
    }
    return cfg;
  }
};

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.system.lattice = LatticeSpec{};  // uniform periodic chain, 400 sites
  EmitterSpec e;
  e.site = cfg.system.lattice.num_sites / 2;
  cfg.system.emitters = {e};
  return cfg;
}

RunConfig parse_config_text(const std::string& text, const std::string& source_name) {
  Parser p;
  p.source = source_name;
  return p.run(text);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = spec_to_json(system);
  nlohmann::json sweep;
  auto axis_json = [](const SweepAxis& a) {
    return nlohmann::json{{"parameter", sweep_parameter_name(a.parameter)},
                          {"min", a.min},
                          {"max", a.max},
                          {"count", a.count}};
  };
  if (axis1) sweep["axis1"] = axis_json(*axis1);
  if (axis2) sweep["axis2"] = axis_json(*axis2);
  std::vector<std::string> outs;
  if (outputs.phase) outs.push_back("phase");
  if (outputs.eigenvalues) outs.push_back("eigenvalues");
  if (outputs.bound_states) outs.push_back("bound_states");
  if (outputs.ep_markers) outs.push_back("ep_markers");
  sweep["outputs"] = outs;
  j["sweep"] = sweep;
  j["dynamics"] = {{"t_max", dynamics.t_max},
                   {"num_times", dynamics.num_times},
                   {"initial", dynamics.initial},
                   {"snapshot_times", dynamics.snapshot_times}};
  j["tolerances"] = {{"eps_real_scale", tolerances.eps_real_scale},
                     {"band_margin_factor", tolerances.band_margin_factor}};
  j["output"] = {{"dir", output.dir}, {"jobs", output.jobs}};
  return j;
}

std::string system_to_config_text(const SystemSpec& spec) {
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "[lattice]\n";
  os << "kind = " << (spec.lattice.kind == LatticeKind::SSH ? "ssh" : "uniform") << "\n";
  os << "boundary = "
     << (spec.lattice.boundary == Boundary::Periodic ? "periodic" : "open") << "\n";
  os << "J = " << num(spec.lattice.J) << "\n";
  os << "delta = " << num(spec.lattice.delta) << "\n";
  os << "num_sites = " << spec.lattice.num_sites << "\n";
  for (const auto& e : spec.emitters) {
    os << "\n[[emitter]]\n";
    os << "detuning = " << num(e.detuning) << "\n";
    os << "coupling = " << num(e.coupling) << "\n";
    os << (spec.lattice.kind == LatticeKind::SSH ? "cell = " : "site = ") << e.site << "\n";
    if (spec.lattice.kind == LatticeKind::SSH)
      os << "sublattice = " << (e.sublattice == Sublattice::B ? "B" : "A") << "\n";
  }
  return os.str();
}

InitialState make_initial_state(const std::string& descriptor, const BasisIndex& basis) {
  const size_t colon = descriptor.find(':');
  const std::string kind = colon == std::string::npos ? descriptor : descriptor.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
  auto as_int = [&](const std::string& s) {
    try {
      return std::stoi(s);
    } catch (...) {
      throw ConfigError("initial state '" + descriptor + "': bad index");
    }
  };
  if (kind == "emitter") return emitter_excited(basis, arg.empty() ? 0 : as_int(arg));
  if (kind == "photon") return photon_at_site(basis, as_int(arg));
  if (kind == "pair") {
    std::vector<double> v;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::strtod(item.c_str(), nullptr));
    if (v.size() != 4)
      throw ConfigError("initial state 'pair' needs four numbers re0,im0,re1,im1");
    return two_emitter_superposition(basis, Complex(v[0], v[1]), Complex(v[2], v[3]));
  }
  throw ConfigError("unknown initial state '" + descriptor +
                    "' (emitter:<m> | photon:<site> | pair:<re,im,re,im>)");
}

}  // namespace wqed
