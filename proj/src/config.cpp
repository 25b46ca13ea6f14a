#include "spheresync/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "spheresync/analysis.hpp"
#include "spheresync/presets.hpp"

namespace spheresync::config {

namespace {

struct KeySpec {
  std::string_view section;
  std::string_view key;
  bool repeatable;
};

constexpr KeySpec kSchema[] = {
    {"scenario", "mode", false},    {"scenario", "sphere_dim", false}, {"scenario", "n_agents", false},
    {"scenario", "dt", false},      {"scenario", "horizon", false},    {"scenario", "seed", false},
    {"scenario", "epsilon", false}, {"shaping", "kind", false},        {"shaping", "power", false},
    {"shaping", "domain_limit", false}, {"graphs", "graph", true},     {"signal", "source", false},
    {"signal", "switch", true},     {"signal", "start", false},        {"signal", "dwell", false},
    {"signal", "tau_d", false},     {"signal", "n0", false},           {"signal", "tau_a", false},
    {"init", "source", false},      {"init", "state", true},           {"init", "center", false},
    {"init", "radius", false},      {"init", "rho", false},            {"init", "body_axis", false},
    {"init", "randomize_signs", false}, {"output", "trace", false},    {"output", "report", false},
    {"output", "stride", false},
};

bool known_section(std::string_view s) {
  return std::any_of(std::begin(kSchema), std::end(kSchema), [s](const KeySpec& k) { return k.section == s; });
}

const KeySpec* find_key(std::string_view section, std::string_view key) {
  for (const KeySpec& k : kSchema) {
    if (k.section == section && k.key == key) return &k;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += fmt(v[i]);
  }
  return out;
}

/// Typed access to the document with errors pointing at lines.
class Reader {
 public:
  explicit Reader(const IniDocument& doc) : doc_(doc) {}

  const IniEntry* find(std::string_view section, std::string_view key) const {
    const IniEntry* found = nullptr;
    for (const IniEntry& e : doc_.entries) {
      if (e.section == section && e.key == key) found = &e;
    }
    return found;
  }

  std::vector<const IniEntry*> all(std::string_view section, std::string_view key) const {
    std::vector<const IniEntry*> out;
    for (const IniEntry& e : doc_.entries) {
      if (e.section == section && e.key == key) out.push_back(&e);
    }
    return out;
  }

  const IniEntry& require(std::string_view section, std::string_view key) const {
    const IniEntry* e = find(section, key);
    if (e == nullptr) {
      throw ConfigError(section_line(section), std::string(section) + "." + std::string(key), "missing required key");
    }
    return *e;
  }

  int section_line(std::string_view section) const {
    for (const auto& [name, line] : doc_.sections) {
      if (name == section) return line;
    }
    return 0;
  }

 private:
  const IniDocument& doc_;
};

std::string field_name(const IniEntry& e) { return e.section + "." + e.key; }

[[noreturn]] void fail(const IniEntry& e, const std::string& message) { throw ConfigError(e.line, field_name(e), message); }

double parse_double(const IniEntry& e, std::string_view text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) fail(e, "expected a finite number, got '" + std::string(text) + "'");
  return v;
}

double as_double(const IniEntry& e) { return parse_double(e, e.value); }

double as_positive(const IniEntry& e) {
  const double v = as_double(e);
  if (!(v > 0.0)) fail(e, "must be positive");
  return v;
}

std::uint64_t as_uint(const IniEntry& e) {
  std::uint64_t v = 0;
  const char* begin = e.value.data();
  const char* end = e.value.data() + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) fail(e, "expected a non-negative integer, got '" + e.value + "'");
  return v;
}

bool as_bool(const IniEntry& e) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  fail(e, "expected true or false");
}

Eigen::VectorXd as_vector(const IniEntry& e, Eigen::Index expected) {
  const auto toks = split_ws(e.value);
  if (static_cast<Eigen::Index>(toks.size()) != expected) {
    fail(e, "expected " + std::to_string(expected) + " numbers, got " + std::to_string(toks.size()));
  }
  Eigen::VectorXd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) v[i] = parse_double(e, toks[static_cast<std::size_t>(i)]);
  return v;
}

UnitVector as_direction(const IniEntry& e, Eigen::Index expected) {
  try {
    return UnitVector::normalized(as_vector(e, expected));
  } catch (const InputError& err) {
    fail(e, err.what());
  }
}

Quaternion as_quaternion(const IniEntry& e) {
  try {
    return Quaternion::normalized(as_vector(e, 4));
  } catch (const InputError& err) {
    fail(e, err.what());
  }
}

Graph parse_graph(const IniEntry& e, std::size_t n_agents) {
  std::vector<Edge> edges;
  for (const std::string& tok : split_ws(e.value)) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos) fail(e, "edge '" + tok + "' must look like i-j or i-j:weight");
    const auto colon = tok.find(':', dash);
    const std::string a = tok.substr(0, dash);
    const std::string b = tok.substr(dash + 1, colon == std::string::npos ? std::string::npos : colon - dash - 1);
    Edge edge{0, 0, 1.0};
    auto parse_index = [&](const std::string& s, std::size_t& out) {
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) fail(e, "bad agent index in edge '" + tok + "'");
    };
    parse_index(a, edge.i);
    parse_index(b, edge.j);
    if (colon != std::string::npos) edge.weight = parse_double(e, std::string_view(tok).substr(colon + 1));
    edges.push_back(edge);
  }
  try {
    return Graph(n_agents, std::move(edges));
  } catch (const InputError& err) {
    fail(e, err.what());
  }
}

}  // namespace

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : std::runtime_error("config" + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         (field.empty() ? std::string() : field + ": ") + message),
      line_(line),
      field_(std::move(field)) {}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over seed and stream.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

IniDocument parse_ini(std::string_view text) {
  IniDocument doc;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto hash = raw.find('#');
    const std::string line = trim(raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "", "malformed section header '" + line + "'");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_section(section)) throw ConfigError(line_no, section, "unknown section");
      doc.sections.emplace_back(section, line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) throw ConfigError(line_no, key, "key outside of any section");
    const KeySpec* spec = find_key(section, key);
    if (spec == nullptr) throw ConfigError(line_no, section + "." + key, "unknown key");
    if (!spec->repeatable) {
      for (const IniEntry& prev : doc.entries) {
        if (prev.section == section && prev.key == key) {
          throw ConfigError(line_no, section + "." + key,
                            "duplicate key (first set on line " + std::to_string(prev.line) + ")");
        }
      }
    }
    doc.entries.push_back({section, key, value, line_no});
  }
  return doc;
}

void apply_override(IniDocument& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError(0, std::string(assignment), "override must look like section.key=value");
  const std::string path = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto dot = path.find('.');
  if (dot == std::string::npos) throw ConfigError(0, path, "override key must be section.key");
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  if (find_key(section, key) == nullptr) throw ConfigError(0, path, "unknown key");
  std::erase_if(doc.entries, [&](const IniEntry& e) { return e.section == section && e.key == key; });
  doc.entries.push_back({section, key, value, 0});
}

ScenarioConfig build_scenario(const IniDocument& doc, std::optional<std::uint64_t> seed_override) {
  const Reader r(doc);
  ScenarioConfig cfg;
  Scenario& sc = cfg.scenario;

  // [scenario]
  {
    const IniEntry& mode = r.require("scenario", "mode");
    try {
      sc.mode = parse_simulation_mode(mode.value);
    } catch (const InputError& err) {
      fail(mode, err.what());
    }
    const IniEntry& dim = r.require("scenario", "sphere_dim");
    sc.sphere_dim = static_cast<int>(as_uint(dim));
    if (sc.sphere_dim < 1) fail(dim, "must be >= 1");
    if (sc.mode == SimulationMode::kSo3CompleteViaS3 && sc.sphere_dim != 3) fail(dim, "so3_complete_via_s3 requires 3");
    if (sc.mode == SimulationMode::kSo3IncompleteViaS2 && sc.sphere_dim != 2) fail(dim, "so3_incomplete_via_s2 requires 2");
    const IniEntry& n = r.require("scenario", "n_agents");
    sc.n_agents = static_cast<std::size_t>(as_uint(n));
    if (sc.n_agents == 0) fail(n, "must be >= 1");
    sc.dt = as_positive(r.require("scenario", "dt"));
    sc.horizon = as_positive(r.require("scenario", "horizon"));
    if (const IniEntry* e = r.find("scenario", "seed")) sc.seed = as_uint(*e);
    if (seed_override) sc.seed = *seed_override;
    if (const IniEntry* e = r.find("scenario", "epsilon")) sc.epsilon = as_positive(*e);
  }

  // [shaping]
  {
    const IniEntry& kind = r.require("shaping", "kind");
    try {
      sc.shaping.kind = parse_shaping_kind(kind.value);
    } catch (const InputError& err) {
      fail(kind, err.what());
    }
    if (const IniEntry* e = r.find("shaping", "power")) {
      if (sc.shaping.kind != ShapingKind::kPowerChordal) fail(*e, "only valid for kind = power_chordal");
      sc.shaping.power = as_double(*e);
      if (!(sc.shaping.power >= 1.0)) fail(*e, "must be >= 1");
    } else if (sc.shaping.kind == ShapingKind::kPowerChordal) {
      fail(kind, "power_chordal needs shaping.power");
    }
    if (const IniEntry* e = r.find("shaping", "domain_limit")) {
      sc.shaping.domain_limit = as_double(*e);
      if (!(sc.shaping.domain_limit > 0.0 && sc.shaping.domain_limit <= std::numbers::pi)) fail(*e, "must lie in (0, pi]");
    }
  }

  // [graphs]
  {
    const auto graphs = r.all("graphs", "graph");
    if (graphs.empty()) throw ConfigError(r.section_line("graphs"), "graphs.graph", "at least one graph is required");
    for (const IniEntry* e : graphs) sc.graphs.push_back(parse_graph(*e, sc.n_agents));
  }

  // [signal]
  {
    const IniEntry* dwell = r.find("signal", "dwell");
    const std::string dwell_mode = dwell ? dwell->value : "none";
    if (dwell_mode == "fixed") {
      sc.dwell = DwellTimeSpec{DwellTimeSpec::Mode::kFixedDwell, as_positive(r.require("signal", "tau_d")), 1.0, 0.0};
    } else if (dwell_mode == "average") {
      const IniEntry& n0 = r.require("signal", "n0");
      const double n0v = as_double(n0);
      if (!(n0v >= 1.0)) fail(n0, "must be >= 1");
      sc.dwell = DwellTimeSpec{DwellTimeSpec::Mode::kAverageDwell, 0.0, n0v, as_positive(r.require("signal", "tau_a"))};
    } else if (dwell_mode != "none") {
      fail(*dwell, "expected none, fixed or average");
    }
    for (std::string_view key : {"tau_d", "n0", "tau_a"}) {
      const IniEntry* e = r.find("signal", key);
      if (e == nullptr) continue;
      const bool used = (key == "tau_d" && dwell_mode == "fixed") || (key != "tau_d" && dwell_mode == "average");
      if (!used) fail(*e, "not used by dwell = " + dwell_mode);
    }

    const IniEntry* source = r.find("signal", "source");
    const std::string src = source ? source->value : "explicit";
    const auto switches = r.all("signal", "switch");
    if (src == "explicit") {
      if (const IniEntry* e = r.find("signal", "start")) fail(*e, "only valid for source = generated");
      if (switches.empty()) {
        if (sc.graphs.size() != 1) {
          throw ConfigError(r.section_line("signal"), "signal.switch",
                            "explicit signal needs switch entries when more than one graph is given");
        }
        sc.signal = SwitchingSignal::constant(0.0, 0);
      } else {
        std::vector<double> times;
        std::vector<std::size_t> indices;
        for (const IniEntry* e : switches) {
          const auto toks = split_ws(e->value);
          if (toks.size() != 2) fail(*e, "expected 'time graph_index'");
          times.push_back(parse_double(*e, toks[0]));
          std::size_t idx = 0;
          const auto [ptr, ec] = std::from_chars(toks[1].data(), toks[1].data() + toks[1].size(), idx);
          if (ec != std::errc() || ptr != toks[1].data() + toks[1].size()) fail(*e, "bad graph index");
          if (idx >= sc.graphs.size()) fail(*e, "graph index " + std::to_string(idx) + " out of range");
          if (!times.empty() && times.size() > 1 && !(times.back() > times[times.size() - 2])) {
            fail(*e, "switch times must be strictly increasing");
          }
          indices.push_back(idx);
        }
        sc.signal = SwitchingSignal(std::move(times), std::move(indices));
      }
    } else if (src == "generated") {
      if (!switches.empty()) fail(*switches.front(), "not allowed with source = generated");
      if (!sc.dwell) {
        throw ConfigError(source->line, "signal.dwell", "a generated signal needs dwell = fixed or average");
      }
      double t0 = 0.0;
      if (const IniEntry* e = r.find("signal", "start")) t0 = as_double(*e);
      try {
        sc.signal = generate_switching_signal(derive_seed(sc.seed, 1), sc.graphs.size(), *sc.dwell, sc.horizon, t0);
      } catch (const std::exception& err) {
        fail(*source, err.what());
      }
    } else {
      fail(*source, "expected explicit or generated");
    }
    if (!(sc.horizon > sc.signal.start_time())) {
      throw ConfigError(r.require("scenario", "horizon").line, "scenario.horizon", "must be after the signal start time");
    }
  }

  // [init]
  {
    const IniEntry* source = r.find("init", "source");
    const std::string src = source ? source->value : "explicit";
    const auto states = r.all("init", "state");
    const bool so3 = sc.mode == SimulationMode::kSo3CompleteViaS3 || sc.mode == SimulationMode::kSo3IncompleteViaS2;
    const bool rn = sc.mode == SimulationMode::kRnConsensusViaSn;
    const Eigen::Index state_len = so3 ? 4 : (rn ? sc.sphere_dim : sc.sphere_dim + 1);

    const IniEntry* body = r.find("init", "body_axis");
    if (sc.mode == SimulationMode::kSo3IncompleteViaS2) {
      sc.body_axis = body ? as_direction(*body, 3) : UnitVector::basis(2, 2);
    } else if (body) {
      fail(*body, "only valid for mode = so3_incomplete_via_s2");
    }
    const IniEntry* rho = r.find("init", "rho");
    if (rho && !rn) fail(*rho, "only valid for mode = rn_consensus_via_sn");
    const IniEntry* signs = r.find("init", "randomize_signs");
    if (signs && sc.mode != SimulationMode::kSo3CompleteViaS3) fail(*signs, "only valid for mode = so3_complete_via_s3");

    std::vector<UnitVector> directions;
    std::vector<Quaternion> quats;
    std::vector<Eigen::VectorXd> points;

    if (src == "explicit") {
      for (std::string_view key : {"center", "radius"}) {
        if (const IniEntry* e = r.find("init", key)) fail(*e, "only valid for source = cap");
      }
      if (states.size() != sc.n_agents) {
        throw ConfigError(states.empty() ? r.section_line("init") : states.back()->line, "init.state",
                          "expected " + std::to_string(sc.n_agents) + " states, got " + std::to_string(states.size()));
      }
      for (const IniEntry* e : states) {
        if (so3) {
          quats.push_back(as_quaternion(*e));
        } else if (rn) {
          points.push_back(as_vector(*e, state_len));
        } else {
          directions.push_back(as_direction(*e, state_len));
        }
      }
    } else if (src == "cap") {
      if (!states.empty()) fail(*states.front(), "not allowed with source = cap");
      const IniEntry& radius_entry = r.require("init", "radius");
      const double radius = as_positive(radius_entry);
      std::mt19937_64 rng(derive_seed(sc.seed, 2));
      const IniEntry* center = r.find("init", "center");
      if (rn) {
        const Eigen::VectorXd c = center ? as_vector(*center, state_len) : Eigen::VectorXd::Zero(state_len);
        points = sample_ball(c, radius, sc.n_agents, rng);
      } else {
        if (radius >= std::numbers::pi) fail(radius_entry, "cap radius must be < pi");
        const Eigen::Index center_len = sc.mode == SimulationMode::kSo3IncompleteViaS2 ? 3 : state_len;
        // Default center: identity quaternion on S^3, north pole otherwise.
        const int center_dim = static_cast<int>(center_len) - 1;
        const UnitVector c = center ? as_direction(*center, center_len)
                                    : UnitVector::basis(center_dim, sc.mode == SimulationMode::kSo3CompleteViaS3 ? 0 : center_dim);
        if (sc.mode == SimulationMode::kSo3IncompleteViaS2) {
          quats = sample_pointing_attitudes(c, radius, *sc.body_axis, sc.n_agents, rng);
        } else if (sc.mode == SimulationMode::kSo3CompleteViaS3) {
          const auto pts = sample_cap(c, radius, sc.n_agents, rng);
          const bool flip = signs ? as_bool(*signs) : false;
          std::uniform_int_distribution<int> coin(0, 1);
          for (const UnitVector& p : pts) {
            Quaternion q = Quaternion::from_unit_vector(p);
            if (flip && coin(rng) == 1) q = -q;
            quats.push_back(q);
          }
        } else {
          directions = sample_cap(c, radius, sc.n_agents, rng);
        }
      }
    } else {
      fail(*source, "expected explicit or cap");
    }
    if (src == "explicit" && signs) fail(*signs, "only valid for source = cap");

    switch (sc.mode) {
      case SimulationMode::kGenericSn:
        sc.init = AgentStates(std::move(directions), sc.signal.start_time());
        break;
      case SimulationMode::kSo3CompleteViaS3: {
        std::vector<UnitVector> pts;
        for (const Quaternion& q : quats) pts.push_back(q.to_unit_vector());
        sc.init = AgentStates(std::move(pts), sc.signal.start_time());
        break;
      }
      case SimulationMode::kSo3IncompleteViaS2: {
        std::vector<RotationMatrix> rots;
        for (const Quaternion& q : quats) rots.push_back(quat_to_rotmat(q));
        sc.initial_attitudes = std::move(quats);
        const AgentStates projected = project_so3_incomplete(rots, *sc.body_axis);
        sc.init = AgentStates(projected.states(), sc.signal.start_time());
        break;
      }
      case SimulationMode::kRnConsensusViaSn: {
        sc.consensus_scale = rho ? as_positive(*rho) : default_consensus_scale(points);
        const AgentStates embedded = consensus_embed(points, sc.consensus_scale);
        sc.init = AgentStates(embedded.states(), sc.signal.start_time());
        sc.consensus_points = std::move(points);
        break;
      }
    }
  }

  // [output]
  if (const IniEntry* e = r.find("output", "trace")) cfg.output.trace_path = e->value;
  if (const IniEntry* e = r.find("output", "report")) cfg.output.report_path = e->value;
  if (const IniEntry* e = r.find("output", "stride")) {
    cfg.output.stride = static_cast<std::size_t>(as_uint(*e));
    if (cfg.output.stride == 0) fail(*e, "must be >= 1");
  }

  try {
    sc.validate();
  } catch (const InputError& err) {
    throw ConfigError(0, "", err.what());
  }
  return cfg;
}

ScenarioConfig parse_config(std::string_view text, const std::vector<std::string>& overrides,
                            std::optional<std::uint64_t> seed_override) {
  IniDocument doc = parse_ini(text);
  for (const std::string& o : overrides) apply_override(doc, o);
  return build_scenario(doc, seed_override);
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                           std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "", "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides, seed_override);
}

std::string echo_config(const ScenarioConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  std::ostringstream out;
  out << "[scenario]\n"
      << "mode = " << to_string(sc.mode) << "\n"
      << "sphere_dim = " << sc.sphere_dim << "\n"
      << "n_agents = " << sc.n_agents << "\n"
      << "dt = " << fmt(sc.dt) << "\n"
      << "horizon = " << fmt(sc.horizon) << "\n"
      << "seed = " << sc.seed << "\n"
      << "epsilon = " << fmt(sc.epsilon) << "\n\n";

  out << "[shaping]\n"
      << "kind = " << to_string(sc.shaping.kind) << "\n";
  if (sc.shaping.kind == ShapingKind::kPowerChordal) out << "power = " << fmt(sc.shaping.power) << "\n";
  out << "domain_limit = " << fmt(sc.shaping.domain_limit) << "\n\n";

  out << "[graphs]\n";
  for (const Graph& g : sc.graphs) {
    out << "graph =";
    for (const Edge& e : g.edges()) out << ' ' << e.i << '-' << e.j << ':' << fmt(e.weight);
    out << "\n";
  }
  out << "\n[signal]\nsource = explicit\n";
  for (std::size_t k = 0; k < sc.signal.size(); ++k) {
    out << "switch = " << fmt(sc.signal.switch_times()[k]) << ' ' << sc.signal.graph_indices()[k] << "\n";
  }
  if (!sc.dwell) {
    out << "dwell = none\n";
  } else if (sc.dwell->mode == DwellTimeSpec::Mode::kFixedDwell) {
    out << "dwell = fixed\ntau_d = " << fmt(sc.dwell->tau_d) << "\n";
  } else {
    out << "dwell = average\nn0 = " << fmt(sc.dwell->n0) << "\ntau_a = " << fmt(sc.dwell->tau_a) << "\n";
  }

  out << "\n[init]\nsource = explicit\n";
  switch (sc.mode) {
    case SimulationMode::kGenericSn:
    case SimulationMode::kSo3CompleteViaS3:
      for (const UnitVector& x : sc.init.states()) out << "state = " << fmt_vector(x.coords()) << "\n";
      break;
    case SimulationMode::kSo3IncompleteViaS2:
      for (const Quaternion& q : sc.initial_attitudes) out << "state = " << fmt_vector(q.coeffs()) << "\n";
      out << "body_axis = " << fmt_vector(sc.body_axis->coords()) << "\n";
      break;
    case SimulationMode::kRnConsensusViaSn:
      for (const Eigen::VectorXd& z : sc.consensus_points) out << "state = " << fmt_vector(z) << "\n";
      out << "rho = " << fmt(sc.consensus_scale) << "\n";
      break;
  }

  out << "\n[output]\n"
      << "trace = " << cfg.output.trace_path << "\n"
      << "report = " << cfg.output.report_path << "\n"
      << "stride = " << cfg.output.stride << "\n";
  return out.str();
}

}  // namespace spheresync::config
