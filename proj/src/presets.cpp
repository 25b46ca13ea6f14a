#include "spheresync/presets.hpp"

#include <cmath>
#include <numbers>

#include "spheresync/analysis.hpp"

namespace spheresync {

namespace {

Eigen::VectorXd gaussian_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

Eigen::VectorXd random_direction(Eigen::Index n, std::mt19937_64& rng) {
  while (true) {
    Eigen::VectorXd v = gaussian_vector(n, rng);
    const double norm = v.norm();
    if (norm > 1e-6) return v / norm;
  }
}

}  // namespace

std::vector<UnitVector> sample_cap(const UnitVector& center, double radius, std::size_t count, std::mt19937_64& rng) {
  if (!(radius > 0.0 && radius < std::numbers::pi)) throw InputError("sample_cap: radius must lie in (0, pi)");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<UnitVector> out;
  out.reserve(count);
  while (out.size() < count) {
    const Eigen::VectorXd g = gaussian_vector(center.ambient_dim(), rng);
    Eigen::VectorXd dir = g - center.coords().dot(g) * center.coords();
    const double n = dir.norm();
    if (n < 1e-6) continue;
    dir /= n;
    const double angle = radius * unit(rng);
    out.push_back(sphere_exp(center, tangent_project(center, angle * dir)));
  }
  return out;
}

Quaternion minimal_rotation(const UnitVector& from, const UnitVector& to) {
  const Eigen::Vector3d a = from.coords();
  const Eigen::Vector3d b = to.coords();
  const Eigen::Vector3d axis = a.cross(b);
  const double s = axis.norm();
  const double c = a.dot(b);
  if (s < 1e-12) {
    if (c > 0.0) return Quaternion::identity();
    Eigen::Index k = 0;
    a.cwiseAbs().minCoeff(&k);
    return Quaternion::from_axis_angle(a.cross(Eigen::Vector3d::Unit(k)), std::numbers::pi);
  }
  return Quaternion::from_axis_angle(axis, std::atan2(s, c));
}

std::vector<Quaternion> sample_pointing_attitudes(const UnitVector& center, double radius, const UnitVector& b,
                                                  std::size_t count, std::mt19937_64& rng) {
  if (center.dim() != 2 || b.dim() != 2) throw InputError("sample_pointing_attitudes: center and axis must lie on S^2");
  const auto pointing = sample_cap(center, radius, count, rng);
  std::uniform_real_distribution<double> twist(-std::numbers::pi, std::numbers::pi);
  std::vector<Quaternion> out;
  out.reserve(count);
  for (const UnitVector& p : pointing) {
    out.push_back(minimal_rotation(b, p) * Quaternion::from_axis_angle(b.coords(), twist(rng)));
  }
  return out;
}

std::vector<Eigen::VectorXd> sample_ball(const Eigen::VectorXd& center, double radius, std::size_t count,
                                         std::mt19937_64& rng) {
  if (!(radius > 0.0)) throw InputError("sample_ball: radius must be positive");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  const double inv_dim = 1.0 / static_cast<double>(center.size());
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::VectorXd dir = random_direction(center.size(), rng);
    out.push_back(center + radius * std::pow(unit(rng), inv_dim) * dir);
  }
  return out;
}

Scenario make_sync_scenario(const SyncScenarioParams& p) {
  Scenario sc;
  sc.mode = p.mode;
  sc.sphere_dim = p.sphere_dim;
  sc.n_agents = p.n_agents;
  sc.dt = p.dt;
  sc.horizon = p.horizon;
  sc.seed = p.seed;
  sc.shaping = p.shaping;
  sc.dwell = p.dwell;

  std::mt19937_64 graph_rng(config::derive_seed(p.seed, 3));
  for (std::size_t k = 0; k < p.n_graphs; ++k) {
    sc.graphs.push_back(random_ring_graph(p.n_agents, p.extra_edge_probability, graph_rng));
  }
  sc.signal = generate_switching_signal(config::derive_seed(p.seed, 1), p.n_graphs, p.dwell, p.horizon);

  std::mt19937_64 rng(config::derive_seed(p.seed, 2));
  const double t0 = sc.signal.start_time();
  switch (p.mode) {
    case SimulationMode::kGenericSn: {
      const UnitVector pole = UnitVector::normalized(random_direction(p.sphere_dim + 1, rng));
      sc.init = AgentStates(sample_cap(pole, p.cap_radius, p.n_agents, rng), t0);
      break;
    }
    case SimulationMode::kSo3CompleteViaS3: {
      sc.sphere_dim = 3;
      const UnitVector pole = UnitVector::normalized(random_direction(4, rng));
      std::vector<UnitVector> pts = sample_cap(pole, p.cap_radius, p.n_agents, rng);
      if (p.randomize_signs) {
        std::uniform_int_distribution<int> coin(0, 1);
        for (UnitVector& q : pts) {
          if (coin(rng) == 1) q = -q;
        }
      }
      sc.init = AgentStates(std::move(pts), t0);
      break;
    }
    case SimulationMode::kSo3IncompleteViaS2: {
      sc.sphere_dim = 2;
      sc.body_axis = UnitVector::basis(2, 2);
      const UnitVector pole = UnitVector::normalized(random_direction(3, rng));
      sc.initial_attitudes = sample_pointing_attitudes(pole, p.cap_radius, *sc.body_axis, p.n_agents, rng);
      std::vector<RotationMatrix> rots;
      for (const Quaternion& q : sc.initial_attitudes) rots.push_back(quat_to_rotmat(q));
      sc.init = AgentStates(project_so3_incomplete(rots, *sc.body_axis).states(), t0);
      break;
    }
    case SimulationMode::kRnConsensusViaSn: {
      sc.consensus_points = sample_ball(Eigen::VectorXd::Zero(p.sphere_dim), p.cap_radius, p.n_agents, rng);
      sc.consensus_scale = p.consensus_scale > 0.0 ? p.consensus_scale : default_consensus_scale(sc.consensus_points);
      sc.init = AgentStates(consensus_embed(sc.consensus_points, sc.consensus_scale).states(), t0);
      break;
    }
  }
  sc.validate();
  return sc;
}

std::vector<std::string> preset_names() { return {"so3-complete", "s2-pointing", "rn-consensus"}; }

config::ScenarioConfig make_preset(const std::string& name, std::uint64_t seed) {
  SyncScenarioParams p;
  p.seed = seed;
  if (name == "so3-complete") {
    p.mode = SimulationMode::kSo3CompleteViaS3;
    p.sphere_dim = 3;
    p.n_agents = 6;
    p.n_graphs = 3;
    p.dwell = DwellTimeSpec::fixed(0.2);
    p.horizon = 30.0;
  } else if (name == "s2-pointing") {
    p.mode = SimulationMode::kSo3IncompleteViaS2;
    p.sphere_dim = 2;
    p.n_agents = 10;
    p.n_graphs = 3;
    p.dwell = DwellTimeSpec::average(2.0, 0.3);
    p.shaping = DistanceFunction::geodesic_quadratic();
    p.horizon = 40.0;
  } else if (name == "rn-consensus") {
    p.mode = SimulationMode::kRnConsensusViaSn;
    p.sphere_dim = 2;
    p.n_agents = 5;
    p.n_graphs = 1;
    p.dwell = DwellTimeSpec::fixed(1.0);
    p.cap_radius = 1.0;
    p.consensus_scale = 10.0;
    p.shaping = DistanceFunction::chordal(std::numbers::pi);
    p.horizon = 50.0;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw InputError("unknown preset '" + name + "' (available: " + known + ")");
  }
  config::ScenarioConfig cfg;
  cfg.scenario = make_sync_scenario(p);
  cfg.output.stride = 10;
  return cfg;
}

}  // namespace spheresync
