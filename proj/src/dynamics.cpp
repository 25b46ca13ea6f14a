#include "spheresync/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "kernels.hpp"
#include "spheresync/analysis.hpp"

namespace spheresync {

namespace detail {

void accumulate_agent_control(const Eigen::MatrixXd& x, std::size_t i, const Graph& g, const DistanceFunction& d,
                              Eigen::Ref<Eigen::VectorXd> out) {
  const auto xi = x.col(static_cast<Eigen::Index>(i));
  for (const Neighbor& nb : g.neighbors(i)) {
    const auto xj = x.col(static_cast<Eigen::Index>(nb.index));
    const double c = xi.dot(xj);
    // Projected neighbor direction; its norm is sin θ.
    const Eigen::VectorXd p = xj - c * xi;
    const double s = p.norm();
    if (c < 0.0 && s <= 1e-12) {
      std::ostringstream msg;
      msg << "agents " << i << " and " << nb.index << " are antipodal";
      throw SingularConfigurationError(msg.str());
    }
    const double theta = std::atan2(s, c);
    out.noalias() += (nb.weight * coupling_weight(d, theta)) * p;
  }
}

void control_field(const Eigen::MatrixXd& x, const Graph& g, const DistanceFunction& d, Eigen::MatrixXd& u) {
  u.setZero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    accumulate_agent_control(x, static_cast<std::size_t>(i), g, d, u.col(i));
  }
}

void exp_step(Eigen::MatrixXd& x, const Eigen::MatrixXd& u, double h) {
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const double speed = u.col(i).norm();
    if (speed == 0.0) continue;
    const double angle = h * speed;
    x.col(i) = std::cos(angle) * x.col(i) + (std::sin(angle) / speed) * u.col(i);
    const double n = x.col(i).norm();
    if (std::abs(n - 1.0) > kUnitTolerance) x.col(i) /= n;
  }
}

double edge_energy(const Eigen::MatrixXd& x, const Graph& g, const DistanceFunction& d) {
  double v = 0.0;
  for (const Edge& e : g.edges()) {
    v += e.weight * eval(d, pair_angle(x.col(static_cast<Eigen::Index>(e.i)), x.col(static_cast<Eigen::Index>(e.j))));
  }
  return v;
}

double max_pairwise_angle(const Eigen::MatrixXd& x) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < x.cols(); ++j) worst = std::max(worst, pair_angle(x.col(i), x.col(j)));
  }
  return worst;
}

}  // namespace detail

AgentStates::AgentStates(std::vector<UnitVector> states, double time) : states_(std::move(states)), time_(time) {
  for (const UnitVector& x : states_) {
    if (x.dim() != states_.front().dim()) throw InputError("AgentStates: agents live on spheres of different dimension");
  }
}

Eigen::MatrixXd AgentStates::as_matrix() const {
  Eigen::MatrixXd m(sphere_dim() + 1, static_cast<Eigen::Index>(states_.size()));
  for (std::size_t i = 0; i < states_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = states_[i].coords();
  return m;
}

AgentStates AgentStates::from_matrix(const Eigen::MatrixXd& columns, double time) {
  std::vector<UnitVector> states;
  states.reserve(static_cast<std::size_t>(columns.cols()));
  for (Eigen::Index i = 0; i < columns.cols(); ++i) states.push_back(UnitVector::normalized(columns.col(i)));
  return AgentStates(std::move(states), time);
}

std::string_view to_string(SimulationMode mode) {
  switch (mode) {
    case SimulationMode::kGenericSn:
      return "generic_sn";
    case SimulationMode::kSo3CompleteViaS3:
      return "so3_complete_via_s3";
    case SimulationMode::kSo3IncompleteViaS2:
      return "so3_incomplete_via_s2";
    case SimulationMode::kRnConsensusViaSn:
      return "rn_consensus_via_sn";
  }
  return "unknown";
}

SimulationMode parse_simulation_mode(std::string_view name) {
  if (name == "generic_sn") return SimulationMode::kGenericSn;
  if (name == "so3_complete_via_s3") return SimulationMode::kSo3CompleteViaS3;
  if (name == "so3_incomplete_via_s2") return SimulationMode::kSo3IncompleteViaS2;
  if (name == "rn_consensus_via_sn") return SimulationMode::kRnConsensusViaSn;
  throw InputError("unknown mode '" + std::string(name) +
                   "' (expected generic_sn, so3_complete_via_s3, so3_incomplete_via_s2 or rn_consensus_via_sn)");
}

void Scenario::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("scenario.dt: must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InputError("scenario.horizon: must be positive");
  if (sphere_dim < 1) throw InputError("scenario.sphere_dim: must be >= 1");
  if (mode == SimulationMode::kSo3CompleteViaS3 && sphere_dim != 3) {
    throw InputError("scenario.sphere_dim: so3_complete_via_s3 requires sphere_dim = 3");
  }
  if (mode == SimulationMode::kSo3IncompleteViaS2 && sphere_dim != 2) {
    throw InputError("scenario.sphere_dim: so3_incomplete_via_s2 requires sphere_dim = 2");
  }
  if (n_agents == 0) throw InputError("scenario.n_agents: must be >= 1");
  if (!(epsilon > 0.0)) throw InputError("scenario.epsilon: must be positive");
  shaping.validate();
  if (dwell) dwell->validate();

  if (graphs.empty()) throw InputError("graphs: at least one graph is required");
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    if (graphs[k].n_agents() != n_agents) {
      throw InputError("graphs: graph " + std::to_string(k) + " has a different number of agents");
    }
  }
  if (signal.size() == 0) throw InputError("signal: empty switching signal");
  for (std::size_t idx : signal.graph_indices()) {
    if (idx >= graphs.size()) throw InputError("signal: graph index " + std::to_string(idx) + " out of range");
  }
  if (!(horizon > signal.start_time())) throw InputError("scenario.horizon: must be after the signal start time");

  if (init.size() != n_agents) throw InputError("init: expected one state per agent");
  if (init.sphere_dim() != sphere_dim) throw InputError("init: states do not lie on S^sphere_dim");

  if (mode == SimulationMode::kSo3IncompleteViaS2) {
    if (!body_axis || body_axis->dim() != 2) throw InputError("init.body_axis: required on S^2 for so3_incomplete_via_s2");
    if (initial_attitudes.size() != n_agents) throw InputError("init: expected one attitude per agent");
    for (std::size_t i = 0; i < n_agents; ++i) {
      const UnitVector pointing = reduced_attitude(quat_to_rotmat(initial_attitudes[i]), *body_axis);
      if ((pointing.coords() - init[i].coords()).norm() > 1e-9) {
        throw InputError("init: reduced attitude of agent " + std::to_string(i) + " disagrees with its attitude");
      }
    }
  }
  if (mode == SimulationMode::kRnConsensusViaSn) {
    if (consensus_points.size() != n_agents) throw InputError("init: expected one point per agent");
    if (!(consensus_scale > 0.0)) throw InputError("init.rho: must be positive");
  }
}

namespace {

bool vectors_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

}  // namespace

bool scenario_equal(const Scenario& a, const Scenario& b) {
  if (a.mode != b.mode || a.sphere_dim != b.sphere_dim || a.n_agents != b.n_agents || a.graphs != b.graphs ||
      !(a.signal == b.signal) || a.dwell != b.dwell || !(a.shaping == b.shaping) || a.dt != b.dt ||
      a.horizon != b.horizon || a.seed != b.seed || a.epsilon != b.epsilon ||
      a.consensus_scale != b.consensus_scale) {
    return false;
  }
  if (a.init.size() != b.init.size() || a.init.time() != b.init.time()) return false;
  for (std::size_t i = 0; i < a.init.size(); ++i) {
    if (!vectors_equal(a.init[i].coords(), b.init[i].coords())) return false;
  }
  if (a.initial_attitudes.size() != b.initial_attitudes.size()) return false;
  for (std::size_t i = 0; i < a.initial_attitudes.size(); ++i) {
    if (!vectors_equal(a.initial_attitudes[i].coeffs(), b.initial_attitudes[i].coeffs())) return false;
  }
  if (a.body_axis.has_value() != b.body_axis.has_value()) return false;
  if (a.body_axis && !vectors_equal(a.body_axis->coords(), b.body_axis->coords())) return false;
  if (a.consensus_points.size() != b.consensus_points.size()) return false;
  for (std::size_t i = 0; i < a.consensus_points.size(); ++i) {
    if (!vectors_equal(a.consensus_points[i], b.consensus_points[i])) return false;
  }
  return true;
}

AgentStates Trace::states_at(std::size_t k) const {
  const TraceSample& s = samples.at(k);
  const Eigen::Map<const Eigen::MatrixXd> m(s.coords.data(), sphere_dim + 1, static_cast<Eigen::Index>(n_agents));
  return AgentStates::from_matrix(m, s.time);
}

std::vector<RotationMatrix> Trace::rotations_at(std::size_t k) const {
  const TraceSample& s = samples.at(k);
  const Eigen::VectorXd* source = nullptr;
  if (mode == SimulationMode::kSo3CompleteViaS3) {
    source = &s.coords;
  } else if (mode == SimulationMode::kSo3IncompleteViaS2) {
    source = &s.attitudes;
  } else {
    throw InputError("Trace::rotations_at: trace has no attitudes");
  }
  std::vector<RotationMatrix> out;
  out.reserve(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) {
    out.push_back(quat_to_rotmat(Quaternion::normalized(source->segment<4>(static_cast<Eigen::Index>(4 * i)))));
  }
  return out;
}

TangentVector control_law(std::size_t i, const AgentStates& s, const Graph& g, const DistanceFunction& d) {
  if (i >= s.size()) throw InputError("control_law: agent index out of range");
  if (g.n_agents() != s.size()) throw InputError("control_law: graph and states disagree on the number of agents");
  const Eigen::MatrixXd x = s.as_matrix();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(x.rows());
  detail::accumulate_agent_control(x, i, g, d, u);
  return TangentVector(s[i], std::move(u));
}

AgentStates step(const AgentStates& s, const Graph& g, const DistanceFunction& d, double dt) {
  if (!(dt > 0.0)) throw InputError("step: dt must be positive");
  if (g.n_agents() != s.size()) throw InputError("step: graph and states disagree on the number of agents");
  Eigen::MatrixXd x = s.as_matrix();
  Eigen::MatrixXd u;
  detail::control_field(x, g, d, u);
  detail::exp_step(x, u, dt);
  return AgentStates::from_matrix(x, s.time() + dt);
}

Trace simulate(const Scenario& sc) {
  sc.validate();
  if (sc.dwell) {
    const DwellReport rep = validate_dwell(sc.signal, *sc.dwell, sc.horizon);
    if (!rep.ok) {
      std::ostringstream msg;
      msg << "signal violates its declared dwell spec (worst pair " << rep.worst_pair.first << ", "
          << rep.worst_pair.second << "; margin " << rep.margin << ")";
      throw InputError(msg.str());
    }
  }

  Trace trace;
  trace.sphere_dim = sc.sphere_dim;
  trace.n_agents = sc.n_agents;
  trace.mode = sc.mode;

  const double t0 = sc.signal.start_time();
  AgentStates init = sc.init;
  if (sc.mode == SimulationMode::kSo3CompleteViaS3) {
    const SignAlignment al = quaternion_sign_align(init, union_graph(sc.graphs));
    if (!al.aligned) {
      trace.events.push_back({t0, "sign_align_failed", "no sign assignment makes every edge inner product >= 0"});
    } else if (al.flipped > 0) {
      trace.events.push_back({t0, "sign_align", std::to_string(al.flipped) + " quaternion(s) flipped"});
    }
    init = al.states;
  }

  Eigen::MatrixXd x = init.as_matrix();
  Eigen::MatrixXd u;
  std::vector<Quaternion> attitudes = sc.initial_attitudes;
  const bool track_attitudes = sc.mode == SimulationMode::kSo3IncompleteViaS2;

  const auto& switch_times = sc.signal.switch_times();
  const auto& graph_indices = sc.signal.graph_indices();
  std::size_t interval = 0;
  auto graph_of = [&](std::size_t k) -> const Graph& { return sc.graphs[graph_indices[k]]; };

  auto record = [&](double t, double energy, bool at_switch) {
    TraceSample s;
    s.time = t;
    s.switch_instant = at_switch;
    s.graph_index = graph_indices[interval];
    s.lyapunov = energy;
    s.sync_error = detail::max_pairwise_angle(x);
    s.coords = Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
    if (track_attitudes) {
      s.attitudes.resize(static_cast<Eigen::Index>(4 * attitudes.size()));
      for (std::size_t i = 0; i < attitudes.size(); ++i) {
        s.attitudes.segment<4>(static_cast<Eigen::Index>(4 * i)) = attitudes[i].coeffs();
      }
    }
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      trace.max_norm_drift = std::max(trace.max_norm_drift, std::abs(x.col(i).norm() - 1.0));
    }
    trace.samples.push_back(std::move(s));
  };

  const double tiny = 1e-9 * sc.dt;
  const double end = sc.horizon;
  double t = t0;
  std::size_t grid_k = 0;
  double energy_before = detail::edge_energy(x, graph_of(interval), sc.shaping);
  record(t, energy_before, false);

  constexpr std::size_t kMaxLoggedViolations = 10;
  while (end - t > tiny) {
    const double grid_next = t0 + static_cast<double>(grid_k + 1) * sc.dt;
    if (grid_next <= t + tiny) {
      ++grid_k;
      continue;
    }
    double target = grid_next > end - tiny ? end : grid_next;
    bool hits_switch = false;
    if (interval + 1 < switch_times.size() && switch_times[interval + 1] <= target + tiny) {
      target = switch_times[interval + 1];
      hits_switch = true;
    }
    if (target >= grid_next - tiny) ++grid_k;
    const double h = target - t;

    const Graph& g = graph_of(interval);
    try {
      detail::control_field(x, g, sc.shaping, u);
    } catch (const SingularConfigurationError& e) {
      trace.truncated = true;
      trace.events.push_back({t, "singular", e.what()});
      break;
    }
    if (track_attitudes) {
      for (std::size_t i = 0; i < attitudes.size(); ++i) {
        const Eigen::Index col = static_cast<Eigen::Index>(i);
        const Eigen::Vector3d xi = x.col(col);
        const Eigen::Vector3d ui = u.col(col);
        const Eigen::Vector3d omega = xi.cross(ui);
        const double rate = omega.norm();
        if (rate > 0.0) attitudes[i] = Quaternion::from_axis_angle(omega, h * rate) * attitudes[i];
      }
    }
    detail::exp_step(x, u, h);

    const double energy_after = detail::edge_energy(x, g, sc.shaping);
    const double increase = energy_after - energy_before;
    trace.max_energy_increase = std::max(trace.max_energy_increase, increase);
    if (increase > kMonotonicityTolerance * h) {
      if (trace.monotonicity_violations < kMaxLoggedViolations) {
        std::ostringstream msg;
        msg << "energy increased by " << increase << " over a step of " << h;
        trace.events.push_back({target, "monotonicity", msg.str()});
      }
      ++trace.monotonicity_violations;
    }

    t = target;
    if (hits_switch) {
      ++interval;
      trace.events.push_back({t, "switch", "graph " + std::to_string(graph_indices[interval])});
      energy_before = detail::edge_energy(x, graph_of(interval), sc.shaping);
    } else {
      energy_before = energy_after;
    }
    record(t, energy_before, hits_switch);
  }
  return trace;
}

std::vector<RotationMatrix> lift_so3_complete(const AgentStates& quats) {
  if (!quats.empty() && quats.sphere_dim() != 3) throw InputError("lift_so3_complete: states must lie on S^3");
  std::vector<RotationMatrix> out;
  out.reserve(quats.size());
  for (const UnitVector& q : quats.states()) out.push_back(quat_to_rotmat(Quaternion::from_unit_vector(q)));
  return out;
}

AgentStates project_so3_incomplete(const std::vector<RotationMatrix>& rots, const UnitVector& b) {
  std::vector<UnitVector> out;
  out.reserve(rots.size());
  for (const RotationMatrix& r : rots) out.push_back(reduced_attitude(r, b));
  return AgentStates(std::move(out));
}

SignAlignment quaternion_sign_align(const AgentStates& s, const Graph& g) {
  if (!s.empty() && s.sphere_dim() != 3) throw InputError("quaternion_sign_align: states must lie on S^3");
  if (g.n_agents() != s.size()) throw InputError("quaternion_sign_align: graph and states disagree on size");

  const std::size_t n = s.size();
  // sign[i] ∈ {+1, −1}; 0 = unvisited. Edges with ⟨q_i, q_j⟩ = 0 accept either
  // relative sign and do not propagate.
  std::vector<int> sign(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (sign[root] != 0) continue;
    sign[root] = 1;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (const Neighbor& nb : g.neighbors(i)) {
        const double c = s[i].coords().dot(s[nb.index].coords());
        if (c == 0.0 || sign[nb.index] != 0) continue;
        sign[nb.index] = c > 0.0 ? sign[i] : -sign[i];
        queue.push_back(nb.index);
      }
    }
  }

  for (const Edge& e : g.edges()) {
    const double c = s[e.i].coords().dot(s[e.j].coords());
    if (sign[e.i] * sign[e.j] * c < 0.0) return {s, false, 0};
  }

  std::vector<UnitVector> out;
  out.reserve(n);
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sign[i] < 0) {
      out.push_back(-s[i]);
      ++flipped;
    } else {
      out.push_back(s[i]);
    }
  }
  return {AgentStates(std::move(out), s.time()), true, flipped};
}

}  // namespace spheresync
