#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spheresync/manifold.hpp"
#include "spheresync/network.hpp"
#include "spheresync/shaping.hpp"

namespace spheresync {

/// Stacked agent states (x₁, …, x_N) on a common S^n at a given time.
class AgentStates {
 public:
  AgentStates() = default;
  /// Throws InputError when dimensions differ.
  explicit AgentStates(std::vector<UnitVector> states, double time = 0.0);

  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  int sphere_dim() const { return states_.empty() ? 0 : states_.front().dim(); }
  double time() const { return time_; }
  const UnitVector& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<UnitVector>& states() const { return states_; }

  /// Ambient coordinates as an (n+1) × N matrix, one column per agent.
  Eigen::MatrixXd as_matrix() const;
  /// Columns must be unit to kUnitTolerance; drifted columns are renormalized.
  static AgentStates from_matrix(const Eigen::MatrixXd& columns, double time);

 private:
  std::vector<UnitVector> states_;
  double time_ = 0.0;
};

enum class SimulationMode { kGenericSn, kSo3CompleteViaS3, kSo3IncompleteViaS2, kRnConsensusViaSn };

std::string_view to_string(SimulationMode mode);
SimulationMode parse_simulation_mode(std::string_view name);

struct Scenario {
  SimulationMode mode = SimulationMode::kGenericSn;
  int sphere_dim = 2;
  std::size_t n_agents = 0;
  std::vector<Graph> graphs;
  SwitchingSignal signal;
  /// Dwell constraint the signal is declared to satisfy; simulate refuses a
  /// signal that violates it.
  std::optional<DwellTimeSpec> dwell;
  DistanceFunction shaping;
  /// States integrated by the closed loop (already lifted, projected or
  /// embedded for the casting modes).
  AgentStates init;
  double dt = 1e-3;
  /// Absolute end time of the run.
  double horizon = 10.0;
  std::uint64_t seed = 0;
  /// Synchronization threshold used by certify and reports.
  double epsilon = 1e-6;

  // kSo3IncompleteViaS2: full attitudes and the body axis whose image is synchronized.
  std::vector<Quaternion> initial_attitudes;
  std::optional<UnitVector> body_axis;

  // kRnConsensusViaSn: Euclidean initial data and embedding scale.
  std::vector<Eigen::VectorXd> consensus_points;
  double consensus_scale = 0.0;

  /// Throws InputError naming the offending field.
  void validate() const;
};

bool scenario_equal(const Scenario& a, const Scenario& b);

struct TraceSample {
  double time = 0.0;
  std::size_t graph_index = 0;
  double lyapunov = 0.0;
  double sync_error = 0.0;
  /// True when this sample sits on a switch instant of the signal.
  bool switch_instant = false;
  /// Agent-major stacked coordinates x_0, …, x_{N−1}.
  Eigen::VectorXd coords;
  /// (w, x, y, z) per agent in the SO(3) modes; empty otherwise.
  Eigen::VectorXd attitudes;
};

struct TraceEvent {
  double time = 0.0;
  std::string kind;
  std::string detail;
};

struct Trace {
  int sphere_dim = 0;
  std::size_t n_agents = 0;
  SimulationMode mode = SimulationMode::kGenericSn;
  std::vector<TraceSample> samples;
  std::vector<TraceEvent> events;
  /// Steps whose energy (under the graph active during the step) grew by more than kMonotonicityTolerance·h.
  std::size_t monotonicity_violations = 0;
  double max_energy_increase = 0.0;
  double max_norm_drift = 0.0;
  bool truncated = false;

  AgentStates states_at(std::size_t k) const;
  /// Rotation matrices at sample k (SO(3) modes only).
  std::vector<RotationMatrix> rotations_at(std::size_t k) const;
  const TraceSample& final_sample() const { return samples.back(); }
};

inline constexpr double kMonotonicityTolerance = 1e-8;

/// u_i = Σ_j a_ij · f′(θ_ij)/sin θ_ij · (x_j − ⟨x_i, x_j⟩x_i), the negative
/// Riemannian gradient at x_i of Σ_j a_ij f(θ_ij). Throws
/// SingularConfigurationError when a neighbor is antipodal to x_i.
TangentVector control_law(std::size_t i, const AgentStates& s, const Graph& g, const DistanceFunction& d);

/// Synchronous geometric Euler step x_i ← exp_{x_i}(dt · u_i).
AgentStates step(const AgentStates& s, const Graph& g, const DistanceFunction& d, double dt);

/// Integrates from sc.init to sc.horizon; the step grid lands on every switch time.
/// Throws InputError if the scenario is invalid or the signal breaks its dwell spec.
Trace simulate(const Scenario& sc);

std::vector<RotationMatrix> lift_so3_complete(const AgentStates& quats);

AgentStates project_so3_incomplete(const std::vector<RotationMatrix>& rots, const UnitVector& b);

struct SignAlignment {
  AgentStates states;
  bool aligned = true;
  std::size_t flipped = 0;
};

/// Chooses quaternion signs so that ⟨q_i, q_j⟩ ≥ 0 on every edge of g. The
/// first agent of each component keeps its sign. If no assignment exists the
/// input is returned unchanged with aligned = false.
SignAlignment quaternion_sign_align(const AgentStates& s, const Graph& g);

}  // namespace spheresync
