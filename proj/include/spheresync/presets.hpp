#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spheresync/config.hpp"

namespace spheresync {

/// Points x = exp_c(θ·v) with v a random unit tangent direction and θ uniform in [0, radius).
std::vector<UnitVector> sample_cap(const UnitVector& center, double radius, std::size_t count, std::mt19937_64& rng);

/// Attitudes whose reduced attitude R·b lies in the cap about `center`, with a
/// uniformly random twist about b.
std::vector<Quaternion> sample_pointing_attitudes(const UnitVector& center, double radius, const UnitVector& b,
                                                  std::size_t count, std::mt19937_64& rng);

/// Uniform samples from the Euclidean ball of the given radius.
std::vector<Eigen::VectorXd> sample_ball(const Eigen::VectorXd& center, double radius, std::size_t count,
                                         std::mt19937_64& rng);

/// Rotation taking unit vector `from` onto `to` about from × to.
Quaternion minimal_rotation(const UnitVector& from, const UnitVector& to);

struct SyncScenarioParams {
  std::uint64_t seed = 0;
  SimulationMode mode = SimulationMode::kGenericSn;
  int sphere_dim = 2;
  std::size_t n_agents = 5;
  std::size_t n_graphs = 3;
  DwellTimeSpec dwell = DwellTimeSpec::fixed(0.5);
  DistanceFunction shaping = DistanceFunction::chordal();
  double cap_radius = 0.7;
  double extra_edge_probability = 0.3;
  double dt = 1e-3;
  double horizon = 50.0;
  /// so3_complete_via_s3: flip each sampled quaternion with probability 1/2.
  bool randomize_signs = true;
  /// rn_consensus_via_sn: embedding scale; 0 selects the default.
  double consensus_scale = 0.0;
};

/// Seeded scenario satisfying the synchronization hypotheses: connected
/// ring-plus-chords graphs, a generated dwell-valid signal and initial states
/// in a cap of radius `cap_radius` about a random pole.
Scenario make_sync_scenario(const SyncScenarioParams& p);

std::vector<std::string> preset_names();

/// Throws InputError for an unknown name.
config::ScenarioConfig make_preset(const std::string& name, std::uint64_t seed);

}  // namespace spheresync
