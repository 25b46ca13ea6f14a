#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spheresync/dynamics.hpp"

namespace spheresync {

/// Edge-sum energy V = Σ_{(i,j)∈E} a_ij f(θ_ij).
double lyapunov_value(const AgentStates& s, const Graph& g, const DistanceFunction& d);

/// Largest pairwise geodesic distance; 0 iff all agents coincide.
double sync_error(const AgentStates& s);

/// Largest pairwise ‖R_i − R_j‖_F.
double rotation_spread(const std::vector<RotationMatrix>& rots);

struct HemisphereCertificate {
  bool certified = false;
  /// Normalized Euclidean mean; meaningful when certified.
  std::optional<UnitVector> pole;
  /// min_i ⟨pole, x_i⟩ as evaluated.
  double min_inner_product = 0.0;
};

/// One-sided open-hemisphere certificate via the normalized mean. Throws
/// DegenerateConfigurationError when the mean vanishes.
HemisphereCertificate hemisphere_certificate(const AgentStates& s);

/// Inverse stereographic map x = (2ρz, ρ² − ‖z‖²)/(ρ² + ‖z‖²) onto S^n.
AgentStates consensus_embed(const std::vector<Eigen::VectorXd>& z, double radius_param);

/// z = ρ·x_{1..n} / (1 + x_{n+1}). Throws DegenerateConfigurationError at the south pole.
std::vector<Eigen::VectorXd> consensus_unembed(const AgentStates& s, double radius_param);

/// Max pairwise Euclidean distance.
double euclidean_disagreement(const std::vector<Eigen::VectorXd>& z);

/// ρ = 10 × diameter of the data (1 when all points coincide).
double default_consensus_scale(const std::vector<Eigen::VectorXd>& z);

struct ConsensusComparison {
  /// Sup-norm distance between the agreement values (agent means) of the two systems at the horizon.
  double max_deviation = 0.0;
  double linear_disagreement = 0.0;
  double sphere_disagreement = 0.0;
  std::vector<Eigen::VectorXd> linear_final;
  std::vector<Eigen::VectorXd> sphere_final;
};

/// Runs ż = −Lz (explicit Euler) alongside the chordal sphere flow of the
/// embedded states and compares where each lands. Throws InputError for a
/// disconnected graph.
ConsensusComparison consensus_oracle_compare(const std::vector<Eigen::VectorXd>& z0, const Graph& g, double horizon,
                                             double dt, double radius_param);

enum class Verdict { kTheoremConsistent, kHypothesesNotCertified, kViolation };

std::string_view to_string(Verdict v);

struct CertificateReport {
  // Hypotheses.
  std::vector<bool> graph_connected;
  bool all_graphs_connected = true;
  bool dwell_declared = false;
  DwellReport dwell;
  bool initial_containment = false;
  std::optional<UnitVector> initial_pole;
  double initial_spread = 0.0;
  bool initial_within_domain = false;
  bool shaping_admissible = false;
  bool sign_alignment_ok = true;

  // Conclusion.
  double epsilon = 0.0;
  double final_sync_error = 0.0;
  /// Defined only when final_sync_error ≤ epsilon: first sample time after which the error stays ≤ epsilon.
  std::optional<double> time_to_epsilon;
  std::size_t monotonicity_violations = 0;
  double max_norm_drift = 0.0;
  bool truncated = false;
  std::optional<double> final_rotation_spread;

  bool hypotheses_certified = false;
  bool synchronized = false;
  Verdict verdict = Verdict::kHypothesesNotCertified;
};

CertificateReport certify(const Trace& trace, const Scenario& sc, double epsilon);

}  // namespace spheresync
