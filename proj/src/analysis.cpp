#include "spheresync/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "kernels.hpp"

namespace spheresync {

double lyapunov_value(const AgentStates& s, const Graph& g, const DistanceFunction& d) {
  if (g.n_agents() != s.size()) throw InputError("lyapunov_value: graph and states disagree on the number of agents");
  return detail::edge_energy(s.as_matrix(), g, d);
}

double sync_error(const AgentStates& s) {
  if (s.empty()) throw InputError("sync_error: no agents");
  return detail::max_pairwise_angle(s.as_matrix());
}

double rotation_spread(const std::vector<RotationMatrix>& rots) {
  double worst = 0.0;
  for (std::size_t i = 0; i < rots.size(); ++i) {
    for (std::size_t j = i + 1; j < rots.size(); ++j) {
      worst = std::max(worst, (rots[i].matrix() - rots[j].matrix()).norm());
    }
  }
  return worst;
}

HemisphereCertificate hemisphere_certificate(const AgentStates& s) {
  if (s.empty()) throw InputError("hemisphere_certificate: no agents");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(s.sphere_dim() + 1);
  for (const UnitVector& x : s.states()) mean += x.coords();
  const double norm = mean.norm();
  if (norm <= 1e-12 * static_cast<double>(s.size())) {
    throw DegenerateConfigurationError("hemisphere_certificate: states have zero Euclidean mean");
  }
  // Exact for the all-equal case: the pole is the common state itself.
  const UnitVector pole = UnitVector::normalized(mean / norm);
  double min_ip = std::numeric_limits<double>::infinity();
  for (const UnitVector& x : s.states()) min_ip = std::min(min_ip, pole.coords().dot(x.coords()));

  HemisphereCertificate cert;
  cert.min_inner_product = min_ip;
  cert.certified = min_ip > 0.0;
  if (cert.certified) cert.pole = pole;
  return cert;
}

AgentStates consensus_embed(const std::vector<Eigen::VectorXd>& z, double radius_param) {
  if (!(radius_param > 0.0) || !std::isfinite(radius_param)) throw InputError("consensus_embed: rho must be positive");
  std::vector<UnitVector> out;
  out.reserve(z.size());
  const Eigen::Index n = z.empty() ? 0 : z.front().size();
  if (n < 1 && !z.empty()) throw InputError("consensus_embed: points need at least one coordinate");
  const double rho2 = radius_param * radius_param;
  for (const Eigen::VectorXd& p : z) {
    if (p.size() != n) throw InputError("consensus_embed: points differ in dimension");
    if (!p.allFinite()) throw InputError("consensus_embed: non-finite coordinate");
    const double r2 = p.squaredNorm();
    const double denom = rho2 + r2;
    Eigen::VectorXd x(n + 1);
    x.head(n) = (2.0 * radius_param / denom) * p;
    x[n] = (rho2 - r2) / denom;
    out.push_back(UnitVector::normalized(std::move(x)));
  }
  return AgentStates(std::move(out));
}

std::vector<Eigen::VectorXd> consensus_unembed(const AgentStates& s, double radius_param) {
  if (!(radius_param > 0.0) || !std::isfinite(radius_param)) throw InputError("consensus_unembed: rho must be positive");
  std::vector<Eigen::VectorXd> out;
  out.reserve(s.size());
  for (const UnitVector& x : s.states()) {
    const Eigen::Index n = x.dim();
    const double lift = 1.0 + x[n];
    if (lift <= 1e-300) throw DegenerateConfigurationError("consensus_unembed: state at the south pole");
    out.push_back((radius_param / lift) * x.coords().head(n));
  }
  return out;
}

double euclidean_disagreement(const std::vector<Eigen::VectorXd>& z) {
  double worst = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) worst = std::max(worst, (z[i] - z[j]).norm());
  }
  return worst;
}

double default_consensus_scale(const std::vector<Eigen::VectorXd>& z) {
  const double diameter = euclidean_disagreement(z);
  return diameter > 0.0 ? 10.0 * diameter : 1.0;
}

namespace {

Eigen::VectorXd agent_mean(const std::vector<Eigen::VectorXd>& z) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(z.front().size());
  for (const auto& p : z) m += p;
  return m / static_cast<double>(z.size());
}

}  // namespace

ConsensusComparison consensus_oracle_compare(const std::vector<Eigen::VectorXd>& z0, const Graph& g, double horizon,
                                             double dt, double radius_param) {
  if (z0.empty()) throw InputError("consensus_oracle_compare: no agents");
  if (g.n_agents() != z0.size()) throw InputError("consensus_oracle_compare: graph size mismatch");
  if (!is_connected(g)) throw InputError("consensus_oracle_compare: graph is disconnected");
  if (!(dt > 0.0) || !(horizon > 0.0)) throw InputError("consensus_oracle_compare: dt and horizon must be positive");

  const std::size_t n_agents = z0.size();
  const Eigen::Index dim = z0.front().size();

  // (a) ż = −Lz with explicit Euler on the same step grid.
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_agents), static_cast<Eigen::Index>(n_agents));
  for (const Edge& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    laplacian(i, i) += e.weight;
    laplacian(j, j) += e.weight;
    laplacian(i, j) -= e.weight;
    laplacian(j, i) -= e.weight;
  }
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n_agents), dim);
  for (std::size_t i = 0; i < n_agents; ++i) z.row(static_cast<Eigen::Index>(i)) = z0[i].transpose();
  const auto steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
  for (long k = 0; k < steps; ++k) {
    const double h = std::min(dt, horizon - static_cast<double>(k) * dt);
    z -= h * (laplacian * z);
  }

  // (b) chordal sphere flow of the embedded states.
  Scenario sc;
  sc.mode = SimulationMode::kRnConsensusViaSn;
  sc.sphere_dim = static_cast<int>(dim);
  sc.n_agents = n_agents;
  sc.graphs = {g};
  sc.signal = SwitchingSignal::constant(0.0, 0);
  sc.shaping = DistanceFunction::chordal(std::numbers::pi);
  sc.init = consensus_embed(z0, radius_param);
  sc.dt = dt;
  sc.horizon = horizon;
  sc.consensus_points = z0;
  sc.consensus_scale = radius_param;
  const Trace trace = simulate(sc);

  ConsensusComparison out;
  for (std::size_t i = 0; i < n_agents; ++i) out.linear_final.push_back(z.row(static_cast<Eigen::Index>(i)).transpose());
  out.sphere_final = consensus_unembed(trace.states_at(trace.samples.size() - 1), radius_param);
  out.linear_disagreement = euclidean_disagreement(out.linear_final);
  out.sphere_disagreement = trace.truncated ? std::numeric_limits<double>::infinity()
                                            : euclidean_disagreement(out.sphere_final);
  out.max_deviation = (agent_mean(out.linear_final) - agent_mean(out.sphere_final)).cwiseAbs().maxCoeff();
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kTheoremConsistent:
      return "theorem_consistent";
    case Verdict::kHypothesesNotCertified:
      return "hypotheses_not_certified";
    case Verdict::kViolation:
      return "certificate_violation";
  }
  return "unknown";
}

CertificateReport certify(const Trace& trace, const Scenario& sc, double epsilon) {
  CertificateReport r;
  r.epsilon = epsilon;

  // Hypotheses.
  std::set<std::size_t> referenced;
  for (std::size_t k = 0; k < sc.signal.size(); ++k) {
    if (sc.signal.switch_times()[k] <= sc.horizon) referenced.insert(sc.signal.graph_indices()[k]);
  }
  r.graph_connected.reserve(sc.graphs.size());
  for (std::size_t k = 0; k < sc.graphs.size(); ++k) {
    const bool connected = is_connected(sc.graphs[k]);
    r.graph_connected.push_back(connected);
    if (!connected && referenced.count(k) > 0) r.all_graphs_connected = false;
  }

  if (sc.dwell) {
    r.dwell_declared = true;
    r.dwell = validate_dwell(sc.signal, *sc.dwell, sc.horizon);
  } else {
    // Finitely many switches on a bounded horizon always admit some positive dwell time.
    r.dwell.ok = true;
    r.dwell.margin = std::numeric_limits<double>::infinity();
    r.dwell.worst_pair = {sc.signal.start_time(), sc.horizon};
  }

  if (!trace.samples.empty()) {
    const AgentStates start = trace.states_at(0);
    try {
      const HemisphereCertificate cert = hemisphere_certificate(start);
      r.initial_containment = cert.certified;
      r.initial_pole = cert.pole;
    } catch (const DegenerateConfigurationError&) {
      r.initial_containment = false;
    }
    r.initial_spread = sync_error(start);
    r.initial_within_domain = r.initial_spread < sc.shaping.domain_limit;
  }
  r.shaping_admissible = verify_admissibility(sc.shaping, 1000).ok;
  r.sign_alignment_ok = std::none_of(trace.events.begin(), trace.events.end(),
                                     [](const TraceEvent& e) { return e.kind == "sign_align_failed"; });

  // Conclusion.
  r.truncated = trace.truncated;
  r.monotonicity_violations = trace.monotonicity_violations;
  r.max_norm_drift = trace.max_norm_drift;
  if (!trace.samples.empty()) {
    r.final_sync_error = trace.final_sample().sync_error;
    if (r.final_sync_error <= epsilon) {
      std::size_t k = trace.samples.size() - 1;
      while (k > 0 && trace.samples[k - 1].sync_error <= epsilon) --k;
      r.time_to_epsilon = trace.samples[k].time;
    }
    if (sc.mode == SimulationMode::kSo3CompleteViaS3 || sc.mode == SimulationMode::kSo3IncompleteViaS2) {
      r.final_rotation_spread = rotation_spread(trace.rotations_at(trace.samples.size() - 1));
    }
  }

  r.hypotheses_certified = r.all_graphs_connected && r.dwell.ok && r.initial_containment && r.initial_within_domain &&
                           r.shaping_admissible && r.sign_alignment_ok;
  r.synchronized = !r.truncated && !trace.samples.empty() && r.final_sync_error <= epsilon;
  if (!r.hypotheses_certified) {
    r.verdict = Verdict::kHypothesesNotCertified;
  } else if (r.synchronized && r.monotonicity_violations == 0) {
    r.verdict = Verdict::kTheoremConsistent;
  } else {
    r.verdict = Verdict::kViolation;
  }
  return r;
}

}  // namespace spheresync
