#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "spheresync/errors.hpp"

namespace spheresync {

struct Edge {
  std::size_t i;
  std::size_t j;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  std::size_t index;
  double weight;
};

/**
 * @brief Undirected weighted graph without self-loops.
 *
 * Edges are stored with i < j in the order given; adjacency lists are built
 * once at construction.
 */
class Graph {
 public:
  Graph() = default;
  /// Throws InputError on self-loops, duplicate edges, out-of-range endpoints
  /// or weights that are not strictly positive and finite.
  Graph(std::size_t n_agents, std::vector<Edge> edges);

  static Graph complete(std::size_t n_agents);
  static Graph ring(std::size_t n_agents);
  static Graph path(std::size_t n_agents);

  std::size_t n_agents() const { return n_agents_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Neighbor> neighbors(std::size_t i) const { return adjacency_.at(i); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_agents_ == b.n_agents_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_agents_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

bool is_connected(const Graph& g);

/// Graph on the same agents containing every edge of every input graph (weights summed).
Graph union_graph(std::span<const Graph> graphs);

/// Random connected graph: a ring through a random permutation of the agents
/// plus every other pair independently with probability `extra_edge_probability`.
Graph random_ring_graph(std::size_t n_agents, double extra_edge_probability, std::mt19937_64& rng);

/**
 * @brief Piecewise-constant, right-continuous selection of the active graph.
 *
 * switch_times()[0] is the start time t₀; entry k ≥ 1 is the k-th switch
 * instant, after which graph_indices()[k] is active.
 */
class SwitchingSignal {
 public:
  SwitchingSignal() = default;
  SwitchingSignal(std::vector<double> switch_times, std::vector<std::size_t> graph_indices);

  static SwitchingSignal constant(double t0, std::size_t graph_index) { return {{t0}, {graph_index}}; }

  double start_time() const { return switch_times_.front(); }
  const std::vector<double>& switch_times() const { return switch_times_; }
  const std::vector<std::size_t>& graph_indices() const { return graph_indices_; }
  std::size_t size() const { return switch_times_.size(); }

  /// Index k of the interval [s_k, s_{k+1}) containing t.
  std::size_t interval_at(double t) const;

  friend bool operator==(const SwitchingSignal&, const SwitchingSignal&) = default;

 private:
  std::vector<double> switch_times_;
  std::vector<std::size_t> graph_indices_;
};

/// σ(t); switch instants already use the new graph. Throws InputError for t < t₀.
std::size_t active_graph(const SwitchingSignal& sig, double t);

/// N_σ(τ, t): number of entries s of switch_times with τ < s ≤ t.
std::size_t count_switches(const SwitchingSignal& sig, double tau, double t);

struct DwellTimeSpec {
  enum class Mode { kFixedDwell, kAverageDwell };

  Mode mode = Mode::kFixedDwell;
  double tau_d = 0.0;
  double n0 = 1.0;
  double tau_a = 0.0;

  static DwellTimeSpec fixed(double tau_d);
  static DwellTimeSpec average(double n0, double tau_a);
  void validate() const;

  friend bool operator==(const DwellTimeSpec&, const DwellTimeSpec&) = default;
};

struct DwellReport {
  bool ok = true;
  std::pair<double, double> worst_pair{0.0, 0.0};
  /// Smallest slack over the checked constraints; +infinity when nothing is constrained.
  double margin = 0.0;
};

/**
 * Fixed dwell: every gap between consecutive entries of switch_times up to
 * `horizon` is ≥ τ_d (the first interval from t₀ included).
 *
 * Average dwell: N_σ(τ, t) ≤ N₀ + (t − τ)/τ_a for t₀ ≤ τ ≤ t ≤ horizon. The
 * left side only changes at switch instants, so the supremum of the violation
 * is attained with t = s_k and τ → s_j from below, which gives the finite
 * family k − j + 1 ≤ N₀ + (s_k − s_j)/τ_a over switch indices 1 ≤ j ≤ k.
 */
DwellReport validate_dwell(const SwitchingSignal& sig, const DwellTimeSpec& spec, double horizon);

/// Seeded random signal over [t0, horizon) satisfying `spec`; no graph is
/// repeated across a switch when n_graphs > 1. Throws ConstructionError when
/// the request cannot be met.
SwitchingSignal generate_switching_signal(std::uint64_t seed, std::size_t n_graphs, const DwellTimeSpec& spec,
                                          double horizon, double t0 = 0.0);

}  // namespace spheresync
