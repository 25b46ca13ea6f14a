#include "spheresync/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

namespace spheresync {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Relative slack absorbed when comparing times, so exact-boundary cases
// (gap == τ_d) are not rejected by round-off.
constexpr double kTimeSlack = 1e-12;

}  // namespace

Graph::Graph(std::size_t n_agents, std::vector<Edge> edges) : n_agents_(n_agents), adjacency_(n_agents) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  edges_.reserve(edges.size());
  for (Edge e : edges) {
    if (e.i == e.j) throw InputError("Graph: self-loop at agent " + std::to_string(e.i));
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.j >= n_agents) {
      throw InputError("Graph: edge " + std::to_string(e.i) + "-" + std::to_string(e.j) + " out of range for " +
                       std::to_string(n_agents) + " agents");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw InputError("Graph: edge " + std::to_string(e.i) + "-" + std::to_string(e.j) +
                       " needs a positive finite weight");
    }
    if (!seen.emplace(e.i, e.j).second) {
      throw InputError("Graph: duplicate edge " + std::to_string(e.i) + "-" + std::to_string(e.j));
    }
    edges_.push_back(e);
    adjacency_[e.i].push_back({e.j, e.weight});
    adjacency_[e.j].push_back({e.i, e.weight});
  }
}

Graph Graph::complete(std::size_t n_agents) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n_agents; ++i) {
    for (std::size_t j = i + 1; j < n_agents; ++j) edges.push_back({i, j, 1.0});
  }
  return Graph(n_agents, std::move(edges));
}

Graph Graph::ring(std::size_t n_agents) {
  if (n_agents < 3) return path(n_agents);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n_agents; ++i) edges.push_back({i, (i + 1) % n_agents, 1.0});
  return Graph(n_agents, std::move(edges));
}

Graph Graph::path(std::size_t n_agents) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n_agents; ++i) edges.push_back({i, i + 1, 1.0});
  return Graph(n_agents, std::move(edges));
}

bool is_connected(const Graph& g) {
  if (g.n_agents() <= 1) return true;
  DisjointSets sets(g.n_agents());
  std::size_t components = g.n_agents();
  for (const Edge& e : g.edges()) {
    if (sets.unite(e.i, e.j)) --components;
  }
  return components == 1;
}

Graph union_graph(std::span<const Graph> graphs) {
  if (graphs.empty()) return Graph{};
  const std::size_t n = graphs.front().n_agents();
  std::vector<Edge> merged;
  std::vector<std::vector<double>> weight(n, std::vector<double>(n, 0.0));
  for (const Graph& g : graphs) {
    if (g.n_agents() != n) throw InputError("union_graph: graphs disagree on the number of agents");
    for (const Edge& e : g.edges()) weight[e.i][e.j] += e.weight;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (weight[i][j] > 0.0) merged.push_back({i, j, weight[i][j]});
    }
  }
  return Graph(n, std::move(merged));
}

Graph random_ring_graph(std::size_t n_agents, double extra_edge_probability, std::mt19937_64& rng) {
  if (n_agents < 2) return Graph(n_agents, {});
  std::vector<std::size_t> order(n_agents);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::vector<bool>> present(n_agents, std::vector<bool>(n_agents, false));
  std::vector<Edge> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    if (present[a][b]) return;
    present[a][b] = true;
    edges.push_back({a, b, 1.0});
  };
  for (std::size_t k = 0; k + 1 < n_agents; ++k) add(order[k], order[k + 1]);
  if (n_agents > 2) add(order.back(), order.front());

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t i = 0; i < n_agents; ++i) {
    for (std::size_t j = i + 1; j < n_agents; ++j) {
      if (coin(rng) < extra_edge_probability) add(i, j);
    }
  }
  return Graph(n_agents, std::move(edges));
}

SwitchingSignal::SwitchingSignal(std::vector<double> switch_times, std::vector<std::size_t> graph_indices)
    : switch_times_(std::move(switch_times)), graph_indices_(std::move(graph_indices)) {
  if (switch_times_.empty()) throw InputError("SwitchingSignal: needs at least the start time");
  if (switch_times_.size() != graph_indices_.size()) {
    throw InputError("SwitchingSignal: switch_times and graph_indices differ in length");
  }
  for (std::size_t k = 0; k < switch_times_.size(); ++k) {
    if (!std::isfinite(switch_times_[k])) throw InputError("SwitchingSignal: non-finite switch time");
    if (k > 0 && !(switch_times_[k] > switch_times_[k - 1])) {
      throw InputError("SwitchingSignal: switch times must be strictly increasing (entry " + std::to_string(k) +
                       ")");
    }
  }
}

std::size_t SwitchingSignal::interval_at(double t) const {
  if (t < start_time()) {
    throw InputError("SwitchingSignal: time " + std::to_string(t) + " precedes the signal start " +
                     std::to_string(start_time()));
  }
  // Last entry ≤ t (right-continuity).
  const auto it = std::upper_bound(switch_times_.begin(), switch_times_.end(), t);
  return static_cast<std::size_t>(std::distance(switch_times_.begin(), it)) - 1;
}

std::size_t active_graph(const SwitchingSignal& sig, double t) { return sig.graph_indices()[sig.interval_at(t)]; }

std::size_t count_switches(const SwitchingSignal& sig, double tau, double t) {
  if (tau > t) throw InputError("count_switches: tau must not exceed t");
  const auto& s = sig.switch_times();
  const auto lo = std::upper_bound(s.begin(), s.end(), tau);
  const auto hi = std::upper_bound(s.begin(), s.end(), t);
  return static_cast<std::size_t>(std::distance(lo, hi));
}

DwellTimeSpec DwellTimeSpec::fixed(double tau_d) {
  DwellTimeSpec spec{Mode::kFixedDwell, tau_d, 1.0, 0.0};
  spec.validate();
  return spec;
}

DwellTimeSpec DwellTimeSpec::average(double n0, double tau_a) {
  DwellTimeSpec spec{Mode::kAverageDwell, 0.0, n0, tau_a};
  spec.validate();
  return spec;
}

void DwellTimeSpec::validate() const {
  if (mode == Mode::kFixedDwell) {
    if (!(tau_d > 0.0) || !std::isfinite(tau_d)) throw InputError("dwell: tau_d must be positive");
  } else {
    if (!(n0 >= 1.0) || !std::isfinite(n0)) throw InputError("dwell: N0 must be >= 1");
    if (!(tau_a > 0.0) || !std::isfinite(tau_a)) throw InputError("dwell: tau_a must be positive");
  }
}

DwellReport validate_dwell(const SwitchingSignal& sig, const DwellTimeSpec& spec, double horizon) {
  spec.validate();
  const auto& s = sig.switch_times();
  // Entries considered: those not beyond the horizon.
  const std::size_t last =
      static_cast<std::size_t>(std::distance(s.begin(), std::upper_bound(s.begin(), s.end(), horizon)));

  DwellReport report;
  report.margin = std::numeric_limits<double>::infinity();
  report.worst_pair = {sig.start_time(), horizon};

  if (spec.mode == DwellTimeSpec::Mode::kFixedDwell) {
    for (std::size_t k = 1; k < last; ++k) {
      const double slack = (s[k] - s[k - 1]) - spec.tau_d;
      if (slack < report.margin) {
        report.margin = slack;
        report.worst_pair = {s[k - 1], s[k]};
      }
    }
    report.ok = report.margin >= -kTimeSlack * std::max(1.0, spec.tau_d);
    return report;
  }

  for (std::size_t k = 1; k < last; ++k) {
    for (std::size_t j = 1; j <= k; ++j) {
      const double count = static_cast<double>(k - j + 1);
      const double slack = spec.n0 + (s[k] - s[j]) / spec.tau_a - count;
      if (slack < report.margin) {
        report.margin = slack;
        report.worst_pair = {s[j], s[k]};
      }
    }
  }
  report.ok = report.margin >= -kTimeSlack * std::max(1.0, horizon / spec.tau_a);
  return report;
}

SwitchingSignal generate_switching_signal(std::uint64_t seed, std::size_t n_graphs, const DwellTimeSpec& spec,
                                          double horizon, double t0) {
  if (n_graphs == 0) throw ConstructionError("generate_switching_signal: need at least one graph");
  spec.validate();
  if (!std::isfinite(horizon) || !std::isfinite(t0) || !(horizon > t0)) {
    throw ConstructionError("generate_switching_signal: horizon must be finite and after t0");
  }
  const double min_spacing = spec.mode == DwellTimeSpec::Mode::kFixedDwell ? spec.tau_d : spec.tau_a;
  constexpr double kMaxSwitches = 1e7;
  if ((horizon - t0) / min_spacing > kMaxSwitches) {
    throw ConstructionError("generate_switching_signal: spec would need more than 1e7 switches over the horizon");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_first(0, n_graphs - 1);
  std::vector<double> times{t0};
  std::vector<std::size_t> indices{pick_first(rng)};
  if (n_graphs == 1) return SwitchingSignal(std::move(times), std::move(indices));

  std::uniform_real_distribution<double> stretch(spec.mode == DwellTimeSpec::Mode::kFixedDwell ? 1.0 : 0.25, 2.0);
  std::uniform_int_distribution<std::size_t> pick_other(0, n_graphs - 2);

  while (true) {
    double next = times.back() + stretch(rng) * min_spacing;
    if (spec.mode == DwellTimeSpec::Mode::kAverageDwell) {
      // Earliest instant keeping every window ending at the new switch admissible.
      const std::size_t k = times.size();
      for (std::size_t j = 1; j < k; ++j) {
        const double needed = times[j] + spec.tau_a * (static_cast<double>(k - j + 1) - spec.n0);
        next = std::max(next, needed + 1e-9 * spec.tau_a);
      }
    }
    if (!(next < horizon)) break;
    std::size_t idx = pick_other(rng);
    if (idx >= indices.back()) ++idx;
    times.push_back(next);
    indices.push_back(idx);
  }
  return SwitchingSignal(std::move(times), std::move(indices));
}

}  // namespace spheresync
