// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "spheresync/analysis.hpp"
#include "spheresync/cli.hpp"
#include "spheresync/presets.hpp"
#include "spheresync/trace_io.hpp"

using namespace spheresync;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome geometry() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> len(0.0, pi);
  std::uniform_real_distribution<double> coord(-9.0, 9.0);
  double tangency = 0, exp_norm = 0, homo = 0, cover = 0, quat_rt = 0, embed_rt = 0;
  for (int k = 0; k < 10000; ++k) {
    const int dim = 1 + k % 4;
    const UnitVector x = oracle::random_point(dim, rng);
    const Eigen::VectorXd v = 3.0 * oracle::random_unit(dim + 1, rng);
    tangency = std::max(tangency, std::abs(x.coords().dot(tangent_project(x, v).components())));

    Eigen::VectorXd t = oracle::random_tangent(x.coords(), rng);
    t *= len(rng) / t.norm();
    exp_norm = std::max(exp_norm, std::abs(sphere_exp(x, TangentVector(x, t)).coords().norm() - 1.0));

    const Quaternion p = Quaternion::from_unit_vector(oracle::random_point(3, rng));
    const Quaternion q = Quaternion::from_unit_vector(oracle::random_point(3, rng));
    homo = std::max(homo, (quat_to_rotmat(p * q).matrix() - quat_to_rotmat(p).matrix() * quat_to_rotmat(q).matrix()).norm());
    cover = std::max(cover, (quat_to_rotmat(q).matrix() - quat_to_rotmat(-q).matrix()).norm());
    const Quaternion back = rotmat_to_quat(quat_to_rotmat(q));
    quat_rt = std::max(quat_rt, std::min((back.coeffs() - q.coeffs()).norm(), (back.coeffs() + q.coeffs()).norm()));

    Eigen::VectorXd z(dim);
    for (int c = 0; c < dim; ++c) z[c] = coord(rng) / std::sqrt(static_cast<double>(dim));
    const auto zb = consensus_unembed(consensus_embed({z}, 10.0), 10.0);
    embed_rt = std::max(embed_rt, (zb[0] - z).norm());
  }
  Outcome o;
  o.pass = tangency <= 1e-12 && exp_norm <= 1e-12 && homo <= 1e-10 && cover <= 1e-12 && quat_rt <= 1e-10 &&
           embed_rt <= 1e-10;
  o.detail = "tangency " + fmt("%.1e", tangency) + ", exp norm " + fmt("%.1e", exp_norm) + ", homomorphism " +
             fmt("%.1e", homo) + ", double cover " + fmt("%.1e", cover) + ", quat round trip " + fmt("%.1e", quat_rt) +
             ", embed round trip " + fmt("%.1e", embed_rt);
  return o;
}

// ---------------------------------------------------------------------------

Outcome gradient_check() {
  std::mt19937_64 rng(1002);
  const std::vector<DistanceFunction> kinds{DistanceFunction::chordal(pi), DistanceFunction::geodesic_quadratic(pi),
                                            DistanceFunction::power_chordal(2.0, pi)};
  double worst = 0.0;
  int configs = 0;
  for (int dim = 1; dim <= 3; ++dim) {
    for (const auto& d : kinds) {
      for (int k = 0; k < 100; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 6);
        // Non-degenerate: no pair within 0.2 rad of antipodal, not synchronized.
        std::vector<UnitVector> xs;
        bool ok = false;
        while (!ok) {
          xs.clear();
          for (std::size_t i = 0; i < n; ++i) xs.push_back(oracle::random_point(dim, rng));
          ok = true;
          for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t j = i + 1; j < n && ok; ++j) ok = geodesic_distance(xs[i], xs[j]) < pi - 0.2;
          }
        }
        const AgentStates s(xs);
        const Graph g = random_ring_graph(n, 0.4, rng);
        const Eigen::MatrixXd adj = oracle::adjacency_matrix(g);
        auto energy = [&](const Eigen::MatrixXd& cols) {
          double v = 0.0;
          for (Eigen::Index i = 0; i < cols.cols(); ++i) {
            for (Eigen::Index j = i + 1; j < cols.cols(); ++j) {
              if (adj(i, j) > 0) v += adj(i, j) * eval(d, oracle::angle_between(cols.col(i), cols.col(j)));
            }
          }
          return v;
        };
        Eigen::VectorXd law(static_cast<Eigen::Index>(n) * (dim + 1));
        Eigen::VectorXd fd = Eigen::VectorXd::Zero(law.size());
        for (std::size_t i = 0; i < n; ++i) {
          const Eigen::Index off = static_cast<Eigen::Index>(i) * (dim + 1);
          law.segment(off, dim + 1) = control_law(i, s, g, d).components();
          const Eigen::VectorXd x = xs[i].coords();
          const Eigen::MatrixXd proj = oracle::dense_projection(x, Eigen::MatrixXd::Identity(dim + 1, dim + 1));
          Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(proj);
          const Eigen::MatrixXd q = qr.householderQ();
          for (int c = 0; c < dim; ++c) {
            const Eigen::VectorXd dir = q.col(c);
            fd.segment(off, dim + 1) -= oracle::directional_derivative(s, i, dir, energy, 1e-6) * dir;
          }
        }
        worst = std::max(worst, (law - fd).norm() / law.norm());
        ++configs;
      }
    }
  }
  return {worst <= 1e-5, std::to_string(configs) + " configurations, max relative error " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------------------

Scenario sync_scenario(int k) {
  SyncScenarioParams p;
  p.seed = 5000 + static_cast<std::uint64_t>(k);
  p.sphere_dim = 1 + k % 3;
  p.n_agents = 3 + static_cast<std::size_t>(k % 8);
  p.n_graphs = 1 + static_cast<std::size_t>(k % 4);
  p.dwell = (k % 2 == 0) ? DwellTimeSpec::fixed(0.1 + 0.1 * (k % 5)) : DwellTimeSpec::average(1.0 + k % 3, 0.2 + 0.1 * (k % 4));
  p.shaping = (k % 3 == 2) ? DistanceFunction::geodesic_quadratic() : DistanceFunction::chordal();
  p.cap_radius = 0.7;
  p.dt = 1e-3;
  p.horizon = 50.0;
  return make_sync_scenario(p);
}

struct SyncRun {
  bool hypotheses_ok = false;
  std::size_t violations = 0;
  std::size_t independent_violations = 0;
  double final_error = 0.0;
  bool consistent = false;
};

std::vector<SyncRun> g_sync_runs;

void run_sync_scenarios() {
  for (int k = 0; k < 50; ++k) {
    const Scenario sc = sync_scenario(k);
    const Trace tr = simulate(sc);
    const CertificateReport rep = certify(tr, sc, 1e-6);
    SyncRun r;
    r.hypotheses_ok = rep.all_graphs_connected && rep.dwell_declared && rep.dwell.ok && rep.initial_containment;
    r.violations = tr.monotonicity_violations;
    // Recheck from the recorded values: each step's energy under the graph active during that step.
    for (std::size_t s = 1; s < tr.samples.size(); ++s) {
      const TraceSample& a = tr.samples[s - 1];
      const TraceSample& b = tr.samples[s];
      double after = b.lyapunov;
      if (b.switch_instant) after = lyapunov_value(tr.states_at(s), sc.graphs[a.graph_index], sc.shaping);
      if (after - a.lyapunov > 1e-8 * (b.time - a.time)) ++r.independent_violations;
    }
    r.final_error = tr.final_sample().sync_error;
    r.consistent = rep.verdict == Verdict::kTheoremConsistent;
    g_sync_runs.push_back(r);
  }
}

Outcome monotonicity() {
  if (g_sync_runs.empty()) run_sync_scenarios();
  std::size_t bad_hyp = 0, viol = 0, indep = 0;
  for (const auto& r : g_sync_runs) {
    bad_hyp += r.hypotheses_ok ? 0 : 1;
    viol += r.violations;
    indep += r.independent_violations;
  }
  return {bad_hyp == 0 && viol == 0 && indep == 0,
          std::to_string(g_sync_runs.size()) + " scenarios, " + std::to_string(bad_hyp) + " with uncertified hypotheses, " +
              std::to_string(viol) + " flagged steps, " + std::to_string(indep) + " steps over 1e-8*dt on recheck"};
}

Outcome theorem_consistency() {
  if (g_sync_runs.empty()) run_sync_scenarios();
  std::size_t synced = 0, consistent = 0;
  double worst = 0.0;
  for (const auto& r : g_sync_runs) {
    synced += r.final_error <= 1e-6 ? 1 : 0;
    consistent += r.consistent ? 1 : 0;
    worst = std::max(worst, r.final_error);
  }
  const std::size_t n = g_sync_runs.size();
  return {synced == n && consistent == n,
          std::to_string(synced) + "/" + std::to_string(n) + " reached 1e-6, " + std::to_string(consistent) + "/" +
              std::to_string(n) + " theorem-consistent, worst final error " + fmt("%.1e", worst)};
}

// ---------------------------------------------------------------------------

Outcome so3_complete() {
  double worst_spread = 0.0, worst_flip = 0.0;
  std::size_t aligned_ok = 0;
  for (int k = 0; k < 10; ++k) {
    SyncScenarioParams p;
    p.seed = 7000 + static_cast<std::uint64_t>(k);
    p.mode = SimulationMode::kSo3CompleteViaS3;
    p.sphere_dim = 3;
    p.n_agents = 6;
    p.n_graphs = 3;
    p.dwell = DwellTimeSpec::fixed(0.2);
    p.horizon = 50.0;
    p.randomize_signs = true;
    const Scenario sc = make_sync_scenario(p);
    const Trace tr = simulate(sc);
    const CertificateReport rep = certify(tr, sc, 1e-6);
    aligned_ok += (rep.sign_alignment_ok && rep.all_graphs_connected) ? 1 : 0;
    worst_spread = std::max(worst_spread, rotation_spread(tr.rotations_at(tr.samples.size() - 1)));

    Scenario flipped = sc;
    std::vector<UnitVector> xs = sc.init.states();
    const std::size_t who = static_cast<std::size_t>(k) % xs.size();
    xs[who] = -xs[who];
    flipped.init = AgentStates(xs);
    const Trace tf = simulate(flipped);
    if (tf.samples.size() != tr.samples.size()) {
      worst_flip = std::numeric_limits<double>::infinity();
      continue;
    }
    for (std::size_t s = 0; s < tr.samples.size(); ++s) {
      const auto ra = tr.rotations_at(s);
      const auto rb = tf.rotations_at(s);
      for (std::size_t i = 0; i < ra.size(); ++i) worst_flip = std::max(worst_flip, (ra[i].matrix() - rb[i].matrix()).norm());
    }
  }
  return {worst_spread <= 1e-5 && worst_flip <= 1e-9 && aligned_ok == 10,
          "10 runs, max final rotation spread " + fmt("%.1e", worst_spread) + ", max sign-flip deviation " +
              fmt("%.1e", worst_flip)};
}

Outcome s2_incomplete() {
  double worst_error = 0.0, max_spread = 0.0;
  for (int k = 0; k < 10; ++k) {
    SyncScenarioParams p;
    p.seed = 8000 + static_cast<std::uint64_t>(k);
    p.mode = SimulationMode::kSo3IncompleteViaS2;
    p.n_agents = 10;
    p.n_graphs = 3;
    p.dwell = DwellTimeSpec::average(2.0, 0.3);
    p.horizon = 50.0;
    const Scenario sc = make_sync_scenario(p);
    const Trace tr = simulate(sc);
    worst_error = std::max(worst_error, tr.final_sample().sync_error);
    max_spread = std::max(max_spread, rotation_spread(tr.rotations_at(tr.samples.size() - 1)));
  }
  return {worst_error <= 1e-6 && max_spread > 0.1,
          "10 runs, worst pointing error " + fmt("%.1e", worst_error) + ", largest final rotation spread " +
              fmt("%.3f", max_spread)};
}

Outcome consensus() {
  std::mt19937_64 rng(1007);
  double worst_lin = 0.0, worst_sph = 0.0, worst_rt = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto z0 = sample_ball(Eigen::Vector2d::Zero(), 1.0, 5, rng);
    const Graph g = random_ring_graph(5, 0.3, rng);
    const ConsensusComparison c = consensus_oracle_compare(z0, g, 50.0, 1e-3, 10.0);
    worst_lin = std::max(worst_lin, c.linear_disagreement);
    worst_sph = std::max(worst_sph, c.sphere_disagreement);
    const auto back = consensus_unembed(consensus_embed(z0, 10.0), 10.0);
    for (std::size_t i = 0; i < z0.size(); ++i) worst_rt = std::max(worst_rt, (back[i] - z0[i]).norm());
  }
  return {worst_lin <= 1e-6 && worst_sph <= 1e-6 && worst_rt <= 1e-10,
          "10 cases, linear disagreement " + fmt("%.1e", worst_lin) + ", sphere disagreement " + fmt("%.1e", worst_sph) +
              ", round trip " + fmt("%.1e", worst_rt)};
}

// ---------------------------------------------------------------------------

// Switch times on a 0.01 lattice; the oracle grid is offset by half a step so it never lands on one.
SwitchingSignal lattice_signal(std::mt19937_64& rng, double horizon, int min_ticks) {
  std::uniform_int_distribution<int> gap(min_ticks, min_ticks + 10);
  std::vector<double> times{0.0};
  std::vector<std::size_t> idx{0};
  int tick = 0;
  while (true) {
    tick += gap(rng);
    if (tick * 0.01 > horizon) break;
    times.push_back(tick * 0.01);
    idx.push_back(idx.size() % 2);
  }
  return {times, idx};
}

Outcome dwell() {
  std::mt19937_64 rng(1008);
  int grid_agree = 0, self_ok = 0, implication = 0;
  for (int k = 0; k < 100; ++k) {
    const SwitchingSignal sig = lattice_signal(rng, 2.0, 1 + k % 12);
    bool agree;
    if (k % 2 == 0) {
      const double tau_d = std::array{0.03, 0.05, 0.1}[k % 3];
      agree = validate_dwell(sig, DwellTimeSpec::fixed(tau_d), 2.0).ok ==
              oracle::grid_fixed_dwell_ok(sig, tau_d, 2.0, 1e-3, 5e-4);
    } else {
      const double n0 = 1.0 + k % 3, tau_a = std::array{0.1, 0.15, 0.25, 0.3}[k % 4];
      agree = validate_dwell(sig, DwellTimeSpec::average(n0, tau_a), 2.0).ok ==
              oracle::grid_average_dwell_ok(sig, n0, tau_a, 2.0, 1e-3, 5e-4);
    }
    grid_agree += agree ? 1 : 0;

    const auto spec = (k % 2 == 0) ? DwellTimeSpec::fixed(0.05 + 0.01 * (k % 10))
                                   : DwellTimeSpec::average(1.0 + k % 3, 0.05 + 0.01 * (k % 10));
    const auto gen = generate_switching_signal(static_cast<std::uint64_t>(k), 2 + k % 3, spec, 20.0);
    self_ok += validate_dwell(gen, spec, 20.0).ok ? 1 : 0;

    const double tau_d = 0.05 + 0.01 * (k % 10);
    const auto fixed = generate_switching_signal(static_cast<std::uint64_t>(1000 + k), 3, DwellTimeSpec::fixed(tau_d), 20.0);
    const bool fixed_ok = validate_dwell(fixed, DwellTimeSpec::fixed(tau_d), 20.0).ok;
    const bool avg_ok = validate_dwell(fixed, DwellTimeSpec::average(1.0, tau_d), 20.0).ok;
    implication += (fixed_ok && avg_ok) ? 1 : 0;
  }
  return {grid_agree == 100 && self_ok == 100 && implication == 100,
          "grid oracle " + std::to_string(grid_agree) + "/100, generated " + std::to_string(self_ok) +
              "/100, fixed->average " + std::to_string(implication) + "/100"};
}

// ---------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "spheresync_acceptance_determinism";
  fs::remove_all(root);
  std::size_t identical = 0;
  const auto names = preset_names();
  for (const auto& name : names) {
    std::string traces[2];
    for (int run = 0; run < 2; ++run) {
      cli::RunOptions opts;
      opts.out_dir = root / (name + "_" + std::to_string(run));
      opts.seed = 42;
      opts.quiet = true;
      std::ostringstream out, err;
      if (cli::cmd_reproduce(name, opts, out, err) != 0) break;
      traces[run] = slurp(opts.out_dir / "trace.csv");
    }
    identical += (!traces[0].empty() && traces[0] == traces[1]) ? 1 : 0;
  }
  fs::remove_all(root);
  return {identical == names.size(),
          std::to_string(identical) + "/" + std::to_string(names.size()) + " presets byte-identical across runs"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_s;
  };
  const std::vector<Criterion> criteria{
      {"geometry", geometry, 10.0},
      {"gradient-check", gradient_check, 30.0},
      {"lyapunov-monotonicity", monotonicity, 300.0},
      {"theorem-consistency", theorem_consistency, 300.0},
      {"so3-complete-casting", so3_complete, 300.0},
      {"s2-incomplete-casting", s2_incomplete, 300.0},
      {"consensus-casting", consensus, 300.0},
      {"dwell-time", dwell, 300.0},
      {"determinism", determinism, 300.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", c.budget_s) + " s budget";
    }
    std::printf("%s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
