#include "spheresync/trace_io.hpp"

#include <cmath>
#include <cstdio>

namespace spheresync {

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trace_csv_header(int sphere_dim, std::size_t n_agents) {
  std::string h = "time,graph_index,lyapunov,sync_error";
  for (std::size_t i = 0; i < n_agents; ++i) {
    for (int c = 0; c <= sphere_dim; ++c) h += ",x_" + std::to_string(i) + "_" + std::to_string(c);
  }
  return h;
}

void write_trace_csv(std::ostream& out, const Trace& trace, std::size_t stride) {
  if (stride == 0) stride = 1;
  out << trace_csv_header(trace.sphere_dim, trace.n_agents) << '\n';
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    const TraceSample& s = trace.samples[k];
    const bool keep = k % stride == 0 || s.switch_instant || k + 1 == trace.samples.size();
    if (!keep) continue;
    out << format_real(s.time) << ',' << s.graph_index << ',' << format_real(s.lyapunov) << ','
        << format_real(s.sync_error);
    for (Eigen::Index c = 0; c < s.coords.size(); ++c) out << ',' << format_real(s.coords[c]);
    out << '\n';
  }
}

void write_signal_csv(std::ostream& out, const SwitchingSignal& sig, double horizon) {
  out << "time,graph_index\n";
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (sig.switch_times()[k] > horizon) break;
    out << format_real(sig.switch_times()[k]) << ',' << sig.graph_indices()[k] << '\n';
  }
}

namespace {

std::string flag(bool b) { return b ? "true" : "false"; }

std::string join(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_real(v[i]);
  return out;
}

}  // namespace

ReportEntries report_entries(const CertificateReport& r, const Scenario& sc, const Trace& trace) {
  ReportEntries e;
  auto put = [&e](std::string k, std::string v) { e.emplace_back(std::move(k), std::move(v)); };

  put("format", "spheresync-report/1");
  put("scenario.mode", std::string(to_string(sc.mode)));
  put("scenario.sphere_dim", std::to_string(sc.sphere_dim));
  put("scenario.n_agents", std::to_string(sc.n_agents));
  put("scenario.dt", format_real(sc.dt));
  put("scenario.horizon", format_real(sc.horizon));
  put("scenario.seed", std::to_string(sc.seed));
  put("scenario.epsilon", format_real(sc.epsilon));
  put("scenario.shaping.kind", std::string(to_string(sc.shaping.kind)));
  if (sc.shaping.kind == ShapingKind::kPowerChordal) put("scenario.shaping.power", format_real(sc.shaping.power));
  put("scenario.shaping.domain_limit", format_real(sc.shaping.domain_limit));
  put("scenario.graph_count", std::to_string(sc.graphs.size()));
  put("scenario.switch_times", [&] {
    std::string s;
    for (double t : sc.signal.switch_times()) {
      if (t > sc.horizon) break;
      s += (s.empty() ? "" : " ") + format_real(t);
    }
    return s;
  }());

  for (std::size_t k = 0; k < r.graph_connected.size(); ++k) {
    put("hypotheses.graph." + std::to_string(k) + ".connected", flag(r.graph_connected[k]));
  }
  put("hypotheses.all_graphs_connected", flag(r.all_graphs_connected));
  put("hypotheses.dwell.declared", flag(r.dwell_declared));
  if (!sc.dwell) {
    put("hypotheses.dwell.mode", "none");
  } else if (sc.dwell->mode == DwellTimeSpec::Mode::kFixedDwell) {
    put("hypotheses.dwell.mode", "fixed");
    put("hypotheses.dwell.tau_d", format_real(sc.dwell->tau_d));
  } else {
    put("hypotheses.dwell.mode", "average");
    put("hypotheses.dwell.n0", format_real(sc.dwell->n0));
    put("hypotheses.dwell.tau_a", format_real(sc.dwell->tau_a));
  }
  put("hypotheses.dwell.ok", flag(r.dwell.ok));
  put("hypotheses.dwell.worst_pair", format_real(r.dwell.worst_pair.first) + " " + format_real(r.dwell.worst_pair.second));
  put("hypotheses.dwell.margin", format_real(r.dwell.margin));
  put("hypotheses.initial_containment", r.initial_containment ? "certified" : "uncertified");
  if (r.initial_pole) put("hypotheses.initial_pole", join(r.initial_pole->coords()));
  put("hypotheses.initial_spread", format_real(r.initial_spread));
  put("hypotheses.initial_within_domain", flag(r.initial_within_domain));
  put("hypotheses.shaping_admissible", flag(r.shaping_admissible));
  put("hypotheses.sign_alignment_ok", flag(r.sign_alignment_ok));
  put("hypotheses.certified", flag(r.hypotheses_certified));

  put("conclusion.epsilon", format_real(r.epsilon));
  put("conclusion.final_sync_error", format_real(r.final_sync_error));
  put("conclusion.time_to_epsilon", r.time_to_epsilon ? format_real(*r.time_to_epsilon) : "undefined");
  put("conclusion.monotonicity_violations", std::to_string(r.monotonicity_violations));
  put("conclusion.max_energy_increase", format_real(trace.max_energy_increase));
  put("conclusion.max_norm_drift", format_real(r.max_norm_drift));
  put("conclusion.truncated", flag(r.truncated));
  if (r.final_rotation_spread) put("conclusion.final_rotation_spread", format_real(*r.final_rotation_spread));
  put("conclusion.synchronized", flag(r.synchronized));

  std::size_t n_events = 0;
  for (const TraceEvent& ev : trace.events) {
    if (ev.kind == "switch") continue;
    const std::string prefix = "events." + std::to_string(n_events++);
    put(prefix + ".time", format_real(ev.time));
    put(prefix + ".kind", ev.kind);
    put(prefix + ".detail", ev.detail);
  }
  put("events.count", std::to_string(n_events));
  put("trace.samples", std::to_string(trace.samples.size()));
  put("verdict", std::string(to_string(r.verdict)));
  return e;
}

void write_report(std::ostream& out, const ReportEntries& entries) {
  for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
}

}  // namespace spheresync
