#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "spheresync/analysis.hpp"

namespace spheresync {

/// time,graph_index,lyapunov,sync_error,x_0_0,…,x_{N−1}_n
std::string trace_csv_header(int sphere_dim, std::size_t n_agents);

/// One row per kept sample: every `stride`-th sample, every switch instant and
/// the last sample. Reals are written with 17 significant digits.
void write_trace_csv(std::ostream& out, const Trace& trace, std::size_t stride = 1);

/// Switch timeline as time,graph_index rows (entries up to the horizon).
void write_signal_csv(std::ostream& out, const SwitchingSignal& sig, double horizon);

using ReportEntries = std::vector<std::pair<std::string, std::string>>;

/// Flat namespaced key = value lines describing the scenario, the certificate and the events.
ReportEntries report_entries(const CertificateReport& report, const Scenario& sc, const Trace& trace);

void write_report(std::ostream& out, const ReportEntries& entries);

std::string format_real(double v);

}  // namespace spheresync
