#include "spheresync/shaping.hpp"

#include <algorithm>
#include <cmath>

#include "spheresync/errors.hpp"

namespace spheresync {

namespace {

constexpr double kPi = std::numbers::pi;

void check_angle(double s) {
  if (!(s >= 0.0 && s <= kPi)) throw InputError("shaping: angle " + std::to_string(s) + " outside [0, pi]");
}

// 1 − cos s without cancellation near 0.
double one_minus_cos(double s) {
  const double h = std::sin(0.5 * s);
  return 2.0 * h * h;
}

}  // namespace

std::string_view to_string(ShapingKind kind) {
  switch (kind) {
    case ShapingKind::kChordal:
      return "chordal";
    case ShapingKind::kGeodesicQuadratic:
      return "geodesic_quadratic";
    case ShapingKind::kPowerChordal:
      return "power_chordal";
  }
  return "unknown";
}

ShapingKind parse_shaping_kind(std::string_view name) {
  if (name == "chordal") return ShapingKind::kChordal;
  if (name == "geodesic_quadratic") return ShapingKind::kGeodesicQuadratic;
  if (name == "power_chordal") return ShapingKind::kPowerChordal;
  throw InputError("unknown shaping kind '" + std::string(name) +
                   "' (expected chordal, geodesic_quadratic or power_chordal)");
}

DistanceFunction DistanceFunction::chordal(double domain_limit) {
  return {ShapingKind::kChordal, 1.0, domain_limit};
}

DistanceFunction DistanceFunction::geodesic_quadratic(double domain_limit) {
  return {ShapingKind::kGeodesicQuadratic, 1.0, domain_limit};
}

DistanceFunction DistanceFunction::power_chordal(double p, double domain_limit) {
  DistanceFunction d{ShapingKind::kPowerChordal, p, domain_limit};
  d.validate();
  return d;
}

void DistanceFunction::validate() const {
  if (!(domain_limit > 0.0 && domain_limit <= kPi)) throw InputError("shaping: domain_limit must lie in (0, pi]");
  if (kind == ShapingKind::kPowerChordal && !(power >= 1.0 && std::isfinite(power))) {
    throw InputError("shaping: power_chordal requires p >= 1");
  }
}

double eval(const DistanceFunction& d, double s) {
  check_angle(s);
  switch (d.kind) {
    case ShapingKind::kChordal:
      return one_minus_cos(s);
    case ShapingKind::kGeodesicQuadratic:
      return 0.5 * s * s;
    case ShapingKind::kPowerChordal:
      return std::pow(one_minus_cos(s), d.power) / d.power;
  }
  return 0.0;
}

double eval_derivative(const DistanceFunction& d, double s) {
  check_angle(s);
  switch (d.kind) {
    case ShapingKind::kChordal:
      return std::sin(s);
    case ShapingKind::kGeodesicQuadratic:
      return s;
    case ShapingKind::kPowerChordal:
      return std::pow(one_minus_cos(s), d.power - 1.0) * std::sin(s);
  }
  return 0.0;
}

double coupling_weight(const DistanceFunction& d, double s) {
  check_angle(s);
  switch (d.kind) {
    case ShapingKind::kChordal:
      return 1.0;
    case ShapingKind::kGeodesicQuadratic: {
      if (s < 1e-4) {
        const double s2 = s * s;
        return 1.0 + s2 / 6.0 + 7.0 * s2 * s2 / 360.0;
      }
      return s / std::sin(s);
    }
    case ShapingKind::kPowerChordal:
      return std::pow(one_minus_cos(s), d.power - 1.0);
  }
  return 0.0;
}

AdmissibilityReport verify_admissibility(const DistanceFunction& d, std::size_t grid_points) {
  d.validate();
  return verify_admissibility([&d](double s) { return eval(d, s); },
                              [&d](double s) { return eval_derivative(d, s); }, d.domain_limit, grid_points);
}

AdmissibilityReport verify_admissibility(const std::function<double(double)>& f,
                                         const std::function<double(double)>& df, double domain_limit,
                                         std::size_t grid_points) {
  if (grid_points < 100) throw InputError("verify_admissibility: need at least 100 grid points");
  if (!(domain_limit > 0.0 && domain_limit <= kPi)) throw InputError("verify_admissibility: bad domain_limit");

  constexpr double kMonotoneStep = 1e-4;
  constexpr double kFdRelativeStep = 1e-4;
  constexpr double kFdRelTol = 1e-6;

  AdmissibilityReport report;
  auto fail = [&report](double s, std::string what) {
    report.ok = false;
    report.violations.push_back({s, std::move(what)});
  };

  if (f(0.0) != 0.0) fail(0.0, "f(0) != 0");

  for (std::size_t k = 1; k <= grid_points; ++k) {
    const double s = domain_limit * static_cast<double>(k) / static_cast<double>(grid_points + 1);
    const double fs = f(s);
    const double dfs = df(s);
    if (!(fs > 0.0)) fail(s, "f not positive");
    if (!(dfs > 0.0)) fail(s, "f' not positive");
    if (s + kMonotoneStep <= kPi && !(f(s + kMonotoneStep) > fs)) fail(s, "f not strictly increasing");
    const double h = kFdRelativeStep * s;
    if (s + h <= kPi) {
      const double fd = (f(s + h) - f(s - h)) / (2.0 * h);
      const double scale = std::max(std::abs(dfs), 1e-12);
      if (!(std::abs(fd - dfs) <= kFdRelTol * scale)) fail(s, "f' inconsistent with finite difference of f");
    }
  }
  return report;
}

}  // namespace spheresync
