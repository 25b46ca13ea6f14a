#pragma once

#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace spheresync {

enum class ShapingKind { kChordal, kGeodesicQuadratic, kPowerChordal };

std::string_view to_string(ShapingKind kind);
/// Accepts "chordal", "geodesic_quadratic", "power_chordal"; throws InputError otherwise.
ShapingKind parse_shaping_kind(std::string_view name);

/**
 * @brief Reshaping function f of the pairwise geodesic angle.
 *
 * The same f drives the coupling weight of the control law and the edge-sum
 * energy, so the law is the negative gradient of that energy.
 *
 *   chordal             f(s) = 1 − cos s
 *   geodesic_quadratic  f(s) = s² / 2
 *   power_chordal(p)    f(s) = (1 − cos s)^p / p,  p ≥ 1
 */
struct DistanceFunction {
  ShapingKind kind = ShapingKind::kChordal;
  double power = 1.0;  // only read by kPowerChordal
  double domain_limit = std::numbers::pi / 2.0;

  static DistanceFunction chordal(double domain_limit = std::numbers::pi / 2.0);
  static DistanceFunction geodesic_quadratic(double domain_limit = std::numbers::pi / 2.0);
  static DistanceFunction power_chordal(double p, double domain_limit = std::numbers::pi / 2.0);

  /// Throws InputError if p < 1 or domain_limit ∉ (0, π].
  void validate() const;

  friend bool operator==(const DistanceFunction&, const DistanceFunction&) = default;
};

double eval(const DistanceFunction& d, double s);
double eval_derivative(const DistanceFunction& d, double s);

/// f′(s) / sin(s), extended continuously to s = 0. This is the scalar gain on
/// the projected neighbor direction in the control law.
double coupling_weight(const DistanceFunction& d, double s);

struct AdmissibilityViolation {
  double s;
  std::string condition;
};

struct AdmissibilityReport {
  bool ok = true;
  std::vector<AdmissibilityViolation> violations;
};

/// Grid certificate over (0, domain_limit): f(0) = 0, f > 0, f(s + 1e−4) > f(s),
/// f′ > 0, and f′ within 1e−6 relative of a central difference of f.
AdmissibilityReport verify_admissibility(const DistanceFunction& d, std::size_t grid_points);

/// Same checks for an arbitrary candidate pair (f, f′).
AdmissibilityReport verify_admissibility(const std::function<double(double)>& f,
                                         const std::function<double(double)>& df, double domain_limit,
                                         std::size_t grid_points);

}  // namespace spheresync
