#ifndef EPON_STABILITY_HPP
#define EPON_STABILITY_HPP

#include <utility>
#include <vector>

#include "epon/model.hpp"

namespace epon {

// Operating regions of the maximum waiting time relative to the two
// critical thresholds omega0 < omega_m1. Below omega0 the single
// stationary point sits near 1 (everyone stuck registering); between the
// thresholds three points coexist and the long-run behaviour depends on
// the starting state; above omega_m1 the single point is small.
enum class Region { Saturated, BoundarySaturated, Unpredictable, BoundaryStable, Stable };

// Role of a stationary point when several coexist: the small attracting
// point, the middle unstable one, the near-1 attracting one. Serialized
// as 'd', 'u', 's'.
enum class RootRole { Low, Unstable, Saturated };

struct LabeledRoot {
  double pi_r;
  RootRole role;
  int multiplicity;
};

struct StabilityReport {
  double h = 0.0;         // attempt probability used throughout the report
  double alpha = 0.0;     // -e * h, the Lambert argument
  double omega0 = 0.0;    // lower critical maximum waiting time
  double omega_m1 = 0.0;  // upper critical maximum waiting time
  Region region = Region::Saturated;
  bool strictly_stable = false;
  std::vector<LabeledRoot> roots;
  std::vector<StationaryDistribution> distributions;  // same order as roots
  double x0 = 0.0;    // local minimum of the balance residual
  double x1 = 0.0;    // local maximum of the balance residual
  double f_x0 = 0.0;  // residual value at x0, h * (1 - omega/omega0)
  double f_x1 = 0.0;  // residual value at x1, h * (1 - omega/omega_m1)
  double pi_r_lower = 0.0;  // h / (1+h)
  double pi_r_upper = 0.0;  // -W0(alpha) / (1 - W0(alpha))
};

// The two critical maximum waiting times (omega0, omega_m1), derived
// from the two real Lambert branches at alpha = -e*h. Throws RegimeError
// when alpha < -1/e.
std::pair<double, double> critical_omegas(const SystemParams& params, double h);

struct CriticalPoints {
  double x0;
  double x1;
  double f_x0;
  double f_x1;
};

// Location and value of the two interior extrema of the balance residual.
CriticalPoints critical_points(const SystemParams& params, double h);

// Full stability classification at the given parameters.
StabilityReport classify(const SystemParams& params, HMode mode = HMode::Exact);

// Necessary condition for strict stability: h < 1/16.
bool strict_stability_necessary(double h);

// The sharper sufficient-side threshold -W-1(-e h) / (4 [1 - W-1(-e h)]^2);
// strict stability with margin requires h below this value.
double strict_stability_sharper_threshold(double h);

// Bracket [h/(1+h), -W0(alpha)/(1-W0(alpha))] containing the unique
// stationary point in the stable region. Throws RegionError when the
// parameters are not in the stable region.
std::pair<double, double> pi_r_bounds(const SystemParams& params, double h);

// Closed-form small-root approximation from the linearized collision
// term. Throws DiscriminantError when max_wait < 8 L N h / (1+h)^2.
double pi_r_quadratic_approx(const SystemParams& params, double h);

char root_role_letter(RootRole role);
const char* region_name(Region region);

}  // namespace epon

#endif  // EPON_STABILITY_HPP
