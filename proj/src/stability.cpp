#include "epon/stability.hpp"

#include <cmath>
#include <string>

#include "epon/lambert.hpp"

namespace epon {

namespace {

constexpr double kBoundaryTol = 1e-12;  // relative, omega vs critical values

double lambert_alpha(double h) { return -M_E * h; }

void require_regime(double alpha) {
  if (alpha < -0.36787944117144233 * (1.0 + 1e-12)) {
    throw RegimeError(
        "stability: attempt probability above 1/e^2, the critical waiting "
        "times are undefined (shorten the cycle or lengthen the holding times)");
  }
}

}  // namespace

std::pair<double, double> critical_omegas(const SystemParams& params, double h) {
  const double alpha = lambert_alpha(h);
  require_regime(alpha);
  const double two_ln = 2.0 * params.req_len * params.n_onus;
  const double w0 = lambert_w0(alpha).value;
  const double wm1 = lambert_wm1(alpha).value;
  const double omega0 = -two_ln * w0 / ((1.0 - w0) * (1.0 - w0));
  const double omega_m1 = -two_ln * wm1 / ((1.0 - wm1) * (1.0 - wm1));
  return {omega0, omega_m1};
}

CriticalPoints critical_points(const SystemParams& params, double h) {
  const double alpha = lambert_alpha(h);
  require_regime(alpha);
  const double two_ln = 2.0 * params.req_len * params.n_onus;
  const double w0 = lambert_w0(alpha).value;
  const double wm1 = lambert_wm1(alpha).value;
  const auto [omega0, omega_m1] = critical_omegas(params, h);
  CriticalPoints c;
  c.x0 = params.max_wait * (1.0 - w0) / two_ln;
  c.x1 = params.max_wait * (1.0 - wm1) / two_ln;
  c.f_x0 = h * (1.0 - params.max_wait / omega0);
  c.f_x1 = h * (1.0 - params.max_wait / omega_m1);
  return c;
}

bool strict_stability_necessary(double h) { return h < 1.0 / 16.0; }

double strict_stability_sharper_threshold(double h) {
  const double alpha = lambert_alpha(h);
  require_regime(alpha);
  const double wm1 = lambert_wm1(alpha).value;
  return -wm1 / (4.0 * (1.0 - wm1) * (1.0 - wm1));
}

StabilityReport classify(const SystemParams& params, HMode mode) {
  params.validate();
  const double h = attempt_probability(params, mode);
  const double alpha = lambert_alpha(h);
  require_regime(alpha);

  StabilityReport r;
  r.h = h;
  r.alpha = alpha;
  auto [omega0, omega_m1] = critical_omegas(params, h);
  r.omega0 = omega0;
  r.omega_m1 = omega_m1;

  const CriticalPoints cp = critical_points(params, h);
  r.x0 = cp.x0;
  r.x1 = cp.x1;
  r.f_x0 = cp.f_x0;
  r.f_x1 = cp.f_x1;

  const double omega = params.max_wait;
  if (std::abs(omega - omega0) <= kBoundaryTol * omega0) {
    r.region = Region::BoundarySaturated;
  } else if (std::abs(omega - omega_m1) <= kBoundaryTol * omega_m1) {
    r.region = Region::BoundaryStable;
  } else if (omega < omega0) {
    r.region = Region::Saturated;
  } else if (omega < omega_m1) {
    r.region = Region::Unpredictable;
  } else {
    r.region = Region::Stable;
  }

  const double eight_ln = 8.0 * params.req_len * params.n_onus;
  r.strictly_stable =
      r.region == Region::Stable && omega_m1 > eight_ln * h / ((1.0 + h) * (1.0 + h));

  const double w0 = lambert_w0(alpha).value;
  r.pi_r_lower = h / (1.0 + h);
  r.pi_r_upper = -w0 / (1.0 - w0);

  r.distributions = solve_stationary_with_h(params, h);
  const std::size_t n = r.distributions.size();
  for (std::size_t i = 0; i < n; ++i) {
    const StationaryDistribution& d = r.distributions[i];
    RootRole role;
    if (d.multiplicity == 2) {
      role = RootRole::Unstable;  // merged pair at a tangency
    } else if (n == 1) {
      role = (r.region == Region::Saturated) ? RootRole::Saturated : RootRole::Low;
    } else if (i == 0) {
      role = RootRole::Low;
    } else if (i + 1 == n && n == 3) {
      role = RootRole::Saturated;
    } else if (n == 3) {
      role = RootRole::Unstable;
    } else {
      // Two simple-looking roots only happen next to a boundary; the
      // lower one is the small root, the upper the saturated one.
      role = (i == 0) ? RootRole::Low : RootRole::Saturated;
    }
    r.roots.push_back({d.pi_r, role, d.multiplicity});
  }
  return r;
}

std::pair<double, double> pi_r_bounds(const SystemParams& params, double h) {
  const double alpha = lambert_alpha(h);
  require_regime(alpha);
  const auto [omega0, omega_m1] = critical_omegas(params, h);
  const double omega = params.max_wait;
  if (!(omega > omega_m1) || std::abs(omega - omega_m1) <= kBoundaryTol * omega_m1) {
    throw RegionError("pi_r_bounds: bracket only valid in the stable region");
  }
  const double w0 = lambert_w0(alpha).value;
  return {h / (1.0 + h), -w0 / (1.0 - w0)};
}

double pi_r_quadratic_approx(const SystemParams& params, double h) {
  const double four_ln = 4.0 * params.req_len * params.n_onus;
  const double omega = params.max_wait;
  double disc = 1.0 - 2.0 * four_ln * h / ((1.0 + h) * (1.0 + h) * omega);
  if (disc < -1e-12) {
    throw DiscriminantError(
        "pi_r_quadratic_approx: max_wait below 8 L N h / (1+h)^2, "
        "the linearized solution is complex");
  }
  disc = std::max(disc, 0.0);
  return (1.0 - std::sqrt(disc)) * (1.0 + h) * omega / four_ln;
}

char root_role_letter(RootRole role) {
  switch (role) {
    case RootRole::Low: return 'd';
    case RootRole::Unstable: return 'u';
    case RootRole::Saturated: return 's';
  }
  return '?';
}

const char* region_name(Region region) {
  switch (region) {
    case Region::Saturated: return "saturated";
    case Region::BoundarySaturated: return "boundary-saturated";
    case Region::Unpredictable: return "unpredictable";
    case Region::BoundaryStable: return "boundary-stable";
    case Region::Stable: return "stable";
  }
  return "?";
}

}  // namespace epon
