#include "epon/delay.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace epon {

double mean_residual_delay(const SystemParams& params) { return 0.5 * params.cycle; }

double delay_bound(const SystemParams& params) {
  return (M_E * M_E - 0.5) * params.cycle;
}

double efficiency(const SystemParams& params, const StationaryDistribution& dist) {
  return dist.lambda_out / params.discovery_window();
}

DelayEstimate mean_delay(const SystemParams& params, const StationaryDistribution& dist,
                         double h) {
  // Reject the middle stationary point of an unpredictable configuration:
  // it repels trajectories, so no delay is experienced "at" it.
  const std::vector<StationaryDistribution> all = solve_stationary_with_h(params, h);
  if (all.size() == 3 && std::abs(dist.pi_r - all[1].pi_r) <= 1e-9) {
    throw RegionError("mean_delay: the middle stationary point is unstable; "
                      "use the low or saturated point");
  }

  DelayEstimate e;
  const double T = params.cycle;
  const double M = params.discovery_window();
  e.mean_residual = mean_residual_delay(params);
  e.mean_attempts = 1.0 / dist.p_suc;
  e.mean_attempting = M + (e.mean_attempts - 1.0) * T;
  e.mean_total = e.mean_residual + e.mean_attempting;
  e.mean_attempting_approx = (e.mean_attempts - 1.0) * T;
  e.mean_total_approx = (e.mean_attempts - 0.5) * T;
  e.bound = delay_bound(params);
  e.ideal = 0.5 * T;
  e.efficiency = efficiency(params, dist);
  e.effectively_unbounded = e.mean_attempts > 1e6;
  return e;
}

}  // namespace epon
