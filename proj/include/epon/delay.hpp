#ifndef EPON_DELAY_HPP
#define EPON_DELAY_HPP

#include "epon/model.hpp"

namespace epon {

// Closed-form registration delay split into its components. The *_approx
// fields drop the discovery-window size M from the attempting delay; the
// plain fields keep it. At millisecond cycles the difference is below
// plotting resolution but it matters when cross-checking the simulator.
struct DelayEstimate {
  double mean_residual = 0.0;          // wait from power-on to the next window, ~cycle/2
  double mean_attempts = 0.0;          // windows until success, 1/p_suc
  double mean_attempting = 0.0;        // M + (E[k]-1) * cycle
  double mean_total = 0.0;             // mean_residual + mean_attempting
  double mean_attempting_approx = 0.0; // (E[k]-1) * cycle
  double mean_total_approx = 0.0;      // (E[k]-1/2) * cycle
  double bound = 0.0;                  // (e^2 - 1/2) * cycle, stable-region cap
  double ideal = 0.0;                  // cycle/2, the large-omega limit
  double efficiency = 0.0;             // successful registrations per second of window
  bool effectively_unbounded = false;  // E[k] > 1e6 windows
};

// Mean wait between power-on and the next discovery window, cycle/2 in
// the short-cycle regime.
double mean_residual_delay(const SystemParams& params);

// Delay estimate at a stationary point. `dist` must not be the middle
// (unstable) point of an unpredictable configuration; that request
// throws RegionError.
DelayEstimate mean_delay(const SystemParams& params, const StationaryDistribution& dist,
                         double h);

// Universal stable-region delay cap (e^2 - 1/2) * cycle.
double delay_bound(const SystemParams& params);

// Registration efficiency: successful registrations per unit of
// discovery-window time, N pi_R p_suc / M.
double efficiency(const SystemParams& params, const StationaryDistribution& dist);

}  // namespace epon

#endif  // EPON_DELAY_HPP
