#ifndef EPON_SIM_HPP
#define EPON_SIM_HPP

#include <cstdint>
#include <vector>

#include "epon/model.hpp"

namespace epon {

enum class OnuMode { Online, Off, Registering };

// Live state of one simulated ONU. `next_event_time` is the scheduled
// mode expiry while Online/Off; a Registering ONU has no timer and keeps
// its power-on instant in `turn_on_time` for delay accounting.
struct OnuState {
  OnuMode mode = OnuMode::Off;
  double next_event_time = 0.0;
  double turn_on_time = 0.0;
  int attempts = 0;
};

struct SimConfig {
  SystemParams params;
  double init_fraction_r = 0.0;     // fraction of ONUs that start registering at t = 0
  std::int64_t n_cycles = 10000;    // discovery windows simulated per replication
  std::int64_t burn_in_cycles = 1000;
  std::uint64_t seed = 1;
  int replications = 1;

  void validate() const;  // throws ConfigError
};

struct WindowRecord {
  int replication;
  std::int64_t window_index;
  double time;  // window start, seconds
  int count_a;
  int count_f;
  int count_r;      // == n_attempts; every registering ONU sends a request
  int n_attempts;
  int n_successes;
};

struct DelaySample {
  int replication;
  int onu_id;
  double turn_on_time;
  double success_time;    // start of the window in which the request got through
  double delay_seconds;   // (success_time - turn_on_time) + discovery window size
  int attempts;           // windows participated, including the successful one
};

struct SteadyStateEstimate {
  double pi_r_hat = 0.0;        // mean registering fraction over post-burn-in windows
  double pi_r_se = 0.0;         // batch-means standard error of pi_r_hat
  double lambda_out_hat = 0.0;  // mean successes per window
  double mean_delay_hat = 0.0;  // NaN when no post-burn-in registration completed
  double mean_residual_hat = 0.0;
  double efficiency_hat = 0.0;  // lambda_out_hat / discovery window size
  std::int64_t windows_used = 0;
  std::int64_t delay_samples_used = 0;
};

struct SimTrace {
  SimConfig config;
  std::vector<WindowRecord> per_window;     // ordered by (replication, window_index)
  std::vector<DelaySample> delay_samples;   // same ordering
  SteadyStateEstimate steady_state;
};

// Collision outcome of one discovery window: request i occupies
// [offsets[i], offsets[i] + req_len] and succeeds iff that interval
// overlaps no other request's interval.
std::vector<bool> resolve_window(const std::vector<double>& offsets, double req_len);

// Seeded Monte Carlo run. Online/off holding times follow event clocks in
// continuous time; registration attempts happen only at window starts.
// Deterministic for a given config, including under concurrent
// replications (`max_threads` 0 picks hardware concurrency).
SimTrace run(const SimConfig& config, int max_threads = 0);

// Recompute steady-state estimates from a trace with a different burn-in.
SteadyStateEstimate estimate_steady_state(const SimTrace& trace, std::int64_t burn_in);

}  // namespace epon

#endif  // EPON_SIM_HPP
