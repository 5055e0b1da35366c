#ifndef EPON_MODEL_HPP
#define EPON_MODEL_HPP

#include <array>
#include <vector>

#include "epon/errors.hpp"

namespace epon {

// Full parameter set of one EPON registration configuration. All times
// are in seconds; the CLI converts unit-suffixed strings at the boundary.
struct SystemParams {
  int n_onus = 0;        // subscriber population N
  double tau_a = 0.0;    // mean online holding time
  double tau_f = 0.0;    // mean power-off holding time
  double cycle = 0.0;    // registration cycle T (window start to window start)
  double req_len = 0.0;  // REQ message length L
  double max_wait = 0.0; // maximum waiting time (request offsets drawn from [0, max_wait])
  double one_trip = 0.0; // maximal one-trip propagation time Q

  // Discovery slot D = max_wait + req_len; the full window additionally
  // covers the round trip: M = 2Q + D. Derived, never stored.
  double discovery_slot() const { return max_wait + req_len; }
  double discovery_window() const { return 2.0 * one_trip + discovery_slot(); }

  void validate() const;  // throws ConfigError
};

// Which attempt-probability definition downstream computations use: the
// full closed form from the chain, or the short-cycle approximation
// cycle/(tau_a+tau_f).
enum class HMode { Exact, Approx };

// State indices of the per-ONU chain sampled at window starts:
// registered online (A), powered off (F), registering (R).
enum ChainState : int { kOnline = 0, kOff = 1, kRegistering = 2 };

// Row-stochastic single-step transition matrix over {A, F, R}.
struct TransitionMatrix {
  std::array<std::array<double, 3>, 3> p{};

  double row_sum(int row) const { return p[row][0] + p[row][1] + p[row][2]; }
};

// One stationary point of the chain, expanded to the quantities the
// stability and delay analyses consume.
struct StationaryDistribution {
  double pi_a = 0.0;
  double pi_f = 0.0;
  double pi_r = 0.0;
  double g = 0.0;           // offered traffic N * pi_r (mean registrants per window)
  double p_suc = 0.0;       // per-request success probability at this point
  double lambda_out = 0.0;  // successful registrations per cycle, N * pi_r * p_suc
  int multiplicity = 1;     // 2 when the point is a tangency (double) root
};

// Probability that an ONU online at a window start is off and back on
// before the next window, conditioned on it having gone off. The closed
// form has a removable singularity at tau_a == tau_f; near-equal holding
// times are evaluated through the analytic limit instead.
double p_rer(const SystemParams& params);

// Attempt probability h: the constant relating the non-registering mass
// to the registration inflow, ( 1 - pi_R ) h = pi_R p_suc at stationarity.
// Exact closed form from the chain; reduces to cycle/(tau_a+tau_f) when
// both holding times dominate the cycle.
double attempt_probability_exact(const SystemParams& params);
double attempt_probability_approx(const SystemParams& params);
double attempt_probability(const SystemParams& params, HMode mode);

// Per-request success probability when a fraction pi_r of the population
// is registering: exp(-(2 L / omega) N pi_r), the large-population limit.
double success_probability(double pi_r, const SystemParams& params);

// Finite-population alternative (1 - 2 L pi_r / omega)^(N-1), kept for
// cross-checks against the collision simulator.
double success_probability_finite_n(double pi_r, const SystemParams& params);

// All nine single-step transition probabilities given the per-request
// success probability of the current window.
TransitionMatrix transition_matrix(const SystemParams& params, double p_suc);

// Residual of the stationarity balance at candidate pi_R = x:
//   (1 - x) h - x exp(-(2 L N / omega) x).
// Positive at x = 0 (value h), negative at x = 1.
double characteristic_residual(double x, const SystemParams& params, double h);

// Stationary points for the given parameters, ascending in pi_r. One
// root when max_wait is outside the critical interval, three strictly
// inside it, two (one a tangency marked multiplicity 2) on a critical
// boundary. Throws RegimeError when h > 1/e^2 so the critical interval
// is undefined.
std::vector<StationaryDistribution> solve_stationary(const SystemParams& params,
                                                     HMode mode = HMode::Exact);
std::vector<StationaryDistribution> solve_stationary_with_h(const SystemParams& params,
                                                            double h);

// Transition probability from the condensed non-registering state into
// the registering state, weighted over the online/off split of `dist`.
double two_state_transition(const SystemParams& params, const StationaryDistribution& dist);

// Practicality diagnostics: whether the cycle is short enough for the
// stability analysis to apply, and how strongly the short-cycle
// approximations hold.
struct RegimeDiagnostics {
  bool cycle_within_limit = false;  // cycle <= (tau_a + tau_f) / e^2
  bool at_limit_boundary = false;   // equality within 1e-12 relative
  bool h_below_strict_cap = false;  // exact h < 1/16
  double h_exact = 0.0;
  double h_approx = 0.0;
  double cycle_over_tau_a = 0.0;
  double cycle_over_tau_f = 0.0;
};

RegimeDiagnostics check_regime(const SystemParams& params);

}  // namespace epon

#endif  // EPON_MODEL_HPP
