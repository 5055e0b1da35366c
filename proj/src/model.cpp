#include "epon/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epon/lambert.hpp"
#include "epon/root_find.hpp"

namespace epon {

namespace {

constexpr double kInvESquared = 0.1353352832366127;  // e^-2

// 1 - e^-x without cancellation for small x.
double one_minus_exp(double x) { return -std::expm1(-x); }

}  // namespace

void SystemParams::validate() const {
  if (n_onus <= 0) throw ConfigError("params: n_onus must be positive");
  if (!(tau_a > 0.0)) throw ConfigError("params: tau_a must be positive");
  if (!(tau_f > 0.0)) throw ConfigError("params: tau_f must be positive");
  if (!(cycle > 0.0)) throw ConfigError("params: cycle must be positive");
  if (!(req_len > 0.0)) throw ConfigError("params: req_len must be positive");
  if (!(max_wait > 0.0)) throw ConfigError("params: max_wait must be positive");
  if (!(one_trip > 0.0)) throw ConfigError("params: one_trip must be positive");
  if (!(req_len < max_wait)) throw ConfigError("params: req_len must be smaller than max_wait");
}

double p_rer(const SystemParams& params) {
  const double ta = params.tau_a;
  const double tf = params.tau_f;
  const double T = params.cycle;
  if (std::abs(ta - tf) <= 1e-9 * std::max(ta, tf)) {
    // Removable singularity at tau_a == tau_f; analytic limit.
    const double x = T / ta;
    return (1.0 - (1.0 + x) * std::exp(-x)) / one_minus_exp(x);
  }
  const double na = ta * one_minus_exp(T / ta);
  const double nf = tf * one_minus_exp(T / tf);
  return (nf - na) / ((tf - ta) * one_minus_exp(T / ta));
}

double attempt_probability_exact(const SystemParams& params) {
  const double a = params.cycle / params.tau_a;
  const double b = params.cycle / params.tau_f;
  const double num = one_minus_exp(a) * one_minus_exp(b);
  const double den = one_minus_exp(a + b) - p_rer(params) * one_minus_exp(a);
  return num / den;
}

double attempt_probability_approx(const SystemParams& params) {
  return params.cycle / (params.tau_a + params.tau_f);
}

double attempt_probability(const SystemParams& params, HMode mode) {
  return mode == HMode::Exact ? attempt_probability_exact(params)
                              : attempt_probability_approx(params);
}

double success_probability(double pi_r, const SystemParams& params) {
  return std::exp(-(2.0 * params.req_len / params.max_wait) * params.n_onus * pi_r);
}

double success_probability_finite_n(double pi_r, const SystemParams& params) {
  const double q = 1.0 - 2.0 * params.req_len * pi_r / params.max_wait;
  if (q <= 0.0) return 0.0;
  return std::pow(q, params.n_onus - 1);
}

TransitionMatrix transition_matrix(const SystemParams& params, double p_suc) {
  const double ea = std::exp(-params.cycle / params.tau_a);
  const double ef = std::exp(-params.cycle / params.tau_f);
  const double pr = p_rer(params);

  TransitionMatrix m;
  m.p[kOnline][kOnline] = ea;
  m.p[kOnline][kRegistering] = (1.0 - ea) * pr;
  m.p[kOnline][kOff] = (1.0 - ea) * (1.0 - pr);

  m.p[kOff][kOnline] = 0.0;  // re-registration is mandatory after power-off
  m.p[kOff][kOff] = ef;
  m.p[kOff][kRegistering] = 1.0 - ef;

  m.p[kRegistering][kOnline] = p_suc * ea;
  m.p[kRegistering][kOff] = p_suc * (1.0 - ea) * (1.0 - pr);
  m.p[kRegistering][kRegistering] = 1.0 - m.p[kRegistering][kOnline] - m.p[kRegistering][kOff];
  return m;
}

double characteristic_residual(double x, const SystemParams& params, double h) {
  const double c = 2.0 * params.req_len * params.n_onus / params.max_wait;
  return (1.0 - x) * h - x * std::exp(-c * x);
}

namespace {

// Derivative of the stationarity residual in x, used to polish roots.
double residual_derivative(double x, double coeff, double h) {
  return -h - (1.0 - coeff * x) * std::exp(-coeff * x);
}

StationaryDistribution expand_root(double x, const SystemParams& params, int multiplicity) {
  StationaryDistribution d;
  d.pi_r = x;
  d.p_suc = success_probability(x, params);
  const double ea = std::exp(-params.cycle / params.tau_a);
  // pi_A follows from the online-state balance; pi_F from normalization.
  d.pi_a = x * d.p_suc * ea / (1.0 - ea);
  d.pi_f = 1.0 - x - d.pi_a;
  if (d.pi_f < 0.0 && d.pi_f > -1e-12) d.pi_f = 0.0;  // saturated root rounds to 1
  d.g = static_cast<double>(params.n_onus) * x;
  d.lambda_out = static_cast<double>(params.n_onus) * x * d.p_suc;
  d.multiplicity = multiplicity;
  return d;
}

// Bisection for a root of the residual on [lo, hi], then a couple of
// guarded Newton steps to push the residual down to evaluation noise.
double refine_root(const SystemParams& params, double h, double lo, double hi) {
  const double coeff = 2.0 * params.req_len * params.n_onus / params.max_wait;
  auto f = [&](double x) { return characteristic_residual(x, params, h); };
  double x = find_root_bracketed(f, lo, hi, 1e-15);
  for (int i = 0; i < 3; ++i) {
    const double fx = f(x);
    const double dfx = residual_derivative(x, coeff, h);
    if (dfx == 0.0) break;
    const double next = x - fx / dfx;
    if (!(next > lo && next < hi)) break;
    if (std::abs(f(next)) >= std::abs(fx)) break;
    x = next;
  }
  return x;
}

}  // namespace

std::vector<StationaryDistribution> solve_stationary(const SystemParams& params, HMode mode) {
  return solve_stationary_with_h(params, attempt_probability(params, mode));
}

std::vector<StationaryDistribution> solve_stationary_with_h(const SystemParams& params,
                                                            double h) {
  params.validate();
  if (h > kInvESquared * (1.0 + 1e-12)) {
    throw RegimeError(
        "solve_stationary: attempt probability above 1/e^2; cycle exceeds "
        "(tau_a + tau_f)/e^2 and the critical waiting times are undefined");
  }

  const double alpha = -M_E * h;
  const double two_ln = 2.0 * params.req_len * params.n_onus;
  const double omega = params.max_wait;
  const double w0 = lambert_w0(alpha).value;
  const double wm1 = lambert_wm1(alpha).value;

  // Stationary points of the residual in x: decreasing on [0, x0],
  // increasing on [x0, x1], decreasing on [x1, 1].
  const double x0 = omega * (1.0 - w0) / two_ln;
  const double x1 = omega * (1.0 - wm1) / two_ln;
  const double omega0 = -two_ln * w0 / ((1.0 - w0) * (1.0 - w0));
  const double omega_m1 = -two_ln * wm1 / ((1.0 - wm1) * (1.0 - wm1));

  const bool at_lower = std::abs(omega - omega0) <= 1e-12 * omega0;
  const bool at_upper = std::abs(omega - omega_m1) <= 1e-12 * omega_m1;

  std::vector<StationaryDistribution> out;
  auto add_simple = [&](double lo, double hi) {
    auto f = [&](double x) { return characteristic_residual(x, params, h); };
    if (hi <= lo) return;
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0 && lo > 0.0) {
      out.push_back(expand_root(lo, params, 1));
      return;
    }
    if ((flo > 0.0) != (fhi > 0.0) || fhi == 0.0) {
      out.push_back(expand_root(refine_root(params, h, lo, hi), params, 1));
    }
  };

  if (at_lower || at_upper) {
    // Tangency at one of the interior extrema: the merged pair is
    // reported once with multiplicity 2, plus the remaining simple root.
    if (at_lower) {
      out.push_back(expand_root(std::min(x0, 1.0), params, 2));
      add_simple(std::min(x1, 1.0), 1.0);
    } else {
      add_simple(0.0, std::min(x0, 1.0));
      out.push_back(expand_root(std::min(x1, 1.0), params, 2));
    }
  } else {
    const double b0 = std::clamp(x0, 0.0, 1.0);
    const double b1 = std::clamp(x1, b0, 1.0);
    add_simple(0.0, b0);
    add_simple(b0, b1);
    add_simple(b1, 1.0);
  }

  std::sort(out.begin(), out.end(),
            [](const StationaryDistribution& a, const StationaryDistribution& b) {
              return a.pi_r < b.pi_r;
            });
  // A root sitting exactly on a subinterval endpoint would be reported by
  // both neighbours; keep one copy.
  out.erase(std::unique(out.begin(), out.end(),
                        [](const StationaryDistribution& a, const StationaryDistribution& b) {
                          return std::abs(a.pi_r - b.pi_r) < 1e-12;
                        }),
            out.end());
  return out;
}

double two_state_transition(const SystemParams& params, const StationaryDistribution& dist) {
  const TransitionMatrix m = transition_matrix(params, dist.p_suc);
  const double non_reg = dist.pi_a + dist.pi_f;
  return m.p[kOnline][kRegistering] * dist.pi_a / non_reg +
         m.p[kOff][kRegistering] * dist.pi_f / non_reg;
}

RegimeDiagnostics check_regime(const SystemParams& params) {
  RegimeDiagnostics d;
  const double limit = (params.tau_a + params.tau_f) * kInvESquared;
  d.at_limit_boundary = std::abs(params.cycle - limit) <= 1e-12 * limit;
  d.cycle_within_limit = params.cycle <= limit || d.at_limit_boundary;
  d.h_exact = attempt_probability_exact(params);
  d.h_approx = attempt_probability_approx(params);
  d.h_below_strict_cap = d.h_exact < 1.0 / 16.0;
  d.cycle_over_tau_a = params.cycle / params.tau_a;
  d.cycle_over_tau_f = params.cycle / params.tau_f;
  return d;
}

}  // namespace epon
