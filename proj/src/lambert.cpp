#include "epon/lambert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "epon/errors.hpp"
#include "epon/root_find.hpp"

namespace epon {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e
constexpr double kBranchPointTol = 1e-12;

// Expansion of both real branches around the branch point z = -1/e in
// p = +-sqrt(2*(1 + e*z)); the sign of p selects the branch.
double branch_point_series(double p) {
  const double c3 = 11.0 / 72.0;
  const double c4 = -43.0 / 540.0;
  const double c5 = 769.0 / 17280.0;
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (c3 + p * (c4 + p * c5))));
}

// Halley iteration on w*e^w - z from a starting guess. `upper`/`lower`
// clamp the iterate to the branch range so a long step cannot hop onto
// the other branch.
double halley(double w, double z, double lower, double upper) {
  for (int i = 0; i < 50; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    if (std::abs(f) <= 1e-14) break;
    const double fp = ew * (w + 1.0);
    const double denom = fp - (w + 2.0) * f / (2.0 * (w + 1.0));
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double next = std::clamp(w - f / denom, lower, upper);
    if (next == w) break;
    w = next;
  }
  return w;
}

double residual_of(double w, double z) { return std::abs(w * std::exp(w) - z); }

// Fallback when the iteration stalls: w*e^w is monotone on each branch
// range, so a plain bisection on a sure bracket always lands.
double bisect_w0(double z) {
  double hi = 1.0;
  while (hi * std::exp(hi) < z) hi *= 2.0;
  return find_root_bracketed([z](double w) { return w * std::exp(w) - z; }, -1.0, hi, 1e-15);
}

double bisect_wm1(double z) {
  double lo = -2.0;
  while (lo * std::exp(lo) < z) lo *= 2.0;  // w*e^w -> 0- as w -> -inf
  return find_root_bracketed([z](double w) { return w * std::exp(w) - z; }, lo, -1.0, 1e-15);
}

}  // namespace

BranchValue lambert_w0(double z) {
  if (std::abs(z + kInvE) < kBranchPointTol) {
    return {-1.0, WBranch::Principal, residual_of(-1.0, z)};
  }
  if (z < -kInvE) {
    throw DomainError("lambert_w0: z below -1/e (cycle too long for the holding times)");
  }

  double w;
  if (z < -0.30) {
    w = branch_point_series(std::sqrt(2.0 * (1.0 + M_E * z)));
  } else if (z < 0.5) {
    // Maclaurin guess w = z - z^2 + (3/2) z^3, good enough to seed Halley.
    w = z * (1.0 + z * (-1.0 + z * 1.5));
  } else if (z < M_E) {
    w = 0.6;
  } else {
    const double l = std::log(z);
    w = l - std::log(l);
  }
  w = halley(w, z, -1.0, std::numeric_limits<double>::infinity());

  double res = residual_of(w, z);
  if (res > 1e-13) {
    w = bisect_w0(z);
    res = residual_of(w, z);
  }
  return {w, WBranch::Principal, res};
}

BranchValue lambert_wm1(double z) {
  if (z >= 0.0) {
    throw DomainError("lambert_wm1: branch only defined for z < 0");
  }
  if (std::abs(z + kInvE) < kBranchPointTol) {
    return {-1.0, WBranch::MinusOne, residual_of(-1.0, z)};
  }
  if (z < -kInvE) {
    throw DomainError("lambert_wm1: z below -1/e (cycle too long for the holding times)");
  }

  double w;
  if (z < -0.27) {
    w = branch_point_series(-std::sqrt(2.0 * (1.0 + M_E * z)));
  } else {
    // Log-log asymptote for z near 0-: w ~ L1 - L2 + L2/L1 with
    // L1 = ln(-z), L2 = ln(-L1).
    const double l1 = std::log(-z);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }
  w = halley(w, z, -std::numeric_limits<double>::infinity(), -1.0);

  double res = residual_of(w, z);
  if (res > 1e-13) {
    w = bisect_wm1(z);
    res = residual_of(w, z);
  }
  return {w, WBranch::MinusOne, res};
}

}  // namespace epon
