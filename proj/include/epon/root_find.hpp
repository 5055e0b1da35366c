#ifndef EPON_ROOT_FIND_HPP
#define EPON_ROOT_FIND_HPP

#include <cmath>
#include <utility>

#include "epon/errors.hpp"

namespace epon {

// Bisection on a bracketing interval. Requires f(lo)*f(hi) <= 0 and f
// continuous on [lo, hi]; returns a point x with the final bracket width
// <= tol. Exact zeros at the endpoints are returned as-is, so a root
// sitting on the bracket boundary is not lost. Deterministic.
template <typename F>
double find_root_bracketed(F&& f, double lo, double hi, double tol = 1e-12) {
  if (!(lo <= hi)) {
    throw BracketError("find_root_bracketed: empty interval");
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("find_root_bracketed: no sign change on interval");
  }
  // 200 halvings take any finite interval below any representable tol.
  for (int i = 0; i < 200 && (hi - lo) > tol; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace epon

#endif  // EPON_ROOT_FIND_HPP
