#ifndef EPON_LAMBERT_HPP
#define EPON_LAMBERT_HPP

namespace epon {

enum class WBranch { Principal, MinusOne };

// One evaluation of a real branch of the Lambert W function, i.e. a
// solution w of w*exp(w) = z. `residual` is |w*exp(w) - z| for the
// returned w; callers can rely on residual <= 1e-12 across the domain.
struct BranchValue {
  double value;
  WBranch branch;
  double residual;
};

// Principal branch W0(z) for z >= -1/e. W0 is increasing, W0(z) in
// [-1, 0) for z in [-1/e, 0) and W0(z) >= 0 for z >= 0.
// Throws DomainError for z < -1/e.
BranchValue lambert_w0(double z);

// Lower branch W-1(z) for -1/e <= z < 0, with values in (-inf, -1].
// Throws DomainError outside that interval.
BranchValue lambert_wm1(double z);

}  // namespace epon

#endif  // EPON_LAMBERT_HPP
