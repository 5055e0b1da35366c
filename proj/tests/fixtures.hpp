#ifndef EPON_TESTS_FIXTURES_HPP
#define EPON_TESTS_FIXTURES_HPP

#include "epon/model.hpp"
#include "epon/presets.hpp"

namespace fixtures {

// Reference system shared by most tests (512 ONUs, 60 s / 30 s holding
// times, 500 ms cycle, pinned REQ length). max_wait defaults to 350 us.
inline epon::SystemParams reference(double max_wait = 350e-6) {
  epon::SystemParams p = epon::presets::reference_system();
  p.max_wait = max_wait;
  return p;
}

// Values frozen from high-precision evaluation of the closed forms and
// from the independent oracles that also run inside the tests.
inline constexpr double kHExact = 0.005571030640518851;      // attempt probability, reference
inline constexpr double kPRer = 0.0082987073611240424;       // re-registration probability, reference
inline constexpr double kPRer121 = 0.24491866240370913;      // tau_a=1, tau_f=2, cycle=1
inline constexpr double kHExact121 = 0.39983823213589011;
inline constexpr double kW0At = -0.015334931950727177;       // W0(-e/180)
inline constexpr double kWm1At = -5.9816539630628586;        // W-1(-e/180)
inline constexpr double kWm1AtTenth = -3.5771520639572972;   // W-1(-0.1)
inline constexpr double kOmega0 = 3.863690928557034e-5;      // lower critical max_wait, reference
inline constexpr double kOmegaM1 = 318e-6;                   // upper critical max_wait, by construction
inline constexpr double kRoot350 = 0.0057809394179026;       // stationary point at 350 us
inline constexpr double kLambda350 = 2.8358783231440556;
inline constexpr double kRoots300[3] = {0.005824231697, 0.698311612, 0.9550376692};
inline constexpr double kRoot3178 = 0.00580714079;           // low root at 317.8 us
inline constexpr double kRoot800 = 0.005641723137;

}  // namespace fixtures

#endif  // EPON_TESTS_FIXTURES_HPP
