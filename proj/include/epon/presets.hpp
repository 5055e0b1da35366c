#ifndef EPON_PRESETS_HPP
#define EPON_PRESETS_HPP

#include "epon/model.hpp"

namespace epon::presets {

// REQ length calibrated so that the upper critical waiting time of the
// reference system below equals 318 us exactly (with the exact attempt
// probability). All figure presets and the test fixtures share it.
inline constexpr double kReferenceReqLen = 2.5295859677258376e-6;

// Reference 512-ONU system: 60 s mean online time, 30 s mean off time,
// 500 ms registration cycle, 100 us one-trip propagation. max_wait
// defaults to 350 us (stable region); override per experiment.
SystemParams reference_system();

}  // namespace epon::presets

#endif  // EPON_PRESETS_HPP
