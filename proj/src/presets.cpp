#include "epon/presets.hpp"

namespace epon::presets {

SystemParams reference_system() {
  SystemParams p;
  p.n_onus = 512;
  p.tau_a = 60.0;
  p.tau_f = 30.0;
  p.cycle = 0.5;
  p.req_len = kReferenceReqLen;
  p.max_wait = 350e-6;
  p.one_trip = 100e-6;
  return p;
}

}  // namespace epon::presets
