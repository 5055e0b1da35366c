// Acceptance suite: end-to-end checks of the analytic results and the
// simulator against their published targets, one verdict line per
// criterion. Exits nonzero if any criterion fails.
//
// Usage: epon_acceptance [path-to-eponreg-cli]
// The CLI path enables the byte-determinism criterion; without it that
// criterion is evaluated against the library writers only.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "epon/delay.hpp"
#include "epon/lambert.hpp"
#include "epon/model.hpp"
#include "epon/presets.hpp"
#include "epon/sim.hpp"
#include "epon/stability.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace epon;

namespace {

int g_failures = 0;

void verdict(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  if (!ok) ++g_failures;
}

bool within(double value, double target, double tol) {
  return std::abs(value - target) <= tol;
}

std::string num(double v, int prec = 8) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

// --------------------------------------------------------------------
// Pre-step: calibrate the request length against the published 318 us
// upper critical waiting time, and confirm the recorded fixture.
// --------------------------------------------------------------------
void pre_step() {
  const SystemParams base = fixtures::reference();
  const double h = attempt_probability_exact(base);
  const double w = lambert_wm1(-M_E * h).value;
  // The upper threshold is linear in the request length, so the
  // calibration is a one-line inversion.
  const double derived_L =
      318e-6 * (1.0 - w) * (1.0 - w) / (2.0 * base.n_onus * (-w));
  const bool match =
      std::abs(derived_L / epon::presets::kReferenceReqLen - 1.0) < 1e-12;

  SystemParams check = base;
  check.req_len = derived_L;
  const auto [w0, wm1] = critical_omegas(check, h);
  const bool omega0_consistent = within(w0, 38.6e-6, 0.2e-6) && 38e-6 < w0;

  verdict("pre-step request-length calibration", match && omega0_consistent,
          "derived L = " + num(derived_L, 17) + " s, recorded " +
              num(epon::presets::kReferenceReqLen, 17) + " s, lower threshold " +
              num(w0 * 1e6, 6) + " us");
}

// --------------------------------------------------------------------
// 1. Lambert W inverse identity on both branch domains
// --------------------------------------------------------------------
void criterion_1() {
  const double t0 = now_s();
  constexpr double inv_e = 0.36787944117144233;
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double z = -inv_e + (10.0 + inv_e) * i / 1000.0;
    worst = std::max(worst, lambert_w0(z).residual);
  }
  for (int i = 0; i <= 1000; ++i) {
    const double t = static_cast<double>(i) / 1000.0;
    const double z = -std::exp(std::log(inv_e) + t * (std::log(1e-12) - std::log(inv_e)));
    worst = std::max(worst, lambert_wm1(z).residual);
  }
  const bool anchors = std::abs(lambert_w0(0.0).value) <= 1e-12 &&
                       std::abs(lambert_w0(M_E).value - 1.0) <= 1e-12 &&
                       std::abs(lambert_wm1(-inv_e).value + 1.0) <= 1e-12;
  const double dt = now_s() - t0;
  verdict("criterion 1 (lambert inverse identity)", worst <= 1e-12 && anchors && dt < 1.0,
          "max residual " + num(worst, 3) + ", anchors " + (anchors ? "ok" : "off") +
              ", " + num(dt, 3) + " s");
}

// --------------------------------------------------------------------
// 2. Stationary points in the unpredictable region at 300 us
// --------------------------------------------------------------------
void criterion_2() {
  const auto roots = solve_stationary(fixtures::reference(300e-6));
  bool ok = roots.size() == 3;
  std::string detail = "roots";
  const double targets[3] = {0.0058, 0.6993, 0.9497};
  for (std::size_t i = 0; i < roots.size() && i < 3; ++i) {
    const bool hit = within(roots[i].pi_r, targets[i], 0.0025);
    ok = ok && hit;
    detail += " " + num(100.0 * roots[i].pi_r, 5) + "%" + (hit ? "" : "(off)");
  }
  detail += " vs targets 0.58% / 69.93% / 94.97% +-0.25pp";
  verdict("criterion 2 (unpredictable-region roots)", ok, detail);
}

// --------------------------------------------------------------------
// 3. Stable-point throughput at 350 us
// --------------------------------------------------------------------
void criterion_3() {
  const auto roots = solve_stationary(fixtures::reference(350e-6));
  const bool ok = roots.size() == 1 && within(roots[0].pi_r, 0.00578, 0.0002) &&
                  within(roots[0].lambda_out, 2.83, 0.02);
  verdict("criterion 3 (stable-point throughput)", ok,
          "pi_r = " + num(roots[0].pi_r, 6) + " (0.00578 +- 0.0002), lambda_out = " +
              num(roots[0].lambda_out, 6) + " (2.83 +- 0.02)");
}

// --------------------------------------------------------------------
// 4. Upper critical threshold with the calibrated request length
// --------------------------------------------------------------------
void criterion_4() {
  const SystemParams p = fixtures::reference();
  const double h = attempt_probability_exact(p);
  const auto [w0, wm1] = critical_omegas(p, h);
  (void)w0;
  // Independent confirmation: the exhaustive scan counts three stationary
  // points just below the threshold and one just above.
  SystemParams below = fixtures::reference(316e-6);
  SystemParams above = fixtures::reference(320e-6);
  const std::size_t n_below = oracles::grid_scan_roots(below, h).size();
  const std::size_t n_above = oracles::grid_scan_roots(above, h).size();
  const bool ok = within(wm1, 318e-6, 2e-6) && n_below == 3 && n_above == 1;
  verdict("criterion 4 (upper critical threshold)", ok,
          "omega_m1 = " + num(wm1 * 1e6, 8) + " us (318 +- 2), grid-scan roots: " +
              std::to_string(n_below) + " at 316 us, " + std::to_string(n_above) +
              " at 320 us");
}

// --------------------------------------------------------------------
// 5. Root enumeration vs the exhaustive grid scan on random systems
// --------------------------------------------------------------------
void criterion_5() {
  const double t0 = now_s();
  std::mt19937 gen(20240);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int compared = 0;
  bool ok = true;
  std::string first_fail;
  for (int set = 0; set < 20 && ok; ++set) {
    SystemParams p;
    p.n_onus = 32 + static_cast<int>(u(gen) * 992);
    p.tau_a = 10.0 + 90.0 * u(gen);
    p.tau_f = 5.0 + 55.0 * u(gen);
    p.cycle = (0.1 + 0.7 * u(gen)) * (p.tau_a + p.tau_f) * std::exp(-2.0);
    p.req_len = (0.5 + 2.5 * u(gen)) * 1e-6;
    p.one_trip = 100e-6;
    p.max_wait = 1.0;
    const double h = attempt_probability_exact(p);
    const auto [w0, wm1] = critical_omegas(p, h);
    for (int i = 0; i < 200 && ok; ++i) {
      double omega = w0 / 4.0 + (4.0 * wm1 - w0 / 4.0) * i / 199.0;
      // Keep clear of the tangency neighbourhoods and of waiting times
      // shorter than the request itself.
      if (std::abs(omega - w0) < 0.005 * w0) omega = w0 * 1.01;
      if (std::abs(omega - wm1) < 0.005 * wm1) omega = wm1 * 1.01;
      omega = std::max(omega, 1.5 * p.req_len);
      p.max_wait = omega;
      const auto fast = solve_stationary_with_h(p, h);
      const auto slow = oracles::grid_scan_roots(p, h, 1000000);
      ++compared;
      if (fast.size() != slow.size()) {
        ok = false;
        first_fail = "count mismatch at set " + std::to_string(set) + ", omega " +
                     num(omega * 1e6, 6) + " us";
        break;
      }
      for (std::size_t k = 0; k < fast.size(); ++k) {
        if (std::abs(fast[k].pi_r - slow[k]) > 1e-6) {
          ok = false;
          first_fail = "value gap " + num(std::abs(fast[k].pi_r - slow[k]), 3);
          break;
        }
      }
    }
  }
  const double dt = now_s() - t0;
  verdict("criterion 5 (enumeration vs grid-scan oracle)", ok && dt < 30.0,
          std::to_string(compared) + " configurations compared, " +
              (ok ? "all agree" : first_fail) + ", " + num(dt, 3) + " s");
}

// --------------------------------------------------------------------
// 6. Threshold growth in h; bracket containment in the stable region
// --------------------------------------------------------------------
void criterion_6() {
  const SystemParams p = fixtures::reference();
  // Monotone increase across the full admissible range.
  bool monotone = true;
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double h = 0.001 + (std::exp(-2.0) - 2e-3) * i / 100.0;
    const double wm1 = critical_omegas(p, h).second;
    if (wm1 <= prev) monotone = false;
    prev = wm1;
  }
  const double r1 = critical_omegas(p, 0.05).second / critical_omegas(p, 0.02).second;
  const double r2 = critical_omegas(p, 0.08).second / critical_omegas(p, 0.05).second;
  const bool proxy = r2 > r1;

  bool bracket_ok = true;
  std::mt19937 gen(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double h = 0.001 + 0.055 * u(gen);
    SystemParams q = p;
    q.max_wait = critical_omegas(q, h).second * (1.02 + 4.0 * u(gen));
    const auto roots = solve_stationary_with_h(q, h);
    const auto [lo, up] = pi_r_bounds(q, h);
    if (roots.size() != 1 || roots[0].pi_r < lo * (1.0 - 1e-12) ||
        roots[0].pi_r > up * (1.0 + 1e-12)) {
      bracket_ok = false;
    }
  }
  verdict("criterion 6 (threshold growth and bracket)", monotone && proxy && bracket_ok,
          std::string("monotone ") + (monotone ? "yes" : "no") +
              ", ratio(0.08/0.05) = " + num(r2, 6) + " vs ratio(0.05/0.02) = " + num(r1, 6) +
              (proxy ? " (jump holds)" : " (no jump)") + ", bracket " +
              (bracket_ok ? "contains all roots" : "violated"));
}

// --------------------------------------------------------------------
// 7. Delay values and the universal cap
// --------------------------------------------------------------------
void criterion_7() {
  const double h = attempt_probability_exact(fixtures::reference());
  auto delay_at = [&](double omega) {
    const SystemParams p = fixtures::reference(omega);
    const auto roots = solve_stationary_with_h(p, h);
    return mean_delay(p, roots.front(), h);
  };
  const DelayEstimate near_th = delay_at(317.8e-6);
  const DelayEstimate wide = delay_at(800e-6);
  const bool d1 = std::abs(near_th.mean_total / 0.275 - 1.0) < 0.05;
  const bool d2 = std::abs(wide.mean_total / 0.260 - 1.0) < 0.05;
  const bool eta = within(wide.efficiency / near_th.efficiency, 0.5, 0.05);

  bool cap = true;
  for (double w_us = 318.1; w_us <= 800.0; w_us += 5.0) {
    const DelayEstimate e = delay_at(w_us * 1e-6);
    if (e.mean_total > e.bound) cap = false;
  }
  verdict("criterion 7 (delay and efficiency)", d1 && d2 && eta && cap,
          "E[d](317.8us) = " + num(near_th.mean_total * 1e3, 6) + " ms (275 +- 5%), " +
              "E[d](800us) = " + num(wide.mean_total * 1e3, 6) + " ms (260 +- 5%), " +
              "eta ratio = " + num(wide.efficiency / near_th.efficiency, 4) +
              " (0.5 +- 0.05), cap " + (cap ? "holds" : "violated"));
}

// --------------------------------------------------------------------
// 8. Simulator convergence in the three regions
// --------------------------------------------------------------------
SimConfig sim_config(double omega, double init_r, std::int64_t cycles, std::uint64_t seed) {
  SimConfig c;
  c.params = fixtures::reference(omega);
  c.init_fraction_r = init_r;
  c.n_cycles = cycles;
  c.burn_in_cycles = cycles / 10;
  c.seed = seed;
  c.replications = 1;
  return c;
}

double tail_mean_frac(const SimTrace& t, std::int64_t from_window) {
  double acc = 0.0;
  std::int64_t n = 0;
  for (const WindowRecord& w : t.per_window) {
    if (w.window_index >= from_window) {
      acc += static_cast<double>(w.count_r) / t.config.params.n_onus;
      ++n;
    }
  }
  return acc / static_cast<double>(n);
}

void criterion_8() {
  const double t0 = now_s();

  // (a) Saturated: both starting occupancies exceed 99% within 5000 cycles.
  bool a_ok = true;
  std::string a_detail;
  for (double init : {0.0, 0.60}) {
    const SimTrace t = run(sim_config(38e-6, init, 5000, 101));
    double frac_at_end = tail_mean_frac(t, 4900);
    std::int64_t first_hit = -1;
    for (const WindowRecord& w : t.per_window) {
      if (static_cast<double>(w.count_r) / t.config.params.n_onus > 0.99) {
        first_hit = w.window_index;
        break;
      }
    }
    if (first_hit < 0 || frac_at_end <= 0.99) a_ok = false;
    a_detail += " init " + num(init, 2) + ": >0.99 at cycle " + std::to_string(first_hit) + ";";
  }

  // (c) Stable at 320 us: both starting occupancies settle near 0.55%.
  bool c_ok = true;
  std::string c_detail;
  for (double init : {0.0, 0.60}) {
    const SimTrace t = run(sim_config(320e-6, init, 10000, 103));
    const double hat = t.steady_state.pi_r_hat;
    if (std::abs(hat / 0.0055 - 1.0) > 0.15) c_ok = false;
    c_detail += " init " + num(init, 2) + ": " + num(hat, 4) + ";";
  }

  // (b) Unpredictable at 300 us from the middle point: across 20 seeds
  // some settle low, some settle high.
  int low_hits = 0;
  int high_hits = 0;
  for (int k = 0; k < 20; ++k) {
    const SimTrace t = run(sim_config(300e-6, 0.6996, 8000, 200 + k));
    const double tail = tail_mean_frac(t, 6400);
    if (std::abs(tail / 0.0058 - 1.0) <= 0.20) ++low_hits;
    if (std::abs(tail - 0.9497) <= 0.03) ++high_hits;
  }
  const bool b_ok = low_hits >= 1 && high_hits >= 1;

  const double dt = now_s() - t0;
  verdict("criterion 8 (simulator convergence)", a_ok && b_ok && c_ok && dt < 180.0,
          "(a)" + a_detail + " (b) low/high seeds " + std::to_string(low_hits) + "/" +
              std::to_string(high_hits) + "; (c)" + c_detail + " " + num(dt, 3) + " s");
}

// --------------------------------------------------------------------
// 9. Simulation agrees with the analytic stationary point and delays
// --------------------------------------------------------------------
void criterion_9() {
  const double t0 = now_s();
  const double h = attempt_probability_exact(fixtures::reference());
  bool ok = true;
  std::string detail;
  double delay800 = 0.0;
  double residual = 0.0;
  for (double w_us : {350.0, 500.0, 800.0}) {
    const SystemParams p = fixtures::reference(w_us * 1e-6);
    const double root = solve_stationary_with_h(p, h).front().pi_r;
    SimConfig cfg = sim_config(w_us * 1e-6, 0.0, 30000, 300 + static_cast<int>(w_us));
    cfg.replications = 2;
    const SimTrace t = run(cfg);
    const SteadyStateEstimate& s = t.steady_state;
    const double gap = std::abs(s.pi_r_hat - root);
    const bool hit = gap <= 3.0 * s.pi_r_se;
    ok = ok && hit;
    detail += num(w_us, 4) + "us: " + num(gap / s.pi_r_se, 3) + " se; ";
    if (w_us == 800.0) {
      delay800 = s.mean_delay_hat;
      residual = s.mean_residual_hat;
    }
  }
  const bool d_ok = std::abs(delay800 / 0.260 - 1.0) < 0.05;
  const bool r_ok = std::abs(residual / 0.250 - 1.0) < 0.02;
  const double dt = now_s() - t0;
  verdict("criterion 9 (simulation vs analytics)", ok && d_ok && r_ok && dt < 180.0,
          detail + "delay(800us) = " + num(delay800 * 1e3, 5) + " ms, residual = " +
              num(residual * 1e3, 5) + " ms, " + num(dt, 3) + " s");
}

// --------------------------------------------------------------------
// 10. Tagged-request success frequency vs the finite-population form
// --------------------------------------------------------------------
void criterion_10() {
  const double t0 = now_s();
  const double omega = 350e-6;
  const double L = fixtures::reference().req_len;
  std::mt19937 gen(777);
  std::uniform_real_distribution<double> u(0.0, omega);
  bool ok = true;
  std::string detail;
  for (int n : {2, 5, 20, 50}) {
    const int windows = 100000;
    int hits = 0;
    std::vector<double> offsets(static_cast<std::size_t>(n));
    for (int w = 0; w < windows; ++w) {
      for (double& o : offsets) o = u(gen);
      if (resolve_window(offsets, L)[0]) ++hits;
    }
    const double freq = static_cast<double>(hits) / windows;
    const double expect = std::pow(1.0 - 2.0 * L / omega, n - 1);
    const double sigma = std::sqrt(expect * (1.0 - expect) / windows);
    const bool hit = std::abs(freq - expect) <= 3.0 * sigma;
    ok = ok && hit;
    detail += "n=" + std::to_string(n) + ": " + num((freq - expect) / sigma, 3) + " sd; ";
  }
  const double dt = now_s() - t0;
  verdict("criterion 10 (collision micro-oracle)", ok && dt < 30.0, detail + num(dt, 3) + " s");
}

// --------------------------------------------------------------------
// 11. Byte determinism of the command-line outputs
// --------------------------------------------------------------------
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_11(const std::string& cli) {
  if (cli.empty()) {
    // Library-level fallback: serialize two identical runs.
    const SimConfig c = sim_config(350e-6, 0.0, 2000, 7);
    const SimTrace a = run(c);
    const SimTrace b = run(c);
    bool same = a.per_window.size() == b.per_window.size();
    for (std::size_t i = 0; same && i < a.per_window.size(); ++i) {
      same = a.per_window[i].count_r == b.per_window[i].count_r &&
             a.per_window[i].n_successes == b.per_window[i].n_successes;
    }
    verdict("criterion 11 (determinism)", same, "library traces identical (no CLI path given)");
    return;
  }

  const std::string dir = "acceptance_tmp";
  std::string cmd1 = cli + " simulate --omega 350us --seed 42 --out " + dir + "/run1 2>/dev/null";
  std::string cmd2 = cli + " simulate --omega 350us --seed 42 --out " + dir + "/run2 2>/dev/null";
  const int rc1 = std::system(cmd1.c_str());
  const int rc2 = std::system(cmd2.c_str());
  const bool ran = rc1 == 0 && rc2 == 0;
  const bool traces = slurp(dir + "/run1.trace.csv") == slurp(dir + "/run2.trace.csv");
  const bool summaries = slurp(dir + "/run1.summary.csv") == slurp(dir + "/run2.summary.csv");
  const bool nonempty = !slurp(dir + "/run1.trace.csv").empty();

  // Exit-code contract: a configuration outside the admissible regime
  // reports failure through status 2.
  const int rc_bad = std::system(
      (cli + " analyze --config acceptance_bad_config.json >/dev/null 2>&1").c_str());
  const bool code2 = WIFEXITED(rc_bad) && WEXITSTATUS(rc_bad) == 2;

  verdict("criterion 11 (determinism)", ran && traces && summaries && nonempty && code2,
          std::string("identical bytes: trace ") + (traces ? "yes" : "no") + ", summary " +
              (summaries ? "yes" : "no") + ", regime exit code 2: " + (code2 ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  if (!cli.empty()) {
    std::ofstream bad("acceptance_bad_config.json");
    bad << "{\"params\": {\"tau_a\": \"1s\", \"tau_f\": \"1s\", \"cycle\": \"1s\"}}\n";
  }

  pre_step();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11(cli);

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
