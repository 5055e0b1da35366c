#include "epon/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "epon/rng.hpp"

namespace epon {

namespace {

// Stream purposes per ONU.
constexpr std::uint64_t kHoldStream = 0;    // online/off holding times
constexpr std::uint64_t kOffsetStream = 1;  // request offsets in the discovery slot

struct ReplicationOutput {
  std::vector<WindowRecord> windows;
  std::vector<DelaySample> delays;
};

ReplicationOutput run_replication(const SimConfig& cfg, int rep) {
  const SystemParams& p = cfg.params;
  const int n = p.n_onus;
  const double T = p.cycle;
  const double omega = p.max_wait;
  const double M = p.discovery_window();

  std::vector<OnuState> onus(static_cast<std::size_t>(n));
  std::vector<rng::Stream> hold(static_cast<std::size_t>(n));
  std::vector<rng::Stream> offs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    hold[i] = rng::make_stream(cfg.seed, static_cast<std::uint64_t>(rep), i, kHoldStream);
    offs[i] = rng::make_stream(cfg.seed, static_cast<std::uint64_t>(rep), i, kOffsetStream);
  }

  // Initial population: the requested fraction starts registering with
  // power-on at t = 0; the remainder splits between online and off in
  // the tau_a : tau_f ratio, each with a fresh holding time.
  const int n_reg = static_cast<int>(
      std::llround(cfg.init_fraction_r * static_cast<double>(n)));
  const double online_share = p.tau_a / (p.tau_a + p.tau_f);
  const int n_online =
      n_reg + static_cast<int>(std::llround(online_share * static_cast<double>(n - n_reg)));
  for (int i = 0; i < n; ++i) {
    OnuState& s = onus[i];
    if (i < n_reg) {
      s.mode = OnuMode::Registering;
      s.turn_on_time = 0.0;
      s.attempts = 0;
    } else if (i < n_online) {
      s.mode = OnuMode::Online;
      s.next_event_time = hold[i].exponential(p.tau_a);
    } else {
      s.mode = OnuMode::Off;
      s.next_event_time = hold[i].exponential(p.tau_f);
    }
  }

  ReplicationOutput out;
  out.windows.reserve(static_cast<std::size_t>(cfg.n_cycles));

  std::vector<int> attempting;
  std::vector<double> offsets;

  for (std::int64_t w = 0; w < cfg.n_cycles; ++w) {
    const double t = static_cast<double>(w) * T;

    // Bring every holding-time clock up to the window start. An off ONU
    // whose timer expired is powered on and waits here for this window;
    // a registering ONU has no timer to advance.
    for (int i = 0; i < n; ++i) {
      OnuState& s = onus[i];
      while (s.mode != OnuMode::Registering && s.next_event_time <= t) {
        if (s.mode == OnuMode::Online) {
          s.mode = OnuMode::Off;
          s.next_event_time += hold[i].exponential(p.tau_f);
        } else {
          s.mode = OnuMode::Registering;
          s.turn_on_time = s.next_event_time;
          s.attempts = 0;
        }
      }
    }

    attempting.clear();
    int count_a = 0;
    int count_f = 0;
    for (int i = 0; i < n; ++i) {
      switch (onus[i].mode) {
        case OnuMode::Online: ++count_a; break;
        case OnuMode::Off: ++count_f; break;
        case OnuMode::Registering: attempting.push_back(i); break;
      }
    }
    const int count_r = static_cast<int>(attempting.size());
    assert(count_a + count_f + count_r == n && "population must be conserved");

    offsets.clear();
    offsets.reserve(attempting.size());
    for (int id : attempting) {
      offsets.push_back(offs[id].uniform01() * omega);
    }
    const std::vector<bool> success = resolve_window(offsets, p.req_len);

    int n_successes = 0;
    for (std::size_t k = 0; k < attempting.size(); ++k) {
      OnuState& s = onus[attempting[k]];
      ++s.attempts;
      if (success[k]) {
        ++n_successes;
        out.delays.push_back({rep, attempting[k], s.turn_on_time, t,
                              (t - s.turn_on_time) + M, s.attempts});
        s.mode = OnuMode::Online;
        s.next_event_time = t + hold[attempting[k]].exponential(p.tau_a);
      }
    }

    out.windows.push_back({rep, w, t, count_a, count_f, count_r, count_r, n_successes});
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

void SimConfig::validate() const {
  params.validate();
  if (init_fraction_r < 0.0 || init_fraction_r > 1.0) {
    throw ConfigError("sim: init_fraction_r must be in [0, 1]");
  }
  if (n_cycles < 1) throw ConfigError("sim: n_cycles must be positive");
  if (burn_in_cycles < 0 || burn_in_cycles >= n_cycles) {
    throw ConfigError("sim: burn_in_cycles must be in [0, n_cycles)");
  }
  if (replications < 1) throw ConfigError("sim: replications must be positive");
}

std::vector<bool> resolve_window(const std::vector<double>& offsets, double req_len) {
  const std::size_t n = offsets.size();
  std::vector<bool> ok(n, true);
  if (n <= 1) return ok;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return offsets[a] < offsets[b]; });

  // After sorting, an interval can only overlap its immediate neighbours.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (offsets[order[k + 1]] - offsets[order[k]] < req_len) {
      ok[order[k]] = false;
      ok[order[k + 1]] = false;
    }
  }
  return ok;
}

SimTrace run(const SimConfig& config, int max_threads) {
  config.validate();

  int workers = max_threads;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = std::min(workers, config.replications);

  std::vector<ReplicationOutput> results(static_cast<std::size_t>(config.replications));
  if (workers <= 1) {
    for (int rep = 0; rep < config.replications; ++rep) {
      results[rep] = run_replication(config, rep);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int wk = 0; wk < workers; ++wk) {
      pool.emplace_back([&] {
        for (int rep = next.fetch_add(1); rep < config.replications;
             rep = next.fetch_add(1)) {
          results[rep] = run_replication(config, rep);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  SimTrace trace;
  trace.config = config;
  for (ReplicationOutput& r : results) {
    trace.per_window.insert(trace.per_window.end(), r.windows.begin(), r.windows.end());
    trace.delay_samples.insert(trace.delay_samples.end(), r.delays.begin(), r.delays.end());
  }
  trace.steady_state = estimate_steady_state(trace, config.burn_in_cycles);
  return trace;
}

SteadyStateEstimate estimate_steady_state(const SimTrace& trace, std::int64_t burn_in) {
  const SimConfig& cfg = trace.config;
  if (burn_in < 0 || burn_in >= cfg.n_cycles) {
    throw InsufficientDataError("estimate_steady_state: burn-in leaves no windows");
  }
  const std::int64_t kept = cfg.n_cycles - burn_in;
  if (kept * cfg.replications < 2) {
    throw InsufficientDataError("estimate_steady_state: need at least two windows");
  }

  const double n = static_cast<double>(cfg.params.n_onus);
  const double M = cfg.params.discovery_window();

  double frac_sum = 0.0;
  double success_sum = 0.0;
  std::int64_t windows = 0;

  // Batch means per replication; batches pool across replications for the
  // standard error.
  const std::int64_t batches_per_rep = std::min<std::int64_t>(20, kept);
  const std::int64_t batch_len = kept / batches_per_rep;
  std::vector<double> batch_means;
  batch_means.reserve(static_cast<std::size_t>(batches_per_rep * cfg.replications));

  std::vector<double> rep_acc(static_cast<std::size_t>(batches_per_rep), 0.0);
  int cur_rep = -1;
  auto flush_rep = [&]() {
    if (cur_rep < 0) return;
    for (double acc : rep_acc) {
      batch_means.push_back(acc / static_cast<double>(batch_len));
    }
    std::fill(rep_acc.begin(), rep_acc.end(), 0.0);
  };

  for (const WindowRecord& w : trace.per_window) {
    if (w.window_index < burn_in) continue;
    if (w.replication != cur_rep) {
      flush_rep();
      cur_rep = w.replication;
    }
    const double frac = static_cast<double>(w.count_r) / n;
    frac_sum += frac;
    success_sum += static_cast<double>(w.n_successes);
    ++windows;
    const std::int64_t k = (w.window_index - burn_in) / batch_len;
    if (k < batches_per_rep) rep_acc[static_cast<std::size_t>(k)] += frac;
  }
  flush_rep();

  if (windows == 0) {
    throw InsufficientDataError("estimate_steady_state: no post-burn-in windows in trace");
  }

  SteadyStateEstimate est;
  est.windows_used = windows;
  est.pi_r_hat = frac_sum / static_cast<double>(windows);
  est.lambda_out_hat = success_sum / static_cast<double>(windows);
  est.efficiency_hat = est.lambda_out_hat / M;

  const double bm = mean_of(batch_means);
  double var = 0.0;
  for (double b : batch_means) var += (b - bm) * (b - bm);
  const double nb = static_cast<double>(batch_means.size());
  est.pi_r_se = nb > 1 ? std::sqrt(var / (nb - 1.0) / nb) : 0.0;

  const double t_burn = static_cast<double>(burn_in) * cfg.params.cycle;
  std::vector<double> delays;
  std::vector<double> residuals;
  for (const DelaySample& d : trace.delay_samples) {
    if (d.turn_on_time < t_burn) continue;
    delays.push_back(d.delay_seconds);
    residuals.push_back(d.delay_seconds - M -
                        static_cast<double>(d.attempts - 1) * cfg.params.cycle);
  }
  est.delay_samples_used = static_cast<std::int64_t>(delays.size());
  est.mean_delay_hat = mean_of(delays);
  est.mean_residual_hat = mean_of(residuals);
  return est;
}

}  // namespace epon
