// eponreg: analytic + Monte Carlo toolkit for the EPON registration
// contention process. Subcommands write plot-ready CSV or a JSON report;
// see README.md for the config schema and column layouts.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epon/delay.hpp"
#include "epon/errors.hpp"
#include "epon/model.hpp"
#include "epon/presets.hpp"
#include "epon/rng.hpp"
#include "epon/sim.hpp"
#include "epon/stability.hpp"
#include "epon/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SweepSpec {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  bool log_scale = false;
};

struct Experiment {
  epon::SystemParams params = epon::presets::reference_system();
  epon::HMode h_mode = epon::HMode::Exact;
  std::optional<SweepSpec> sweep;
  epon::SimConfig sim;
  std::string fig7_case = "a";
};

double parse_time_field(const json& v, const char* name) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return epon::parse_duration_s(v.get<std::string>());
  throw epon::ConfigError(std::string("config: ") + name + " must be a number or duration string");
}

void apply_params(const json& j, epon::SystemParams& p) {
  if (auto it = j.find("n_onus"); it != j.end()) p.n_onus = it->get<int>();
  if (auto it = j.find("tau_a"); it != j.end()) p.tau_a = parse_time_field(*it, "tau_a");
  if (auto it = j.find("tau_f"); it != j.end()) p.tau_f = parse_time_field(*it, "tau_f");
  if (auto it = j.find("cycle"); it != j.end()) p.cycle = parse_time_field(*it, "cycle");
  if (auto it = j.find("req_len"); it != j.end()) p.req_len = parse_time_field(*it, "req_len");
  if (auto it = j.find("max_wait"); it != j.end()) p.max_wait = parse_time_field(*it, "max_wait");
  if (auto it = j.find("one_trip"); it != j.end()) p.one_trip = parse_time_field(*it, "one_trip");
}

Experiment load_experiment(const std::string& config_path) {
  Experiment e;
  e.sim.params = e.params;
  e.sim.n_cycles = 20000;
  e.sim.burn_in_cycles = 2000;
  if (config_path.empty()) return e;

  std::ifstream in(config_path);
  if (!in) throw epon::ConfigError("cannot open config file: " + config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw epon::ConfigError(std::string("config parse error: ") + ex.what());
  }

  if (auto it = j.find("params"); it != j.end()) apply_params(*it, e.params);
  if (auto it = j.find("h_mode"); it != j.end()) {
    const std::string m = it->get<std::string>();
    if (m == "exact") e.h_mode = epon::HMode::Exact;
    else if (m == "approx") e.h_mode = epon::HMode::Approx;
    else throw epon::ConfigError("config: h_mode must be 'exact' or 'approx'");
  }
  if (auto it = j.find("sweep"); it != j.end()) {
    SweepSpec s;
    s.start = parse_time_field(it->at("start"), "sweep.start");
    s.stop = parse_time_field(it->at("stop"), "sweep.stop");
    s.points = it->at("points").get<int>();
    if (auto sc = it->find("scale"); sc != it->end()) {
      const std::string v = sc->get<std::string>();
      if (v == "log") s.log_scale = true;
      else if (v != "linear") throw epon::ConfigError("config: sweep.scale must be linear or log");
    }
    if (s.points < 2) throw epon::ConfigError("config: sweep.points must be >= 2");
    e.sweep = s;
  }
  if (auto it = j.find("sim"); it != j.end()) {
    const json& s = *it;
    if (auto f = s.find("init_fraction_r"); f != s.end()) e.sim.init_fraction_r = f->get<double>();
    if (auto f = s.find("n_cycles"); f != s.end()) e.sim.n_cycles = f->get<std::int64_t>();
    if (auto f = s.find("burn_in_cycles"); f != s.end()) {
      e.sim.burn_in_cycles = f->get<std::int64_t>();
    } else {
      e.sim.burn_in_cycles = e.sim.n_cycles / 10;
    }
    if (auto f = s.find("seed"); f != s.end()) e.sim.seed = f->get<std::uint64_t>();
    if (auto f = s.find("replications"); f != s.end()) e.sim.replications = f->get<int>();
  }
  if (auto it = j.find("fig7_case"); it != j.end()) e.fig7_case = it->get<std::string>();
  e.sim.params = e.params;
  return e;
}

std::vector<double> sweep_values(const SweepSpec& s) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(s.points));
  for (int i = 0; i < s.points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(s.points - 1);
    if (s.log_scale) {
      out.push_back(s.start * std::pow(s.stop / s.start, t));
    } else {
      out.push_back(s.start + (s.stop - s.start) * t);
    }
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  if (const fs::path parent = fs::path(path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw epon::ConfigError("cannot open output file: " + path);
  return out;
}

int env_threads() {
  if (const char* v = std::getenv("EPONSIM_THREADS")) {
    const int n = std::atoi(v);
    if (n > 0) return n;
  }
  return 0;  // auto
}

std::string fmt(double v) { return epon::format_full(v); }

// ---------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------

json params_to_json(const epon::SystemParams& p) {
  return json{{"n_onus", p.n_onus},   {"tau_a", p.tau_a},       {"tau_f", p.tau_f},
              {"cycle", p.cycle},     {"req_len", p.req_len},   {"max_wait", p.max_wait},
              {"one_trip", p.one_trip}, {"discovery_window", p.discovery_window()}};
}

json analyze_to_json(const Experiment& e) {
  const epon::SystemParams& p = e.params;
  const epon::StabilityReport rep = epon::classify(p, e.h_mode);
  const epon::RegimeDiagnostics diag = epon::check_regime(p);

  json roots = json::array();
  for (std::size_t i = 0; i < rep.roots.size(); ++i) {
    const epon::LabeledRoot& lr = rep.roots[i];
    const epon::StationaryDistribution& d = rep.distributions[i];
    roots.push_back({{"pi_r", d.pi_r},
                     {"role", std::string(1, epon::root_role_letter(lr.role))},
                     {"multiplicity", lr.multiplicity},
                     {"pi_a", d.pi_a},
                     {"pi_f", d.pi_f},
                     {"p_suc", d.p_suc},
                     {"lambda_out", d.lambda_out},
                     {"offered_traffic", d.g}});
  }

  // Delay reported at the attracting root: the low one when it exists,
  // otherwise the saturated one.
  const epon::StationaryDistribution& droot =
      rep.region == epon::Region::Saturated ? rep.distributions.back() : rep.distributions.front();
  const epon::DelayEstimate de = epon::mean_delay(p, droot, rep.h);

  json out{
      {"params", params_to_json(p)},
      {"h_mode", e.h_mode == epon::HMode::Exact ? "exact" : "approx"},
      {"h", rep.h},
      {"h_exact", diag.h_exact},
      {"h_approx", diag.h_approx},
      {"alpha", rep.alpha},
      {"omega0", rep.omega0},
      {"omega_m1", rep.omega_m1},
      {"region", epon::region_name(rep.region)},
      {"strictly_stable", rep.strictly_stable},
      {"roots", roots},
      {"critical_points", {{"x0", rep.x0}, {"x1", rep.x1}, {"f_x0", rep.f_x0}, {"f_x1", rep.f_x1}}},
      {"pi_r_bounds", {{"lower", rep.pi_r_lower}, {"upper", rep.pi_r_upper}}},
      {"delay",
       {{"root", std::string(1, epon::root_role_letter(
                     rep.region == epon::Region::Saturated ? epon::RootRole::Saturated
                                                           : epon::RootRole::Low))},
        {"mean_residual", de.mean_residual},
        {"mean_attempts", de.mean_attempts},
        {"mean_attempting", de.mean_attempting},
        {"mean_total", de.mean_total},
        {"mean_attempting_approx", de.mean_attempting_approx},
        {"mean_total_approx", de.mean_total_approx},
        {"bound", de.bound},
        {"ideal", de.ideal},
        {"efficiency", de.efficiency},
        {"effectively_unbounded", de.effectively_unbounded}}},
      {"regime",
       {{"cycle_within_limit", diag.cycle_within_limit},
        {"at_limit_boundary", diag.at_limit_boundary},
        {"h_below_strict_cap", diag.h_below_strict_cap},
        {"cycle_over_tau_a", diag.cycle_over_tau_a},
        {"cycle_over_tau_f", diag.cycle_over_tau_f}}},
  };
  return out;
}

void write_json_flat_csv(const json& j, std::ostream& out, const std::string& prefix) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      write_json_flat_csv(*it, out, key);
    } else if (it->is_array()) {
      int idx = 0;
      for (const json& el : *it) {
        write_json_flat_csv(el, out, key + "[" + std::to_string(idx++) + "]");
      }
    } else if (it->is_number_float()) {
      out << key << "," << fmt(it->get<double>()) << "\n";
    } else {
      out << key << "," << it->dump() << "\n";
    }
  }
}

int cmd_analyze(const Experiment& e, const std::string& out_path, const std::string& format) {
  const json doc = analyze_to_json(e);
  if (out_path.empty()) {
    if (format == "csv") {
      std::cout << "key,value\n";
      write_json_flat_csv(doc, std::cout, "");
    } else {
      std::cout << doc.dump(2) << "\n";
    }
    return 0;
  }
  std::ofstream out = open_out(out_path);
  if (format == "csv") {
    out << "key,value\n";
    write_json_flat_csv(doc, out, "");
  } else {
    out << doc.dump(2) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------
// sweeps
// ---------------------------------------------------------------------

int cmd_sweep_omega(const Experiment& e, const SweepSpec& sweep, const std::string& out_path) {
  std::ofstream out = open_out(out_path);
  out << "omega,root_d,root_u,root_s,lambda_out_d,lambda_out_s\n";
  for (double omega : sweep_values(sweep)) {
    epon::SystemParams p = e.params;
    p.max_wait = omega;
    const epon::StabilityReport rep = epon::classify(p, e.h_mode);
    std::string root_d, root_u, root_s, lam_d, lam_s;
    for (std::size_t i = 0; i < rep.roots.size(); ++i) {
      const epon::StationaryDistribution& d = rep.distributions[i];
      switch (rep.roots[i].role) {
        case epon::RootRole::Low:
          root_d = fmt(d.pi_r);
          lam_d = fmt(d.lambda_out);
          break;
        case epon::RootRole::Unstable:
          root_u = fmt(d.pi_r);
          break;
        case epon::RootRole::Saturated:
          root_s = fmt(d.pi_r);
          lam_s = fmt(d.lambda_out);
          break;
      }
    }
    out << fmt(omega) << "," << root_d << "," << root_u << "," << root_s << "," << lam_d << ","
        << lam_s << "\n";
  }
  return 0;
}

int cmd_sweep_h(const Experiment& e, const SweepSpec& sweep, const std::string& out_path) {
  std::ofstream out = open_out(out_path);
  out << "h,omega_m1\n";
  for (double h : sweep_values(sweep)) {
    const auto [omega0, omega_m1] = epon::critical_omegas(e.params, h);
    (void)omega0;
    out << fmt(h) << "," << fmt(omega_m1) << "\n";
  }
  return 0;
}

int cmd_fig9(const Experiment& e, const SweepSpec& sweep, const std::string& out_path) {
  std::ofstream out = open_out(out_path);
  out << "h,pi_r,lower_bound,upper_bound,minus_alpha\n";
  for (double h : sweep_values(sweep)) {
    epon::SystemParams p = e.params;
    const auto [omega0, omega_m1] = epon::critical_omegas(p, h);
    (void)omega0;
    // Just inside the stable region: the root then sits inside its
    // bracket and tracks the lower bound for small h.
    p.max_wait = 1.01 * omega_m1;
    const auto roots = epon::solve_stationary_with_h(p, h);
    const auto [lo, up] = epon::pi_r_bounds(p, h);
    out << fmt(h) << "," << fmt(roots.front().pi_r) << "," << fmt(lo) << "," << fmt(up) << ","
        << fmt(M_E * h) << "\n";
  }
  return 0;
}

int cmd_fig11(const Experiment& e, const SweepSpec& sweep, const std::string& out_path,
              int threads) {
  std::ofstream out = open_out(out_path);
  out << "omega,e_d_analytic,e_d_sim,eta_analytic,eta_sim\n";
  const std::vector<double> omegas = sweep_values(sweep);
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    epon::SystemParams p = e.params;
    p.max_wait = omegas[i];
    const double h = epon::attempt_probability(p, e.h_mode);
    const auto roots = epon::solve_stationary_with_h(p, h);
    const epon::DelayEstimate de = epon::mean_delay(p, roots.front(), h);

    epon::SimConfig sc = e.sim;
    sc.params = p;
    sc.seed = epon::rng::combine(e.sim.seed, i);  // independent per sweep point
    const epon::SimTrace trace = epon::run(sc, threads);

    out << fmt(omegas[i]) << "," << fmt(de.mean_total) << ","
        << fmt(trace.steady_state.mean_delay_hat) << "," << fmt(de.efficiency) << ","
        << fmt(trace.steady_state.efficiency_hat) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------
// simulation commands
// ---------------------------------------------------------------------

void write_trace_csv(const epon::SimTrace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  const double n = static_cast<double>(trace.config.params.n_onus);
  out << "window_index,time_s,frac_r,n_attempts,n_successes\n";
  for (const epon::WindowRecord& w : trace.per_window) {
    out << w.window_index << "," << fmt(w.time) << ","
        << fmt(static_cast<double>(w.count_r) / n) << "," << w.n_attempts << ","
        << w.n_successes << "\n";
  }
}

void write_summary_csv(const epon::SimTrace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  const epon::SteadyStateEstimate& s = trace.steady_state;
  out << "pi_r_hat,se,lambda_out_hat,mean_delay_s,mean_residual_s,efficiency_hat,seed,"
         "replications\n";
  out << fmt(s.pi_r_hat) << "," << fmt(s.pi_r_se) << "," << fmt(s.lambda_out_hat) << ","
      << fmt(s.mean_delay_hat) << "," << fmt(s.mean_residual_hat) << ","
      << fmt(s.efficiency_hat) << "," << trace.config.seed << "," << trace.config.replications
      << "\n";
}

int cmd_simulate(const Experiment& e, const std::string& out_base, int threads) {
  epon::SimConfig sc = e.sim;
  sc.params = e.params;
  const epon::SimTrace trace = epon::run(sc, threads);
  write_trace_csv(trace, out_base + ".trace.csv");
  write_summary_csv(trace, out_base + ".summary.csv");
  return 0;
}

int cmd_fig7(const Experiment& e, const std::string& out_dir, int threads) {
  fs::create_directories(out_dir.empty() ? "." : out_dir);
  const fs::path dir(out_dir.empty() ? "." : out_dir);

  auto run_one = [&](double omega, double init, std::int64_t cycles, std::uint64_t seed) {
    epon::SimConfig sc = e.sim;
    sc.params = e.params;
    sc.params.max_wait = omega;
    sc.init_fraction_r = init;
    sc.n_cycles = cycles;
    sc.burn_in_cycles = cycles / 10;
    sc.seed = seed;
    sc.replications = 1;
    return epon::run(sc, threads);
  };

  if (e.fig7_case == "a") {
    // Saturated: both starting points drift into full contention.
    for (double init : {0.0, 0.60}) {
      const epon::SimTrace t = run_one(38e-6, init, 5000, e.sim.seed);
      write_trace_csv(t, (dir / ("fig7a_init" + std::to_string(static_cast<int>(init * 100)) +
                                 ".csv")).string());
    }
  } else if (e.fig7_case == "b") {
    // Unpredictable: start at the middle stationary point, watch seeds
    // split between the two attracting points.
    std::ofstream summary = open_out((dir / "fig7b_summary.csv").string());
    summary << "seed,tail_mean_frac_r\n";
    for (int k = 0; k < 20; ++k) {
      const std::uint64_t seed = e.sim.seed + static_cast<std::uint64_t>(k);
      const epon::SimTrace t = run_one(300e-6, 0.6996, 8000, seed);
      write_trace_csv(t, (dir / ("fig7b_seed" + std::to_string(k) + ".csv")).string());
      double tail = 0.0;
      std::int64_t cnt = 0;
      for (const epon::WindowRecord& w : t.per_window) {
        if (w.window_index >= 6400) {
          tail += static_cast<double>(w.count_r) / e.params.n_onus;
          ++cnt;
        }
      }
      summary << seed << "," << fmt(tail / static_cast<double>(cnt)) << "\n";
    }
  } else if (e.fig7_case == "c") {
    // Stable: both starting points settle at the small root.
    for (double init : {0.0, 0.60}) {
      const epon::SimTrace t = run_one(320e-6, init, 10000, e.sim.seed);
      write_trace_csv(t, (dir / ("fig7c_init" + std::to_string(static_cast<int>(init * 100)) +
                                 ".csv")).string());
    }
  } else {
    throw epon::ConfigError("fig7: case must be 'a', 'b' or 'c'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EPON registration contention: stability, delay and simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "json", fig7_case;
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> repl_flag;
  std::optional<std::string> omega_flag;

  app.add_option("--config", config_path, "experiment config (JSON)");
  app.add_option("--out", out_path, "output path (file, base name or directory)");
  app.add_option("--seed", seed_flag, "override simulation seed");
  app.add_option("--replications", repl_flag, "override replication count");
  app.add_option("--format", format, "analyze output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--omega", omega_flag, "override max_wait, e.g. 350us");

  CLI::App* c_analyze = app.add_subcommand("analyze", "stability report + delay estimate (JSON)");
  CLI::App* c_sweep_omega =
      app.add_subcommand("sweep-omega", "stationary points across a max_wait sweep (CSV)");
  CLI::App* c_sweep_h = app.add_subcommand("sweep-h", "upper critical waiting time vs h (CSV)");
  CLI::App* c_sim = app.add_subcommand("simulate", "seeded Monte Carlo run (trace+summary CSV)");
  CLI::App* c_fig6 = app.add_subcommand("fig6", "sweep-omega with the reference preset");
  CLI::App* c_fig7 = app.add_subcommand("fig7", "convergence traces in the three regions");
  c_fig7->add_option("--case", fig7_case, "a (saturated), b (unpredictable), c (stable)");
  CLI::App* c_fig8 = app.add_subcommand("fig8", "sweep-h with the reference preset");
  CLI::App* c_fig9 = app.add_subcommand("fig9", "stationary point vs h with its bracket");
  CLI::App* c_fig11 = app.add_subcommand("fig11", "delay and efficiency vs max_wait, analytic+sim");

  // Let "eponreg analyze --omega 350us" route the shared options to the
  // parent app regardless of their position.
  for (CLI::App* sub : {c_analyze, c_sweep_omega, c_sweep_h, c_sim, c_fig6, c_fig7, c_fig8,
                        c_fig9, c_fig11}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Experiment exp = load_experiment(config_path);
    if (seed_flag) exp.sim.seed = *seed_flag;
    if (repl_flag) exp.sim.replications = *repl_flag;
    if (omega_flag) exp.params.max_wait = epon::parse_duration_s(*omega_flag);
    if (!fig7_case.empty()) exp.fig7_case = fig7_case;
    exp.sim.params = exp.params;
    const int threads = env_threads();

    const SweepSpec omega_default{10e-6, 600e-6, 200, false};
    const SweepSpec h_default{0.002, 0.13, 65, false};
    const SweepSpec fig11_default{317.8e-6, 800e-6, 21, false};

    auto out_or = [&](const char* fallback) {
      return out_path.empty() ? std::string(fallback) : out_path;
    };

    if (*c_analyze) return cmd_analyze(exp, out_path, format);
    if (*c_sweep_omega)
      return cmd_sweep_omega(exp, exp.sweep.value_or(omega_default), out_or("sweep_omega.csv"));
    if (*c_sweep_h)
      return cmd_sweep_h(exp, exp.sweep.value_or(h_default), out_or("sweep_h.csv"));
    if (*c_sim) return cmd_simulate(exp, out_or("sim"), threads);
    if (*c_fig6)
      return cmd_sweep_omega(exp, exp.sweep.value_or(omega_default), out_or("fig6.csv"));
    if (*c_fig7) return cmd_fig7(exp, out_path, threads);
    if (*c_fig8) return cmd_sweep_h(exp, exp.sweep.value_or(h_default), out_or("fig8.csv"));
    if (*c_fig9) return cmd_fig9(exp, exp.sweep.value_or(h_default), out_or("fig9.csv"));
    if (*c_fig11)
      return cmd_fig11(exp, exp.sweep.value_or(fig11_default), out_or("fig11.csv"), threads);
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const epon::RegimeError& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return 2;
  } catch (const epon::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const epon::RegionError& e) {
    std::cerr << "region error: " << e.what() << "\n";
    return 2;
  } catch (const epon::DiscriminantError& e) {
    std::cerr << "discriminant error: " << e.what() << "\n";
    return 2;
  } catch (const epon::BracketError& e) {
    std::cerr << "bracket error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
