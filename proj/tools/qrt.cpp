// qrt: threshold, dispersion, time-stepping and verification runs from a JSON config.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "qrt/config.hpp"
#include "qrt/evolve.hpp"
#include "qrt/exponents.hpp"
#include "qrt/io.hpp"
#include "qrt/spectra.hpp"
#include "qrt/verify.hpp"

namespace fs = std::filesystem;
using qrt::io::json;

namespace {

enum Exit { ok = 0, failure = 1, usage = 2 };

struct Options {
  std::string config;
  std::string out = ".";
  std::size_t jobs = 1;
  bool gnuplot = false;
};

std::shared_ptr<spdlog::logger> make_logger() {
  auto log = spdlog::stderr_color_st("qrt");
  log->set_pattern("[%l] %v");
  const char* env = std::getenv("QRT_LOG");
  const std::string level = env ? env : "warn";
  if (level == "error") log->set_level(spdlog::level::err);
  else if (level == "warn") log->set_level(spdlog::level::warn);
  else if (level == "info") log->set_level(spdlog::level::info);
  else if (level == "debug") log->set_level(spdlog::level::debug);
  else throw qrt::ConfigError("QRT_LOG must be one of error, warn, info, debug (got '" + level + "')");
  return log;
}

qrt::RunConfig read_config(const Options& o, spdlog::logger& log) {
  if (o.config.empty()) {
    log.info("no --config given, using defaults");
    return {};
  }
  log.info("reading {}", o.config);
  return qrt::load_config(o.config);
}

qrt::SlabGrid make_grid(const qrt::RunConfig& c) { return qrt::build_grid(c.grid.n, c.profile.h, c.grid.scheme); }

// Resolves eps_over_eps_c against the threshold of the configured profile.
qrt::PhysicalParams resolve_params(const qrt::RunConfig& c, const qrt::DensityProfile& p, const qrt::SlabGrid& g,
                                   spdlog::logger& log) {
  qrt::PhysicalParams params = c.params;
  if (c.eps_over_eps_c) {
    const double eps_c = qrt::critical_epsilon(p, params.g, g).eps_c;
    params.eps = *c.eps_over_eps_c * eps_c;
    log.info("eps = {} x eps_c = {}", *c.eps_over_eps_c, params.eps);
  }
  return params;
}

void emit(const Options& o, const std::string& name, const json& j) {
  qrt::io::write_json(fs::path(o.out) / (name + ".json"), j);
  std::cout << j.dump(2) << "\n";
}

void gnuplot(const Options& o, const std::string& name, const std::string& body) {
  if (!o.gnuplot) return;
  qrt::io::write_text(fs::path(o.out) / (name + ".gp"),
                      "set datafile separator ','\nset key autotitle columnhead\n" + body);
}

int cmd_validate_profile(const Options& o, spdlog::logger& log) {
  const auto cfg = read_config(o, log);
  const auto p = qrt::make_profile(cfg.profile);
  const auto rep = qrt::validate_profile(p);
  for (const auto& c : rep.conditions)
    if (!c.passed) log.warn("{} fails at x3 = {}", c.name, c.witness_x3);

  std::vector<std::string> header{"x3", "rho"};
  for (int k = 1; k <= cfg.validate.derivatives; ++k) header.push_back("d" + std::to_string(k) + "rho");
  qrt::io::CsvTable t(header);
  const auto m = cfg.validate.samples;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = p.h() * static_cast<double>(i) / static_cast<double>(m - 1);
    std::vector<double> row{x};
    for (int k = 0; k <= cfg.validate.derivatives; ++k) row.push_back(p.eval(k, x));
    t.add_row(row);
  }
  qrt::io::write_text(fs::path(o.out) / "profile.csv", t.str());
  gnuplot(o, "profile", "plot 'profile.csv' using 1:2 with lines\n");
  emit(o, "validate_profile", qrt::io::to_json(rep));
  return rep.all_passed() ? ok : failure;
}

int cmd_threshold(const Options& o, spdlog::logger& log) {
  const auto cfg = read_config(o, log);
  const auto p = qrt::make_profile(cfg.profile);
  const auto g = make_grid(cfg);
  const auto t = qrt::critical_epsilon(p, cfg.params.g, g, cfg.threshold.mode);
  json j = qrt::io::to_json(t, qrt::epsilon_upper_bound(p, cfg.params.g));
  qrt::io::write_text(fs::path(o.out) / "phi_star.csv", qrt::io::phi_csv(g, t.phi_star).str());
  gnuplot(o, "phi_star", "plot 'phi_star.csv' using 1:2 with linespoints\n");
  emit(o, "threshold", j);
  return ok;
}

int cmd_dispersion(const Options& o, spdlog::logger& log) {
  const auto cfg = read_config(o, log);
  const auto p = qrt::make_profile(cfg.profile);
  const auto g = make_grid(cfg);
  const auto params = resolve_params(cfg, p, g, log);
  const auto& d = cfg.dispersion;
  const auto kappas = qrt::log_spaced(d.kappa_min, d.kappa_max, d.kappa_count);
  log.info("scanning {} wavenumbers with {} jobs", kappas.size(), o.jobs);
  const auto res = qrt::dispersion_scan(p, params, kappas, g, d.modes, o.jobs);
  qrt::io::write_text(fs::path(o.out) / "dispersion.csv", qrt::io::dispersion_csv(res).str());
  gnuplot(o, "dispersion",
          "set logscale x\nset xlabel 'kappa'\nplot 'dispersion.csv' using 1:2 with linespoints title 'Re sigma'\n");
  emit(o, "dispersion", qrt::io::to_json(res));
  return ok;
}

int cmd_simulate(const Options& o, spdlog::logger& log) {
  const auto cfg = read_config(o, log);
  const auto p = qrt::make_profile(cfg.profile);
  const auto g = make_grid(cfg);
  const auto params = resolve_params(cfg, p, g, log);
  const auto& s = cfg.simulate;
  const double dt = s.dt.value_or(cfg.default_dt());
  const qrt::ModeSystem sys(p, params, s.kappa, g);
  const auto s0 = qrt::init_mode_state(sys, s.seed);
  log.info("integrating to T = {} with dt = {}", s.T, dt);
  const auto tr = qrt::simulate(sys, s0, s.T, dt, s.sample_every);
  qrt::io::write_text(fs::path(o.out) / "trajectory.csv", qrt::io::trajectory_csv(tr).str());
  gnuplot(o, "trajectory",
          "set logscale y\nset xlabel 't'\nplot 'trajectory.csv' using 1:6 with lines title 'amplitude'\n");

  double max_res = 0.0;
  for (double r : tr.balance_residual) max_res = std::max(max_res, r);
  json j{{"kappa", s.kappa}, {"eps", params.eps}, {"dt", dt}, {"T", s.T}, {"samples", tr.samples.size()}};
  int rc = ok;
  try {
    const auto fit = qrt::fit_decay(tr);
    j["fitted_rate"] = fit.rate;
    j["fit_partial"] = fit.partial;
  } catch (const qrt::DomainError& e) {
    log.error("{}", e.what());
    j["fitted_rate"] = nullptr;
    j["fit_error"] = e.what();
    rc = failure;
  }
  j["max_balance_residual"] = max_res;
  j["stopped_early"] = tr.stopped_early;
  j["stop_reason"] = tr.stop_reason;
  emit(o, "simulate", j);
  return rc;
}

int cmd_verify(const Options& o, spdlog::logger& log) {
  const auto cfg = read_config(o, log);
  const auto p = qrt::make_profile(cfg.profile);
  const auto g = make_grid(cfg);
  const auto params = resolve_params(cfg, p, g, log);
  const auto rep = qrt::run_verification(cfg, p, params, g);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    if (!c.passed) log.warn("{} failed: {} ({})", c.name, c.value, c.detail);
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", qrt::io::number(c.value)},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  emit(o, "verify", json{{"all_passed", rep.all_passed()}, {"n", g.n()}, {"eps", params.eps}, {"checks", checks}});
  return rep.all_passed() ? ok : failure;
}

int cmd_exponents(const Options& o, spdlog::logger& log) {
  const auto cfg = read_config(o, log);
  json arr = json::array();
  for (double theta : cfg.exponents.thetas) arr.push_back(qrt::io::to_json(qrt::derive_exponents(theta, cfg.exponents.exact)));
  emit(o, "exponents", arr);
  return ok;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON run configuration");
  sub->add_option("--out", o.out, "output directory")->capture_default_str();
  sub->add_option("--jobs", o.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_flag("--gnuplot-script", o.gnuplot, "also write a gnuplot script next to each CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Rayleigh-Taylor stability toolkit"};
  app.require_subcommand(0, 1);
  bool print_defaults = false;
  app.add_flag("--print-defaults", print_defaults, "print the default configuration as JSON and exit");

  Options o;
  using Handler = int (*)(const Options&, spdlog::logger&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"validate-profile", "check positivity, RT, stabilizing and wall conditions", cmd_validate_profile},
      {"threshold", "critical epsilon from the variational pencil", cmd_threshold},
      {"dispersion", "growth rates over a wavenumber scan", cmd_dispersion},
      {"simulate", "time-integrate one normal mode", cmd_simulate},
      {"verify", "identity, decomposition, witness, scale and coercivity checks", cmd_verify},
      {"exponents", "decay-exponent algebra for a list of theta", cmd_exponents}};
  for (const auto& [name, help, fn] : commands) add_common(app.add_subcommand(name, help), o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : usage;
  }

  std::shared_ptr<spdlog::logger> log;
  try {
    log = make_logger();
  } catch (const qrt::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return usage;
  }

  if (print_defaults) {
    std::cout << qrt::config_to_json(qrt::RunConfig{}).dump(2) << "\n";
    return ok;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return usage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    fs::create_directories(o.out);
    for (const auto& [cmd, help, fn] : commands)
      if (cmd == name) return fn(o, *log);
  } catch (const qrt::ConfigError& e) {
    log->error("{}", e.what());
    return usage;
  } catch (const qrt::Error& e) {
    log->error("{}", e.what());
    return failure;
  } catch (const fs::filesystem_error& e) {
    log->error("{}", e.what());
    return usage;
  } catch (const std::exception& e) {
    log->error("unexpected failure: {}", e.what());
    return failure;
  }
  return usage;
}
