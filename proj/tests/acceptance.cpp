// Runs the twelve acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qrt/energetics.hpp"
#include "qrt/evolve.hpp"
#include "qrt/exponents.hpp"
#include "qrt/io.hpp"
#include "qrt/spectra.hpp"
#include "qrt/verify.hpp"

using namespace qrt;

namespace {

// Pinned tolerances.
constexpr double tol_cross = 0.02;
constexpr double tol_scale = 1e-10;
constexpr double tol_grid = 1e-8;
constexpr double tol_scheme = 1e-5;
constexpr double tol_fit = 0.05;
constexpr double tol_band = 1e-6;
constexpr double tol_stress = 1e-8;
constexpr double min_stress_ratio = 4.0;
constexpr double tol_identity = 1e-10;
constexpr double min_balance_ratio = 3.5;
constexpr double tol_witness = 1e-6;
constexpr double tol_quotient = 1e-10;
constexpr double min_degenerate_growth = 10.0;
constexpr double tol_envelope = 1e-2;

std::string fmt(double x) { return io::format_double(x); }

struct Outcome {
  bool passed = false;
  std::string detail;
};

ProfileSpec linear_spec(double alpha = 1.0) {
  ProfileSpec s;
  s.kind = ProfileKind::linear;
  s.rho0 = 1.0;
  s.slope_or_rate = alpha;
  s.h = 1.0;
  s.mollifier_width = 0.1;
  return s;
}

DensityProfile linear_profile(double alpha = 1.0) { return make_profile(linear_spec(alpha)); }

DensityProfile exponential_profile(double gamma) {
  ProfileSpec s;
  s.kind = ProfileKind::exponential;
  s.slope_or_rate = gamma;
  return make_profile(s);
}

DensityProfile tanh_profile(double jump, double width) {
  ProfileSpec s;
  s.kind = ProfileKind::tanh_layer;
  s.slope_or_rate = jump;
  s.layer_width = width;
  return make_profile(s);
}

Outcome threshold_cross_validation() {
  const auto p = linear_profile();
  const auto g = build_grid(128, 1.0);
  const double ec = critical_epsilon(p, 1.0, g).eps_c;
  const auto kappas = log_spaced(0.05, 20.0, 64);
  Outcome o{true, ""};
  for (double mu : {0.1, 1.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = find_critical_epsilon_spectral(p, {1.0, mu, 0.0}, g, kappas, {0.5 * ec, 1.5 * ec});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double err = std::abs(c.eps_cross - ec) / ec;
    o.passed = o.passed && err <= tol_cross;
    o.detail += "mu=" + fmt(mu) + ": eps_cross=" + fmt(c.eps_cross) + " rel=" + fmt(err) + " (" +
                std::to_string(static_cast<int>(secs)) + " s) ";
  }
  o.detail += "eps_c=" + fmt(ec);
  return o;
}

Outcome height_bound() {
  std::vector<DensityProfile> family;
  for (double a : {0.5, 1.0, 3.0}) family.push_back(linear_profile(a));
  for (double gm : {0.5, 1.0, 2.0, 4.0}) family.push_back(exponential_profile(gm));
  for (double w : {0.15, 0.3}) family.push_back(tanh_profile(1.0, w));
  family.push_back(tanh_profile(3.0, 0.25));
  const auto g = build_grid(128, 1.0);
  Outcome o{true, ""};
  double worst = 0.0;
  int linear_checked = 0;
  for (const auto& p : family) {
    if (!validate_profile(p).all_passed()) return {false, "family member fails validation"};
    const double ec = critical_epsilon(p, 1.0, g).eps_c;
    const auto b = epsilon_upper_bound(p, 1.0);
    o.passed = o.passed && ec < b.general;
    worst = std::max(worst, ec / b.general);
    if (b.linear) {
      ++linear_checked;
      o.passed = o.passed && ec < *b.linear;
      worst = std::max(worst, ec / *b.linear);
    }
  }
  o.passed = o.passed && linear_checked == 3;
  o.detail = "10 profiles, max eps_c/bound=" + fmt(worst) + ", linear bound checked on " +
             std::to_string(linear_checked);
  return o;
}

Outcome scale_invariance() {
  const auto g = build_grid(128, 1.0);
  double worst = 0.0;
  for (const auto& p : {linear_profile(), tanh_profile(1.0, 0.2), exponential_profile(1.0)}) {
    const auto r = check_scale_invariance(p, 1.0, g, tol_scale);
    worst = std::max(worst, r.value);
  }
  return {worst <= tol_scale, "max rel change over c in {0.5, 2, 10}: " + fmt(worst)};
}

Outcome grid_convergence() {
  double refine = 0.0, scheme = 0.0;
  const auto g128 = build_grid(128, 1.0), g256 = build_grid(256, 1.0);
  const auto f256 = build_grid(256, 1.0, Scheme::finite_difference_4);
  for (const auto& p : {linear_profile(), tanh_profile(1.0, 0.2), exponential_profile(1.0)}) {
    const double a = critical_epsilon(p, 1.0, g128).eps_c, b = critical_epsilon(p, 1.0, g256).eps_c;
    const double c = critical_epsilon(p, 1.0, f256).eps_c;
    refine = std::max(refine, std::abs(a / b - 1.0));
    scheme = std::max(scheme, std::abs(c / b - 1.0));
  }
  return {refine <= tol_grid && scheme <= tol_scheme,
          "128->256 rel=" + fmt(refine) + ", chebyshev vs fd4 at 256 rel=" + fmt(scheme)};
}

Outcome stability_dichotomy() {
  const auto p = linear_profile();
  const auto g = build_grid(128, 1.0);
  const double ec = critical_epsilon(p, 1.0, g).eps_c;
  const auto kappas = log_spaced(0.05, 20.0, 64);
  Outcome o{true, ""};

  const auto above = dispersion_scan(p, {1.0, 1.0, 1.1 * ec}, kappas, g, 1);
  const double max_above = above.max_over_kappa();
  o.passed = max_above < 0.0;
  o.detail += "1.1 eps_c: max Re sigma=" + fmt(max_above);

  const auto below = dispersion_scan(p, {1.0, 1.0, 0.9 * ec}, kappas, g, 1);
  std::size_t imax = 0;
  for (std::size_t i = 0; i < kappas.size(); ++i)
    if (below.max_growth[i] > below.max_growth[imax]) imax = i;
  o.passed = o.passed && below.max_growth[imax] > 0.0;
  o.detail += "; 0.9 eps_c: max Re sigma=" + fmt(below.max_growth[imax]) + " at kappa=" + fmt(kappas[imax]);

  // Eigenmode trajectories on a coarser grid.
  const auto gs = build_grid(64, 1.0);
  const double ecs = critical_epsilon(p, 1.0, gs).eps_c;
  double worst_fit = 0.0;
  for (double kappa : {0.5, 1.0, 2.0}) {
    const ModeSystem sys(p, {1.0, 1.0, 1.1 * ecs}, kappa, gs);
    const double sigma = mode_spectrum(sys.op(), 1, 1.0, 1.0, Branch::coupled)[0].real();
    const auto tr = simulate(sys, init_mode_state(sys, {SeedKind::eigenmode}), 20.0, 0.05);
    const double rate = fit_decay(tr).rate;
    worst_fit = std::max(worst_fit, std::abs(rate - sigma) / std::abs(sigma));
    o.passed = o.passed && rate < 0.0 && sigma < 0.0 && tr.samples.back().amplitude < tr.samples.front().amplitude;
  }
  o.passed = o.passed && worst_fit <= tol_fit;
  o.detail += "; decay fit rel err=" + fmt(worst_fit);

  const ModeSystem sys(p, {1.0, 1.0, 0.9 * ecs}, kappas[imax], gs);
  const auto tr = simulate(sys, init_mode_state(sys, {SeedKind::eigenmode}), 20.0, 0.05);
  const double grow = fit_decay(tr).rate;
  o.passed = o.passed && grow > 0.0 && tr.samples.back().amplitude > tr.samples.front().amplitude;
  o.detail += "; 0.9 eps_c trajectory rate=" + fmt(grow);

  const double lo = el_pencil_minimum(0.0, p, {1.0, 1.0, ec * (1.0 - tol_band)}, g).value;
  const double hi = el_pencil_minimum(0.0, p, {1.0, 1.0, ec * (1.0 + tol_band)}, g).value;
  o.passed = o.passed && lo < 0.0 && hi > 0.0;
  o.detail += "; E_L minimum " + fmt(lo) + " -> " + fmt(hi) + " across eps_c(1 -+ 1e-6)";
  return o;
}

Outcome stress_decomposition() {
  const auto p = linear_profile();
  const auto fine = check_stress_decomposition(p, 128, 129, 0.05, tol_stress);
  const auto refine = check_stress_refinement(p, 8, 9, 0.05, min_stress_ratio);
  return {fine.passed && refine.passed,
          "128x129 residual=" + fmt(fine.value) + ", 8x9 -> 16x17 ratio=" + fmt(refine.value)};
}

Outcome upsilon_identity() {
  const auto g = build_grid(256, 1.0);
  double worst = 0.0;
  for (const auto& p : {linear_profile(), tanh_profile(1.0, 0.2), exponential_profile(1.0)}) {
    const auto r = check_upsilon_identity(p, {1.0, 1.0, 0.8}, g, 1.7, 5, 7, tol_identity);
    worst = std::max(worst, r.value);
  }
  return {worst <= tol_identity, "n=256, 5 random r per profile, max residual=" + fmt(worst)};
}

Outcome energy_balance() {
  const auto p = linear_profile();
  const auto g = build_grid(48, 1.0);
  const double ec = critical_epsilon(p, 1.0, g).eps_c;
  const ModeSystem sys(p, {1.0, 1.0, 2.0 * ec}, 1.0, g);
  const auto s0 = init_mode_state(sys, {SeedKind::random, 42});
  std::vector<double> maxima;
  bool monotone = true;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    const auto tr = simulate(sys, s0, 0.05, dt);
    double m = 0.0;
    for (double r : tr.balance_residual) m = std::max(m, r);
    maxima.push_back(m);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
      const auto& a = tr.samples[i - 1].energy;
      const auto& b = tr.samples[i].energy;
      if (b.E + b.kinetic > (a.E + a.kinetic) * (1.0 + 1e-12)) monotone = false;
    }
  }
  const double r1 = maxima[0] / maxima[1], r2 = maxima[1] / maxima[2];
  return {r2 >= min_balance_ratio && monotone,
          "max residual " + fmt(maxima[0]) + ", " + fmt(maxima[1]) + ", " + fmt(maxima[2]) +
              " (halving ratios " + fmt(r1) + ", " + fmt(r2) + "), energy " +
              (monotone ? "nonincreasing" : "INCREASES")};
}

Outcome witness_sequence() {
  const auto g = build_grid(128, 1.0);
  bool ok = true;
  double werr = 0.0, qerr = 0.0;
  for (const auto& p : {linear_profile(), tanh_profile(1.0, 0.2)}) {
    const auto w = check_witness(p, g, tol_witness);
    const auto q = check_phi_star_quotient(p, g, tol_quotient);
    ok = ok && w.passed && q.passed;
    werr = std::max(werr, w.value);
    qerr = std::max(qerr, q.value);
  }
  return {ok, "witness limit rel err=" + fmt(werr) + ", phi_star quotient vs a3 rel err=" + fmt(qerr)};
}

Outcome exponent_algebra() {
  const double tm = theta_max();
  bool ok = std::abs(tm - 0.0531) <= 0.5e-4;
  for (int i = 1; i <= 100; ++i) ok = ok && derive_exponents(tm * i / 101.0).decay_inequalities();
  const auto at6 = derive_exponents(0.06);
  ok = ok && !at6.ab1_direct && !at6.ab1_quadratic;
  int disagreements = 0;
  for (int i = 1; i <= 1000; ++i) {
    const auto r = derive_exponents(i / 1001.0);
    disagreements += r.ab1_direct != r.ab1_quadratic;
  }
  ok = ok && disagreements == 0;
  return {ok, "theta_max=" + fmt(tm) + ", ab1 at 0.06: direct=" + (at6.ab1_direct ? "true" : "false") +
                  " quadratic=" + (at6.ab1_quadratic ? "true" : "false") + ", disagreements=" +
                  std::to_string(disagreements) + "/1000"};
}

Outcome degenerate_divergence() {
  ProfileSpec s;
  s.kind = ProfileKind::degenerate;
  s.tau = 1.0;
  s.x3_0 = 0.5;
  const auto p = make_profile(s);
  const double a64 = critical_epsilon(p, 1.0, build_grid(64, 1.0), ThresholdMode::permissive).a3;
  const double a512 = critical_epsilon(p, 1.0, build_grid(512, 1.0), ThresholdMode::permissive).a3;
  const double growth = a512 / a64;
  bool refused = false;
  std::string msg;
  try {
    critical_epsilon(p, 1.0, build_grid(64, 1.0));
  } catch (const ThresholdUndefined& e) {
    msg = e.what();
    refused = msg.find("stabilizing") != std::string::npos && msg.find("degenerate") != std::string::npos;
  }
  return {growth >= min_degenerate_growth && refused,
          "a3(64)=" + fmt(a64) + ", a3(512)=" + fmt(a512) + ", growth=" + fmt(growth) + " (gate " +
              fmt(min_degenerate_growth) + "), strict refusal " + (refused ? "raised" : "MISSING")};
}

Outcome bychkov_oracle() {
  const double g = 1.0, gamma = 1.0;
  bool ok = true;
  for (double k : {0.0, 0.3, 1.0, 10.0, 1e3}) ok = ok && bychkov_growth_rate(g, gamma, 0.0, k).sigma == std::sqrt(g * gamma);
  const double eps = 0.5, kc = bychkov_cutoff(g, gamma, eps);
  ok = ok && kc == std::sqrt(g / gamma) / eps && bychkov_growth_rate(g, gamma, eps, kc).sigma == 0.0;

  const auto p = exponential_profile(1.0);
  double max_gamma = 0.0;
  for (double x : p.flag_sample_points()) max_gamma = std::max(max_gamma, p.eval(1, x) / p.eval(0, x));
  const auto grid = build_grid(48, 1.0);
  const auto scan = dispersion_scan(p, {g, 1e-3, 0.0}, log_spaced(0.05, 50.0, 24), grid, 1);
  const double s = scan.max_over_kappa();
  const double env = std::sqrt(g * max_gamma) * (1.0 + tol_envelope);
  ok = ok && s > 0.0 && s <= env;
  return {ok, "formula checks " + std::string(ok ? "exact" : "off") + ", viscous max growth=" + fmt(s) +
                  " <= envelope " + fmt(env)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"threshold cross-validation", threshold_cross_validation},
      {"height bound", height_bound},
      {"scale invariance", scale_invariance},
      {"grid convergence", grid_convergence},
      {"stability dichotomy", stability_dichotomy},
      {"stress decomposition", stress_decomposition},
      {"upsilon identity", upsilon_identity},
      {"energy balance", energy_balance},
      {"witness sequence", witness_sequence},
      {"exponent algebra", exponent_algebra},
      {"degenerate divergence", degenerate_divergence},
      {"bychkov oracle", bychkov_oracle}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.passed;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("criteria evaluated: %zu, passed: %zu, failed: %d\n", criteria.size(), criteria.size() - failed, failed);
  return failed;
}
