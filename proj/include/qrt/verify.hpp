#pragma once

// Consistency checks on a configured profile: the Upsilon identity, the
// stress decomposition, the witness limit, scale invariance and the sign of
// the E_L pencil.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qrt/config.hpp"
#include "qrt/energetics.hpp"
#include "qrt/io.hpp"
#include "qrt/spectra.hpp"

namespace qrt {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured residual or ratio
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return !checks.empty();
  }
};

// rho' times a random sine series, so that r / rho' vanishes at the walls.
inline std::vector<ScalarField1D> random_smooth_fields(const SlabGrid& g, const DensityProfile& p, std::size_t count,
                                                       std::uint64_t seed, int terms = 5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ScalarField1D> out;
  const double pi = std::numbers::pi, h = g.h();
  for (std::size_t f = 0; f < count; ++f) {
    std::vector<cplx> c(static_cast<std::size_t>(terms));
    for (auto& z : c) z = cplx(normal(rng), normal(rng));
    out.push_back(ScalarField1D::from_function(g, [&](double x) {
      cplx s = 0.0;
      for (int j = 1; j <= terms; ++j) s += c[static_cast<std::size_t>(j - 1)] * std::sin(j * pi * x / h) / double(j);
      return p.eval(1, x) * s;
    }));
  }
  return out;
}

inline CheckResult check_upsilon_identity(const DensityProfile& p, const PhysicalParams& params, const SlabGrid& g,
                                          double kappa, std::size_t fields, std::uint64_t seed, double tol) {
  double worst = 0.0;
  for (const auto& r : random_smooth_fields(g, p, fields, seed)) {
    const auto rep = upsilon_identity_residual(r, kappa, p, params);
    worst = std::max({worst, rep.residual, rep.energy_residual});
  }
  return {"upsilon_identity", worst <= tol, worst, tol,
          "max over " + std::to_string(fields) + " fields of the identity and E(r) = E_L(r/rho') residuals"};
}

inline double max_abs_slope(const DensityProfile& p) {
  double m = 0.0;
  for (double x : p.flag_sample_points()) m = std::max(m, std::abs(p.eval(1, x)));
  return m;
}

inline double min_density(const DensityProfile& p) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : p.flag_sample_points()) m = std::min(m, p.eval(0, x));
  return m;
}

// amplitude * sin(x1) sin(pi x3 / h) rho'(x3) / max |rho'|.
inline PlaneField stress_test_field(std::size_t n1, std::size_t n3, const DensityProfile& p, double amplitude) {
  const double pi = std::numbers::pi, h = p.h(), slope = std::max(1e-300, max_abs_slope(p));
  return PlaneField::from_function(n1, 2.0 * pi, build_grid(n3, h), [&](double x1, double x3) {
    return amplitude * std::sin(x1) * std::sin(pi * x3 / h) * p.eval(1, x3) / std::max(1e-300, slope);
  });
}

inline CheckResult check_stress_decomposition(const DensityProfile& p, std::size_t n1, std::size_t n3,
                                              double amplitude_fraction, double tol) {
  const double amp = amplitude_fraction * min_density(p);
  const double fine = decompose_quantum_stress(stress_test_field(n1, n3, p, amp), p).residual;
  return {"stress_decomposition", fine <= tol, fine, tol,
          "max-norm residual of Q - (Q^L + Q^N) on a " + std::to_string(n1) + " x " + std::to_string(n3) + " grid"};
}

// Residual ratio between an (n1, n3) and a (2 n1, 2 n3 - 1) plane grid.
inline CheckResult check_stress_refinement(const DensityProfile& p, std::size_t n1, std::size_t n3,
                                           double amplitude_fraction, double min_ratio = 4.0) {
  const double amp = amplitude_fraction * min_density(p);
  const double a = decompose_quantum_stress(stress_test_field(n1, n3, p, amp), p).residual;
  const double b = decompose_quantum_stress(stress_test_field(2 * n1, 2 * n3 - 1, p, amp), p).residual;
  const double ratio = b > 0.0 ? a / b : std::numeric_limits<double>::infinity();
  return {"stress_refinement", ratio >= min_ratio, ratio, min_ratio,
          "residual " + io::format_double(a) + " -> " + io::format_double(b)};
}

inline CheckResult check_witness(const DensityProfile& p, const SlabGrid& g, double tol) {
  const auto t = solve_threshold_pencil(p, g);
  const ScalarField1D phi(g, t.phi);
  const double limit = rayleigh_quotient_1d(phi, p);
  double prev = 0.0;
  bool monotone = true, converged = false;
  double err_at_small_ratio = std::numeric_limits<double>::infinity();
  for (double k = 1.0; k <= 1e8; k *= 2.0) {
    const double w = witness_quotient(phi, k, p);
    if (w < prev) monotone = false;
    prev = w;
    if (witness_correction_ratio(phi, k, p) <= tol) {
      err_at_small_ratio = std::abs(w / limit - 1.0);
      converged = err_at_small_ratio <= tol;
      break;
    }
  }
  return {"witness_limit", monotone && converged, err_at_small_ratio, tol,
          monotone ? "witness quotient increases in k" : "witness quotient is not monotone in k"};
}

inline CheckResult check_phi_star_quotient(const DensityProfile& p, const SlabGrid& g, double tol) {
  const auto t = solve_threshold_pencil(p, g);
  const double q = rayleigh_quotient_1d(ScalarField1D(g, t.phi), p);
  const double err = std::abs(q / t.a3 - 1.0);
  return {"phi_star_quotient", err <= tol, err, tol, "rayleigh quotient of phi_star against a3"};
}

inline CheckResult check_scale_invariance(const DensityProfile& p, double g_acc, const SlabGrid& g, double tol) {
  const double base = critical_epsilon(p, g_acc, g).eps_c;
  double worst = 0.0;
  for (double c : {0.5, 2.0, 10.0}) worst = std::max(worst, std::abs(critical_epsilon(p.scaled(c), g_acc, g).eps_c / base - 1.0));
  return {"scale_invariance", worst <= tol, worst, tol, "eps_c(c rho) against eps_c(rho), c in {0.5, 2, 10}"};
}

// The E_L pencil minimum at kappa = 0 is positive exactly when eps > eps_c;
// inside the neutral band either sign is accepted.
inline CheckResult check_coercivity_sign(const DensityProfile& p, const PhysicalParams& params, const SlabGrid& g,
                                         double band) {
  const double eps_c = critical_epsilon(p, params.g, g).eps_c;
  const double m = el_pencil_minimum(0.0, p, params, g).value;
  const double rel = params.eps / eps_c - 1.0;
  const bool neutral = std::abs(rel) <= band;
  const bool expected_positive = rel > 0.0;
  const bool ok = neutral || (m > 0.0) == expected_positive;
  std::string detail = "eps / eps_c = " + io::format_double(params.eps / eps_c) + ", pencil minimum " + io::format_double(m) +
                       (expected_positive ? " (expected > 0)" : " (expected < 0)");
  return {"coercivity_sign", ok, m, band, detail};
}

inline VerifyReport run_verification(const RunConfig& cfg, const DensityProfile& p, const PhysicalParams& params,
                                     const SlabGrid& g) {
  const auto& v = cfg.verify;
  VerifyReport rep;
  rep.checks.push_back(check_upsilon_identity(p, params, g, v.kappa, v.random_fields, v.rng_seed, v.identity_tol));
  rep.checks.push_back(check_stress_decomposition(p, v.plane_n1, v.plane_n3, v.amplitude_fraction, v.decomposition_tol));
  rep.checks.push_back(check_witness(p, g, v.witness_tol));
  rep.checks.push_back(check_phi_star_quotient(p, g, v.quotient_tol));
  rep.checks.push_back(check_scale_invariance(p, params.g, g, v.scale_tol));
  rep.checks.push_back(check_coercivity_sign(p, params, g, v.neutral_band));
  return rep;
}

}  // namespace qrt
