#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qrt/spectra.hpp"

using namespace qrt;

namespace {

constexpr double pi = std::numbers::pi;

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

DensityProfile degenerate_profile() {
  ProfileSpec s;
  s.kind = ProfileKind::degenerate;
  s.tau = 1.0;
  s.x3_0 = 0.5;
  return make_profile(s);
}

// Second-order finite-volume Sturm-Liouville discretization on a uniform mesh:
// min over phi of sum c_{i+1/2} (dphi)^2 / dx  against  sum rho'_i phi_i^2 dx,
// smallest eigenvalue by inverse iteration on the symmetric tridiagonal form.
double fd_a3(const DensityProfile& p, int cells) {
  const double h = p.h(), dx = h / cells;
  const int m = cells - 1;
  std::vector<double> c(static_cast<std::size_t>(cells)), msq(static_cast<std::size_t>(m));
  for (int i = 0; i < cells; ++i) {
    const double x = (i + 0.5) * dx;
    const double d1 = p.eval(1, x);
    c[static_cast<std::size_t>(i)] = d1 * d1 / p.eval(0, x);
  }
  for (int i = 0; i < m; ++i) msq[static_cast<std::size_t>(i)] = std::sqrt(p.eval(1, (i + 1) * dx) * dx);
  std::vector<double> diag(static_cast<std::size_t>(m)), off(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    const auto u = static_cast<std::size_t>(i);
    diag[u] = (c[u] + c[u + 1]) / dx / (msq[u] * msq[u]);
    if (i + 1 < m) off[u] = -c[u + 1] / dx / (msq[u] * msq[u + 1]);
  }
  std::vector<double> x(static_cast<std::size_t>(m), 1.0), y(x.size()), cp(x.size()), dp(x.size());
  double nu = 0.0;
  for (int it = 0; it < 60; ++it) {
    // Thomas solve T y = x.
    cp[0] = off[0] / diag[0];
    dp[0] = x[0] / diag[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double den = diag[i] - off[i - 1] * cp[i - 1];
      cp[i] = off[i] / den;
      dp[i] = (x[i] - off[i - 1] * dp[i - 1]) / den;
    }
    y.back() = dp.back();
    for (std::size_t i = x.size() - 1; i-- > 0;) y[i] = dp[i] - cp[i] * y[i + 1];
    double nrm = 0.0;
    for (double v : y) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i] / nrm;
  }
  double num = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double tx = diag[i] * x[i];
    if (i > 0) tx += off[i - 1] * x[i - 1];
    if (i + 1 < x.size()) tx += off[i] * x[i + 1];
    num += x[i] * tx;
  }
  nu = num;
  return 1.0 / nu;
}

double max_growth(const DensityProfile& p, const PhysicalParams& params, const std::vector<double>& kappas,
                  const SlabGrid& g) {
  double best = -std::numeric_limits<double>::infinity();
  for (double k : kappas) best = std::max(best, leading_growth_rate(p, params, k, g));
  return best;
}

}  // namespace

TEST(CriticalEpsilon, InvariantUnderDensityScaling) {
  const auto p = linear_profile();
  const auto g = build_grid(96, 1.0);
  const double base = critical_epsilon(p, 1.0, g).eps_c;
  for (double c : {0.5, 2.0, 10.0}) {
    const double scaled = critical_epsilon(p.scaled(c), 1.0, g).eps_c;
    EXPECT_LE(std::abs(scaled - base) / base, 1e-10) << "c = " << c;
  }
}

TEST(CriticalEpsilon, LinearProfileMatchesIndependentOracle) {
  const auto p = linear_profile();
  // Richardson-extrapolated second-order oracle.
  const double a1 = fd_a3(p, 2000), a2 = fd_a3(p, 4000);
  const double oracle = (4.0 * a2 - a1) / 3.0;
  const auto t = critical_epsilon(p, 1.0, build_grid(128, 1.0));
  EXPECT_LE(std::abs(t.a3 - oracle) / oracle, 1e-6);
  EXPECT_LE(std::abs(std::sqrt(oracle) - t.eps_c) / t.eps_c, 1e-6);
  // Frozen from the oracle above.
  EXPECT_NEAR(t.a3, 0.147626022914, 1e-9);
  EXPECT_NEAR(t.eps_c, 0.384221320224, 1e-9);
}

TEST(CriticalEpsilon, EpsEqualsSqrtGA3) {
  const auto p = exponential_profile(1.0);
  const auto g = build_grid(64, 1.0);
  const auto t1 = critical_epsilon(p, 1.0, g);
  const auto t4 = critical_epsilon(p, 4.0, g);
  EXPECT_NEAR(t4.eps_c, 2.0 * t1.eps_c, 1e-12);
  EXPECT_NEAR(t1.eps_c * t1.eps_c, t1.a3, 1e-13);
  EXPECT_GT(t1.a3, 0.0);
  EXPECT_EQ(t1.n, 64u);
}

TEST(CriticalEpsilon, PhiStarQuotientEqualsA3) {
  const auto p = tanh_profile(1.0, 0.2);
  const auto g = build_grid(128, 1.0);
  const auto t = critical_epsilon(p, 1.0, g);
  const double q = rayleigh_quotient_1d(ScalarField1D(g, Eigen::VectorXd(t.phi_star)), p);
  EXPECT_LE(std::abs(q - t.a3) / t.a3, 1e-10);
}

TEST(CriticalEpsilon, SpectralConvergenceAndSchemeAgreement) {
  const auto p = exponential_profile(1.0);
  const double c128 = critical_epsilon(p, 1.0, build_grid(128, 1.0)).eps_c;
  const double c256 = critical_epsilon(p, 1.0, build_grid(256, 1.0)).eps_c;
  const double f256 = critical_epsilon(p, 1.0, build_grid(256, 1.0, Scheme::finite_difference_4)).eps_c;
  EXPECT_LE(std::abs(c256 - c128) / c256, 1e-8);
  EXPECT_LE(std::abs(f256 - c256) / c256, 1e-5);
}

TEST(CriticalEpsilon, StrictModeRefusesDegenerateProfile) {
  const auto p = degenerate_profile();
  const auto g = build_grid(64, 1.0);
  try {
    critical_epsilon(p, 1.0, g);
    FAIL() << "expected ThresholdUndefined";
  } catch (const ThresholdUndefined& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("stabilizing"), std::string::npos);
    EXPECT_NE(msg.find("degenerate"), std::string::npos);
    EXPECT_NE(msg.find("infinite"), std::string::npos);
  }
}

TEST(CriticalEpsilon, DegenerateA3GrowsWithResolution) {
  const auto p = degenerate_profile();
  double prev = 0.0, first = 0.0;
  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    const double a3 = critical_epsilon(p, 1.0, build_grid(n, 1.0), ThresholdMode::permissive).a3;
    if (n == 64) first = a3;
    EXPECT_GT(a3, 1.9 * prev) << n;
    prev = a3;
  }
  // Quotient ~ (width)^-tau with width ~ 1/n: at least 8x over 64 -> 512.
  EXPECT_GE(prev / first, 8.0 * 0.99);
}

TEST(CriticalEpsilon, RejectsMissingRtCondition) {
  auto s = linear_spec(-1.0);
  s.rho0 = 2.0;
  const auto p = make_profile(s);
  EXPECT_THROW(critical_epsilon(p, 1.0, build_grid(32, 1.0)), ThresholdUndefined);
  EXPECT_THROW(critical_epsilon(linear_profile(), 0.0, build_grid(32, 1.0)), ConfigError);
}

TEST(EpsilonBound, LinearProfileClosedForm) {
  const auto b = epsilon_upper_bound(linear_profile(), 1.0);
  ASSERT_TRUE(b.linear.has_value());
  EXPECT_NEAR(*b.linear, std::sqrt(2.0) / pi, 1e-12);
  EXPECT_GT(b.general, 0.0);
}

TEST(EpsilonBound, ScalesLinearlyInHeight) {
  auto s = linear_spec();
  const auto b1 = epsilon_upper_bound(make_profile(s), 1.0);
  s.h = 2.0;
  s.slope_or_rate = 0.5;  // same density range over a taller slab
  s.mollifier_width = 0.2;
  const auto b2 = epsilon_upper_bound(make_profile(s), 1.0);
  // alpha halves, so rho/alpha doubles: the linear bound gains 2 sqrt(2).
  ASSERT_TRUE(b2.linear.has_value());
  EXPECT_NEAR(*b2.linear, 2.0 * std::sqrt(2.0) * *b1.linear, 1e-12);

  auto e = linear_spec();
  e.kind = ProfileKind::exponential;
  const auto p1 = make_profile(e);
  e.h = 2.0;
  e.slope_or_rate = 0.5;
  e.mollifier_width = 0.2;
  const auto p2 = make_profile(e);
  // rho(x) on [0, 2] with rate 1/2 is rho(x/2) on [0, 1]: rho'/rho'^2 terms pick up 2.
  EXPECT_NEAR(epsilon_upper_bound(p2, 1.0).general, 2.0 * std::sqrt(2.0) * epsilon_upper_bound(p1, 1.0).general,
              1e-6);
}

TEST(EpsilonBound, HoldsOnProfileFamily) {
  std::vector<DensityProfile> family;
  for (double a : {0.5, 1.0, 3.0}) family.push_back(linear_profile(a));
  for (double gm : {0.5, 1.0, 2.0, 4.0}) family.push_back(exponential_profile(gm));
  for (double w : {0.15, 0.3}) family.push_back(tanh_profile(1.0, w));
  family.push_back(tanh_profile(3.0, 0.25));
  ASSERT_EQ(family.size(), 10u);
  const auto g = build_grid(96, 1.0);
  for (const auto& p : family) {
    ASSERT_TRUE(validate_profile(p).all_passed());
    const double ec = critical_epsilon(p, 1.0, g).eps_c;
    const auto b = epsilon_upper_bound(p, 1.0);
    EXPECT_LT(ec, b.general);
    if (b.linear) EXPECT_LT(ec, *b.linear);
  }
}

TEST(ModeOperator, WallRowsAppearOncePerCondition) {
  const auto p = linear_profile();
  const auto g = build_grid(24, 1.0);
  const auto op = linearized_operator(p, {1.0, 1.0, 0.3}, 1.0, g);
  ASSERT_EQ(op.A.rows(), 72);
  ASSERT_EQ(op.B.rows(), 72);
  int zero_b = 0;
  for (Eigen::Index i = 0; i < op.B.rows(); ++i) zero_b += op.B.row(i).cwiseAbs().maxCoeff() == 0.0;
  // rho_pert and v3: two per wall; w3: one per wall.
  EXPECT_EQ(zero_b, 10);
  EXPECT_EQ(op.reduced_size(), 2 * 20 + 22);
  EXPECT_EQ(op.groups[0] + op.groups[1], op.reduced_size());
}

TEST(ModeOperator, EigenvectorsSatisfyWallConditions) {
  const auto p = linear_profile();
  const auto g = build_grid(48, 1.0);
  const auto op = linearized_operator(p, {1.0, 1.0, 0.3}, 1.5, g);
  const auto n = static_cast<Eigen::Index>(g.n());
  const Eigen::MatrixXcd D1 = g.D(1).cast<cplx>(), D2 = g.D(2).cast<cplx>();
  for (const auto& m : mode_eigenpairs(op, 6, 1.0, 1.0, Branch::all, true)) {
    const Eigen::VectorXcd r = m.vector.segment(0, n), v = m.vector.segment(n, n), w = m.vector.segment(2 * n, n);
    for (Eigen::Index wall : {Eigen::Index{0}, n - 1}) {
      EXPECT_LT(std::abs(r(wall)), 1e-10);
      EXPECT_LT(std::abs(v(wall)), 1e-10);
      EXPECT_LT(std::abs((D2.row(wall) * v).value()) / (D2 * v).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_LT(std::abs((D2.row(wall) * r).value()) / std::max(1.0, (D2 * r).cwiseAbs().maxCoeff()), 1e-9);
      EXPECT_LT(std::abs((D1.row(wall) * w).value()) / std::max(1.0, (D1 * w).cwiseAbs().maxCoeff()), 1e-9);
    }
  }
}

TEST(ModeOperator, KappaZeroIsNeutralDensityPlusDiffusion) {
  const auto p = linear_profile();
  const auto g = build_grid(32, 1.0);
  const auto op = linearized_operator(p, {1.0, 0.5, 0.3}, 0.0, g);
  EXPECT_TRUE(op.degenerate);
  const auto modes = mode_eigenpairs(op, 1000, 1.0, 0.5, Branch::all, true);
  const auto n = static_cast<Eigen::Index>(g.n());
  int neutral_density = 0;
  for (const auto& m : modes) {
    EXPECT_LE(m.sigma.real(), 1e-10);
    const bool density = m.vector.segment(n, n).norm() < 1e-12;
    if (density) {
      ++neutral_density;
      EXPECT_NEAR(std::abs(m.sigma), 0.0, 1e-10);
    }
  }
  EXPECT_EQ(neutral_density, 28);
}

TEST(ModeOperator, SpectrumDependsOnlyOnKappaSquared) {
  const auto p = exponential_profile(1.0);
  const auto g = build_grid(40, 1.0);
  const PhysicalParams params{1.0, 0.5, 0.2};
  const auto a = mode_spectrum(linearized_operator(p, params, 1.7, g), 8, 1.0, 0.5);
  const auto b = mode_spectrum(linearized_operator(p, params, -1.7, g), 8, 1.0, 0.5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(ModeOperator, VorticityBranchMatchesConstantCoefficientSpectrum) {
  // rho within 1% of constant.
  const auto p = linear_profile(0.01);
  const auto g = build_grid(48, 1.0);
  const double mu = 0.7, k = 1.3;
  const auto w = mode_spectrum(linearized_operator(p, {1.0, mu, 0.0}, k, g), 4, 1.0, mu, Branch::vorticity);
  ASSERT_EQ(w.size(), 4u);
  const double rho_mean = 1.005;
  for (int j = 0; j < 4; ++j) {
    const double analytic = -mu * (k * k + std::pow(j * pi, 2)) / rho_mean;
    EXPECT_LE(std::abs(w[static_cast<std::size_t>(j)].real() - analytic) / std::abs(analytic), 1e-2) << j;
    EXPECT_NEAR(w[static_cast<std::size_t>(j)].imag(), 0.0, 1e-8);
  }
}

TEST(ModeOperator, ResolvedLeadingModeUnderRefinement) {
  const auto p = linear_profile();
  const double ec = critical_epsilon(p, 1.0, build_grid(96, 1.0)).eps_c;
  const PhysicalParams params{1.0, 1.0, 0.5 * ec};
  const double s96 = leading_growth_rate(p, params, 1.0, build_grid(96, 1.0));
  const double s128 = leading_growth_rate(p, params, 1.0, build_grid(128, 1.0));
  EXPECT_GT(s128, 0.0);
  EXPECT_LE(std::abs(s128 - s96) / std::abs(s128), 1e-6);
}

TEST(ModeOperator, ClassicalInstabilityWithoutQuantumTerm) {
  const auto p = linear_profile();
  const auto g = build_grid(48, 1.0);
  EXPECT_GT(leading_growth_rate(p, {1.0, 0.01, 0.0}, 3.0, g), 0.0);
}

TEST(ModeOperator, RejectsNonFiniteKappa) {
  EXPECT_THROW(linearized_operator(linear_profile(), {1.0, 1.0, 0.1}, std::nan(""), build_grid(16, 1.0)),
               DomainError);
}

TEST(Dispersion, StableAboveTwiceCritical) {
  const auto p = linear_profile();
  const auto g = build_grid(48, 1.0);
  const double ec = critical_epsilon(p, 1.0, g).eps_c;
  const auto d = dispersion_scan(p, {1.0, 1.0, 2.0 * ec}, log_spaced(0.05, 20.0, 16), g);
  EXPECT_LT(d.max_over_kappa(), 0.0);
  EXPECT_FALSE(d.kappa_c.has_value());
}

TEST(Dispersion, ZeroEpsUnstableOnAnInterval) {
  const auto p = linear_profile();
  const auto g = build_grid(48, 1.0);
  const auto d = dispersion_scan(p, {1.0, 1.0, 0.0}, log_spaced(0.1, 20.0, 12), g);
  int positive = 0;
  for (double s : d.max_growth) positive += s > 0.0;
  EXPECT_GE(positive, 3);
}

TEST(Dispersion, CutoffBetweenUnstableAndStableKappa) {
  const auto p = linear_profile();
  const auto g = build_grid(48, 1.0);
  const double ec = critical_epsilon(p, 1.0, g).eps_c;
  const auto d = dispersion_scan(p, {1.0, 1.0, 0.5 * ec}, log_spaced(0.1, 30.0, 24), g);
  ASSERT_TRUE(d.kappa_c.has_value());
  EXPECT_GT(d.max_growth.front(), 0.0);
  EXPECT_LT(d.max_growth.back(), 0.0);
  std::size_t i = 0;
  while (d.kappas[i + 1] < *d.kappa_c) ++i;
  EXPECT_GT(d.max_growth[i], 0.0);
  EXPECT_LE(d.max_growth[i + 1], 0.0);
}

TEST(Dispersion, GrowthNonincreasingInEps) {
  const auto p = linear_profile();
  const auto g = build_grid(40, 1.0);
  const double ec = critical_epsilon(p, 1.0, g).eps_c;
  const auto kappas = log_spaced(0.1, 10.0, 8);
  std::vector<double> prev;
  for (double f : {0.0, 0.5, 1.0, 2.0}) {
    const auto d = dispersion_scan(p, {1.0, 1.0, f * ec}, kappas, g);
    if (!prev.empty())
      for (std::size_t i = 0; i < kappas.size(); ++i) EXPECT_LE(d.max_growth[i], prev[i] + 1e-12) << f << " " << i;
    prev = d.max_growth;
  }
}

TEST(Dispersion, ParallelScanMatchesSerial) {
  const auto p = exponential_profile(1.0);
  const auto g = build_grid(32, 1.0);
  const auto kappas = log_spaced(0.2, 8.0, 7);
  const auto a = dispersion_scan(p, {1.0, 0.5, 0.1}, kappas, g, 3, 1);
  const auto b = dispersion_scan(p, {1.0, 0.5, 0.1}, kappas, g, 3, 3);
  EXPECT_EQ(a.max_growth, b.max_growth);
  EXPECT_EQ(a.leading, b.leading);
}

TEST(Dispersion, RejectsBadKappaGrid) {
  const auto p = linear_profile();
  const auto g = build_grid(16, 1.0);
  EXPECT_THROW(dispersion_scan(p, {1.0, 1.0, 0.1}, {}, g), ConfigError);
  EXPECT_THROW(dispersion_scan(p, {1.0, 1.0, 0.1}, {1.0, 0.5}, g), ConfigError);
  EXPECT_THROW(dispersion_scan(p, {1.0, 1.0, 0.1}, {0.0, 1.0}, g), ConfigError);
}

TEST(SpectralBisection, AgreesWithVariationalThreshold) {
  const auto p = linear_profile();
  const auto g = build_grid(64, 1.0);
  const double ec = critical_epsilon(p, 1.0, g).eps_c;
  const auto kappas = log_spaced(0.05, 20.0, 32);
  for (double mu : {0.1, 1.0}) {
    const auto c = find_critical_epsilon_spectral(p, {1.0, mu, 0.0}, g, kappas, {0.5 * ec, 1.5 * ec});
    EXPECT_LE(std::abs(c.eps_cross - ec) / ec, 0.02) << mu;
  }
}

TEST(SpectralBisection, BracketWithoutSignChangeThrows) {
  const auto p = linear_profile();
  const auto g = build_grid(32, 1.0);
  const double ec = critical_epsilon(p, 1.0, g).eps_c;
  EXPECT_THROW(find_critical_epsilon_spectral(p, {1.0, 1.0, 0.0}, g, log_spaced(0.05, 20.0, 8), {1.5 * ec, 2.0 * ec}),
               BracketError);
}

TEST(Bychkov, ZeroEpsIsKappaIndependent) {
  for (double k : {0.0, 0.5, 3.0, 100.0}) {
    const auto r = bychkov_growth_rate(2.0, 3.0, 0.0, k);
    EXPECT_DOUBLE_EQ(r.sigma, std::sqrt(6.0));
    EXPECT_FALSE(r.stable);
  }
}

TEST(Bychkov, CutoffIsRootOfRadicand) {
  const double g = 1.3, gamma = 0.7, eps = 0.4;
  const double kc = bychkov_cutoff(g, gamma, eps);
  EXPECT_NEAR(eps * gamma * kc, std::sqrt(g * gamma), 1e-15);
  EXPECT_NEAR(bychkov_growth_rate(g, gamma, eps, kc).sigma, 0.0, 1e-7);
  EXPECT_TRUE(bychkov_growth_rate(g, gamma, eps, 2.0 * kc).stable);
}

TEST(Bychkov, DirectSubstitution) {
  EXPECT_DOUBLE_EQ(bychkov_growth_rate(1.0, 1.0, 1.0, 0.5).sigma, std::sqrt(0.75));
  EXPECT_THROW(bychkov_growth_rate(1.0, 0.0, 1.0, 0.5), DomainError);
  EXPECT_THROW(bychkov_growth_rate(1.0, -1.0, 1.0, 0.5), DomainError);
}

TEST(Bychkov, ViscousGrowthBelowEnvelope) {
  const auto p = exponential_profile(1.0);
  double max_gamma = 0.0;
  for (double x : p.flag_sample_points()) max_gamma = std::max(max_gamma, p.eval(1, x) / p.eval(0, x));
  const auto g = build_grid(48, 1.0);
  const double s = max_growth(p, {1.0, 1e-3, 0.0}, log_spaced(0.05, 50.0, 24), g);
  EXPECT_GT(s, 0.0);
  EXPECT_LE(s, std::sqrt(max_gamma) * (1.0 + 1e-2));
}
