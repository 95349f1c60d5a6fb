#pragma once

// Equilibrium density profiles rho(x3) on [0, h], their derivatives up to
// order 8, the sampled condition flags and the hydrostatic pressure.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qrt/error.hpp"

namespace qrt {

inline constexpr int max_derivative = 8;
using Derivatives = std::array<double, max_derivative + 1>;

enum class ProfileKind { linear, exponential, tanh_layer, degenerate, tabulated };

inline std::string_view to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::linear: return "linear";
    case ProfileKind::exponential: return "exponential";
    case ProfileKind::tanh_layer: return "tanh_layer";
    case ProfileKind::degenerate: return "degenerate";
    case ProfileKind::tabulated: return "tabulated";
  }
  return "?";
}

inline ProfileKind profile_kind_from_string(std::string_view s) {
  if (s == "linear") return ProfileKind::linear;
  if (s == "exponential") return ProfileKind::exponential;
  if (s == "tanh_layer" || s == "tanh") return ProfileKind::tanh_layer;
  if (s == "degenerate") return ProfileKind::degenerate;
  if (s == "tabulated") return ProfileKind::tabulated;
  throw ConfigError("unknown profile kind '" + std::string(s) + "'");
}

struct ProfileSpec {
  ProfileKind kind = ProfileKind::linear;
  double rho0 = 1.0;
  // alpha (linear slope), gamma (exponential rate) or the density jump
  // across a tanh layer.
  double slope_or_rate = 1.0;
  double layer_center = 0.5;
  double layer_width = 0.2;
  // degenerate family: rho' = slope_or_rate * |x3 - x3_0|^(2 + tau)
  double tau = 1.0;
  double x3_0 = 0.5;
  double degenerate_halfwidth = 0.1;
  double h = 1.0;
  double mollifier_width = 0.1;
  // Also cancel rho^(6) at the walls.
  bool zero_sixth_derivative = false;
  // (x3, rho) pairs for the tabulated kind, spanning [0, h].
  std::vector<std::pair<double, double>> table;
  // Number of uniform samples used for the flags (10 N in practice).
  std::size_t flag_samples = 1281;
};

struct ProfileFlags {
  bool positive = false;
  bool rt_condition = false;
  bool stabilizing = false;
  bool boundary_conditions_ok = false;
};

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Derivatives of tanh(z) as polynomials in T = tanh(z):
// d/dz P(T) = P'(T) (1 - T^2).
inline std::array<std::vector<double>, max_derivative + 1> tanh_derivative_polys() {
  std::array<std::vector<double>, max_derivative + 1> polys;
  polys[0] = {0.0, 1.0};
  for (int k = 1; k <= max_derivative; ++k) {
    const auto& p = polys[static_cast<std::size_t>(k - 1)];
    std::vector<double> dp(p.size() > 1 ? p.size() - 1 : 1, 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) dp[i - 1] = static_cast<double>(i) * p[i];
    std::vector<double> out(dp.size() + 2, 0.0);
    for (std::size_t i = 0; i < dp.size(); ++i) {
      out[i] += dp[i];
      out[i + 2] -= dp[i];
    }
    polys[static_cast<std::size_t>(k)] = out;
  }
  return polys;
}

inline double horner(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

// Truncated Taylor series (f, f', f''/2!, ...) used to differentiate the
// smooth step exactly up to order 8.
struct Jet {
  std::array<double, max_derivative + 1> c{};

  static Jet variable(double t) {
    Jet j;
    j.c[0] = t;
    j.c[1] = 1.0;
    return j;
  }
  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k < r.c.size(); ++k)
      for (std::size_t j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
    return r;
  }
  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k < r.c.size(); ++k) {
      double s = a.c[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
      r.c[k] = s / b.c[0];
    }
    return r;
  }
  friend Jet exp(const Jet& a) {
    Jet r;
    r.c[0] = std::exp(a.c[0]);
    for (std::size_t k = 1; k < r.c.size(); ++k) {
      double s = 0.0;
      for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * r.c[k - j];
      r.c[k] = s / static_cast<double>(k);
    }
    return r;
  }
};

// Wall correction y -> G(y) sum_j c_j y^(2j), G(y) = exp(-(y/w)^2), y the
// distance to the wall. Coefficients cancel the even wall derivatives
// 2, 4 (and optionally 6) of the raw profile. The Gaussian has decayed below
// round-off at the strip edge y = 6w.
class WallBump {
 public:
  WallBump() = default;
  WallBump(double w, const std::vector<double>& even_derivs) : w_(w) {
    const auto m = static_cast<Eigen::Index>(even_derivs.size());
    Eigen::MatrixXd A(m, m);
    Eigen::VectorXd b(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Jet basis = basis_jet(0.0, static_cast<int>(j + 1));
      for (Eigen::Index i = 0; i < m; ++i) A(i, j) = basis.c[static_cast<std::size_t>(2 * (i + 1))] * factorial(2 * static_cast<int>(i + 1));
    }
    for (Eigen::Index i = 0; i < m; ++i) b(i) = -even_derivs[static_cast<std::size_t>(i)];
    const Eigen::VectorXd c = A.partialPivLu().solve(b);
    coeffs_.assign(c.data(), c.data() + c.size());
  }

  // Derivatives d^k/dy^k of the correction at distance y from the wall.
  Jet eval(double y) const {
    Jet out;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      const Jet b = basis_jet(y, static_cast<int>(j + 1));
      for (std::size_t k = 0; k < out.c.size(); ++k) out.c[k] += coeffs_[j] * b.c[k];
    }
    for (std::size_t k = 0; k < out.c.size(); ++k) out.c[k] *= factorial(static_cast<int>(k));
    return out;
  }

  static double factorial(int m) {
    double r = 1.0;
    for (int i = 2; i <= m; ++i) r *= i;
    return r;
  }

 private:
  // Taylor jet of G(y) y^(2p) at y.
  Jet basis_jet(double y, int p) const {
    const Jet t = Jet::variable(y);
    Jet arg = t * t;
    for (double& v : arg.c) v *= -1.0 / (w_ * w_);
    Jet poly = Jet::constant(1.0);
    for (int i = 0; i < 2 * p; ++i) poly = poly * t;
    return exp(arg) * poly;
  }

  double w_ = 1.0;
  std::vector<double> coeffs_;
};

struct LinearRaw {
  double rho0, alpha;
  double eval(int k, double x) const {
    if (k == 0) return rho0 + alpha * x;
    return k == 1 ? alpha : 0.0;
  }
};

struct ExponentialRaw {
  double rho0, gamma;
  double eval(int k, double x) const { return std::pow(gamma, k) * rho0 * std::exp(gamma * x); }
};

struct TanhRaw {
  double rho0, jump, center, width;
  std::array<std::vector<double>, max_derivative + 1> polys = tanh_derivative_polys();
  double eval(int k, double x) const {
    const double T = std::tanh((x - center) / width);
    if (k == 0) return rho0 + 0.5 * jump * (1.0 + T);
    return 0.5 * jump * std::pow(width, -k) * horner(polys[static_cast<std::size_t>(k)], T);
  }
};

struct DegenerateRaw {
  double rho0, amplitude, tau, x0;
  double eval(int k, double x) const {
    const double y = x - x0;
    const double p = 3.0 + tau;  // power of |y| in rho
    if (k == 0) {
      const double sgn = (y > 0) - (y < 0);
      return rho0 + amplitude * (sgn * std::pow(std::abs(y), p) + std::pow(x0, p)) / p;
    }
    // rho^{(k)} = amplitude/p * d^k/dy^k [sgn(y)|y|^p]
    double coeff = 1.0;
    for (int i = 0; i < k; ++i) coeff *= (p - i);
    if (coeff == 0.0) return 0.0;
    const double e = p - k;
    const int parity = (k % 2 == 0) ? 1 : 0;  // sgn(y)|y|^p has odd symmetry
    const double sgn = (y > 0) - (y < 0);
    if (y == 0.0) return e > 0 ? 0.0 : (e == 0.0 ? (parity ? 0.0 : amplitude * coeff / p)
                                                 : std::numeric_limits<double>::infinity());
    const double mag = amplitude * coeff / p * std::pow(std::abs(y), e);
    return parity ? sgn * mag : mag;
  }
};

// Global Chebyshev series on [0, h].
struct ChebyshevRaw {
  double h;
  std::array<std::vector<double>, max_derivative + 1> coeffs;  // per derivative order

  double eval(int k, double x) const {
    const auto& c = coeffs[static_cast<std::size_t>(k)];
    const double t = 2.0 * x / h - 1.0;
    // Clenshaw recurrence.
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = c.size(); j-- > 1;) {
      const double b0 = 2.0 * t * b1 - b2 + c[j];
      b2 = b1;
      b1 = b0;
    }
    return (c.empty() ? 0.0 : c[0]) + t * b1 - b2;
  }

  static ChebyshevRaw fit(const std::vector<std::pair<double, double>>& table, double h) {
    const auto m = static_cast<Eigen::Index>(table.size());
    if (m < 2) throw ConfigError("tabulated profile needs at least two points");
    auto vandermonde = [&](Eigen::Index degree) {
      Eigen::MatrixXd V(m, degree + 1);
      for (Eigen::Index i = 0; i < m; ++i) {
        const double t = 2.0 * table[static_cast<std::size_t>(i)].first / h - 1.0;
        V(i, 0) = 1.0;
        if (degree >= 1) V(i, 1) = t;
        for (Eigen::Index j = 2; j <= degree; ++j) V(i, j) = 2.0 * t * V(i, j - 1) - V(i, j - 2);
      }
      return V;
    };
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) y(i) = table[static_cast<std::size_t>(i)].second;

    const Eigen::Index max_degree = std::min<Eigen::Index>(m - 1, 64);
    Eigen::VectorXd c = vandermonde(max_degree).colPivHouseholderQr().solve(y);
    const double cmax = c.cwiseAbs().maxCoeff();
    Eigen::Index degree = 0;
    for (Eigen::Index j = 0; j <= max_degree; ++j)
      if (std::abs(c(j)) > 1e-10 * cmax) degree = j;
    if (degree < max_degree) c = vandermonde(degree).colPivHouseholderQr().solve(y);

    ChebyshevRaw out{h, {}};
    out.coeffs[0].assign(c.data(), c.data() + c.size());
    for (int k = 1; k <= max_derivative; ++k) {
      const auto& a = out.coeffs[static_cast<std::size_t>(k - 1)];
      const std::size_t N = a.size();
      std::vector<double> d(N > 1 ? N - 1 : 1, 0.0);
      if (N > 1) {
        // d_{j-1} = d_{j+1} + 2 j a_j, then halve d_0.
        for (std::size_t j = N - 1; j >= 1; --j) {
          const double next = (j + 1 < d.size()) ? d[j + 1] : 0.0;
          d[j - 1] = next + 2.0 * static_cast<double>(j) * a[j];
        }
        d[0] *= 0.5;
        for (double& v : d) v *= 2.0 / h;
      }
      out.coeffs[static_cast<std::size_t>(k)] = d;
    }
    return out;
  }
};

using RawProfile = std::variant<LinearRaw, ExponentialRaw, TanhRaw, DegenerateRaw, ChebyshevRaw>;

inline double eval_raw(const RawProfile& raw, int k, double x) {
  return std::visit([&](const auto& r) { return r.eval(k, x); }, raw);
}

}  // namespace detail

class DensityProfile {
 public:
  DensityProfile(ProfileSpec spec, detail::RawProfile raw, bool corrected)
      : spec_(std::move(spec)), raw_(std::move(raw)), corrected_(corrected) {
    if (corrected_) {
      const double w = spec_.mollifier_width / 6.0;
      const int orders = spec_.zero_sixth_derivative ? 3 : 2;
      std::vector<double> lo, up;
      for (int i = 1; i <= orders; ++i) {
        lo.push_back(eval_raw(raw_, 2 * i, 0.0));
        up.push_back(eval_raw(raw_, 2 * i, spec_.h));
      }
      lower_ = detail::WallBump(w, lo);
      upper_ = detail::WallBump(w, up);
    }
  }

  double h() const { return spec_.h; }
  const ProfileSpec& spec() const { return spec_; }
  ProfileKind kind() const { return spec_.kind; }
  double scale() const { return scale_; }
  bool corrected() const { return corrected_; }

  // k-th derivative of rho at x3, 0 <= k <= 8.
  double eval(int k, double x) const {
    if (k < 0 || k > max_derivative) throw DomainError("derivative order must be in 0..8");
    return scale_ * unscaled(k, x);
  }

  Derivatives derivatives(double x) const {
    Derivatives d{};
    for (int k = 0; k <= max_derivative; ++k) d[static_cast<std::size_t>(k)] = eval(k, x);
    return d;
  }

  // The same profile multiplied by c > 0.
  DensityProfile scaled(double c) const {
    if (!(c > 0.0)) throw DomainError("density scale factor must be positive");
    DensityProfile out = *this;
    out.scale_ *= c;
    out.flags_ = compute_flags_();
    return out;
  }

  // Points that must be part of every flag sample (e.g. a degeneracy point).
  std::vector<double> special_points() const {
    if (spec_.kind == ProfileKind::degenerate) return {spec_.x3_0};
    return {};
  }

  std::vector<double> flag_sample_points() const {
    const std::size_t m = std::max<std::size_t>(spec_.flag_samples, 2);
    std::vector<double> xs(m);
    for (std::size_t i = 0; i < m; ++i) xs[i] = spec_.h * static_cast<double>(i) / static_cast<double>(m - 1);
    xs.back() = spec_.h;
    for (double s : special_points()) xs.push_back(s);
    std::sort(xs.begin(), xs.end());
    return xs;
  }

  const ProfileFlags& flags() const { return flags_; }

  // Must be called once after construction (make_profile does it).
  void finalize() { flags_ = compute_flags_(); }

 private:
  double unscaled(int k, double x) const {
    const double raw = eval_raw(raw_, k, x);
    if (!corrected_) return raw;
    const double h = spec_.h;
    const double delta = spec_.mollifier_width;
    if (x < delta) return raw + lower_.eval(x).c[static_cast<std::size_t>(k)];
    if (x > h - delta) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      return raw + sign * upper_.eval(h - x).c[static_cast<std::size_t>(k)];
    }
    return raw;
  }

  ProfileFlags compute_flags_() const;

  ProfileSpec spec_;
  detail::RawProfile raw_;
  bool corrected_ = false;
  double scale_ = 1.0;
  detail::WallBump lower_;
  detail::WallBump upper_;
  ProfileFlags flags_{};
};

struct ConditionResult {
  std::string name;
  bool passed = false;
  double witness_x3 = 0.0;
  double witness_value = 0.0;
};

struct ValidationReport {
  std::vector<ConditionResult> conditions;  // positive, rt_condition, stabilizing, boundary_conditions
  bool all_passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.passed; });
  }
  const ConditionResult& get(std::string_view name) const {
    for (const auto& c : conditions)
      if (c.name == name) return c;
    throw DomainError("no condition named " + std::string(name));
  }
};

// Checks every condition by dense sampling. Never throws.
inline ValidationReport validate_profile(const DensityProfile& p) {
  const auto xs = p.flag_sample_points();
  const double h = p.h();

  double min_rho = std::numeric_limits<double>::infinity(), min_rho_x = 0.0;
  double max_d1 = -std::numeric_limits<double>::infinity(), max_d1_x = 0.0;
  double min_abs_d1 = std::numeric_limits<double>::infinity(), min_abs_d1_x = 0.0;
  double max_abs_d1 = 0.0, max_abs_d2 = 0.0, max_abs_d4 = 0.0;
  for (double x : xs) {
    const double r = p.eval(0, x);
    const double d1 = p.eval(1, x);
    if (r < min_rho) { min_rho = r; min_rho_x = x; }
    if (d1 > max_d1) { max_d1 = d1; max_d1_x = x; }
    if (std::abs(d1) < min_abs_d1) { min_abs_d1 = std::abs(d1); min_abs_d1_x = x; }
    max_abs_d1 = std::max(max_abs_d1, std::abs(d1));
    if (x > 0.0 && x < h) {
      max_abs_d2 = std::max(max_abs_d2, std::abs(p.eval(2, x)));
      max_abs_d4 = std::max(max_abs_d4, std::abs(p.eval(4, x)));
    }
  }

  constexpr double rel_tol = 1e-12;
  ValidationReport report;
  report.conditions.push_back({"positive", min_rho > 0.0, min_rho_x, min_rho});
  report.conditions.push_back({"rt_condition", max_d1 > 0.0, max_d1_x, max_d1});
  report.conditions.push_back(
      {"stabilizing", min_abs_d1 > rel_tol * max_abs_d1, min_abs_d1_x, min_abs_d1});

  // rho'' and rho'''' at both walls against the interior magnitude.
  double worst_ratio = 0.0, worst_x = 0.0, worst_value = 0.0;
  bool bc_ok = true;
  for (double wall : {0.0, h}) {
    for (int k : {2, 4}) {
      const double v = std::abs(p.eval(k, wall));
      const double scale = (k == 2) ? max_abs_d2 : max_abs_d4;
      const bool ok = v <= rel_tol * scale;
      const double ratio = scale > 0.0 ? v / scale : (v > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (!ok) bc_ok = false;
      if (ratio >= worst_ratio) { worst_ratio = ratio; worst_x = wall; worst_value = v; }
    }
  }
  report.conditions.push_back({"boundary_conditions", bc_ok, worst_x, worst_value});
  return report;
}

inline ProfileFlags DensityProfile::compute_flags_() const {
  const auto r = validate_profile(*this);
  return {r.get("positive").passed, r.get("rt_condition").passed, r.get("stabilizing").passed,
          r.get("boundary_conditions").passed};
}

namespace detail {

inline void check_spec(const ProfileSpec& s) {
  if (!(s.h > 0.0)) throw ConfigError("profile: h must be positive");
  if (!(s.rho0 > 0.0) && s.kind != ProfileKind::tabulated) throw ConfigError("profile: rho0 must be positive");
  if (!(s.mollifier_width > 0.0 && s.mollifier_width < s.h / 4.0))
    throw ConfigError("profile: mollifier_width must lie in (0, h/4)");
  if (s.kind == ProfileKind::tanh_layer && !(s.layer_width > 0.0))
    throw ConfigError("profile: layer_width must be positive");
  if (s.kind == ProfileKind::degenerate) {
    const double d = s.degenerate_halfwidth;
    if (!(d > 0.0 && s.x3_0 - d > 0.0 && s.x3_0 + d < s.h))
      throw ConfigError("profile: degenerate interval (x3_0 - delta, x3_0 + delta) must lie inside (0, h)");
    if (!(s.tau > 0.0)) throw ConfigError("profile: tau must be positive");
  }
}

}  // namespace detail

inline DensityProfile make_profile(const ProfileSpec& spec) {
  detail::check_spec(spec);
  detail::RawProfile raw;
  bool corrected = false;
  switch (spec.kind) {
    case ProfileKind::linear:
      raw = detail::LinearRaw{spec.rho0, spec.slope_or_rate};
      corrected = true;
      break;
    case ProfileKind::exponential:
      raw = detail::ExponentialRaw{spec.rho0, spec.slope_or_rate};
      corrected = true;
      break;
    case ProfileKind::tanh_layer:
      raw = detail::TanhRaw{spec.rho0, spec.slope_or_rate, spec.layer_center, spec.layer_width};
      corrected = true;
      break;
    case ProfileKind::degenerate:
      raw = detail::DegenerateRaw{spec.rho0, spec.slope_or_rate, spec.tau, spec.x3_0};
      break;
    case ProfileKind::tabulated:
      raw = detail::ChebyshevRaw::fit(spec.table, spec.h);
      break;
  }
  DensityProfile p(spec, raw, corrected);

  if (corrected) {
    // The corrector must keep rho > 0 and the sign of rho' inside both strips.
    const double delta = spec.mollifier_width;
    const int m = 400;
    for (int i = 0; i <= m; ++i) {
      for (double x : {delta * i / m, spec.h - delta * i / m}) {
        if (!(p.eval(0, x) > 0.0))
          throw ConstructionError("boundary corrector breaks positivity of rho at x3 = " + std::to_string(x));
        const double raw_slope = detail::eval_raw(raw, 1, x);
        const double slope = p.eval(1, x);
        if ((raw_slope > 0.0 && !(slope > 0.0)) || (raw_slope < 0.0 && !(slope < 0.0)))
          throw ConstructionError("boundary corrector flips the sign of rho' at x3 = " + std::to_string(x));
      }
    }
  }
  p.finalize();
  return p;
}

struct PhysicalParams {
  double g = 1.0;
  double mu = 1.0;
  double eps = 0.0;

  void check() const {
    if (!(g > 0.0)) throw ConfigError("params: g must be positive");
    if (!(mu > 0.0)) throw ConfigError("params: mu must be positive");
    if (!(eps >= 0.0)) throw ConfigError("params: eps must be nonnegative");
  }
};

// Hydrostatic pressure with P(0) = 0.
class PressureProfile {
 public:
  PressureProfile(DensityProfile profile, PhysicalParams params)
      : profile_(std::move(profile)), params_(params) {}

  double derivative(double x) const {
    const double r = profile_.eval(0, x), d1 = profile_.eval(1, x), d2 = profile_.eval(2, x),
                 d3 = profile_.eval(3, x);
    // (rho'' - rho'^2 / rho)'
    const double quantum = d3 - (2.0 * d1 * d2 / r - d1 * d1 * d1 / (r * r));
    return params_.eps * params_.eps * quantum - params_.g * r;
  }

  double value(double x) const {
    if (x == 0.0) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate([this](double s) { return derivative(s); }, 0.0, x, 15,
                                                1e-13);
  }

  const DensityProfile& profile() const { return profile_; }

 private:
  DensityProfile profile_;
  PhysicalParams params_;
};

inline PressureProfile hydrostatic_pressure(const DensityProfile& p, const PhysicalParams& params) {
  if (!p.flags().positive) throw DomainError("hydrostatic pressure needs a positive density profile");
  return PressureProfile(p, params);
}

// Nodal samples of rho and its first three derivatives.
struct ProfileSamples {
  Eigen::VectorXd rho, d1, d2, d3;
};

template <typename Grid>
ProfileSamples sample_profile(const DensityProfile& p, const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.n());
  ProfileSamples s{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.nodes()(i);
    s.rho(i) = p.eval(0, x);
    s.d1(i) = p.eval(1, x);
    s.d2(i) = p.eval(2, x);
    s.d3(i) = p.eval(3, x);
  }
  return s;
}

}  // namespace qrt
