#pragma once

// Decay-exponent algebra: theta, s = 1 - theta, a = theta + 2/3 and the
// inequalities they have to satisfy.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "qrt/error.hpp"

namespace qrt {

// Smaller root of 3 theta^2 - 19 theta + 1, (19 - sqrt(349)) / 6, written
// without the cancellation.
inline double theta_max() { return 2.0 / (19.0 + std::sqrt(349.0)); }

// Strictness margin for the double-precision comparisons: lhs > rhs is
// reported only when lhs - rhs exceeds margin * max(1, |lhs|, |rhs|).
inline constexpr double exponent_margin = 1e-14;

enum class ExponentCheck {
  ab1,          // (a - 1)(1 + s) < 2 a s / 3 - 1
  ab21,         // 3a > 2
  a_4s,         // a(4 + s) > 3s
  three_a,      // 3a > 2
  a_9_4s,       // a(9 + 4s) > 4(1 + s)
  a_2s,         // a(2 + s) > 1 + s
  three_a_1_2s  // 3a(1 + 2s) > (2 + s)(1 + s)
};

inline constexpr std::array<ExponentCheck, 7> all_exponent_checks{
    ExponentCheck::ab1,    ExponentCheck::ab21, ExponentCheck::a_4s,        ExponentCheck::three_a,
    ExponentCheck::a_9_4s, ExponentCheck::a_2s, ExponentCheck::three_a_1_2s};

inline std::string_view to_string(ExponentCheck c) {
  switch (c) {
    case ExponentCheck::ab1: return "ab1";
    case ExponentCheck::ab21: return "ab21";
    case ExponentCheck::a_4s: return "a(4+s)>3s";
    case ExponentCheck::three_a: return "3a>2";
    case ExponentCheck::a_9_4s: return "a(9+4s)>4(1+s)";
    case ExponentCheck::a_2s: return "a(2+s)>1+s";
    case ExponentCheck::three_a_1_2s: return "3a(1+2s)>(2+s)(1+s)";
  }
  return "?";
}

struct ExponentReport {
  double theta = 0.0;
  double s = 0.0;
  double a = 0.0;
  double theta_max = 0.0;
  double quadratic = 0.0;  // 3 theta^2 - 19 theta + 1
  bool ab1_direct = false;
  bool ab1_quadratic = false;
  bool exact = false;
  std::array<bool, 7> checks{};

  bool check(ExponentCheck c) const { return checks[static_cast<std::size_t>(c)]; }
  bool all() const {
    for (bool b : checks)
      if (!b) return false;
    return true;
  }
  // The five inequalities used in the decay argument (everything but ab1, ab21).
  bool decay_inequalities() const {
    for (std::size_t i = 2; i < checks.size(); ++i)
      if (!checks[i]) return false;
    return true;
  }
};

namespace detail {

inline bool greater(double lhs, double rhs) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return lhs - rhs > exponent_margin * scale;
}

using Rational = boost::multiprecision::cpp_rational;

// Exact value of a finite double.
inline Rational to_rational(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mant = static_cast<long long>(std::ldexp(m, 53));
  Rational r(mant);
  e -= 53;
  const Rational two(2);
  Rational p(1);
  for (int i = 0; i < std::abs(e); ++i) p *= two;
  return e >= 0 ? Rational(r * p) : Rational(r / p);
}

template <class T>
struct Inequalities {
  T lhs[7];
  T rhs[7];
};

template <class T>
Inequalities<T> inequality_sides(const T& a, const T& s) {
  const T one(1), two(2), three(3), four(4), nine(9);
  return {{(a - one) * (one + s), three * a, a * (four + s), three * a, a * (nine + four * s), a * (two + s),
           three * a * (one + two * s)},
          {two * a * s / three - one, two, three * s, two, four * (one + s), one + s, (two + s) * (one + s)}};
}

}  // namespace detail

// Fills every check in double precision with the strictness margin, or
// exactly in rational arithmetic when exact is set. ab1 is evaluated in its
// direct form and as 3 theta^2 - 19 theta + 1 > 0; the two must agree.
inline ExponentReport derive_exponents(double theta, bool exact = false) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1), got " + std::to_string(theta));
  ExponentReport r;
  r.theta = theta;
  r.s = 1.0 - theta;
  r.a = theta + 2.0 / 3.0;
  r.theta_max = theta_max();
  r.quadratic = 3.0 * theta * theta - 19.0 * theta + 1.0;
  r.exact = exact;
  if (exact) {
    using detail::Rational;
    const Rational t = detail::to_rational(theta);
    const Rational s = Rational(1) - t, a = t + Rational(2, 3);
    const auto sides = detail::inequality_sides(a, s);
    // ab1 has lhs < rhs; the rest have lhs > rhs.
    r.ab1_direct = sides.lhs[0] < sides.rhs[0];
    r.checks[0] = r.ab1_direct;
    for (std::size_t i = 1; i < 7; ++i) r.checks[i] = sides.lhs[i] > sides.rhs[i];
    r.ab1_quadratic = Rational(3) * t * t - Rational(19) * t + Rational(1) > 0;
  } else {
    const auto sides = detail::inequality_sides(r.a, r.s);
    r.ab1_direct = detail::greater(sides.rhs[0], sides.lhs[0]);
    r.checks[0] = r.ab1_direct;
    for (std::size_t i = 1; i < 7; ++i) r.checks[i] = detail::greater(sides.lhs[i], sides.rhs[i]);
    // The direct form differs from the quadratic by a factor 1/9.
    r.ab1_quadratic = detail::greater(r.quadratic / 9.0, 0.0);
  }
  if (r.ab1_direct != r.ab1_quadratic)
    throw NumericalFailure("ab1 direct and quadratic forms disagree at theta = " + std::to_string(theta));
  return r;
}

// 0 < theta < theta_max, strict. The exact variant compares against the root
// through the sign of the quadratic (the other root exceeds 1).
inline bool theta_admissible(double theta, bool exact = false) {
  if (!(theta > 0.0)) return false;
  if (!exact) return theta < theta_max();
  if (!(theta < 1.0)) return false;
  const auto t = detail::to_rational(theta);
  return detail::Rational(3) * t * t - detail::Rational(19) * t + detail::Rational(1) > 0;
}

}  // namespace qrt
