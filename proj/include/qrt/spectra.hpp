#pragma once

// Stability threshold, linearized normal-mode pencil and dispersion scans.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrt/detail/parallel.hpp"
#include "qrt/detail/eig.hpp"
#include "qrt/energetics.hpp"
#include "qrt/error.hpp"
#include "qrt/profiles.hpp"
#include "qrt/slabgrid.hpp"

namespace qrt {

struct ThresholdResult {
  double eps_c = 0.0;
  double a3 = 0.0;
  Eigen::VectorXd phi_star;  // nodal values, unit weighted mass int rho' phi^2 = 1
  std::size_t n = 0;
  Scheme scheme = Scheme::chebyshev_lobatto;
};

enum class ThresholdMode { strict, permissive };

// eps_c = sqrt(g a3), a3 the supremum of int rho' phi^2 / int (rho'^2/rho) phi'^2.
// Permissive mode skips the stabilizing check so that degenerate profiles can
// be probed; the mass must still be nonnegative.
inline ThresholdResult critical_epsilon(const DensityProfile& p, double g, const SlabGrid& grid,
                                        ThresholdMode mode = ThresholdMode::strict) {
  if (!(g > 0.0)) throw ConfigError("critical_epsilon: g must be positive");
  const auto& f = p.flags();
  if (!f.positive) throw ThresholdUndefined("threshold undefined: density profile is not positive");
  if (!f.rt_condition) throw ThresholdUndefined("threshold undefined: RT condition fails (rho' <= 0 everywhere)");
  if (mode == ThresholdMode::strict && !f.stabilizing)
    throw ThresholdUndefined(
        "threshold undefined: stabilizing condition inf |rho'| > 0 fails; for degenerate profiles "
        "(rho' vanishing at an interior point) the quotient supremum a3 is infinite");
  for (double x : p.flag_sample_points())
    if (p.eval(1, x) < 0.0)
      throw ThresholdUndefined("threshold undefined: rho' changes sign, the mass form int rho' phi^2 is indefinite");

  const auto pencil = solve_threshold_pencil(p, grid);
  ThresholdResult out;
  out.a3 = pencil.a3;
  out.eps_c = std::sqrt(g * pencil.a3);
  out.phi_star = pencil.phi;
  out.n = grid.n();
  out.scheme = grid.scheme();
  return out;
}

struct EpsilonBounds {
  double general = 0.0;
  std::optional<double> linear;
};

// (h/pi) sqrt(g ||rho'||_inf ||rho/rho'^2||_inf), and (h/pi) sqrt(g ||rho||_inf / alpha)
// when rho' is constant.
inline EpsilonBounds epsilon_upper_bound(const DensityProfile& p, double g) {
  double max_d1 = 0.0, max_ratio = 0.0, max_rho = 0.0;
  double min_d1 = std::numeric_limits<double>::infinity(), top_d1 = -std::numeric_limits<double>::infinity();
  for (double x : p.flag_sample_points()) {
    const double r = p.eval(0, x), d1 = p.eval(1, x);
    max_d1 = std::max(max_d1, std::abs(d1));
    max_ratio = std::max(max_ratio, r / (d1 * d1));
    max_rho = std::max(max_rho, r);
    min_d1 = std::min(min_d1, d1);
    top_d1 = std::max(top_d1, d1);
  }
  const double h = p.h();
  EpsilonBounds out;
  out.general = h / std::numbers::pi * std::sqrt(g * max_d1 * max_ratio);
  if (top_d1 > 0.0 && top_d1 - min_d1 <= 1e-10 * top_d1)
    out.linear = h / std::numbers::pi * std::sqrt(g * max_rho / top_d1);
  return out;
}

// Normal-mode system B x_t = A x for one horizontal wavenumber.
//
// A, B act on nodal values [rho_pert; v3; w3] (w3 the vertical vorticity) and
// for kappa = 0 on [rho_pert; v_h]. Wall rows carry the conditions
// rho_pert = rho_pert'' = 0, v3 = v3'' = 0, w3' = 0 (v_h' = 0) with zero B rows.
// The conditions are then eliminated: x = P y, and Ar, Br are the interior
// rows of A P, B P. Br is invertible, so the reduced pencil has no infinite
// eigenvalues.
struct ModeOperator {
  double kappa = 0.0;
  std::size_t n = 0;
  bool degenerate = false;  // kappa == 0 branch
  Eigen::MatrixXd A, B;
  Eigen::MatrixXd P, Ar, Br;
  std::vector<Eigen::Index> free_rows;  // nodal index of each coordinate of y
  // Sizes of the decoupled groups of y: {rho_pert + v3, w3}, or {rho_pert, v_h}.
  std::array<Eigen::Index, 2> groups{0, 0};

  Eigen::Index total_size() const { return A.rows(); }
  Eigen::Index reduced_size() const { return Ar.rows(); }
};

namespace detail {

struct FieldLayout {
  std::vector<BcKind> kinds;
  Eigen::MatrixXd Z;
};

inline std::vector<Eigen::Index> interior_rows(Eigen::Index n, const std::vector<FieldLayout>& fields) {
  std::vector<Eigen::Index> rows;
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const auto m = static_cast<Eigen::Index>(fields[f].kinds.size());
    for (Eigen::Index i = m; i < n - m; ++i) rows.push_back(static_cast<Eigen::Index>(f) * n + i);
  }
  return rows;
}

inline void finish_operator(ModeOperator& op, const SlabGrid& grid, const std::vector<FieldLayout>& fields) {
  const auto n = static_cast<Eigen::Index>(grid.n());
  Eigen::Index free = 0;
  for (const auto& f : fields) free += f.Z.cols();
  op.P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(fields.size()) * n, free);
  Eigen::Index col = 0;
  for (std::size_t f = 0; f < fields.size(); ++f) {
    op.P.block(static_cast<Eigen::Index>(f) * n, col, n, fields[f].Z.cols()) = fields[f].Z;
    col += fields[f].Z.cols();
  }
  // Wall rows.
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const auto base = static_cast<Eigen::Index>(f) * n;
    const auto m = static_cast<Eigen::Index>(fields[f].kinds.size());
    for (Eigen::Index j = 0; j < m; ++j) {
      const BcKind kind = fields[f].kinds[static_cast<std::size_t>(j)];
      for (auto [row, node] : {std::pair{base + j, Eigen::Index{0}}, std::pair{base + n - 1 - j, n - 1}}) {
        op.A.row(row).setZero();
        op.B.row(row).setZero();
        op.A.block(row, base, 1, n) = condition_row(grid, kind, node);
      }
    }
  }
  const auto rows = interior_rows(n, fields);
  op.free_rows = rows;
  const auto r = static_cast<Eigen::Index>(rows.size());
  op.Ar.resize(r, free);
  op.Br.resize(r, free);
  for (Eigen::Index i = 0; i < r; ++i) {
    op.Ar.row(i) = op.A.row(rows[static_cast<std::size_t>(i)]) * op.P;
    op.Br.row(i) = op.B.row(rows[static_cast<std::size_t>(i)]) * op.P;
  }
}

}  // namespace detail

inline ModeOperator linearized_operator(const DensityProfile& p, const PhysicalParams& params, double kappa,
                                        const SlabGrid& grid) {
  params.check();
  if (!std::isfinite(kappa)) throw DomainError("kappa must be finite");
  const auto n = static_cast<Eigen::Index>(grid.n());
  const ProfileCoefficients c(p, grid);
  const Eigen::MatrixXd& D1 = grid.D(1);
  const Eigen::MatrixXd& D2 = grid.D(2);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const double k2 = kappa * kappa;
  const double mu = params.mu;

  ModeOperator op;
  op.kappa = kappa;
  op.n = grid.n();
  const std::vector<BcKind> even{BcKind::dirichlet, BcKind::second_derivative};
  const std::vector<BcKind> slip{BcKind::neumann};
  detail::FieldLayout rho_f{even, wall_basis(grid, even)};

  if (kappa == 0.0) {
    // rho_t = 0 and rho v_h,t = mu v_h''; v3 vanishes.
    op.degenerate = true;
    op.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    op.B = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    op.B.topLeftCorner(n, n) = I;
    op.A.bottomRightCorner(n, n) = mu * D2;
    op.B.bottomRightCorner(n, n) = c.rho.asDiagonal();
    detail::FieldLayout vh_f{slip, wall_basis(grid, slip)};
    op.groups = {rho_f.Z.cols(), vh_f.Z.cols()};
    detail::finish_operator(op, grid, {rho_f, vh_f});
    return op;
  }

  const Eigen::MatrixXd L = D2 - k2 * I;
  op.A = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  op.B = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  auto blk = [n](Eigen::MatrixXd& M, Eigen::Index i, Eigen::Index j) { return M.block(i * n, j * n, n, n); };

  // rho_t = -rho' v3
  blk(op.B, 0, 0) = I;
  blk(op.A, 0, 1) = -Eigen::MatrixXd(c.d1.asDiagonal());

  // (rho D^2 + rho' D - k^2 rho) v3_t = mu L^2 v3 + k^2 F3,
  // F3 = g rho_pert - eps^2 [q rho_pert + gamma^2 D rho_pert - gamma L rho_pert]
  const double eps2 = params.eps * params.eps;
  blk(op.B, 1, 1) = c.rho.asDiagonal() * L + c.d1.asDiagonal() * D1;
  blk(op.A, 1, 1) = mu * (L * L);
  const Eigen::VectorXd gamma2 = c.gamma.cwiseProduct(c.gamma);
  blk(op.A, 1, 0) = k2 * (params.g * I - eps2 * (Eigen::MatrixXd(c.q.asDiagonal()) + gamma2.asDiagonal() * D1 -
                                                 c.gamma.asDiagonal() * L));

  // rho w3_t = mu L w3
  blk(op.B, 2, 2) = c.rho.asDiagonal();
  blk(op.A, 2, 2) = mu * L;

  detail::FieldLayout v_f{even, rho_f.Z};
  detail::FieldLayout w_f{slip, wall_basis(grid, slip)};
  op.groups = {rho_f.Z.cols() + v_f.Z.cols(), w_f.Z.cols()};
  detail::finish_operator(op, grid, {rho_f, v_f, w_f});
  return op;
}

enum class Branch { coupled, vorticity, all };

struct ModeEigen {
  std::complex<double> sigma;
  Eigen::VectorXcd vector;  // nodal state vector (size total_size()), empty unless requested
};

namespace detail {

// Eigenvalues lambda of (Ar - s Br)^{-1} Br, sigma = s + 1/lambda. s = 0
// unless Ar is singular (kappa = 0, or rho' vanishing at a node), then s = -1.
inline std::vector<ModeEigen> solve_group(const ModeOperator& op, Eigen::Index start, Eigen::Index size,
                                          bool want_vectors, double h, double mu) {
  Eigen::MatrixXd Br = op.Br.block(start, start, size, size);
  Eigen::MatrixXd Ar = op.Ar.block(start, start, size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double r = std::max(Ar.row(i).cwiseAbs().maxCoeff(), Br.row(i).cwiseAbs().maxCoeff());
    if (r > 0.0) {
      Ar.row(i) /= r;
      Br.row(i) /= r;
    }
  }
  double shift = 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Ar);
  if (!(lu.rcond() > 1e-14)) {
    shift = -1.0;
    lu.compute(Ar - shift * Br);
    if (!(lu.rcond() > 1e-14)) throw NumericalFailure("shifted operator is singular");
  }
  const auto res = eig(lu.solve(Br), want_vectors);
  const double cap = 10.0 * mu * std::pow(static_cast<double>(op.n), 4) / std::pow(h, 4);
  std::vector<ModeEigen> out;
  for (Eigen::Index i = 0; i < size; ++i) {
    const std::complex<double> lambda = res.values(i);
    if (lambda == 0.0) continue;  // infinite sigma
    const std::complex<double> s = shift + 1.0 / lambda;
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()) || std::abs(s) > cap) continue;
    ModeEigen m;
    m.sigma = s;
    if (want_vectors) {
      m.vector = op.P.middleCols(start, size).cast<std::complex<double>>() * res.vectors.col(i);
      const double nrm = m.vector.norm();
      if (nrm > 0.0) m.vector /= nrm;
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace detail

// Eigenvalues of largest real part after removing resolution-limited
// (|sigma| > 10 mu n^4 / h^4) modes, sorted by decreasing real part (ties by
// imaginary part). Vectors are nodal, unit 2-norm.
inline std::vector<ModeEigen> mode_eigenpairs(const ModeOperator& op, std::size_t count, double h, double mu,
                                              Branch branch = Branch::all, bool want_vectors = false) {
  std::vector<ModeEigen> all;
  if (branch != Branch::vorticity) all = detail::solve_group(op, 0, op.groups[0], want_vectors, h, mu);
  if (branch != Branch::coupled) {
    auto v = detail::solve_group(op, op.groups[0], op.groups[1], want_vectors, h, mu);
    all.insert(all.end(), v.begin(), v.end());
  }
  std::sort(all.begin(), all.end(), [](const ModeEigen& a, const ModeEigen& b) {
    if (a.sigma.real() != b.sigma.real()) return a.sigma.real() > b.sigma.real();
    return a.sigma.imag() > b.sigma.imag();
  });
  if (all.size() > count) all.resize(count);
  return all;
}

inline std::vector<std::complex<double>> mode_spectrum(const ModeOperator& op, std::size_t count, double h, double mu,
                                                       Branch branch = Branch::all) {
  std::vector<std::complex<double>> out;
  for (const auto& m : mode_eigenpairs(op, count, h, mu, branch)) out.push_back(m.sigma);
  return out;
}

// Largest growth rate of the coupled (density, vertical velocity) group; the
// vorticity group is purely diffusive.
inline double leading_growth_rate(const DensityProfile& p, const PhysicalParams& params, double kappa,
                                  const SlabGrid& grid) {
  const auto op = linearized_operator(p, params, kappa, grid);
  const auto s = mode_spectrum(op, 1, grid.h(), params.mu, kappa == 0.0 ? Branch::all : Branch::coupled);
  if (s.empty()) throw NumericalFailure("no finite eigenvalue survived filtering at kappa = " + std::to_string(kappa));
  return s.front().real();
}

struct DispersionResult {
  std::vector<double> kappas;
  std::vector<std::vector<std::complex<double>>> leading;  // per kappa, sorted by real part
  std::vector<double> max_growth;                          // Re of the leading eigenvalue
  std::optional<double> kappa_c;
  PhysicalParams params;
  std::size_t n = 0;

  double max_over_kappa() const { return *std::max_element(max_growth.begin(), max_growth.end()); }
};

inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw ConfigError("log_spaced: need 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

inline DispersionResult dispersion_scan(const DensityProfile& p, const PhysicalParams& params,
                                        const std::vector<double>& kappas, const SlabGrid& grid,
                                        std::size_t count = 4, std::size_t jobs = 1) {
  params.check();
  if (kappas.empty()) throw ConfigError("dispersion_scan: empty kappa grid");
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (!(kappas[i] > 0.0)) throw ConfigError("dispersion_scan: kappa values must be positive");
    if (i > 0 && !(kappas[i] > kappas[i - 1])) throw ConfigError("dispersion_scan: kappa grid must increase");
  }
  DispersionResult out;
  out.kappas = kappas;
  out.params = params;
  out.n = grid.n();
  out.leading.resize(kappas.size());
  out.max_growth.resize(kappas.size());
  detail::parallel_for(kappas.size(), jobs, [&](std::size_t i) {
    const auto op = linearized_operator(p, params, kappas[i], grid);
    out.leading[i] = mode_spectrum(op, count, grid.h(), params.mu);
    out.max_growth[i] = out.leading[i].empty() ? -std::numeric_limits<double>::infinity() : out.leading[i][0].real();
  });
  // First sign change of the leading growth rate, linearly interpolated.
  for (std::size_t i = 1; i < kappas.size(); ++i) {
    const double a = out.max_growth[i - 1], b = out.max_growth[i];
    if ((a > 0.0) != (b > 0.0)) {
      out.kappa_c = kappas[i - 1] + (kappas[i] - kappas[i - 1]) * a / (a - b);
      break;
    }
  }
  return out;
}

struct EpsilonBracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct SpectralCrossing {
  double eps_cross = 0.0;
  std::size_t evaluations = 0;  // eigen-solves performed
  std::size_t iterations = 0;
};

// Bisection on the sign of max_kappa Re sigma(eps); stops at relative width 1e-3.
inline SpectralCrossing find_critical_epsilon_spectral(const DensityProfile& p, PhysicalParams params,
                                                       const SlabGrid& grid, const std::vector<double>& kappas,
                                                       EpsilonBracket bracket, double rel_tol = 1e-3) {
  if (!(bracket.lo >= 0.0 && bracket.hi > bracket.lo)) throw ConfigError("bracket must satisfy 0 <= lo < hi");
  SpectralCrossing out;
  // Visit wavenumbers starting from the last one found unstable; stop at the
  // first positive growth rate.
  std::vector<std::size_t> order(kappas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto unstable = [&](double eps) {
    params.eps = eps;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const double r = leading_growth_rate(p, params, kappas[order[pos]], grid);
      ++out.evaluations;
      if (r > best) {
        best = r;
        best_pos = pos;
      }
      if (r > 0.0) break;
    }
    std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_pos),
                order.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1);
    return best > 0.0;
  };
  const bool lo_unstable = unstable(bracket.lo);
  const bool hi_unstable = unstable(bracket.hi);
  if (lo_unstable == hi_unstable)
    throw BracketError(std::string("no sign change of the maximal growth rate in [") + std::to_string(bracket.lo) +
                       ", " + std::to_string(bracket.hi) + "]: both ends are " +
                       (lo_unstable ? "unstable" : "stable"));
  double lo = bracket.lo, hi = bracket.hi;  // lo unstable, hi stable (or swapped)
  const bool increasing_stability = lo_unstable;
  while ((hi - lo) > rel_tol * 0.5 * (hi + lo)) {
    const double mid = 0.5 * (lo + hi);
    const bool u = unstable(mid);
    if (u == increasing_stability)
      lo = mid;
    else
      hi = mid;
    ++out.iterations;
  }
  out.eps_cross = 0.5 * (lo + hi);
  return out;
}

struct BychkovRate {
  double sigma = 0.0;  // growth rate, or the magnitude of the imaginary branch when stable
  bool stable = false;
};

// sigma = sqrt(g gamma - (eps gamma kappa)^2).
inline BychkovRate bychkov_growth_rate(double g, double gamma, double eps, double kappa) {
  if (!(gamma > 0.0)) throw DomainError("bychkov_growth_rate: gamma must be positive");
  const double rad = g * gamma - std::pow(eps * gamma * kappa, 2);
  if (rad >= 0.0) return {std::sqrt(rad), false};
  return {std::sqrt(-rad), true};
}

// Wavenumber at which the Bychkov radicand vanishes: eps gamma kappa = sqrt(g gamma).
inline double bychkov_cutoff(double g, double gamma, double eps) {
  if (!(gamma > 0.0) || !(eps > 0.0)) throw DomainError("bychkov_cutoff: gamma and eps must be positive");
  return std::sqrt(g / gamma) / eps;
}

}  // namespace qrt
