#pragma once

// Potential-energy functionals for single horizontal modes, the Upsilon
// identity, weighted Rayleigh quotients and the quantum stress split.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrt/error.hpp"
#include "qrt/profiles.hpp"
#include "qrt/slabgrid.hpp"

namespace qrt {

using cplx = std::complex<double>;

struct ScalarField1D {
  ScalarField1D(const SlabGrid& g, Eigen::VectorXcd v, BcKind b = BcKind::dirichlet)
      : grid(&g), values(std::move(v)), bc(b) {
    if (values.size() != static_cast<Eigen::Index>(g.n()))
      throw ShapeError("field length " + std::to_string(values.size()) + " does not match grid size " +
                       std::to_string(g.n()));
  }
  ScalarField1D(const SlabGrid& g, const Eigen::VectorXd& v, BcKind b = BcKind::dirichlet)
      : ScalarField1D(g, Eigen::VectorXcd(v.cast<cplx>()), b) {}

  template <typename F>
  static ScalarField1D from_function(const SlabGrid& g, F&& f, BcKind b = BcKind::dirichlet) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(g.n()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f(g.nodes()(i));
    return {g, std::move(v), b};
  }

  const SlabGrid* grid;
  Eigen::VectorXcd values;
  BcKind bc;
};

// rho and the coefficient combinations used by every functional, at the nodes.
struct ProfileCoefficients {
  Eigen::VectorXd rho, d1, d2, d3;
  Eigen::VectorXd weight;    // rho'^2 / rho
  Eigen::VectorXd q;         // (rho''/rho)'
  Eigen::VectorXd gamma;     // rho'/rho

  ProfileCoefficients(const DensityProfile& p, const SlabGrid& g) {
    const auto s = sample_profile(p, g);
    rho = s.rho;
    d1 = s.d1;
    d2 = s.d2;
    d3 = s.d3;
    weight = d1.array().square() / rho.array();
    q = d3.array() / rho.array() - d2.array() * d1.array() / rho.array().square();
    gamma = d1.array() / rho.array();
  }
};

struct EnergyReport {
  double E_L = 0.0;
  double E = 0.0;
  double h1_sq = 0.0;
  double kinetic = 0.0;
  double dissipation = 0.0;
  std::vector<std::pair<double, double>> neg_norms;  // (s, value)
};

namespace detail {

inline Eigen::VectorXd abs2(const Eigen::VectorXcd& v) { return v.cwiseAbs2(); }

inline void require_stabilizing(const DensityProfile& p, const char* what) {
  if (!p.flags().stabilizing)
    throw DomainError(std::string(what) +
                      ": stabilizing condition fails (rho' vanishes), the functional is outside its "
                      "coercivity domain");
}

inline void check_grid(const ScalarField1D& r, const SlabGrid& g) {
  if (r.grid->n() != g.n()) throw ShapeError("field and grid sizes differ");
}

}  // namespace detail

// eps^2 ||(rho'/sqrt(rho)) grad r||^2 - g int rho' |r|^2, per unit horizontal area.
inline double energy_EL(const ScalarField1D& r, double kappa, const DensityProfile& p, const PhysicalParams& params,
                        bool strict = false) {
  const SlabGrid& g = *r.grid;
  const ProfileCoefficients c(p, g);
  if (strict && c.d1.minCoeff() < 0.0)
    throw DomainError("energy_EL: rho' < 0 somewhere, sqrt(rho') undefined in strict mode");
  const Eigen::VectorXcd Dr = g.D(1) * r.values;
  const Eigen::VectorXd grad2 = detail::abs2(Dr) + kappa * kappa * detail::abs2(r.values);
  const double eps2 = params.eps * params.eps;
  return eps2 * quadrature(g, Eigen::VectorXd(c.weight.cwiseProduct(grad2))) -
         params.g * quadrature(g, Eigen::VectorXd(c.d1.cwiseProduct(detail::abs2(r.values))));
}

// eps^2 ||grad r / sqrt(rho)||^2 + int ((eps^2 (rho''/rho)' - g) / rho') r^2.
inline double energy_E(const ScalarField1D& r, double kappa, const DensityProfile& p, const PhysicalParams& params) {
  detail::require_stabilizing(p, "energy_E");
  const SlabGrid& g = *r.grid;
  const ProfileCoefficients c(p, g);
  const Eigen::VectorXcd Dr = g.D(1) * r.values;
  const Eigen::VectorXd grad2 = detail::abs2(Dr) + kappa * kappa * detail::abs2(r.values);
  const double eps2 = params.eps * params.eps;
  const Eigen::VectorXd potential = (eps2 * c.q.array() - params.g) / c.d1.array();
  return eps2 * quadrature(g, Eigen::VectorXd(grad2.cwiseQuotient(c.rho))) +
         quadrature(g, Eigen::VectorXd(potential.cwiseProduct(detail::abs2(r.values))));
}

struct UpsilonReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double E = 0.0;
  double EL_of_upsilon = 0.0;
  double energy_residual = 0.0;
};

inline double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

// int |grad r|^2/rho + ((rho''/rho)'/rho') r^2  versus  int (rho'^2/rho) |grad Y|^2, Y = r/rho'.
inline UpsilonReport upsilon_identity_residual(const ScalarField1D& r, double kappa, const DensityProfile& p,
                                               const PhysicalParams& params) {
  detail::require_stabilizing(p, "upsilon_identity_residual");
  const SlabGrid& g = *r.grid;
  const ProfileCoefficients c(p, g);
  const double k2 = kappa * kappa;

  const Eigen::VectorXcd Dr = g.D(1) * r.values;
  const Eigen::VectorXd lhs_density = (detail::abs2(Dr) + k2 * detail::abs2(r.values)).cwiseQuotient(c.rho) +
                                      c.q.cwiseQuotient(c.d1).cwiseProduct(detail::abs2(r.values));
  const Eigen::VectorXcd upsilon = r.values.cwiseQuotient(c.d1.cast<cplx>());
  const Eigen::VectorXcd Du = g.D(1) * upsilon;
  const Eigen::VectorXd rhs_density = c.weight.cwiseProduct(detail::abs2(Du) + k2 * detail::abs2(upsilon));

  UpsilonReport out;
  out.lhs = quadrature(g, lhs_density);
  out.rhs = quadrature(g, rhs_density);
  out.residual = (out.lhs == 0.0 && out.rhs == 0.0) ? 0.0 : relative_gap(out.lhs, out.rhs);
  out.E = energy_E(r, kappa, p, params);
  out.EL_of_upsilon = energy_EL(ScalarField1D(g, upsilon), kappa, p, params);
  out.energy_residual = (out.E == 0.0 && out.EL_of_upsilon == 0.0) ? 0.0 : relative_gap(out.E, out.EL_of_upsilon);
  return out;
}

inline double rayleigh_quotient_1d(const ScalarField1D& phi, const DensityProfile& p) {
  const SlabGrid& g = *phi.grid;
  const ProfileCoefficients c(p, g);
  const Eigen::VectorXcd Dphi = g.D(1) * phi.values;
  const double num = quadrature(g, Eigen::VectorXd(c.d1.cwiseProduct(detail::abs2(phi.values))));
  const double den = quadrature(g, Eigen::VectorXd(c.weight.cwiseProduct(detail::abs2(Dphi))));
  if (!(den > 0.0)) throw DomainError("rayleigh_quotient_1d: degenerate quotient (zero denominator)");
  return num / den;
}

// Reduced quotient of the divergence-free witness field at horizontal frequency k.
inline double witness_quotient(const ScalarField1D& phi, double k, const DensityProfile& p) {
  if (!(k > 0.0)) throw DomainError("witness_quotient: k must be positive");
  const SlabGrid& g = *phi.grid;
  const ProfileCoefficients c(p, g);
  const Eigen::VectorXcd Dphi = g.D(1) * phi.values;
  const double num = quadrature(g, Eigen::VectorXd(c.d1.cwiseProduct(detail::abs2(phi.values))));
  const double den = quadrature(g, Eigen::VectorXd(c.weight.cwiseProduct(detail::abs2(Dphi))));
  const double extra = quadrature(g, Eigen::VectorXd(c.weight.cwiseProduct(detail::abs2(phi.values))));
  if (!(den > 0.0)) throw DomainError("witness_quotient: degenerate quotient (zero denominator)");
  return num / (den + 8.0 / (k * k) * extra);
}

// 8 k^-2 ||w phi||^2 / ||w phi'||^2, the relative size of the witness correction.
inline double witness_correction_ratio(const ScalarField1D& phi, double k, const DensityProfile& p) {
  const SlabGrid& g = *phi.grid;
  const ProfileCoefficients c(p, g);
  const Eigen::VectorXcd Dphi = g.D(1) * phi.values;
  const double den = quadrature(g, Eigen::VectorXd(c.weight.cwiseProduct(detail::abs2(Dphi))));
  const double extra = quadrature(g, Eigen::VectorXd(c.weight.cwiseProduct(detail::abs2(phi.values))));
  return 8.0 / (k * k) * extra / den;
}

namespace detail {

// int c(rho, rho') |u'|^2 on the interior nodes, through the grid's gradient rule.
template <typename Coef>
Eigen::MatrixXd dirichlet_stiffness(const DensityProfile& p, const SlabGrid& g, Coef&& coef) {
  const auto n = static_cast<Eigen::Index>(g.n());
  const auto& rule = g.gradient_rule();
  Eigen::VectorXd wc(rule.points.size());
  for (Eigen::Index i = 0; i < wc.size(); ++i) {
    const double x = rule.points(i);
    wc(i) = rule.weights(i) * coef(p.eval(0, x), p.eval(1, x));
  }
  const Eigen::MatrixXd Gint = rule.G.middleCols(1, n - 2);
  Eigen::MatrixXd K = Gint.transpose() * wc.asDiagonal() * Gint;
  return 0.5 * (K + K.transpose());
}

}  // namespace detail

// Discrete quadratic forms on the interior (Dirichlet) nodes.
struct DirichletForms {
  Eigen::MatrixXd stiffness;       // int (rho'^2/rho) phi'^2
  Eigen::MatrixXd weighted_mass;   // int (rho'^2/rho) phi^2
  Eigen::MatrixXd mass;            // int rho' phi^2
  Eigen::MatrixXd h1;              // int phi'^2 + phi^2
  Eigen::MatrixXd plain_mass;      // int phi^2

  static DirichletForms build(const DensityProfile& p, const SlabGrid& g) {
    const auto n = static_cast<Eigen::Index>(g.n());
    const ProfileCoefficients c(p, g);
    const Eigen::VectorXd w = g.weights();
    const Eigen::VectorXd wi = w.segment(1, n - 2);
    DirichletForms f;
    f.stiffness = detail::dirichlet_stiffness(p, g, [](double r, double d1) { return d1 * d1 / r; });
    f.weighted_mass = wi.cwiseProduct(c.weight.segment(1, n - 2)).asDiagonal();
    f.mass = wi.cwiseProduct(c.d1.segment(1, n - 2)).asDiagonal();
    f.plain_mass = wi.asDiagonal();
    f.h1 = detail::dirichlet_stiffness(p, g, [](double, double) { return 1.0; }) + f.plain_mass;
    for (Eigen::MatrixXd* m : {&f.stiffness, &f.h1}) *m = 0.5 * (*m + m->transpose());
    return f;
  }
};

namespace detail {

// Smallest eigenpair of A x = lambda B x with B symmetric positive definite.
inline std::pair<double, Eigen::VectorXd> min_eigenpair(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
  if (es.info() != Eigen::Success) throw NumericalFailure("symmetric-definite eigensolve failed");
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

inline Eigen::VectorXd with_walls(const Eigen::VectorXd& interior) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(interior.size() + 2);
  full.segment(1, interior.size()) = interior;
  return full;
}

}  // namespace detail

// Minimum of E_L over unit-H1 discrete Dirichlet fields: the smallest
// eigenvalue of (eps^2 (K + k^2 Wc) - g M, H1 + k^2 L2).
struct PencilMinimum {
  double value = 0.0;
  Eigen::VectorXd direction;  // full nodal vector, zero at the walls
};

inline PencilMinimum el_pencil_minimum(double kappa, const DensityProfile& p, const PhysicalParams& params,
                                       const SlabGrid& g) {
  const auto f = DirichletForms::build(p, g);
  const double eps2 = params.eps * params.eps, k2 = kappa * kappa;
  const Eigen::MatrixXd A = eps2 * (f.stiffness + k2 * f.weighted_mass) - params.g * f.mass;
  const Eigen::MatrixXd H = f.h1 + k2 * f.plain_mass;
  auto [lambda, x] = detail::min_eigenpair(A, H);
  return {lambda, detail::with_walls(x)};
}

// Raised when the E-form is not coercive; carries the most negative direction.
class NonCoerciveError : public DomainError {
 public:
  NonCoerciveError(const std::string& msg, Eigen::VectorXd direction, double energy)
      : DomainError(msg), direction_(std::move(direction)), energy_(energy) {}
  const Eigen::VectorXd& direction() const { return direction_; }
  double energy() const { return energy_; }

 private:
  Eigen::VectorXd direction_;
  double energy_;
};

struct ThresholdPencil {
  double a3 = 0.0;
  Eigen::VectorXd phi;  // full nodal vector, unit weighted mass
};

// Largest eigenvalue of M x = a K x: the discrete supremum of
// int rho' phi^2 / int (rho'^2/rho) phi'^2 over the Dirichlet space.
inline ThresholdPencil solve_threshold_pencil(const DensityProfile& p, const SlabGrid& g) {
  const auto f = DirichletForms::build(p, g);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(f.mass, f.stiffness);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("threshold pencil: weighted stiffness is not positive definite");
  const auto m = es.eigenvalues().size();
  ThresholdPencil out;
  out.a3 = es.eigenvalues()(m - 1);
  Eigen::VectorXd x = es.eigenvectors().col(m - 1);
  x /= std::sqrt(x.dot(f.mass * x));
  Eigen::Index imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  if (x(imax) < 0.0) x = -x;
  out.phi = detail::with_walls(x);
  return out;
}

// Smallest c with ||r||_1^2 <= c E(r) on the discrete Dirichlet space.
inline double stabilizing_constant(double kappa, const DensityProfile& p, const PhysicalParams& params,
                                   const SlabGrid& g) {
  detail::require_stabilizing(p, "stabilizing_constant");
  const auto n = static_cast<Eigen::Index>(g.n());
  const ProfileCoefficients c(p, g);
  const Eigen::VectorXd wi = g.weights().segment(1, n - 2);
  const double eps2 = params.eps * params.eps, k2 = kappa * kappa;

  const Eigen::VectorXd inv_rho = c.rho.cwiseInverse();
  Eigen::MatrixXd E = eps2 * detail::dirichlet_stiffness(p, g, [](double r, double) { return 1.0 / r; });
  const Eigen::VectorXd pot = (eps2 * k2 * inv_rho.array() + (eps2 * c.q.array() - params.g) / c.d1.array()).matrix();
  E.diagonal() += wi.cwiseProduct(pot.segment(1, n - 2));
  E = 0.5 * (E + E.transpose());
  Eigen::MatrixXd H = detail::dirichlet_stiffness(p, g, [](double, double) { return 1.0; });
  H.diagonal() += (1.0 + k2) * wi;

  const double eps_c = std::sqrt(params.g * solve_threshold_pencil(p, g).a3);
  auto [lambda, x] = detail::min_eigenpair(E, H);
  if (params.eps <= eps_c || lambda <= 0.0) {
    const Eigen::VectorXd r = detail::with_walls(x);
    const double e = energy_E(ScalarField1D(g, r), kappa, p, params);
    throw NonCoerciveError("E-form is not coercive at eps = " + std::to_string(params.eps) +
                               " (eps_c = " + std::to_string(eps_c) + ", most negative E = " + std::to_string(e) + ")",
                           r, e);
  }
  return 1.0 / lambda;
}

// Energies of a single-mode state with kappa = (k, 0).
inline EnergyReport mode_energy(const SlabGrid& g, const DensityProfile& p, const PhysicalParams& params, double kappa,
                                const Eigen::VectorXcd& rho_hat, const Eigen::VectorXcd& v3,
                                const Eigen::VectorXcd& w3) {
  const ProfileCoefficients c(p, g);
  const Eigen::MatrixXd& D = g.D(1);
  const double k2 = kappa * kappa;
  const ScalarField1D r(g, rho_hat);

  EnergyReport rep;
  rep.E_L = energy_EL(r, kappa, p, params);
  rep.E = p.flags().stabilizing ? energy_E(r, kappa, p, params) : std::numeric_limits<double>::quiet_NaN();
  const Eigen::VectorXcd Dr = D * rho_hat;
  rep.h1_sq = quadrature(g, Eigen::VectorXd(detail::abs2(Dr) + (1.0 + k2) * detail::abs2(rho_hat)));

  const cplx I(0.0, 1.0);
  Eigen::VectorXcd v1 = Eigen::VectorXcd::Zero(v3.size()), v2 = v1;
  if (kappa != 0.0) {
    v1 = (I / kappa) * (D * v3);
    v2 = (-I / kappa) * w3;
  }
  const Eigen::VectorXd speed2 = detail::abs2(v1) + detail::abs2(v2) + detail::abs2(v3);
  rep.kinetic = quadrature(g, Eigen::VectorXd(c.rho.cwiseProduct(speed2)));
  Eigen::VectorXd grad2 = k2 * speed2;
  for (const Eigen::VectorXcd* v : std::initializer_list<const Eigen::VectorXcd*>{&v1, &v2, &v3}) grad2 += detail::abs2(Eigen::VectorXcd(D * *v));
  rep.dissipation = params.mu * quadrature(g, grad2);
  return rep;
}

// ---------------------------------------------------------------------------
// Quantum stress on an (x1, x3) plane, periodic in x1, x2-independent.

struct PlaneField {
  PlaneField(std::size_t n1, double L1, SlabGrid grid, Eigen::MatrixXd values)
      : n1(n1), L1(L1), grid(std::move(grid)), values(std::move(values)) {
    if (n1 < 4 || n1 % 2 != 0) throw ConfigError("plane field needs an even horizontal point count >= 4");
    if (this->values.rows() != static_cast<Eigen::Index>(n1) ||
        this->values.cols() != static_cast<Eigen::Index>(this->grid.n()))
      throw ShapeError("plane field values must be n1 x n3");
  }

  template <typename F>
  static PlaneField from_function(std::size_t n1, double L1, SlabGrid grid, F&& f) {
    Eigen::MatrixXd v(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(grid.n()));
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index j = 0; j < v.cols(); ++j) v(i, j) = f(x1(i, n1, L1), grid.nodes()(j));
    return PlaneField(n1, L1, std::move(grid), std::move(v));
  }

  static double x1(Eigen::Index i, std::size_t n1, double L1) {
    return L1 * static_cast<double>(i) / static_cast<double>(n1);
  }

  std::size_t n1;
  double L1;
  SlabGrid grid;
  Eigen::MatrixXd values;  // values(i, j) = rho_pert(x1_i, x3_j)
};

// Periodic spectral differentiation matrix on n uniform points of [0, L).
inline Eigen::MatrixXd fourier_diff_matrix(std::size_t n, double L) {
  const auto N = static_cast<Eigen::Index>(n);
  const double pi = std::numbers::pi;
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i == j) continue;
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      F(i, j) = 0.5 * sign / std::tan(pi * static_cast<double>(i - j) / static_cast<double>(N));
    }
  return F * (2.0 * pi / L);
}

struct VectorPlane {
  Eigen::MatrixXd e1, e3;  // horizontal and vertical components (the x2 one vanishes)

  double max_abs() const { return std::max(e1.cwiseAbs().maxCoeff(), e3.cwiseAbs().maxCoeff()); }
};

struct StressDecomposition {
  VectorPlane Q, QL, QN;
  double residual = 0.0;
};

inline StressDecomposition decompose_quantum_stress(const PlaneField& f, const DensityProfile& p) {
  const auto n1 = static_cast<Eigen::Index>(f.n1);
  const auto n3 = static_cast<Eigen::Index>(f.grid.n());
  const Eigen::MatrixXd F = fourier_diff_matrix(f.n1, f.L1);
  const Eigen::MatrixXd D3t = f.grid.D(1).transpose();
  auto d1 = [&](const Eigen::MatrixXd& m) -> Eigen::MatrixXd { return F * m; };
  auto d3 = [&](const Eigen::MatrixXd& m) -> Eigen::MatrixXd { return m * D3t; };

  const ProfileCoefficients c(p, f.grid);
  // Profile quantities broadcast over x1.
  auto row = [&](const Eigen::VectorXd& v) -> Eigen::MatrixXd { return v.transpose().replicate(n1, 1); };
  const Eigen::MatrixXd rb = row(c.rho), rb1 = row(c.d1);
  const Eigen::MatrixXd& r = f.values;
  const Eigen::MatrixXd rho = rb + r;
  if (rho.minCoeff() <= 0.0) throw DomainError("total density rho + rho_pert is not positive on the plane grid");
  const Eigen::MatrixXd gam = row(c.gamma);

  const Eigen::MatrixXd r1 = d1(r), r3 = d3(r);
  StressDecomposition out;

  // Q = div(grad rho (x) grad rho / rho - grad rhobar (x) grad rhobar / rhobar)
  {
    const Eigen::MatrixXd g1 = r1, g3 = rb1 + r3;
    const Eigen::MatrixXd T11 = g1.cwiseProduct(g1).cwiseQuotient(rho);
    const Eigen::MatrixXd T13 = g1.cwiseProduct(g3).cwiseQuotient(rho);
    const Eigen::MatrixXd T33 = g3.cwiseProduct(g3).cwiseQuotient(rho) - rb1.cwiseProduct(rb1).cwiseQuotient(rb);
    out.Q.e1 = d1(T11) + d3(T13);
    out.Q.e3 = d1(T13) + d3(T33);
  }

  // Q^L = d3(gamma grad r) + (gamma' d3 r - d3(gamma^2 r) + gamma lap r) e3
  {
    const Eigen::MatrixXd gam_prime = d3(gam);
    const Eigen::MatrixXd lap = d1(r1) + d3(r3);
    out.QL.e1 = d3(gam.cwiseProduct(r1));
    out.QL.e3 = d3(gam.cwiseProduct(r3)) + gam_prime.cwiseProduct(r3) -
                d3(gam.cwiseProduct(gam).cwiseProduct(r)) + gam.cwiseProduct(lap);
  }

  // Q^N = d3(a (gamma r e3 - grad r)) + div(grad r (x) grad r / rho) - e3 div(a grad r),
  // a = rhobar' r / (rhobar rho). The last divergence is taken over the
  // column index of grad r (x) e3.
  {
    const Eigen::MatrixXd a = rb1.cwiseProduct(r).cwiseQuotient(rb.cwiseProduct(rho));
    const Eigen::MatrixXd S11 = r1.cwiseProduct(r1).cwiseQuotient(rho);
    const Eigen::MatrixXd S13 = r1.cwiseProduct(r3).cwiseQuotient(rho);
    const Eigen::MatrixXd S33 = r3.cwiseProduct(r3).cwiseQuotient(rho);
    const Eigen::MatrixXd div_a_grad = d1(a.cwiseProduct(r1)) + d3(a.cwiseProduct(r3));
    out.QN.e1 = d3(-a.cwiseProduct(r1)) + d1(S11) + d3(S13);
    out.QN.e3 = d3(a.cwiseProduct(gam.cwiseProduct(r) - r3)) + d1(S13) + d3(S33) - div_a_grad;
  }

  const double qmax = out.Q.max_abs();
  const double diff = std::max((out.Q.e1 - out.QL.e1 - out.QN.e1).cwiseAbs().maxCoeff(),
                               (out.Q.e3 - out.QL.e3 - out.QN.e3).cwiseAbs().maxCoeff());
  out.residual = qmax > 0.0 ? diff / qmax : diff;
  (void)n3;
  return out;
}

}  // namespace qrt
