#pragma once

// One-dimensional discretization of the slab (0, h): collocation nodes,
// dense differentiation operators up to fourth order, quadrature weights and
// boundary-row replacement.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qrt/error.hpp"

namespace qrt {

enum class Scheme { chebyshev_lobatto, finite_difference_4 };

inline std::string_view to_string(Scheme s) {
  return s == Scheme::chebyshev_lobatto ? "chebyshev" : "fd4";
}

inline Scheme scheme_from_string(std::string_view name) {
  if (name == "chebyshev" || name == "chebyshev_lobatto") return Scheme::chebyshev_lobatto;
  if (name == "fd4" || name == "finite_difference_4") return Scheme::finite_difference_4;
  throw ConfigError("unknown grid scheme '" + std::string(name) + "'");
}

namespace detail {

// Finite-difference weights for derivatives 0..m at z from arbitrary nodes
// (Fornberg 1988). Returns weights[k][j] for derivative k at node j.
inline std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x,
                                                         int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

}  // namespace detail

class SlabGrid {
 public:
  static constexpr double fd4_stretch = 0.5;
  static constexpr std::size_t min_nodes = 8;

  SlabGrid(std::size_t n, double h, Scheme scheme) : n_(n), h_(h), scheme_(scheme) {
    if (n < min_nodes) throw ConfigError("grid needs at least 8 nodes, got " + std::to_string(n));
    if (!(h > 0.0)) throw ConfigError("slab height must be positive");
    if (scheme == Scheme::chebyshev_lobatto)
      build_chebyshev();
    else
      build_fd4();
  }

  std::size_t n() const { return n_; }
  double h() const { return h_; }
  Scheme scheme() const { return scheme_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  // Where the derivative in a quadratic form int c |u'|^2 is evaluated:
  // G maps nodal values to u' at the points, and the weights integrate there.
  struct GradientRule {
    Eigen::MatrixXd G;
    Eigen::VectorXd points;
    Eigen::VectorXd weights;
  };

  // Chebyshev: the nodes themselves. FD-4: cell midpoints with a fourth-order
  // staggered stencil, since a centred nodal stencil annihilates (-1)^j and
  // leaves a spurious near-null mode in D^T W D.
  const GradientRule& gradient_rule() const { return rule_; }

  // Dense k-th derivative operator, 1 <= k <= 4.
  const Eigen::MatrixXd& D(int k) const {
    if (k < 1 || k > 4) throw DomainError("differentiation order must be in 1..4");
    return d_[static_cast<std::size_t>(k - 1)];
  }

 private:
  void build_chebyshev() {
    const auto N = static_cast<Eigen::Index>(n_ - 1);
    const double pi = std::numbers::pi;
    // Reference points t_j = -cos(pi j / N), increasing on [-1, 1].
    Eigen::VectorXd t(N + 1);
    for (Eigen::Index j = 0; j <= N; ++j) t(j) = -std::cos(pi * static_cast<double>(j) / N);
    t(0) = -1.0;
    t(N) = 1.0;
    if (N % 2 == 0) t(N / 2) = 0.0;
    nodes_ = (t.array() + 1.0) * (0.5 * h_);
    nodes_(0) = 0.0;
    nodes_(N) = h_;

    // Trefethen's cheb with the negative-sum trick for the diagonal.
    Eigen::MatrixXd D1(N + 1, N + 1);
    auto c = [N](Eigen::Index j) { return (j == 0 || j == N) ? 2.0 : 1.0; };
    for (Eigen::Index i = 0; i <= N; ++i) {
      for (Eigen::Index j = 0; j <= N; ++j) {
        if (i == j) {
          D1(i, j) = 0.0;
          continue;
        }
        const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        // t_i - t_j through the sine identity for accuracy.
        const double diff = 2.0 * std::sin(pi * static_cast<double>(i - j) / (2.0 * N)) *
                            std::sin(pi * static_cast<double>(i + j) / (2.0 * N));
        D1(i, j) = c(i) / c(j) * sign / diff;
      }
      D1(i, i) = -D1.row(i).sum();
    }
    D1 *= 2.0 / h_;
    d_[0] = D1;
    for (std::size_t k = 1; k < 4; ++k) d_[k] = d_[k - 1] * D1;

    // Clenshaw-Curtis weights.
    weights_ = Eigen::VectorXd::Zero(N + 1);
    Eigen::VectorXd theta(N + 1);
    for (Eigen::Index j = 0; j <= N; ++j) theta(j) = pi * static_cast<double>(j) / N;
    if (N % 2 == 0) {
      weights_(0) = weights_(N) = 1.0 / (static_cast<double>(N) * N - 1.0);
      for (Eigen::Index j = 1; j < N; ++j) {
        double v = 1.0;
        for (Eigen::Index k = 1; k < N / 2; ++k)
          v -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
        v -= std::cos(static_cast<double>(N) * theta(j)) / (static_cast<double>(N) * N - 1.0);
        weights_(j) = 2.0 * v / N;
      }
    } else {
      weights_(0) = weights_(N) = 1.0 / (static_cast<double>(N) * N);
      for (Eigen::Index j = 1; j < N; ++j) {
        double v = 1.0;
        for (Eigen::Index k = 1; k <= (N - 1) / 2; ++k)
          v -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
        weights_(j) = 2.0 * v / N;
      }
    }
    weights_ *= 0.5 * h_;
    rule_ = {d_[0], nodes_, weights_};
  }

  void build_fd4() {
    const auto n = static_cast<Eigen::Index>(n_);
    const double dxi = 1.0 / static_cast<double>(n - 1);
    nodes_.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) nodes_(j) = fd4_map(dxi * static_cast<double>(j));
    nodes_(0) = 0.0;
    nodes_(n - 1) = h_;

    // Stencil width k+4 (odd-rounded) gives at least fourth-order accuracy,
    // shifted one-sided near the walls.
    for (int k = 1; k <= 4; ++k) {
      int width = k + 4;
      if (width % 2 == 0) ++width;
      width = std::min<int>(width, static_cast<int>(n));
      Eigen::MatrixXd Dk = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index start = std::clamp<Eigen::Index>(i - width / 2, 0, n - width);
        const auto w = detail::fornberg_weights(0.0, offsets(start, width, nodes_(i)), k);
        for (int s = 0; s < width; ++s) Dk(i, start + s) = w[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)];
      }
      d_[static_cast<std::size_t>(k - 1)] = Dk;
    }

    // Trapezoidal rule in xi on f dx/dxi plus Gregory end corrections. The
    // corrections sum to zero and use the wall value of dx/dxi (x'' vanishes
    // there), so the periodic Jacobian is integrated exactly.
    const double jw = fd4_jacobian(0.0);
    weights_.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) weights_(j) = dxi * fd4_jacobian(dxi * static_cast<double>(j));
    weights_(0) *= 0.5;
    weights_(n - 1) *= 0.5;
    const std::array<double, 3> ends{-1.0 / 8.0, 1.0 / 6.0, -1.0 / 24.0};
    for (std::size_t j = 0; j < ends.size(); ++j) {
      weights_(static_cast<Eigen::Index>(j)) += ends[j] * dxi * jw;
      weights_(n - 1 - static_cast<Eigen::Index>(j)) += ends[j] * dxi * jw;
    }

    // Staggered gradient at the cell midpoints, integrated by the midpoint
    // rule in xi with the dxi^2/24 (f'(1) - f'(0)) correction, the end
    // derivatives taken from three midpoints.
    const Eigen::Index m = n - 1;
    rule_.points.resize(m);
    rule_.G = Eigen::MatrixXd::Zero(m, n);
    rule_.weights.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) rule_.weights(i) = dxi * fd4_jacobian(dxi * (static_cast<double>(i) + 0.5));
    if (m >= 6) {
      const std::array<double, 3> mid_ends{2.0 / 24.0, -3.0 / 24.0, 1.0 / 24.0};
      for (std::size_t j = 0; j < mid_ends.size(); ++j) {
        rule_.weights(static_cast<Eigen::Index>(j)) += mid_ends[j] * dxi * jw;
        rule_.weights(m - 1 - static_cast<Eigen::Index>(j)) += mid_ends[j] * dxi * jw;
      }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      const double xi = dxi * (static_cast<double>(i) + 0.5);
      rule_.points(i) = fd4_map(xi);
      const Eigen::Index start = std::clamp<Eigen::Index>(i - 1, 0, n - 4);
      const auto w = detail::fornberg_weights(0.0, offsets(start, 4, rule_.points(i)), 1);
      for (int s = 0; s < 4; ++s) rule_.G(i, start + s) = w[1][static_cast<std::size_t>(s)];
    }
  }

  // Node positions start.. start+width-1 relative to x.
  std::vector<double> offsets(Eigen::Index start, int width, double x) const {
    std::vector<double> local(static_cast<std::size_t>(width));
    for (int s = 0; s < width; ++s) local[static_cast<std::size_t>(s)] = nodes_(start + s) - x;
    return local;
  }

  // Map from xi in [0, 1] onto [0, h] clustering nodes at the walls, with
  // dx/dxi = h (1 - s cos 2 pi xi): periodic, and x'' = 0 at both walls.
  double fd4_map(double xi) const {
    const double two_pi = 2.0 * std::numbers::pi;
    return h_ * (xi - fd4_stretch * std::sin(two_pi * xi) / two_pi);
  }
  double fd4_jacobian(double xi) const { return h_ * (1.0 - fd4_stretch * std::cos(2.0 * std::numbers::pi * xi)); }


  std::size_t n_;
  double h_;
  Scheme scheme_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  std::array<Eigen::MatrixXd, 4> d_;
  GradientRule rule_;
};

inline SlabGrid build_grid(std::size_t n, double h, Scheme scheme = Scheme::chebyshev_lobatto) {
  return SlabGrid(n, h, scheme);
}

// Wall conditions for one scalar unknown. Entry j of `lower` replaces row j,
// entry j of `upper` replaces row n-1-j. `none` leaves that row alone.
enum class BcKind { none, dirichlet, neumann, second_derivative };

struct BcMask {
  std::vector<BcKind> lower;
  std::vector<BcKind> upper;

  static BcMask both(std::vector<BcKind> kinds) { return {kinds, kinds}; }
};

// Row that evaluates the condition `kind` at node `node`.
inline Eigen::RowVectorXd condition_row(const SlabGrid& grid, BcKind kind, Eigen::Index node) {
  const auto n = static_cast<Eigen::Index>(grid.n());
  switch (kind) {
    case BcKind::dirichlet: {
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
      r(node) = 1.0;
      return r;
    }
    case BcKind::neumann:
      return grid.D(1).row(node);
    case BcKind::second_derivative:
      return grid.D(2).row(node);
    case BcKind::none:
      break;
  }
  throw DomainError("no condition row for BcKind::none");
}

// Boundary-row replacement on a square n x n operator.
inline Eigen::MatrixXd apply_bc(const SlabGrid& grid, Eigen::MatrixXd op, const BcMask& mask) {
  const auto n = static_cast<Eigen::Index>(grid.n());
  if (op.rows() != n || op.cols() != n) throw ShapeError("apply_bc expects an n x n operator");
  for (std::size_t j = 0; j < mask.lower.size(); ++j) {
    if (mask.lower[j] == BcKind::none) continue;
    op.row(static_cast<Eigen::Index>(j)) = condition_row(grid, mask.lower[j], 0);
  }
  for (std::size_t j = 0; j < mask.upper.size(); ++j) {
    if (mask.upper[j] == BcKind::none) continue;
    op.row(n - 1 - static_cast<Eigen::Index>(j)) = condition_row(grid, mask.upper[j], n - 1);
  }
  return op;
}

// Basis of the nodal vectors that satisfy `kinds` at both walls. Column j is
// the vector with value 1 at interior node m + j (m = kinds.size()), zero at
// the other interior nodes, and wall-strip values fixed by the conditions.
inline Eigen::MatrixXd wall_basis(const SlabGrid& grid, const std::vector<BcKind>& kinds) {
  const auto n = static_cast<Eigen::Index>(grid.n());
  const auto m = static_cast<Eigen::Index>(kinds.size());
  const Eigen::Index free = n - 2 * m;
  if (free < 1) throw DomainError("wall_basis: too many conditions for the grid");
  Eigen::MatrixXd C(2 * m, n);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (kinds[static_cast<std::size_t>(j)] == BcKind::none) throw DomainError("wall_basis: BcKind::none");
    C.row(j) = condition_row(grid, kinds[static_cast<std::size_t>(j)], 0);
    C.row(m + j) = condition_row(grid, kinds[static_cast<std::size_t>(j)], n - 1);
  }
  std::vector<Eigen::Index> strip;
  for (Eigen::Index j = 0; j < m; ++j) strip.push_back(j);
  for (Eigen::Index j = 0; j < m; ++j) strip.push_back(n - m + j);
  Eigen::MatrixXd Cs(2 * m, 2 * m);
  for (Eigen::Index j = 0; j < 2 * m; ++j) Cs.col(j) = C.col(strip[static_cast<std::size_t>(j)]);
  const Eigen::MatrixXd wall = -Cs.fullPivLu().solve(C.middleCols(m, free));
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, free);
  Z.middleRows(m, free).setIdentity();
  for (Eigen::Index j = 0; j < 2 * m; ++j) Z.row(strip[static_cast<std::size_t>(j)]) = wall.row(j);
  return Z;
}

template <typename Derived>
typename Derived::Scalar quadrature(const SlabGrid& grid, const Eigen::MatrixBase<Derived>& samples) {
  if (samples.size() != static_cast<Eigen::Index>(grid.n()))
    throw ShapeError("quadrature: expected " + std::to_string(grid.n()) + " samples, got " +
                     std::to_string(samples.size()));
  return grid.weights().template cast<typename Derived::Scalar>().dot(samples.derived());
}

inline double quadrature(const SlabGrid& grid, const std::vector<double>& samples) {
  return quadrature(grid, Eigen::Map<const Eigen::VectorXd>(samples.data(),
                                                            static_cast<Eigen::Index>(samples.size())));
}

// Lambda^{-s} norm of a single horizontal Fourier mode with wavenumber kappa.
inline double neg_tangential_norm(double field_l2_norm, double kappa, double s) {
  if (kappa == 0.0) throw DomainError("negative horizontal norm undefined at kappa = 0");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("order s must lie in (0, 1)");
  return std::pow(std::abs(kappa), -s) * field_l2_norm;
}

}  // namespace qrt
