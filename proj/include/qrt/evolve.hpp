#pragma once

// Time integration of the linearized single-mode system, energy bookkeeping
// and decay-rate fits.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qrt/energetics.hpp"
#include "qrt/error.hpp"
#include "qrt/profiles.hpp"
#include "qrt/slabgrid.hpp"
#include "qrt/spectra.hpp"

namespace qrt {

struct ModeState {
  double kappa = 0.0;
  double t = 0.0;
  Eigen::VectorXcd rho;  // density perturbation
  Eigen::VectorXcd v3;
  Eigen::VectorXcd w3;  // vertical vorticity

  Eigen::VectorXcd stacked() const {
    Eigen::VectorXcd x(rho.size() + v3.size() + w3.size());
    x << rho, v3, w3;
    return x;
  }
};

// Horizontal velocity for kappa = (k, 0): i k v1 = -v3', v2 = -i w3 / k.
inline std::pair<Eigen::VectorXcd, Eigen::VectorXcd> horizontal_velocity(const ModeState& s, const SlabGrid& g) {
  if (s.kappa == 0.0) throw DomainError("horizontal velocity recovery needs kappa != 0");
  const cplx I(0.0, 1.0);
  Eigen::VectorXcd v1 = (I / s.kappa) * (g.D(1).cast<cplx>() * s.v3);
  Eigen::VectorXcd v2 = (-I / s.kappa) * s.w3;
  return {v1, v2};
}

enum class SeedKind { zero, phi_star, random, eigenmode };

inline std::string_view to_string(SeedKind k) {
  switch (k) {
    case SeedKind::zero: return "zero";
    case SeedKind::phi_star: return "phi_star";
    case SeedKind::random: return "random";
    case SeedKind::eigenmode: return "eigenmode";
  }
  return "zero";
}

inline SeedKind seed_kind_from_string(std::string_view s) {
  if (s == "zero") return SeedKind::zero;
  if (s == "phi_star") return SeedKind::phi_star;
  if (s == "random") return SeedKind::random;
  if (s == "eigenmode") return SeedKind::eigenmode;
  throw ConfigError("unknown seed kind '" + std::string(s) + "'");
}

struct Seed {
  SeedKind kind = SeedKind::random;
  std::uint64_t rng_seed = 42;
  std::size_t mode_index = 0;  // eigenmode seed: rank by decreasing Re sigma in the coupled group
  double amplitude = 1.0;      // max |entry| of the seeded state
};

// The linear system for one wavenumber with a cached trapezoidal solver.
class ModeSystem {
 public:
  ModeSystem(DensityProfile profile, PhysicalParams params, double kappa, SlabGrid grid)
      : profile_(std::move(profile)), params_(params), grid_(std::move(grid)) {
    if (!(kappa != 0.0) || !std::isfinite(kappa)) throw DomainError("single-mode evolution needs finite kappa != 0");
    op_ = linearized_operator(profile_, params_, kappa, grid_);
  }

  const ModeOperator& op() const { return op_; }
  const SlabGrid& grid() const { return grid_; }
  const DensityProfile& profile() const { return profile_; }
  const PhysicalParams& params() const { return params_; }
  double kappa() const { return op_.kappa; }

  Eigen::VectorXcd reduce(const Eigen::VectorXcd& x) const {
    const auto& rows = op_.free_rows;
    Eigen::VectorXcd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) y(static_cast<Eigen::Index>(j)) = x(rows[j]);
    return y;
  }

  ModeState unpack(const Eigen::VectorXcd& x, double t) const {
    const auto n = static_cast<Eigen::Index>(grid_.n());
    return {op_.kappa, t, x.segment(0, n), x.segment(n, n), x.segment(2 * n, n)};
  }

  // Maps an arbitrary nodal state onto the wall-constrained space.
  ModeState project(const ModeState& s) const {
    return unpack(op_.P.cast<cplx>() * reduce(s.stacked()), s.t);
  }

  ModeState step(const ModeState& s, double dt) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
    if (s.kappa != op_.kappa) throw DomainError("state wavenumber does not match the operator");
    if (!lu_ || cached_dt_ != dt) {
      lu_.emplace(op_.Br - 0.5 * dt * op_.Ar);
      rhs_ = op_.Br + 0.5 * dt * op_.Ar;
      cached_dt_ = dt;
    }
    const Eigen::VectorXcd y = reduce(s.stacked());
    const Eigen::VectorXcd b = rhs_.cast<cplx>() * y;
    Eigen::MatrixXd parts(b.size(), 2);
    parts.col(0) = b.real();
    parts.col(1) = b.imag();
    const Eigen::MatrixXd sol = lu_->solve(parts);
    const Eigen::VectorXcd y1 = sol.col(0).cast<cplx>() + cplx(0.0, 1.0) * sol.col(1).cast<cplx>();
    if (!y1.allFinite())
      throw NumericalFailure("trapezoidal solve produced a non-finite state (dt = " + std::to_string(dt) + ")");
    return unpack(op_.P.cast<cplx>() * y1, s.t + dt);
  }

  double amplitude(const ModeState& s) const {
    const Eigen::VectorXd a = s.rho.cwiseAbs2() + s.v3.cwiseAbs2() + s.w3.cwiseAbs2();
    return std::sqrt(std::max(0.0, quadrature(grid_, a)));
  }

  // Largest wall residual of v3, v3'', rho_pert, rho_pert'', w3', relative to
  // the max-norm of the state.
  double wall_residual(const ModeState& s) const {
    const auto n = static_cast<Eigen::Index>(grid_.n());
    const Eigen::MatrixXcd D1 = grid_.D(1).cast<cplx>(), D2 = grid_.D(2).cast<cplx>();
    const Eigen::VectorXcd d2v = D2 * s.v3, d2r = D2 * s.rho, d1w = D1 * s.w3;
    const double scale = std::max({s.rho.cwiseAbs().maxCoeff(), s.v3.cwiseAbs().maxCoeff(),
                                   s.w3.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min()});
    auto rel = [](const Eigen::VectorXcd& v, Eigen::Index i) {
      return std::abs(v(i)) / std::max(v.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    };
    double r = 0.0;
    for (Eigen::Index w : {Eigen::Index{0}, n - 1}) {
      r = std::max({r, std::abs(s.v3(w)) / scale, std::abs(s.rho(w)) / scale});
      if (s.v3.cwiseAbs().maxCoeff() > 0.0) r = std::max(r, rel(d2v, w));
      if (s.rho.cwiseAbs().maxCoeff() > 0.0) r = std::max(r, rel(d2r, w));
      if (s.w3.cwiseAbs().maxCoeff() > 0.0) r = std::max(r, rel(d1w, w));
    }
    return r;
  }

  EnergyReport energies(const ModeState& s) const {
    return mode_energy(grid_, profile_, params_, s.kappa, s.rho, s.v3, s.w3);
  }

 private:
  DensityProfile profile_;
  PhysicalParams params_;
  SlabGrid grid_;
  ModeOperator op_;
  mutable std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
  mutable Eigen::MatrixXd rhs_;
  mutable double cached_dt_ = 0.0;
};

inline ModeState init_mode_state(const ModeSystem& sys, const Seed& seed) {
  const SlabGrid& g = sys.grid();
  const auto n = static_cast<Eigen::Index>(g.n());
  ModeState s{sys.kappa(), 0.0, Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)};
  const double h = g.h(), pi = std::numbers::pi;
  switch (seed.kind) {
    case SeedKind::zero:
      return s;
    case SeedKind::phi_star: {
      const auto t = solve_threshold_pencil(sys.profile(), g);
      s.rho = t.phi.cast<cplx>();
      break;
    }
    case SeedKind::random: {
      // Sine series for rho_pert and v3, cosine series for w3, coefficients ~ 1/j^2.
      std::mt19937_64 rng(seed.rng_seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      constexpr int modes = 8;
      for (Eigen::VectorXcd* f : {&s.rho, &s.v3, &s.w3}) {
        const bool cosine = f == &s.w3;
        for (int j = 1; j <= modes; ++j) {
          const cplx c(normal(rng), normal(rng));
          const double decay = 1.0 / (static_cast<double>(j) * j);
          for (Eigen::Index i = 0; i < n; ++i) {
            const double arg = j * pi * g.nodes()(i) / h;
            (*f)(i) += decay * c * (cosine ? std::cos(arg) : std::sin(arg));
          }
        }
      }
      break;
    }
    case SeedKind::eigenmode: {
      const auto& op = sys.op();
      const auto modes =
          mode_eigenpairs(op, seed.mode_index + 1, h, sys.params().mu, Branch::coupled, /*want_vectors=*/true);
      if (modes.size() <= seed.mode_index) throw DomainError("requested eigenmode is not available");
      s = sys.unpack(modes[seed.mode_index].vector, 0.0);
      break;
    }
  }
  s = sys.project(s);
  const double peak = s.stacked().cwiseAbs().maxCoeff();
  if (peak > 0.0) {
    const double f = seed.amplitude / peak;
    s.rho *= f;
    s.v3 *= f;
    s.w3 *= f;
  }
  return s;
}

struct Sample {
  double t = 0.0;
  EnergyReport energy;
  double amplitude = 0.0;
  double wall_residual = 0.0;
};

struct Trajectory {
  double kappa = 0.0;
  double dt = 0.0;
  std::vector<Sample> samples;
  std::vector<double> balance_residual;  // per interval between samples
  bool stopped_early = false;
  std::string stop_reason;
  ModeState final_state;
};

namespace detail {

inline double total_energy(const EnergyReport& e) { return e.E + e.kinetic; }

}  // namespace detail

// Interval residuals of d/dt (E + kinetic) + 2 dissipation = 0 (dissipation
// already carries mu), with the dissipation averaged over the interval ends
// and normalized by the largest term.
inline std::vector<double> energy_balance_residual(const Trajectory& traj) {
  std::vector<double> out;
  if (traj.samples.size() < 2) return out;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i - 1];
    const auto& b = traj.samples[i];
    const double dt = b.t - a.t;
    const double rate = (detail::total_energy(b.energy) - detail::total_energy(a.energy)) / dt;
    const double diss = a.energy.dissipation + b.energy.dissipation;  // 2 * midpoint average
    const double scale = std::max(std::abs(rate), std::abs(diss));
    out.push_back(scale > 0.0 ? std::abs(rate + diss) / scale : 0.0);
  }
  return out;
}

inline Trajectory simulate(const ModeSystem& sys, const ModeState& state0, double T, double dt,
                           std::size_t sample_every = 1) {
  if (!(T > 0.0)) throw ConfigError("simulation time T must be positive");
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (sample_every == 0) throw ConfigError("sample_every must be at least 1");
  const double steps_real = std::round(T / dt);
  if (std::abs(steps_real * dt - T) > 1e-9 * T) throw ConfigError("T must be an integer multiple of dt");
  const auto steps = static_cast<std::size_t>(steps_real);

  Trajectory tr;
  tr.kappa = sys.kappa();
  tr.dt = dt;
  ModeState s = state0;
  auto record = [&](const ModeState& st) {
    tr.samples.push_back({st.t, sys.energies(st), sys.amplitude(st), sys.wall_residual(st)});
  };
  record(s);
  for (std::size_t k = 1; k <= steps; ++k) {
    s = sys.step(s, dt);
    s.t = state0.t + static_cast<double>(k) * dt;
    const double amp = sys.amplitude(s);
    const bool last = k == steps;
    if (!std::isfinite(amp) || amp > 1e300) {
      tr.stopped_early = true;
      tr.stop_reason = "amplitude overflow";
      record(s);
      break;
    }
    if (amp < 1e-300 && sys.amplitude(state0) > 0.0) {
      tr.stopped_early = true;
      tr.stop_reason = "amplitude underflow";
      record(s);
      break;
    }
    if (k % sample_every == 0 || last) record(s);
  }
  tr.final_state = s;
  tr.balance_residual = energy_balance_residual(tr);
  return tr;
}

struct DecayFit {
  double rate = 0.0;
  std::size_t points = 0;
  bool partial = false;  // the trajectory stopped early
};

// Least-squares slope of log(amplitude) against t over the second half of the samples.
inline DecayFit fit_decay(const Trajectory& traj) {
  if (traj.samples.size() < 4) throw DomainError("fit_decay needs at least 4 samples");
  const std::size_t start = traj.samples.size() / 2;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t m = 0;
  for (std::size_t i = start; i < traj.samples.size(); ++i) {
    const double a = traj.samples[i].amplitude;
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("fit_decay: trajectory has no amplitude to fit");
    const double t = traj.samples[i].t, y = std::log(a);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++m;
  }
  const double md = static_cast<double>(m);
  const double den = md * stt - st * st;
  if (!(den > 0.0)) throw DomainError("fit_decay: degenerate sample times");
  return {(md * sty - st * sy) / den, m, traj.stopped_early};
}

}  // namespace qrt
