#pragma once

#include "noether/dynamics.hpp"

#include <functional>
#include <memory>
#include <string>

namespace noether {

inline constexpr double kEps0 = 1e-5;
inline constexpr double kTimeStep = 1e-5;
/// Step for time derivatives of quantities that are themselves finite
/// differences in epsilon; paired with a five-point stencil.
inline constexpr double kWideTimeStep = 1e-3;

enum class Style { tau, theta };

using FamilyMap = std::function<Vec(double eps, double t, const Trajectory& traj)>;
using ScalarMap = std::function<double(double eps, double t, const Trajectory& traj)>;
using RateFn = std::function<double(double t, const Trajectory& traj)>;

/// One-parameter family of curves q_eps with q_0 = q.
struct SpaceChange {
  enum class Form { pointwise, time_shift, trajectory_map };

  Form form = Form::pointwise;
  VectorField phi;       ///< pointwise: q_eps = q + eps * phi(t, q, qdot)
  FamilyMap position_map;  ///< trajectory_map: q_eps(t)
  FamilyMap velocity_map;  ///< optional d/dt q_eps(t); differenced in t when empty
  bool local = true;     ///< false when the family integrates along the trajectory
  double eps0 = kEps0;
  double h_t = kTimeStep;

  static SpaceChange identity(int dim);
  static SpaceChange pointwise(VectorField phi);
  static SpaceChange time_shift();
  static SpaceChange trajectory_map(FamilyMap position, FamilyMap velocity = {}, bool local = true);

  Vec position(double eps, double t, const Trajectory& traj) const;
  Vec velocity(double eps, double t, const Trajectory& traj) const;
};

/// tau(eps, t) in the tau style or theta_eps(t) in the theta style.
struct TimeChange {
  Style style = Style::tau;
  ScalarMap value;  ///< empty for the identity
  RateFn rate_fn;   ///< d/deps at 0; differenced in eps when empty
  bool exact_rate = false;  ///< rate_fn involves no finite difference in eps
  ScalarMap inverse_fn;     ///< theta style; Newton iteration when empty
  bool local = true;
  double eps0 = kEps0;

  static TimeChange identity(Style style = Style::tau);
  /// t + eps * rate(t).
  static TimeChange linear(Style style, RateFn rate, bool local = true);
  static TimeChange general(Style style, ScalarMap value, RateFn rate = {}, bool exact_rate = false);

  bool trivial() const { return !value; }
  double at(double eps, double t, const Trajectory& traj) const;
  double rate(double t, const Trajectory& traj) const;
  /// d/dt of rate(t).
  double rate_dt(double t, const Trajectory& traj) const;
  double inverse(double eps, double xi, const Trajectory& traj) const;
};

/// G(eps, t); may depend on the trajectory and on integrals along it.
struct BHFunction {
  ScalarMap value;  ///< empty for G = 0
  RateFn rate_fn;
  bool exact_rate = false;
  bool local = true;
  double eps0 = kEps0;

  static BHFunction zero();
  /// eps * rate(t).
  static BHFunction linear(RateFn rate, bool local = true);
  static BHFunction general(ScalarMap value, RateFn rate = {}, bool exact_rate = false, bool local = true);

  bool trivial() const { return !value; }
  double at(double eps, double t, const Trajectory& traj) const;
  double rate(double t, const Trajectory& traj) const;
  double rate_dt(double t, const Trajectory& traj) const;
};

struct SymmetryTriple {
  SpaceChange space;
  TimeChange time;
  BHFunction bh;
  /// The triple is a symmetry of L + lagrangian_shift (same motions as L).
  double lagrangian_shift = 0.0;

  Style style() const { return time.style; }
  bool local() const { return space.local && time.local && bh.local; }
};

/// d/deps q_eps(t) at 0.
Vec d_eps_space(const SpaceChange& space, const Trajectory& traj, double t);
/// d/deps qdot_eps(t) at 0.
Vec d_eps_velocity(const SpaceChange& space, const Trajectory& traj, double t);
/// d/deps L(t, q_eps, qdot_eps) at 0 by a central difference in eps.
double d_eps_lagrangian(const LagrangianSystem& sys, const SpaceChange& space, const Trajectory& traj, double t);
/// Same quantity through dL/dq . dq + dL/dqdot . dqdot.
double d_eps_lagrangian_chain(const LagrangianSystem& sys, const SpaceChange& space, const Trajectory& traj,
                              double t);

/// Tau-style Bessel-Hagen invariance residual
/// d/deps [L(tau, q_eps(tau), qdot_eps(tau)) dtau/dt + dG/dt] at eps = 0.
double invariance_residual(const LagrangianSystem& sys, const SymmetryTriple& triple, const Trajectory& traj,
                           double t);
/// Theta-style residual
/// d/deps [L(theta, q_eps, qdot_eps / theta') theta' + dG/dt] at eps = 0.
double alt_invariance_residual(const LagrangianSystem& sys, const SymmetryTriple& triple, const Trajectory& traj,
                               double t);
/// Dispatches on the triple's style.
double residual(const LagrangianSystem& sys, const SymmetryTriple& triple, const Trajectory& traj, double t);
/// Max |residual| over the check grid of [a, b].
double max_residual(const LagrangianSystem& sys, const SymmetryTriple& triple, const Trajectory& traj);

/// r(t) = d/deps L|0 - d/dt psi(t, q(t), qdot(t)).
double total_derivative_residual(const LagrangianSystem& sys, const SpaceChange& space, const ScalarField& psi,
                                 const Trajectory& traj, double t);
/// Max |r| over the check grid of [a, b].
double total_derivative_check(const LagrangianSystem& sys, const SpaceChange& space, const ScalarField& psi,
                              const Trajectory& traj);

/// The 64 Chebyshev–Lobatto sample times of the trajectory's [a, b].
std::vector<double> residual_grid(const Trajectory& traj);

/// Central difference in t of f along the trajectory, shrunk to stay in the
/// padded interval. `wide` selects the five-point stencil at kWideTimeStep.
double along(const Trajectory& traj, const std::function<double(double)>& f, double t, bool wide = false,
             double h = kTimeStep);
Vec along(const Trajectory& traj, const std::function<Vec(double)>& f, double t, double h = kTimeStep);

/// Cumulative integral of f(s, state(s)) over the trajectory's quadrature
/// nodes, computed once per (trajectory, key).
std::shared_ptr<const CumulativeIntegral> trajectory_integral(
    const Trajectory& traj, const std::string& key, const std::function<Vec(double, const State&)>& f);

}  // namespace noether
