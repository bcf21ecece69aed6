#include "noether/variation.hpp"

#include "noether/errors.hpp"

#include <algorithm>
#include <cmath>

namespace noether {

// ---- SpaceChange ------------------------------------------------------------

SpaceChange SpaceChange::identity(int dim) {
  return pointwise([dim](double, const Vec&, const Vec&) -> Vec { return Vec::Zero(dim); });
}

SpaceChange SpaceChange::pointwise(VectorField phi) {
  SpaceChange s;
  s.form = Form::pointwise;
  s.phi = std::move(phi);
  return s;
}

SpaceChange SpaceChange::time_shift() {
  SpaceChange s;
  s.form = Form::time_shift;
  return s;
}

SpaceChange SpaceChange::trajectory_map(FamilyMap position, FamilyMap velocity, bool local) {
  SpaceChange s;
  s.form = Form::trajectory_map;
  s.position_map = std::move(position);
  s.velocity_map = std::move(velocity);
  s.local = local;
  return s;
}

Vec SpaceChange::position(double eps, double t, const Trajectory& traj) const {
  switch (form) {
    case Form::pointwise: {
      const State s = traj.at(t);
      if (eps == 0.0) return s.q;
      return s.q + eps * phi(t, s.q, s.qdot);
    }
    case Form::time_shift:
      return traj.position(t + eps);
    case Form::trajectory_map:
      return position_map(eps, t, traj);
  }
  return {};
}

Vec SpaceChange::velocity(double eps, double t, const Trajectory& traj) const {
  switch (form) {
    case Form::pointwise: {
      const Vec qdot = traj.velocity(t);
      if (eps == 0.0) return qdot;
      const Vec dphi = along(
          traj,
          [&](double s) -> Vec {
            const State st = traj.at(s);
            return phi(s, st.q, st.qdot);
          },
          t, h_t);
      return qdot + eps * dphi;
    }
    case Form::time_shift:
      return traj.velocity(t + eps);
    case Form::trajectory_map:
      if (velocity_map) return velocity_map(eps, t, traj);
      return along(
          traj, [&](double s) -> Vec { return position_map(eps, s, traj); }, t, h_t);
  }
  return {};
}

// ---- TimeChange -------------------------------------------------------------

TimeChange TimeChange::identity(Style style) {
  TimeChange c;
  c.style = style;
  return c;
}

TimeChange TimeChange::linear(Style style, RateFn rate, bool local) {
  TimeChange c;
  c.style = style;
  c.value = [rate](double eps, double t, const Trajectory& traj) { return t + eps * rate(t, traj); };
  c.rate_fn = std::move(rate);
  c.exact_rate = true;
  c.local = local;
  return c;
}

TimeChange TimeChange::general(Style style, ScalarMap value, RateFn rate, bool exact_rate) {
  TimeChange c;
  c.style = style;
  c.value = std::move(value);
  c.rate_fn = std::move(rate);
  c.exact_rate = c.rate_fn && exact_rate;
  return c;
}

double TimeChange::at(double eps, double t, const Trajectory& traj) const {
  if (trivial() || eps == 0.0) return t;
  return value(eps, t, traj);
}

double TimeChange::rate(double t, const Trajectory& traj) const {
  if (trivial()) return 0.0;
  if (rate_fn) return rate_fn(t, traj);
  return central_difference([&](double eps) { return value(eps, t, traj); }, 0.0, eps0);
}

double TimeChange::rate_dt(double t, const Trajectory& traj) const {
  if (trivial()) return 0.0;
  return along(
      traj, [&](double s) { return rate(s, traj); }, t, !exact_rate);
}

double TimeChange::inverse(double eps, double xi, const Trajectory& traj) const {
  if (trivial() || eps == 0.0) return xi;
  if (inverse_fn) return inverse_fn(eps, xi, traj);
  double t = xi;
  for (int iter = 0; iter < 60; ++iter) {
    const double h = kTimeStep * std::max(1.0, std::abs(t));
    const double slope = (value(eps, t + h, traj) - value(eps, t - h, traj)) / (2.0 * h);
    const double step = (value(eps, t, traj) - xi) / slope;
    t -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(xi))) return t;
  }
  throw Error("time change inverse did not converge at xi=" + std::to_string(xi));
}

// ---- BHFunction -------------------------------------------------------------

BHFunction BHFunction::zero() { return {}; }

BHFunction BHFunction::linear(RateFn rate, bool local) {
  BHFunction g;
  g.value = [rate](double eps, double t, const Trajectory& traj) { return eps * rate(t, traj); };
  g.rate_fn = std::move(rate);
  g.exact_rate = true;
  g.local = local;
  return g;
}

BHFunction BHFunction::general(ScalarMap value, RateFn rate, bool exact_rate, bool local) {
  BHFunction g;
  g.value = std::move(value);
  g.rate_fn = std::move(rate);
  g.exact_rate = g.rate_fn && exact_rate;
  g.local = local;
  return g;
}

double BHFunction::at(double eps, double t, const Trajectory& traj) const {
  if (trivial()) return 0.0;
  return value(eps, t, traj);
}

double BHFunction::rate(double t, const Trajectory& traj) const {
  if (trivial()) return 0.0;
  if (rate_fn) return rate_fn(t, traj);
  return central_difference([&](double eps) { return value(eps, t, traj); }, 0.0, eps0);
}

double BHFunction::rate_dt(double t, const Trajectory& traj) const {
  if (trivial()) return 0.0;
  return along(
      traj, [&](double s) { return rate(s, traj); }, t, !exact_rate);
}

// ---- derivatives along trajectories -----------------------------------------

double along(const Trajectory& traj, const std::function<double(double)>& f, double t, bool wide, double h) {
  if (wide) return five_point_difference(f, t, fit_step(t, kWideTimeStep, traj.lo(), traj.hi(), 2.0));
  return central_difference(f, t, fit_step(t, h, traj.lo(), traj.hi(), 1.0));
}

Vec along(const Trajectory& traj, const std::function<Vec(double)>& f, double t, double h) {
  return central_difference(f, t, fit_step(t, h, traj.lo(), traj.hi(), 1.0));
}

std::shared_ptr<const CumulativeIntegral> trajectory_integral(
    const Trajectory& traj, const std::string& key, const std::function<Vec(double, const State&)>& f) {
  return traj.memo<CumulativeIntegral>(key, [&] {
    return CumulativeIntegral(traj.quadrature_nodes(), [&](double s) { return f(s, traj.at(s)); });
  });
}

std::vector<double> residual_grid(const Trajectory& traj) {
  return check_grid(traj.interval().a, traj.interval().b, 64);
}

// ---- epsilon derivatives ----------------------------------------------------

Vec d_eps_space(const SpaceChange& space, const Trajectory& traj, double t) {
  if (space.form == SpaceChange::Form::pointwise) {
    const State s = traj.at(t);
    return space.phi(t, s.q, s.qdot);
  }
  return central_difference([&](double eps) { return space.position(eps, t, traj); }, 0.0, space.eps0);
}

Vec d_eps_velocity(const SpaceChange& space, const Trajectory& traj, double t) {
  if (space.form == SpaceChange::Form::pointwise) {
    return along(
        traj,
        [&](double s) -> Vec {
          const State st = traj.at(s);
          return space.phi(s, st.q, st.qdot);
        },
        t, space.h_t);
  }
  return central_difference([&](double eps) { return space.velocity(eps, t, traj); }, 0.0, space.eps0);
}

double d_eps_lagrangian(const LagrangianSystem& sys, const SpaceChange& space, const Trajectory& traj, double t) {
  return central_difference(
      [&](double eps) {
        return lagrangian(sys, t, space.position(eps, t, traj), space.velocity(eps, t, traj));
      },
      0.0, space.eps0);
}

double d_eps_lagrangian_chain(const LagrangianSystem& sys, const SpaceChange& space, const Trajectory& traj,
                              double t) {
  const State s = traj.at(t);
  return grad_q(sys, t, s.q, s.qdot).dot(d_eps_space(space, traj, t)) +
         grad_qdot(sys, t, s.q, s.qdot).dot(d_eps_velocity(space, traj, t));
}

// ---- invariance residuals ---------------------------------------------------

// The d/dt tau factor (resp. theta') is expanded by the product rule, so no
// epsilon difference is nested inside a time difference.

double invariance_residual(const LagrangianSystem& sys, const SymmetryTriple& triple, const Trajectory& traj,
                           double t) {
  if (triple.style() != Style::tau) throw StyleMismatch("invariance_residual expects a tau-style triple");
  const SpaceChange& space = triple.space;
  const double d_lagrangian = central_difference(
      [&](double eps) {
        const double tau = triple.time.at(eps, t, traj);
        return lagrangian(sys, tau, space.position(eps, tau, traj), space.velocity(eps, tau, traj));
      },
      0.0, space.eps0);
  const double shifted = traj.lagrangian_at(t) + triple.lagrangian_shift;
  return d_lagrangian + shifted * triple.time.rate_dt(t, traj) + triple.bh.rate_dt(t, traj);
}

double alt_invariance_residual(const LagrangianSystem& sys, const SymmetryTriple& triple, const Trajectory& traj,
                               double t) {
  if (triple.style() != Style::theta) throw StyleMismatch("alt_invariance_residual expects a theta-style triple");
  const SpaceChange& space = triple.space;
  const double theta_rate_dt = triple.time.rate_dt(t, traj);
  const double d_lagrangian = central_difference(
      [&](double eps) {
        const double theta = triple.time.at(eps, t, traj);
        const double stretch = 1.0 + eps * theta_rate_dt;
        return lagrangian(sys, theta, space.position(eps, t, traj), space.velocity(eps, t, traj) / stretch);
      },
      0.0, space.eps0);
  const double shifted = traj.lagrangian_at(t) + triple.lagrangian_shift;
  return d_lagrangian + shifted * theta_rate_dt + triple.bh.rate_dt(t, traj);
}

double residual(const LagrangianSystem& sys, const SymmetryTriple& triple, const Trajectory& traj, double t) {
  return triple.style() == Style::tau ? invariance_residual(sys, triple, traj, t)
                                      : alt_invariance_residual(sys, triple, traj, t);
}

double max_residual(const LagrangianSystem& sys, const SymmetryTriple& triple, const Trajectory& traj) {
  double worst = 0.0;
  for (double t : residual_grid(traj)) {
    const double r = std::abs(residual(sys, triple, traj, t));
    if (!std::isfinite(r)) return r;
    worst = std::max(worst, r);
  }
  return worst;
}

double total_derivative_residual(const LagrangianSystem& sys, const SpaceChange& space, const ScalarField& psi,
                                 const Trajectory& traj, double t) {
  const double dpsi = along(
      traj,
      [&](double s) {
        const State st = traj.at(s);
        return psi(s, st.q, st.qdot);
      },
      t, false, space.h_t);
  return d_eps_lagrangian(sys, space, traj, t) - dpsi;
}

double total_derivative_check(const LagrangianSystem& sys, const SpaceChange& space, const ScalarField& psi,
                              const Trajectory& traj) {
  double worst = 0.0;
  for (double t : residual_grid(traj)) {
    worst = std::max(worst, std::abs(total_derivative_residual(sys, space, psi, traj, t)));
  }
  return worst;
}

}  // namespace noether
