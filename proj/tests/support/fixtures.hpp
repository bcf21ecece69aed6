#pragma once

#include "noether/dynamics.hpp"

#include <cmath>
#include <initializer_list>
#include <memory>

namespace noether::testing {

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// L = qdot^2/2 - q^2/2 with closed-form gradients.
inline SystemPtr harmonic() {
  auto s = std::make_shared<LagrangianSystem>();
  s->name = "harmonic";
  s->dim = 1;
  s->lagrangian = [](double, const Vec& q, const Vec& qd) { return 0.5 * qd(0) * qd(0) - 0.5 * q(0) * q(0); };
  s->grads.q = [](double, const Vec& q, const Vec&) -> Vec { return -q; };
  s->grads.qdot = [](double, const Vec&, const Vec& qd) -> Vec { return qd; };
  s->grads.qdot_qdot = [](double, const Vec&, const Vec&) -> Mat { return Mat::Identity(1, 1); };
  s->grads.qdot_q = [](double, const Vec&, const Vec&) -> Mat { return Mat::Zero(1, 1); };
  s->grads.qdot_t = [](double, const Vec&, const Vec&) -> Vec { return Vec::Zero(1); };
  return s;
}

/// L = |qdot|^2/2 in `dim` dimensions.
inline SystemPtr free_particle(int dim) {
  auto s = std::make_shared<LagrangianSystem>();
  s->name = "free";
  s->dim = dim;
  s->lagrangian = [](double, const Vec&, const Vec& qd) { return 0.5 * qd.squaredNorm(); };
  return s;
}

/// L = |qdot|^2/2 + k/|q| in the plane.
inline SystemPtr kepler(double k = 1.0) {
  auto s = std::make_shared<LagrangianSystem>();
  s->name = "kepler";
  s->dim = 2;
  s->lagrangian = [k](double, const Vec& q, const Vec& qd) { return 0.5 * qd.squaredNorm() + k / q.norm(); };
  s->grads.q = [k](double, const Vec& q, const Vec&) -> Vec { return -k * q / std::pow(q.norm(), 3); };
  s->grads.qdot = [](double, const Vec&, const Vec& qd) -> Vec { return qd; };
  s->domain_guard = [](double, const Vec& q, const Vec&) { return q.norm() > 1e-9; };
  return s;
}

/// Integrated motion with tight tolerances.
inline Trajectory solve(SystemPtr sys, Vec q0, Vec qd0, double a, double b) {
  InitialValueProblem p;
  p.t0 = a;
  p.q0 = std::move(q0);
  p.qdot0 = std::move(qd0);
  p.interval = {a, b};
  p.step = StepControl::adaptive(1e-11, 1e-13);
  return integrate(std::move(sys), p);
}

/// Closed-form curve t -> (f(t), f'(t), f''(t)) in one dimension.
template <class F, class D1, class D2>
Trajectory curve1(SystemPtr sys, double a, double b, F f, D1 d1, D2 d2) {
  const Padding pad{0.2 * (b - a), 0.2 * (b - a)};
  return Trajectory::from_curve(std::move(sys), {a, b}, pad, [=](double t) {
    return State{t, vec({f(t)}), vec({d1(t)}), vec({d2(t)})};
  });
}

}  // namespace noether::testing
