#include "builders.hpp"

#include <algorithm>
#include <cmath>

namespace noether::detail {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

SystemPtr mechanical(std::string name, int dim, double mass, Potential potential, PotentialGradient gradient,
                     DomainGuard guard) {
  auto s = std::make_shared<LagrangianSystem>();
  s->name = std::move(name);
  s->dim = dim;
  s->lagrangian = [mass, potential](double t, const Vec& q, const Vec& qd) {
    return 0.5 * mass * qd.squaredNorm() - potential(t, q);
  };
  s->grads.q = [gradient](double t, const Vec& q, const Vec&) -> Vec { return -gradient(t, q); };
  s->grads.qdot = [mass](double, const Vec&, const Vec& qd) -> Vec { return mass * qd; };
  s->grads.qdot_qdot = [mass, dim](double, const Vec&, const Vec&) -> Mat { return mass * Mat::Identity(dim, dim); };
  s->grads.qdot_q = [dim](double, const Vec&, const Vec&) -> Mat { return Mat::Zero(dim, dim); };
  s->grads.qdot_t = [dim](double, const Vec&, const Vec&) -> Vec { return Vec::Zero(dim); };
  s->domain_guard = std::move(guard);
  return s;
}

InitialValueProblem make_ivp(Vec q0, Vec qdot0, Interval interval, std::optional<Padding> pad) {
  InitialValueProblem p;
  p.t0 = interval.a;
  p.q0 = std::move(q0);
  p.qdot0 = std::move(qdot0);
  p.interval = interval;
  p.pad = pad;
  p.step = StepControl::adaptive(1e-10, 1e-12);
  return p;
}

Trajectory::Curve trig_curve(Vec center, Vec amplitude, Vec omega, Vec phase) {
  return [=](double t) {
    const Eigen::ArrayXd arg = omega.array() * t + phase.array();
    State s;
    s.t = t;
    s.q = center.array() + amplitude.array() * arg.cos();
    s.qdot = -amplitude.array() * omega.array() * arg.sin();
    s.qddot = -amplitude.array() * omega.array().square() * arg.cos();
    return s;
  };
}

ExpectedConstant expect(std::string id, std::string description, ConservedQuantity cq, double tolerance,
                        Applicability applicability) {
  cq.name = id;
  ExpectedConstant e;
  e.id = std::move(id);
  e.description = std::move(description);
  e.build = [cq = std::move(cq)](const Trajectory&) { return cq; };
  e.tolerance = tolerance;
  e.applicability = applicability;
  return e;
}

NamedTriple named(std::string id, std::string description, std::string tag, SymmetryTriple triple,
                  Applicability applicability) {
  return {std::move(id), std::move(description), std::move(tag), std::move(triple), applicability};
}

ConservedQuantity rename(ConservedQuantity cq, std::string name) {
  cq.name = std::move(name);
  return cq;
}

ConservedQuantity energy_constant(const SystemPtr& sys) {
  return point_function("energy", [sys](double t, const Vec& q, const Vec& qd) { return energy(*sys, t, q, qd); });
}

RateFn state_rate(ScalarField f) {
  return [f = std::move(f)](double t, const Trajectory& traj) {
    const State s = traj.at(t);
    return f(t, s.q, s.qdot);
  };
}

SpaceChange translation(Vec u) {
  return SpaceChange::pointwise([u = std::move(u)](double, const Vec&, const Vec&) -> Vec { return u; });
}

SpaceChange rotation() {
  auto turn = [](double eps, const Vec& v) -> Vec {
    const double c = std::cos(eps), s = std::sin(eps);
    return vec({c * v(0) - s * v(1), s * v(0) + c * v(1)});
  };
  return SpaceChange::trajectory_map(
      [turn](double eps, double t, const Trajectory& traj) { return turn(eps, traj.position(t)); },
      [turn](double eps, double t, const Trajectory& traj) { return turn(eps, traj.velocity(t)); });
}

double det2(const Vec& a, const Vec& b) { return a(0) * b(1) - a(1) * b(0); }

double grid_max(const Trajectory& traj, const std::function<double(double)>& f) {
  double worst = 0.0;
  for (double t : residual_grid(traj)) {
    const double v = std::abs(f(t));
    if (!std::isfinite(v)) return v;
    worst = std::max(worst, v);
  }
  return worst;
}

CheckResult at_most(double value, double tolerance, std::string detail) {
  return {value, tolerance, value <= tolerance, std::move(detail)};
}

CheckResult exceeds(double value, double threshold, std::string detail) {
  return {value, threshold, value > threshold, std::move(detail)};
}

double baseline_gap(const ConservedQuantity& x, const ConservedQuantity& y, const Trajectory& traj) {
  const double a = traj.interval().a;
  const double x0 = x(a, traj), y0 = y(a, traj);
  return grid_max(traj, [&](double t) { return (x(t, traj) - x0) - (y(t, traj) - y0); });
}

EntryCheck cone_velocity_check(int dim, int draws) {
  EntryCheck check;
  check.id = "initial_velocity_constant";
  check.description = "translation nonlocal constant equals qdot(t0) . v for random v";
  check.run = [dim, draws](const Trajectory& traj, SplitMix64& rng) {
    const double t0 = traj.interval().a;
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
      Vec v(dim);
      for (int j = 0; j < dim; ++j) v(j) = rng.uniform(-1.0, 1.0);
      const auto cq = nonlocal_constant(traj.system(), translation(v), t0);
      const double expected = traj.velocity(t0).dot(v);
      worst = std::max(worst, grid_max(traj, [&](double t) { return cq(t, traj) - expected; }));
    }
    return at_most(worst, 1e-6, std::to_string(draws) + " random directions");
  };
  return check;
}

}  // namespace noether::detail
