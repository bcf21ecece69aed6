#include "builders.hpp"

#include <cmath>
#include <numbers>

namespace noether::detail {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

ConservedQuantity angular_momentum() {
  return point_function("angular_momentum", [](double, const Vec& q, const Vec& qd) { return det2(q, qd); });
}

}  // namespace

CatalogEntry free_particle() {
  CatalogEntry e;
  e.id = "free_particle";
  e.title = "Free particle in the plane";
  e.summary = "Translations and rotations: momentum and angular momentum.";
  e.tags = {"momentum", "angular-momentum"};
  e.system = mechanical(
      "free particle", 2, 1.0, [](double, const Vec&) { return 0.0; }, [](double, const Vec& q) -> Vec {
        return Vec::Zero(q.size());
      });
  e.default_ivp = make_ivp(vec({0.5, -0.3}), vec({1.0, 0.5}), {0.0, kTwoPi});
  e.off_shell = trig_curve(vec({0.2, 0.1}), vec({1.0, 0.7}), vec({1.3, 0.9}), vec({0.0, 0.5}));
  const SystemPtr sys = e.system;

  e.triples.push_back(named("translation_x", "q + eps e1", "momentum",
                            {translation(vec({1.0, 0.0})), TimeChange::identity(), BHFunction::zero()},
                            Applicability::non_el_too));
  e.triples.push_back(named("translation_y", "q + eps e2", "momentum",
                            {translation(vec({0.0, 1.0})), TimeChange::identity(), BHFunction::zero()},
                            Applicability::non_el_too));
  e.triples.push_back(named("rotation", "R(eps) q", "angular-momentum",
                            {rotation(), TimeChange::identity(), BHFunction::zero()}, Applicability::non_el_too));

  e.expected.push_back(expect("momentum_x", "qdot . e1", simple_constant(*sys, e.triples[0].triple.space)));
  e.expected.push_back(expect("momentum_y", "qdot . e2", simple_constant(*sys, e.triples[1].triple.space)));
  e.expected.push_back(expect("angular_momentum", "det(q, qdot)", simple_constant(*sys, rotation())));
  e.expected.push_back(expect("energy", "|qdot|^2 / 2", energy_constant(sys)));
  return e;
}

CatalogEntry central_force_2d() {
  CatalogEntry e;
  e.id = "central_force_2d";
  e.title = "Time-dependent central force";
  e.summary = "U = (1 + 0.3 sin t) |q|^2 / 2: rotations give det(q, qdot) although energy is not conserved.";
  e.tags = {"angular-momentum"};
  e.system = mechanical(
      "pulsating central force", 2, 1.0,
      [](double t, const Vec& q) { return 0.5 * (1.0 + 0.3 * std::sin(t)) * q.squaredNorm(); },
      [](double t, const Vec& q) -> Vec { return (1.0 + 0.3 * std::sin(t)) * q; });
  e.default_ivp = make_ivp(vec({1.0, 0.0}), vec({0.0, 0.8}), {0.0, kTwoPi});
  e.off_shell = trig_curve(vec({0.1, -0.2}), vec({1.1, 0.6}), vec({1.0, 1.4}), vec({0.3, 0.0}));
  const SystemPtr sys = e.system;

  e.triples.push_back(named("rotation", "R(eps) q, tau = t, G = 0", "angular-momentum",
                            {rotation(), TimeChange::identity(), BHFunction::zero()}, Applicability::non_el_too));
  e.expected.push_back(expect("angular_momentum", "p . d/deps R(eps) q", simple_constant(*sys, rotation())));
  e.expected.push_back(expect("angular_momentum_closed_form", "det(q, qdot)", angular_momentum()));

  e.checks.push_back({"energy_not_conserved", "p . qdot - L drifts for the time-dependent potential",
                      [sys](const Trajectory& traj, SplitMix64&) {
                        const auto report = drift(energy_constant(sys), traj, 1e-6);
                        return exceeds(report.max_abs_drift, 1e-3, "energy drift is expected here");
                      }});
  return e;
}

CatalogEntry plane_wave() {
  CatalogEntry e;
  e.id = "plane_wave";
  e.title = "Particle in a plane-wave-like field";
  e.summary = "L = |qdot|^2 / 2 - U(q - t u): qdot . u - E is a first integral.";
  e.tags = {"plane-wave", "gauge"};
  const Vec u = vec({1.0, 0.0});
  e.system = mechanical(
      "plane-wave field", 2, 1.0, [u](double t, const Vec& q) { return 0.5 * (q - t * u).squaredNorm(); },
      [u](double t, const Vec& q) -> Vec { return q - t * u; });
  e.default_ivp = make_ivp(vec({1.0, 0.0}), vec({0.0, 1.0}), {0.0, kTwoPi});
  e.off_shell = trig_curve(vec({0.0, 0.3}), vec({1.0, 0.8}), vec({0.8, 1.2}), vec({0.2, 0.0}));
  const SystemPtr sys = e.system;

  const SymmetryTriple triple{translation(u),
                              TimeChange::linear(Style::tau, [](double, const Trajectory&) { return 1.0; }),
                              BHFunction::linear(state_rate([](double, const Vec&, const Vec& qd) {
                                return -qd.squaredNorm();
                              }))};
  e.triples.push_back(named("shift_and_advance", "q + eps u, tau = t + eps, G = -eps |qdot|^2", "plane-wave", triple));

  e.expected.push_back(expect("wave_constant", "qdot . u + L - |qdot|^2", full_constant(*sys, triple)));
  e.expected.push_back(expect("wave_constant_closed_form", "qdot . u - E",
                              point_function("wave", [sys, u](double t, const Vec& q, const Vec& qd) {
                                return qd.dot(u) - energy(*sys, t, q, qd);
                              })));

  e.checks.push_back({"time_trivialized_gauge", "removing the time change gives G + eps L",
                      [sys, triple](const Trajectory& traj, SplitMix64&) {
                        const auto out = trivialize_time(*sys, triple);
                        return at_most(grid_max(traj,
                                                [&](double t) {
                                                  const State s = traj.at(t);
                                                  return out.bh.rate(t, traj) -
                                                         (-s.qdot.squaredNorm() + traj.lagrangian_at(t));
                                                }),
                                       1e-12);
                      }});
  return e;
}

}  // namespace noether::detail
