#include "builders.hpp"

#include "noether/errors.hpp"

#include <cmath>
#include <numbers>

namespace noether::detail {

namespace {

constexpr double kStrength = 1.0;

SystemPtr kepler_system() {
  return mechanical(
      "kepler", 2, 1.0, [](double, const Vec& q) { return -kStrength / q.norm(); },
      [](double, const Vec& q) -> Vec { return kStrength * q / std::pow(q.norm(), 3); },
      [](double, const Vec& q, const Vec&) { return q.norm() > 1e-9; });
}

Vec perp(const Vec& u) { return vec({-u(1), u(0)}); }

// q(t) + det(q(t), q(t + eps)) u_perp.
SpaceChange lrl_family(const Vec& u) {
  const Vec w = perp(u);
  return SpaceChange::trajectory_map(
      [w](double eps, double t, const Trajectory& traj) -> Vec {
        const Vec q = traj.position(t);
        return q + det2(q, traj.position(t + eps)) * w;
      },
      [w](double eps, double t, const Trajectory& traj) -> Vec {
        const State s = traj.at(t);
        const State later = traj.at(t + eps);
        return s.qdot + (det2(s.qdot, later.q) + det2(s.q, later.qdot)) * w;
      });
}

double radial_term(const Vec& q, const Vec& u) { return -kStrength * q.dot(u) / q.norm(); }

SymmetryTriple lrl_bh(const Vec& u) {
  return {lrl_family(u), TimeChange::identity(),
          BHFunction::linear(state_rate([u](double, const Vec& q, const Vec&) { return radial_term(q, u); }))};
}

SymmetryTriple lrl_time(const Vec& u) {
  return {lrl_family(u), TimeChange::linear(Style::tau,
                                            [u](double t, const Trajectory& traj) {
                                              return radial_term(traj.position(t), u) / traj.lagrangian_at(t);
                                            }),
          BHFunction::zero()};
}

// Theta-style triple whose constant is minus the LRL component along u.
SymmetryTriple sarlet_cantrijn(const Vec& u) {
  auto xi = [u](const Vec& q, const Vec& qd) -> Vec {
    const double radial = q.dot(qd), areal = det2(qd, q);
    return vec({u(0) * radial - u(1) * areal, u(1) * radial + u(0) * areal});
  };
  return {SpaceChange::pointwise([xi](double, const Vec& q, const Vec& qd) { return xi(q, qd); }),
          TimeChange::linear(Style::theta, [u](double t, const Trajectory& traj) { return traj.position(t).dot(u); }),
          BHFunction::linear(state_rate([xi](double, const Vec& q, const Vec& qd) { return -0.5 * qd.dot(xi(q, qd)); }))};
}

double lrl_closed_form(const Vec& q, const Vec& qd, const Vec& u) {
  return q.dot(u) * qd.squaredNorm() - qd.dot(u) * qd.dot(q) + radial_term(q, u);
}

}  // namespace

CatalogEntry kepler_2d() {
  CatalogEntry e;
  e.id = "kepler_2d";
  e.title = "Kepler problem in the plane";
  e.summary = "Three routes to the Laplace-Runge-Lenz vector: a gauge term, a time change, and an alternative-style triple.";
  e.tags = {"kepler", "gauge", "trivialization", "alternative-style"};
  e.system = kepler_system();
  const SystemPtr sys = e.system;
  e.default_ivp = make_ivp(vec({1.0, 0.0}), vec({0.0, 1.2}), {0.0, 15.0});
  e.off_shell = trig_curve(vec({0.2, 0.0}), vec({1.5, 1.0}), vec({1.0, 1.0}), vec({0.0, -0.5 * std::numbers::pi}));

  const Vec e1 = vec({1.0, 0.0}), e2 = vec({0.0, 1.0});
  e.triples.push_back(named("lrl_bh", "q + det(q, q(t + eps)) e2, G = -eps k q1 / |q|", "gauge", lrl_bh(e1)));
  e.triples.push_back(named("lrl_time", "same family, tau = t - eps k q1 / (|q| L)", "trivialization", lrl_time(e1)));
  e.triples.push_back(named("sarlet_cantrijn", "Xi(q, qdot), theta = t + eps q1, G = -eps qdot . Xi / 2",
                            "alternative-style", sarlet_cantrijn(e1), Applicability::non_el_too));

  e.expected.push_back(expect("lrl_x", "LRL component along e1", full_constant(*sys, lrl_bh(e1))));
  e.expected.push_back(expect("lrl_y", "LRL component along e2", full_constant(*sys, lrl_bh(e2))));
  e.expected.push_back(expect("energy", "|qdot|^2 / 2 - k / |q|", energy_constant(sys)));
  e.expected.push_back(expect("angular_momentum", "det(q, qdot)", simple_constant(*sys, rotation())));

  e.checks.push_back({"alternative_is_minus_lrl", "alternative-style constant equals minus the LRL component",
                      [sys](const Trajectory& traj, SplitMix64&) {
                        double worst = 0.0;
                        for (const Vec& u : {vec({1.0, 0.0}), vec({0.0, 1.0})}) {
                          const auto alt = alt_full_constant(*sys, sarlet_cantrijn(u));
                          const auto lrl = full_constant(*sys, lrl_bh(u));
                          worst = std::max(worst, grid_max(traj, [&](double t) { return alt(t, traj) + lrl(t, traj); }));
                        }
                        return at_most(worst, 1e-6);
                      }});
  e.checks.push_back({"lrl_closed_form", "gauge constant equals (q.u)|qdot|^2 - (qdot.u)(qdot.q) - k (q.u)/|q|",
                      [sys](const Trajectory& traj, SplitMix64&) {
                        const Vec u = vec({1.0, 0.0});
                        const auto lrl = full_constant(*sys, lrl_bh(u));
                        return at_most(grid_max(traj,
                                                [&](double t) {
                                                  const State s = traj.at(t);
                                                  return lrl(t, traj) - lrl_closed_form(s.q, s.qdot, u);
                                                }),
                                       1e-8);
                      }});
  e.checks.push_back({"lrl_linear_in_direction", "constant for random u equals u1 A1 + u2 A2",
                      [sys](const Trajectory& traj, SplitMix64& rng) {
                        const auto a1 = full_constant(*sys, lrl_bh(vec({1.0, 0.0})));
                        const auto a2 = full_constant(*sys, lrl_bh(vec({0.0, 1.0})));
                        double worst = 0.0;
                        for (int i = 0; i < 3; ++i) {
                          const double angle = rng.uniform(0.0, 2 * std::numbers::pi);
                          const Vec u = vec({std::cos(angle), std::sin(angle)});
                          const auto au = full_constant(*sys, lrl_bh(u));
                          worst = std::max(worst, grid_max(traj, [&](double t) {
                                             return au(t, traj) - u(0) * a1(t, traj) - u(1) * a2(t, traj);
                                           }));
                        }
                        return at_most(worst, 1e-6, "3 random unit directions");
                      }});
  e.checks.push_back({"time_change_from_trivialization", "trivializing the gauge term with no shift gives the time change",
                      [sys](const Trajectory& traj, SplitMix64&) {
                        const Vec u = vec({1.0, 0.0});
                        const auto moved = trivialize_bh(*sys, lrl_bh(u), traj, 0.0);
                        const auto direct = lrl_time(u);
                        return at_most(grid_max(traj,
                                                [&](double t) {
                                                  return moved.time.rate(t, traj) - direct.time.rate(t, traj);
                                                }),
                                       1e-12);
                      }});
  e.checks.push_back({"degree_minus_one_scaling", "q . qdot - 3 t E / 2 - int L / 2 is constant",
                      [sys](const Trajectory& traj, SplitMix64&) {
                        const auto cq = point_plus_integral(
                            "degree_minus_one",
                            [sys](double t, const Vec& q, const Vec& qd) {
                              return q.dot(qd) - 1.5 * t * energy(*sys, t, q, qd);
                            },
                            [sys](double t, const Vec& q, const Vec& qd) { return lagrangian(*sys, t, q, qd); }, -0.5);
                        return at_most(drift(cq, traj, 1e-6).rel_drift, 1e-6);
                      }});
  e.notes = {"k = 1. The Laplace-Runge-Lenz family moves q along u_perp by det(q(t), q(t + eps)).",
             "Its time-change form divides by L, which stays positive for the Kepler Lagrangian."};
  return e;
}

CatalogEntry kepler_circular() {
  CatalogEntry e;
  e.id = "kepler_circular";
  e.title = "Circular Kepler orbit";
  e.summary = "e^eps q(t + eps) leaves L invariant only on the circular motion; its constant is the speed squared.";
  e.tags = {"kepler", "single-motion"};
  e.system = kepler_system();
  const SystemPtr sys = e.system;
  e.default_ivp = make_ivp(vec({1.0, 0.0}), vec({0.0, 1.0}), {0.0, 2 * std::numbers::pi});
  e.off_shell = trig_curve(vec({0.2, 0.0}), vec({1.5, 1.0}), vec({1.0, 1.0}), vec({0.0, -0.5 * std::numbers::pi}));

  const SymmetryTriple phase{
      SpaceChange::trajectory_map(
          [](double eps, double t, const Trajectory& traj) -> Vec { return std::exp(eps) * traj.position(t + eps); },
          [](double eps, double t, const Trajectory& traj) -> Vec { return std::exp(eps) * traj.velocity(t + eps); }),
      TimeChange::identity(), BHFunction::zero()};
  e.triples.push_back(named("dilate_and_advance", "e^eps q(t + eps)", "single-motion", phase,
                            Applicability::single_motion));

  ExpectedConstant speed;
  speed.id = "speed_squared";
  speed.description = "p . (q + qdot), equal to |qdot|^2 on the circle";
  speed.build = [sys, phase](const Trajectory& traj) {
    auto cq = single_motion_constant(*sys, phase, traj);
    cq.name = "speed_squared";
    return cq;
  };
  speed.tolerance = 1e-8;
  speed.applicability = Applicability::single_motion;
  e.expected.push_back(speed);

  auto eccentric = [sys](const Trajectory& traj) {
    InitialValueProblem ivp = make_ivp(vec({1.0, 0.0}), vec({0.0, 1.2}), traj.interval());
    return integrate(sys, ivp);
  };
  e.checks.push_back({"speed_is_one", "the constant equals 1 on the unit circle",
                      [sys, phase](const Trajectory& traj, SplitMix64&) {
                        const auto cq = single_motion_constant(*sys, phase, traj);
                        return at_most(grid_max(traj, [&](double t) { return cq(t, traj) - 1.0; }), 1e-8);
                      }});
  e.checks.push_back({"eccentric_speed_varies", "|qdot|^2 drifts on an eccentric orbit",
                      [eccentric](const Trajectory& traj, SplitMix64&) {
                        const Trajectory other = eccentric(traj);
                        const auto speed = point_function("speed", [](double, const Vec&, const Vec& qd) {
                          return qd.squaredNorm();
                        });
                        return exceeds(drift(speed, other, 1e-6).max_abs_drift, 1e-2);
                      }});
  e.checks.push_back({"eccentric_rejected", "the single-motion constant refuses the eccentric orbit",
                      [sys, phase, eccentric](const Trajectory& traj, SplitMix64&) {
                        const Trajectory other = eccentric(traj);
                        try {
                          single_motion_constant(*sys, phase, other);
                        } catch (const ResidualTooLarge&) {
                          return CheckResult{max_residual(*sys, phase, other), 1e-6, true, "rejected"};
                        }
                        return CheckResult{max_residual(*sys, phase, other), 1e-6, false, "accepted"};
                      }});
  e.notes = {"omega = R = k = 1."};
  return e;
}

}  // namespace noether::detail
