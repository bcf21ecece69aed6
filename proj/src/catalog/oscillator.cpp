#include "builders.hpp"

#include <cmath>
#include <numbers>

namespace noether::detail {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

SystemPtr harmonic() {
  return mechanical(
      "harmonic oscillator", 1, 1.0, [](double, const Vec& q) { return 0.5 * q.squaredNorm(); },
      [](double, const Vec& q) -> Vec { return q; });
}

CatalogEntry base(std::string id, std::string title) {
  CatalogEntry e;
  e.id = std::move(id);
  e.title = std::move(title);
  e.system = harmonic();
  e.default_ivp = make_ivp(vec({0.0}), vec({1.0}), {0.0, kTwoPi});
  e.off_shell = trig_curve(vec({0.3}), vec({1.2}), vec({1.7}), vec({0.4}));
  e.tags = {"oscillator"};
  return e;
}

// q(t) = t^2 on [a, b]: a smooth curve that is not a motion.
Trajectory parabola(const SystemPtr& sys, const Trajectory& like) {
  return Trajectory::from_curve(sys, like.interval(), like.padding(), [](double t) {
    return State{t, vec({t * t}), vec({2 * t}), vec({2.0})};
  });
}

SpaceChange shift() { return translation(vec({1.0})); }

SpaceChange dilation() {
  return SpaceChange::pointwise([](double, const Vec& q, const Vec&) -> Vec { return q; });
}

// Cumulative integral of a state function along the trajectory.
std::function<double(double, double, const Trajectory&)> running_integral(std::string key, ScalarField f) {
  return [key = std::move(key), f = std::move(f)](double from, double to, const Trajectory& traj) {
    const auto integral = trajectory_integral(traj, key, [&](double s, const State& st) -> Vec {
      return Vec::Constant(1, f(s, st.q, st.qdot));
    });
    return integral->between(from, to)(0);
  };
}

}  // namespace

CatalogEntry oscillator_energy() {
  CatalogEntry e = base("oscillator_energy", "Energy of the harmonic oscillator");
  e.summary = "Four triples built on the time-shift family, all giving the energy.";
  e.tags.push_back("energy");
  const SystemPtr sys = e.system;

  const RateFn minus_l = [](double t, const Trajectory& traj) { return -traj.lagrangian_at(t); };
  const auto integral_of_l = running_integral("energy_l:" + std::to_string(next_unique_id()),
                                              [sys](double t, const Vec& q, const Vec& qd) {
                                                return lagrangian(*sys, t, q, qd);
                                              });

  e.triples.push_back(named("energy_bh", "q(t+eps), tau = t, G = -eps L", "energy",
                            {SpaceChange::time_shift(), TimeChange::identity(), BHFunction::linear(minus_l)},
                            Applicability::non_el_too));
  e.triples.push_back(named(
      "energy_time", "q(t+eps), tau = t - eps, G = 0", "energy",
      {SpaceChange::time_shift(), TimeChange::linear(Style::tau, [](double, const Trajectory&) { return -1.0; }),
       BHFunction::zero()},
      Applicability::non_el_too));
  e.triples.push_back(named("energy_integral_bh", "q(t+eps), tau = t, G = -int_t^{t+eps} L: finite invariance",
                            "energy",
                            {SpaceChange::time_shift(), TimeChange::identity(),
                             BHFunction::general(
                                 [integral_of_l](double eps, double t, const Trajectory& traj) {
                                   return -integral_of_l(t, t + eps, traj);
                                 },
                                 {}, false, false)},
                            Applicability::non_el_too));
  e.triples.push_back(named(
      "energy_first_order", "q + eps qdot, tau = t, G = -eps L", "energy",
      {SpaceChange::pointwise([](double, const Vec&, const Vec& qd) -> Vec { return qd; }), TimeChange::identity(),
       BHFunction::linear(minus_l)},
      Applicability::non_el_too));

  for (const auto& t : e.triples) {
    e.expected.push_back(expect("energy_from_" + t.id, "p . qdot - L from the " + t.id + " triple",
                                triple_constant(*sys, t.triple)));
  }
  e.expected.push_back(expect("energy", "(qdot^2 + q^2) / 2", energy_constant(sys)));

  e.total_derivatives.push_back({"time_shift_lagrangian", "d/deps L(q(t+eps)) = d/dt L for autonomous L",
                                 SpaceChange::time_shift(),
                                 [sys](double t, const Vec& q, const Vec& qd) { return lagrangian(*sys, t, q, qd); },
                                 Applicability::non_el_too});
  e.notes = {"The integral gauge term makes the invariance finite rather than infinitesimal.",
             "Trivializing the gauge term of energy_bh recovers the time change t - eps."};
  return e;
}

CatalogEntry oscillator_shift() {
  CatalogEntry e = base("oscillator_shift", "Space shift of the harmonic oscillator");
  e.summary = "q + eps: the point constant is trivial, the integral constant is qdot(t0).";
  e.tags.push_back("nonlocal");
  const SystemPtr sys = e.system;
  const auto integral_of_q = running_integral("shift_q:" + std::to_string(next_unique_id()),
                                              [](double, const Vec& q, const Vec&) { return q(0); });

  e.triples.push_back(named("shift_bh", "q + eps, tau = t, G = -eps qdot", "trivial-constant",
                            {shift(), TimeChange::identity(),
                             BHFunction::linear([](double t, const Trajectory& traj) { return -traj.velocity(t)(0); })}));
  e.triples.push_back(named("shift_integral_bh", "q + eps, tau = t, G = eps int_a^t q", "nonlocal",
                            {shift(), TimeChange::identity(),
                             BHFunction::linear(
                                 [integral_of_q](double t, const Trajectory& traj) {
                                   return integral_of_q(traj.interval().a, t, traj);
                                 },
                                 false)},
                            Applicability::non_el_too));

  e.expected.push_back(expect("initial_velocity", "qdot - int_t0^t d/deps L = qdot(t0)", nonlocal_constant(*sys, shift())));
  e.expected.push_back(expect("velocity_plus_integral", "qdot + int_a^t q",
                              triple_constant(*sys, e.triples[1].triple)));

  e.total_derivatives.push_back({"shift_velocity", "d/deps L = -q = d/dt qdot on motions", shift(),
                                 [](double, const Vec&, const Vec& qd) { return qd(0); }});

  e.checks.push_back({"nonlocal_equals_initial_velocity", "nonlocal constant equals qdot(t0) at 64 times",
                      [sys](const Trajectory& traj, SplitMix64&) {
                        double worst = 0.0;
                        for (double t0 : {traj.interval().a, traj.interval().a + 1.0}) {
                          const auto cq = nonlocal_constant(*sys, shift(), t0);
                          const double target = traj.velocity(t0)(0);
                          worst = std::max(worst, grid_max(traj, [&](double t) { return cq(t, traj) - target; }));
                        }
                        return at_most(worst, 1e-6, "t0 = a and a + 1");
                      }});
  e.checks.push_back({"trivial_point_constant", "p . phi - psi with psi = qdot vanishes identically",
                      [sys](const Trajectory& traj, SplitMix64&) {
                        const auto cq = bh_constant(*sys, shift(), BHFunction::linear([](double t, const Trajectory& c) {
                                                      return -c.velocity(t)(0);
                                                    }));
                        return at_most(grid_max(traj, [&](double t) { return cq(t, traj); }), 1e-8);
                      }});
  e.checks.push_back({"no_gauge_residual_is_minus_q", "without G the residual equals -q",
                      [sys](const Trajectory& traj, SplitMix64&) {
                        const SymmetryTriple bare{shift(), TimeChange::identity(), BHFunction::zero()};
                        return at_most(grid_max(traj,
                                                [&](double t) {
                                                  return invariance_residual(*sys, bare, traj, t) + traj.position(t)(0);
                                                }),
                                       1e-6);
                      }});
  e.checks.push_back({"velocity_psi_fails_off_shell", "psi = qdot is not a total derivative on q = t^2",
                      [sys](const Trajectory& traj, SplitMix64&) {
                        const auto curve = parabola(sys, traj);
                        const double r = total_derivative_check(
                            *sys, shift(), [](double, const Vec&, const Vec& qd) { return qd(0); }, curve);
                        return exceeds(r, 1e-2, "expected to fail off shell");
                      }});
  return e;
}

CatalogEntry oscillator_dilation() {
  CatalogEntry e = base("oscillator_dilation", "Dilation of the harmonic oscillator");
  e.summary = "(1 + eps) q: d/deps L = 2L, integral constant q qdot - 2 int L.";
  e.tags.push_back("nonlocal");
  const SystemPtr sys = e.system;
  const auto integral_of_l = running_integral("dilation_l:" + std::to_string(next_unique_id()),
                                              [sys](double t, const Vec& q, const Vec& qd) {
                                                return lagrangian(*sys, t, q, qd);
                                              });

  e.triples.push_back(named("dilation_bh", "(1 + eps) q, tau = t, G = -eps q qdot", "trivial-constant",
                            {dilation(), TimeChange::identity(), BHFunction::linear(state_rate([](double, const Vec& q, const Vec& qd) {
                               return -q(0) * qd(0);
                             }))}));
  e.triples.push_back(named("dilation_integral_bh", "(1 + eps) q, tau = t, G = -2 eps int_a^t L", "nonlocal",
                            {dilation(), TimeChange::identity(),
                             BHFunction::linear(
                                 [integral_of_l](double t, const Trajectory& traj) {
                                   return -2.0 * integral_of_l(traj.interval().a, t, traj);
                                 },
                                 false)},
                            Applicability::non_el_too));

  e.expected.push_back(expect("action_constant", "q qdot - 2 int_t0^t L", nonlocal_constant(*sys, dilation())));
  e.expected.push_back(expect("action_constant_from_gauge", "q qdot - 2 int_a^t L from the integral gauge term",
                              triple_constant(*sys, e.triples[1].triple)));
  e.total_derivatives.push_back({"dilation_product", "2L = d/dt (q qdot) on motions", dilation(),
                                 [](double, const Vec& q, const Vec& qd) { return q(0) * qd(0); }});

  e.checks.push_back({"trivial_point_constant", "p . phi - psi with psi = q qdot vanishes identically",
                      [sys, triple = e.triples[0].triple](const Trajectory& traj, SplitMix64&) {
                        const auto cq = triple_constant(*sys, triple);
                        return at_most(grid_max(traj, [&](double t) { return cq(t, traj); }), 1e-8);
                      }});
  e.checks.push_back({"alternative_residual_is_twice_l", "theta = t, G = 0: alternative residual equals 2L",
                      [sys](const Trajectory& traj, SplitMix64&) {
                        const SymmetryTriple bare{dilation(), TimeChange::identity(Style::theta), BHFunction::zero()};
                        return at_most(grid_max(traj,
                                                [&](double t) {
                                                  return alt_invariance_residual(*sys, bare, traj, t) -
                                                         2.0 * traj.lagrangian_at(t);
                                                }),
                                       1e-6);
                      }});
  return e;
}

CatalogEntry oscillator_nonlocal() {
  CatalogEntry e = base("oscillator_nonlocal", "Nonlocal space change of the harmonic oscillator");
  e.summary = "q + eps int_0^t q: constant (qdot(0) - qdot(t0)) qdot(t0) for any t0.";
  e.tags.push_back("nonlocal");
  const SystemPtr sys = e.system;
  const auto integral_of_q = running_integral("nonlocal_q:" + std::to_string(next_unique_id()),
                                              [](double, const Vec& q, const Vec&) { return q(0); });
  auto from_zero = [integral_of_q](double t, const Trajectory& traj) { return integral_of_q(0.0, t, traj); };

  const SpaceChange family = SpaceChange::trajectory_map(
      [from_zero](double eps, double t, const Trajectory& traj) -> Vec {
        return traj.position(t) + Vec::Constant(1, eps * from_zero(t, traj));
      },
      [](double eps, double t, const Trajectory& traj) -> Vec {
        const State s = traj.at(t);
        return s.qdot + eps * s.q;
      },
      false);

  e.triples.push_back(named("integral_family_bh", "q + eps int_0^t q, tau = t, G = -eps (q^2 - I^2) / 2", "nonlocal",
                            {family, TimeChange::identity(), BHFunction::linear(
                                                                 [from_zero](double t, const Trajectory& traj) {
                                                                   const double q = traj.position(t)(0);
                                                                   const double i = from_zero(t, traj);
                                                                   return -0.5 * (q * q - i * i);
                                                                 },
                                                                 false)},
                            Applicability::non_el_too));

  constexpr double kT0 = 1.0;
  e.expected.push_back(expect("square_integral_constant", "nonlocal constant of the integral family, t0 = 1",
                              nonlocal_constant(*sys, family, kT0)));
  e.expected.push_back(expect("square_integral_reduced", "qdot I - q^2 / 2 + I^2 / 2 with the t0 terms dropped",
                              triple_constant(*sys, e.triples[0].triple)));

  e.checks.push_back({"closed_form_value", "nonlocal constant equals (qdot(0) - qdot(t0)) qdot(t0)",
                      [sys, family](const Trajectory& traj, SplitMix64&) {
                        double worst = 0.0, smallest = 1e300;
                        for (double t0 : {1.0, 2.5}) {
                          const auto cq = nonlocal_constant(*sys, family, t0);
                          const double v0 = traj.velocity(t0)(0);
                          const double target = (traj.velocity(0.0)(0) - v0) * v0;
                          smallest = std::min(smallest, std::abs(target));
                          worst = std::max(worst, grid_max(traj, [&](double t) { return cq(t, traj) - target; }));
                        }
                        return at_most(worst, 1e-6, "t0 = 1, 2.5; min |value| " + std::to_string(smallest));
                      }});
  e.checks.push_back({"reduced_form_is_energy", "reduced constant equals -(q^2 + qdot^2 - qdot(0)^2) / 2",
                      [sys, triple = e.triples[0].triple](const Trajectory& traj, SplitMix64&) {
                        const auto cq = triple_constant(*sys, triple);
                        const double v00 = traj.velocity(0.0)(0);
                        return at_most(grid_max(traj,
                                                [&](double t) {
                                                  const State s = traj.at(t);
                                                  const double target =
                                                      -0.5 * (s.q(0) * s.q(0) + s.qdot(0) * s.qdot(0) - v00 * v00);
                                                  return cq(t, traj) - target;
                                                }),
                                       1e-6);
                      }});
  return e;
}

}  // namespace noether::detail
