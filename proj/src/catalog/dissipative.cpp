#include "builders.hpp"

#include <cmath>

namespace noether::detail {

CatalogEntry dissipative_quadratic() {
  constexpr double m = 1.0, k = 1.0, c = 0.5, h = k / m;

  CatalogEntry e;
  e.id = "dissipative_quadratic";
  e.title = "Damped oscillator through an exponential Lagrangian";
  e.summary = "e^{ht} (m qdot^2 / 2 - c q^2): energy plus action, and the point first integral "
              "e^{kt/m} (E + k q qdot / 2).";
  e.tags = {"dissipation", "gauge", "trivialization", "alternative-style"};

  auto s = std::make_shared<LagrangianSystem>();
  s->name = "damped oscillator";
  s->dim = 1;
  s->lagrangian = [](double t, const Vec& q, const Vec& qd) {
    return std::exp(h * t) * (0.5 * m * qd(0) * qd(0) - c * q(0) * q(0));
  };
  s->grads.q = [](double t, const Vec& q, const Vec&) -> Vec { return Vec::Constant(1, -2 * c * std::exp(h * t) * q(0)); };
  s->grads.qdot = [](double t, const Vec&, const Vec& qd) -> Vec { return std::exp(h * t) * m * qd; };
  s->grads.qdot_qdot = [](double t, const Vec&, const Vec&) -> Mat { return Mat::Constant(1, 1, m * std::exp(h * t)); };
  s->grads.qdot_q = [](double, const Vec&, const Vec&) -> Mat { return Mat::Zero(1, 1); };
  s->grads.qdot_t = [](double t, const Vec&, const Vec& qd) -> Vec { return h * m * std::exp(h * t) * qd; };
  e.system = s;
  const SystemPtr sys = e.system;
  e.default_ivp = make_ivp(vec({1.0}), vec({0.0}), {0.0, 8.0});
  e.off_shell = trig_curve(vec({0.2}), vec({0.9}), vec({1.3}), vec({0.1}));

  // Undamped energy and Lagrangian.
  auto usual_energy = [](const Vec& q, const Vec& qd) { return 0.5 * m * qd(0) * qd(0) + c * q(0) * q(0); };
  auto usual_lagrangian = [](const Vec& q, const Vec& qd) { return 0.5 * m * qd(0) * qd(0) - c * q(0) * q(0); };

  const std::string key = "dissipative_action:" + std::to_string(next_unique_id());
  const RateFn action_gauge = [sys, key](double t, const Trajectory& traj) {
    const auto action = trajectory_integral(traj, key, [&](double u, const State& st) -> Vec {
      return Vec::Constant(1, lagrangian(*sys, u, st.q, st.qdot));
    });
    return -traj.lagrangian_at(t) + h * action->between(traj.interval().a, t)(0);
  };
  const RateFn point_gauge = [](double t, const Trajectory& traj) {
    const State st = traj.at(t);
    return -traj.lagrangian_at(t) + 0.5 * k * std::exp(k * t / m) * st.q(0) * st.qdot(0);
  };

  const SymmetryTriple logan{
      SpaceChange::trajectory_map(
          [](double eps, double t, const Trajectory& traj) -> Vec {
            return (1.0 - eps * k / (2 * m)) * traj.position(t - eps);
          },
          [](double eps, double t, const Trajectory& traj) -> Vec {
            return (1.0 - eps * k / (2 * m)) * traj.velocity(t - eps);
          }),
      TimeChange::linear(Style::tau, [](double, const Trajectory&) { return 1.0; }), BHFunction::zero()};
  const SymmetryTriple logan_theta{
      SpaceChange::pointwise([](double, const Vec& q, const Vec&) -> Vec { return -k / (2 * m) * q; }),
      TimeChange::linear(Style::theta, [](double, const Trajectory&) { return 1.0; }), BHFunction::zero()};

  e.triples.push_back(named("dissipative_bh", "q(t+eps), tau = t, G = -eps e^{ht} L + eps h int e^{hs} L", "dissipation",
                            {SpaceChange::time_shift(), TimeChange::identity(), BHFunction::linear(action_gauge, false)},
                            Applicability::non_el_too));
  e.triples.push_back(named("dissipative_point_bh", "q(t+eps), tau = t, G = -eps e^{ht} L + eps (k/2) e^{kt/m} q qdot",
                            "dissipation",
                            {SpaceChange::time_shift(), TimeChange::identity(), BHFunction::linear(point_gauge)}));
  e.triples.push_back(named("logan", "(1 - eps k / 2m) q(t - eps), tau = t + eps, G = 0", "dissipation", logan,
                            Applicability::non_el_too));
  e.triples.push_back(named("logan_theta", "(1 - eps k / 2m) q(t), theta = t + eps, G = 0", "alternative-style",
                            logan_theta, Applicability::non_el_too));

  const auto first_integral = point_function("first_integral", [=](double t, const Vec& q, const Vec& qd) {
    return std::exp(k * t / m) * (usual_energy(q, qd) + 0.5 * k * q(0) * qd(0));
  });

  e.expected.push_back(expect("energy_plus_action", "dissipative energy + h int L",
                              full_constant(*sys, e.triples[0].triple)));
  e.expected.push_back(expect("first_integral", "e^{kt/m} (E + k q qdot / 2)", first_integral));
  e.expected.push_back(expect("first_integral_from_gauge", "p . qdot + dG from the point gauge term",
                              full_constant(*sys, e.triples[1].triple)));
  e.expected.push_back(expect("logan_constant", "full constant of the Logan triple", full_constant(*sys, logan)));
  e.expected.push_back(
      expect("logan_theta_constant", "alternative constant of the Logan triple", alt_full_constant(*sys, logan_theta)));

  e.checks.push_back({"logan_is_minus_first_integral", "Logan constant equals -e^{kt/m} (E + k q qdot / 2)",
                      [sys, logan, first_integral](const Trajectory& traj, SplitMix64&) {
                        const auto cq = full_constant(*sys, logan);
                        return at_most(
                            grid_max(traj, [&](double t) { return cq(t, traj) + first_integral(t, traj); }), 1e-6);
                      }});
  e.checks.push_back({"logan_composition_form", "theta-to-tau conversion in composition form gives the Logan family",
                      [logan, logan_theta](const Trajectory& traj, SplitMix64&) {
                        const auto converted = alternative_to_standard(logan_theta, ConversionForm::composition);
                        constexpr double eps = 0.01;
                        const double gap = grid_max(traj, [&](double t) {
                          return (converted.space.position(eps, t, traj) - logan.space.position(eps, t, traj)).norm() +
                                 std::abs(converted.time.at(eps, t, traj) - logan.time.at(eps, t, traj));
                        });
                        return at_most(gap, 1e-12);
                      }});
  e.checks.push_back({"dissipative_energy", "energy of e^{ht} L equals e^{ht} times the usual energy",
                      [sys, usual_energy](const Trajectory& traj, SplitMix64&) {
                        return at_most(grid_max(traj,
                                                [&](double t) {
                                                  const State st = traj.at(t);
                                                  return energy(*sys, t, st.q, st.qdot) -
                                                         std::exp(h * t) * usual_energy(st.q, st.qdot);
                                                }),
                                       1e-9);
                      }});
  e.checks.push_back({"time_shift_derivative", "d/deps of e^{ht} L(q(t+eps)) equals e^{ht} d/dt L",
                      [sys, usual_lagrangian](const Trajectory& traj, SplitMix64&) {
                        return at_most(grid_max(traj,
                                                [&](double t) {
                                                  const double dl = along(
                                                      traj,
                                                      [&](double s) {
                                                        const State st = traj.at(s);
                                                        return usual_lagrangian(st.q, st.qdot);
                                                      },
                                                      t);
                                                  return d_eps_lagrangian(*sys, SpaceChange::time_shift(), traj, t) -
                                                         std::exp(h * t) * dl;
                                                }),
                                       1e-6);
                      }});

  // Time change from trivializing the point gauge term with no shift:
  // tau = t - eps + eps k q qdot / (2 L), L the undamped Lagrangian.
  auto trivialized = [usual_lagrangian](double factor) {
    return SymmetryTriple{SpaceChange::time_shift(),
                          TimeChange::linear(Style::tau,
                                             [=](double t, const Trajectory& traj) {
                                               const State st = traj.at(t);
                                               return -1.0 + factor * k * st.q(0) * st.qdot(0) /
                                                                 usual_lagrangian(st.q, st.qdot);
                                             }),
                          BHFunction::zero()};
  };
  auto residual_away_from_zero = [sys, usual_lagrangian](const SymmetryTriple& triple, const Trajectory& traj) {
    return grid_max(traj, [&](double t) {
      const State st = traj.at(t);
      if (std::abs(usual_lagrangian(st.q, st.qdot)) < 0.05 * std::exp(-h * t)) return 0.0;
      return invariance_residual(*sys, triple, traj, t);
    });
  };
  e.checks.push_back({"trivialized_time_change", "tau = t - eps + eps k q qdot / (2L) is an invariance where L != 0",
                      [=](const Trajectory& traj, SplitMix64&) {
                        return at_most(residual_away_from_zero(trivialized(0.5), traj), 1e-6);
                      }});
  e.checks.push_back({"trivialized_time_change_without_half",
                      "the same time change without the factor 1/2 is not an invariance",
                      [=](const Trajectory& traj, SplitMix64&) {
                        return exceeds(residual_away_from_zero(trivialized(1.0), traj), 1e-2,
                                       "expected to fail: the factor 1/2 is required");
                      }});

  e.notes = {"m = k = 1, c = 1/2, h = k/m.",
             "The point first integral needs U homogeneous of degree 2.",
             "Trivializing the point gauge term gives the time change t - eps + eps k q qdot / (2L); "
             "L vanishes along motions, so the catalog uses an automatic Lagrangian shift."};
  return e;
}

}  // namespace noether::detail
