#include "builders.hpp"

#include "noether/errors.hpp"

#include <cmath>

namespace noether {

namespace {

// e^eps q(e^{c eps} t) and its time derivative.
SpaceChange scaled_family(double c) {
  return SpaceChange::trajectory_map(
      [c](double eps, double t, const Trajectory& traj) -> Vec {
        return std::exp(eps) * traj.position(std::exp(c * eps) * t);
      },
      [c](double eps, double t, const Trajectory& traj) -> Vec {
        return std::exp((1.0 + c) * eps) * traj.velocity(std::exp(c * eps) * t);
      });
}

}  // namespace

CatalogEntry lane_emden_entry(int n) {
  using namespace detail;
  if (n < 1) throw ConfigError("Lane-Emden index must be a positive integer, got " + std::to_string(n));
  const double nn = n, np1 = n + 1.0;

  CatalogEntry e;
  e.id = "lane_emden_n" + std::to_string(n);
  e.title = "Lane-Emden equation, n = " + std::to_string(n);
  e.tags = {"lane-emden", "nonlocal", "scaling"};

  auto s = std::make_shared<LagrangianSystem>();
  s->name = e.id;
  s->dim = 1;
  s->lagrangian = [=](double t, const Vec& q, const Vec& qd) {
    return t * t * (0.5 * qd(0) * qd(0) - std::pow(q(0), np1) / np1);
  };
  s->grads.q = [=](double t, const Vec& q, const Vec&) -> Vec { return Vec::Constant(1, -t * t * std::pow(q(0), nn)); };
  s->grads.qdot = [](double t, const Vec&, const Vec& qd) -> Vec { return t * t * qd; };
  s->grads.qdot_qdot = [](double t, const Vec&, const Vec&) -> Mat { return Mat::Constant(1, 1, t * t); };
  s->grads.qdot_q = [](double, const Vec&, const Vec&) -> Mat { return Mat::Zero(1, 1); };
  s->grads.qdot_t = [](double t, const Vec&, const Vec& qd) -> Vec { return 2 * t * qd; };
  s->domain_guard = [](double t, const Vec&, const Vec&) { return t > 0.0; };
  e.system = s;
  const SystemPtr sys = e.system;

  constexpr double t0 = 1e-3;
  e.default_ivp = make_ivp(vec({1.0 - t0 * t0 / 6.0}), vec({-t0 / 3.0}), {t0, 10.0}, Padding{5e-4, 0.5});

  const std::string key = "lane_emden_power:" + std::to_string(next_unique_id());
  auto power_integral = [key, np1](double t, const Trajectory& traj) {
    const auto integral = trajectory_integral(traj, key, [&](double u, const State& st) -> Vec {
      return Vec::Constant(1, u * u * std::pow(st.q(0), np1));
    });
    return integral->between(traj.interval().a, t)(0);
  };

  // d/deps L = d/dt psi + coeff t^2 q^{n+1} on motions; G = -eps (psi + coeff int t^2 q^{n+1}).
  const double ca = (nn - 1) / 2;
  const double coeff_a = (5 - nn) * (nn - 1) / (4 * np1);
  const double coeff_b = (5 - nn) / np1;
  const ScalarField psi_a = [sys, ca, nn](double t, const Vec& q, const Vec& qd) {
    return ca * t * lagrangian(*sys, t, q, qd) + (5 - nn) / 4 * t * t * q(0) * qd(0);
  };
  const ScalarField psi_b = [np1](double t, const Vec& q, const Vec&) {
    return -2 / np1 * t * t * t * std::pow(q(0), np1);
  };
  auto gauge = [power_integral](ScalarField psi, double coeff) {
    return BHFunction::linear(
        [=](double t, const Trajectory& traj) {
          const State st = traj.at(t);
          return -(psi(t, st.q, st.qdot) + (coeff == 0.0 ? 0.0 : coeff * power_integral(t, traj)));
        },
        coeff == 0.0);
  };

  const SymmetryTriple first{scaled_family(ca), TimeChange::identity(), gauge(psi_a, coeff_a)};
  const SymmetryTriple second{scaled_family(1.0), TimeChange::identity(), gauge(psi_b, coeff_b)};
  e.triples.push_back(named("scaling_first", "e^eps q(e^{eps (n-1)/2} t) with the absorbing gauge term", "scaling", first));
  e.triples.push_back(named("scaling_second", "e^eps q(e^eps t) with the absorbing gauge term", "scaling", second));

  constexpr double tol = 1e-5;
  e.expected.push_back(expect("nonlocal_first", "integral constant of the first family",
                              nonlocal_constant(*sys, first.space), tol));
  e.expected.push_back(expect("nonlocal_second", "integral constant of the second family",
                              nonlocal_constant(*sys, second.space), tol));
  e.expected.push_back(expect("gauge_first", "p . dq - psi - coeff int t^2 q^{n+1}, first family",
                              full_constant(*sys, first), tol));
  e.expected.push_back(expect("gauge_second", "t^2 (2 t q^{n+1} / (n+1) + q qdot + t qdot^2) + (n-5)/(n+1) int t^2 q^{n+1}",
                              full_constant(*sys, second), tol));

  if (n == 5) {
    e.expected.push_back(expect(
        "local_first_integral", "(n-1) t^2 ((n+1) q qdot + (n+1) t qdot^2 + 2 t q^{n+1}) / (4 (n+1))",
        point_function("local_first_integral",
                       [=](double t, const Vec& q, const Vec& qd) {
                         const double x = q(0), v = qd(0);
                         return (nn - 1) * t * t * (np1 * x * v + np1 * t * v * v + 2 * t * std::pow(x, np1)) /
                                (4 * np1);
                       }),
        tol));
    e.summary = "At n = 5 the integral term drops out and the first family gives a local first integral.";
  } else if (n == 1) {
    e.summary = "At n = 1 the first family's constant vanishes identically; the second family's does not.";
  } else {
    e.summary = "Integral constants of the two scaling families; the integral term is nondecreasing.";
  }

  e.checks.push_back({"first_is_multiple_of_second", "first-family constant equals (n-1)/4 times the second",
                      [=](const Trajectory& traj, SplitMix64&) {
                        const auto x = full_constant(*sys, first), y = full_constant(*sys, second);
                        return at_most(grid_max(traj, [&](double t) { return x(t, traj) - (nn - 1) / 4 * y(t, traj); }),
                                       1e-7);
                      }});
  e.checks.push_back({"printed_first_constant_sign",
                      "the printed closed form of the first-family constant is its negative (a constant too)",
                      [=](const Trajectory& traj, SplitMix64&) {
                        const auto printed = point_plus_integral(
                            "printed",
                            [=](double t, const Vec& q, const Vec& qd) {
                              const double x = q(0), v = qd(0);
                              return -(nn - 1) * t * t * (np1 * x * v + np1 * t * v * v + 2 * t * std::pow(x, np1)) /
                                     (4 * np1);
                            },
                            [=](double t, const Vec& q, const Vec&) { return t * t * std::pow(q(0), np1); },
                            -(nn - 5) * (nn - 1) / (4 * np1));
                        const auto truth = full_constant(*sys, first);
                        const double sum = grid_max(traj, [&](double t) {
                          return (printed(t, traj) + truth(t, traj)) - (printed(traj.interval().a, traj) +
                                                                        truth(traj.interval().a, traj));
                        });
                        return at_most(sum, 1e-5, "printed + computed is constant");
                      }});
  if (n == 1) {
    e.checks.push_back({"first_family_vanishes", "p . dq - psi is identically zero for n = 1",
                        [=](const Trajectory& traj, SplitMix64&) {
                          const auto cq = full_constant(*sys, first);
                          return at_most(grid_max(traj, [&](double t) { return cq(t, traj); }), 1e-8);
                        }});
    e.checks.push_back({"second_family_nontrivial",
                        "the second-family constant is nonzero on a motion started at t = 1 with q = 1, qdot = 0",
                        [=](const Trajectory&, SplitMix64&) {
                          const Trajectory other = integrate(sys, make_ivp(vec({1.0}), vec({0.0}), {1.0, 10.0}, Padding{0.5, 0.5}));
                          const auto cq = full_constant(*sys, second);
                          const auto report = drift(cq, other, 1e-5);
                          return exceeds(report.pass ? std::abs(report.reference) : 0.0, 1e-3,
                                         "the regular solution gives zero; this one does not");
                        }});
  }
  if (n > 5 && n % 2 == 1) {
    e.expected.push_back(expect("lyapunov_constant", "scaled second-family constant",
                                point_plus_integral(
                                    "lyapunov_constant",
                                    [=](double t, const Vec& q, const Vec& qd) {
                                      const double x = q(0), v = qd(0);
                                      return t * t * (2 * t * std::pow(x, np1) + np1 * x * v + np1 * t * v * v);
                                    },
                                    [=](double t, const Vec& q, const Vec&) { return t * t * std::pow(q(0), np1); },
                                    nn - 5),
                                tol));
    e.checks.push_back({"integral_term_monotone", "int t^2 q^{n+1} is nondecreasing at every grid step",
                        [=](const Trajectory& traj, SplitMix64&) {
                          power_integral(traj.interval().b, traj);
                          const auto integral = trajectory_integral(traj, key, {});
                          const auto& nodes = integral->nodes();
                          const auto& values = integral->node_values();
                          double worst = 0.0;
                          std::size_t steps = 0;
                          for (std::size_t i = 1; i < nodes.size(); ++i) {
                            if (nodes[i - 1] < traj.interval().a || nodes[i] > traj.interval().b) continue;
                            worst = std::max(worst, values[i - 1](0) - values[i](0));
                            ++steps;
                          }
                          return at_most(worst, 0.0, std::to_string(steps) + " grid steps");
                        }});
  }
  e.notes = {"Starts at t0 = 1e-3 with the regular series data q = 1 - t^2/6, qdot = -t/3.",
             "The first family's d/deps L is d/dt[(n-1)/2 t L + (5-n)/4 t^2 q qdot] + "
             "(5-n)(n-1)/(4(n+1)) t^2 q^{n+1} on motions."};
  return e;
}

}  // namespace noether
