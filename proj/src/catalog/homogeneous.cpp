#include "builders.hpp"

#include <cmath>

namespace noether::detail {

namespace {

// e^eps q(e^{-2 eps} t) and its time derivative.
SpaceChange inverse_square_scaling() {
  return SpaceChange::trajectory_map(
      [](double eps, double t, const Trajectory& traj) -> Vec {
        return std::exp(eps) * traj.position(std::exp(-2 * eps) * t);
      },
      [](double eps, double t, const Trajectory& traj) -> Vec {
        return std::exp(-eps) * traj.velocity(std::exp(-2 * eps) * t);
      });
}

}  // namespace

void add_inverse_square_scaling(CatalogEntry& e, double mass) {
  const SystemPtr sys = e.system;
  const SpaceChange family = inverse_square_scaling();

  e.triples.push_back(named("scaling_bh", "e^eps q(e^{-2 eps} t), G = 2 eps t L", "scaling",
                            {family, TimeChange::identity(), BHFunction::linear([](double t, const Trajectory& traj) {
                               return 2 * t * traj.lagrangian_at(t);
                             })},
                            Applicability::non_el_too));
  e.triples.push_back(named("scaling_time", "e^eps q(e^{-2 eps} t), tau = (1 + 2 eps) t", "scaling",
                            {family, TimeChange::linear(Style::tau, [](double t, const Trajectory&) { return 2 * t; }),
                             BHFunction::zero()},
                            Applicability::non_el_too));
  e.triples.push_back(named("scaling_time_exp", "e^eps q(e^{-2 eps} t), tau = e^{2 eps} t", "scaling",
                            {family,
                             TimeChange::general(
                                 Style::tau, [](double eps, double t, const Trajectory&) { return std::exp(2 * eps) * t; },
                                 [](double t, const Trajectory&) { return 2 * t; }, true),
                             BHFunction::zero()},
                            Applicability::non_el_too));

  const auto dilation = point_function("dilation", [sys, mass](double t, const Vec& q, const Vec& qd) {
    return mass * q.dot(qd) - 2 * t * energy(*sys, t, q, qd);
  });
  e.expected.push_back(expect("dilation_from_gauge", "constant of the gauge-term scaling triple",
                              full_constant(*sys, e.triples[e.triples.size() - 3].triple)));
  e.expected.push_back(expect("dilation_from_time_change", "constant of the time-change scaling triple",
                              full_constant(*sys, e.triples[e.triples.size() - 2].triple)));
  e.expected.push_back(expect("dilation", "m q . qdot - 2 t E", dilation));
  e.expected.push_back(expect("second_dilation", "m |q|^2 / 2 - t^2 E - t F",
                              point_function("second_dilation", [sys, mass](double t, const Vec& q, const Vec& qd) {
                                const double en = energy(*sys, t, q, qd);
                                const double f = mass * q.dot(qd) - 2 * t * en;
                                return 0.5 * mass * q.squaredNorm() - t * t * en - t * f;
                              })));
  e.expected.push_back(expect("energy", "m |qdot|^2 / 2 + U", energy_constant(sys)));

  e.checks.push_back({"radius_formula", "|q(t)| = sqrt((2/m)(t^2 E + t F + F1)) with E, F, F1 taken at t = a",
                      [sys, mass](const Trajectory& traj, SplitMix64&) {
                        const double a = traj.interval().a;
                        const State s = traj.at(a);
                        const double en = energy(*sys, a, s.q, s.qdot);
                        const double f = mass * s.q.dot(s.qdot) - 2 * a * en;
                        const double f1 = 0.5 * mass * s.q.squaredNorm() - a * a * en - a * f;
                        return at_most(grid_max(traj,
                                                [&](double t) {
                                                  return traj.position(t).norm() -
                                                         std::sqrt(2 / mass * (t * t * en + t * f + f1));
                                                }),
                                       1e-6);
                      }});
}

CatalogEntry homogeneous_inverse_square() {
  CatalogEntry e;
  e.id = "homogeneous_inverse_square";
  e.title = "Inverse-square attraction in the plane";
  e.summary = "U = -1/|q|^2 is homogeneous of degree -2: a dilation constant and an exact radius law.";
  e.tags = {"scaling", "homogeneous", "angular-momentum"};
  e.system = mechanical(
      "inverse-square", 2, 1.0, [](double, const Vec& q) { return -1.0 / q.squaredNorm(); },
      [](double, const Vec& q) -> Vec { return 2.0 * q / std::pow(q.squaredNorm(), 2); },
      [](double, const Vec& q, const Vec&) { return q.norm() > 1e-9; });
  e.default_ivp = make_ivp(vec({1.0, 0.0}), vec({0.2, 1.5}), {0.0, 10.0});
  e.off_shell = trig_curve(vec({2.0, 0.5}), vec({0.8, 0.6}), vec({0.7, 1.1}), vec({0.0, 0.4}));
  const SystemPtr sys = e.system;
  add_inverse_square_scaling(e, 1.0);
  e.triples.push_back(named("rotation", "R(eps) q", "angular-momentum",
                            {rotation(), TimeChange::identity(), BHFunction::zero()}, Applicability::non_el_too));
  e.expected.push_back(expect("angular_momentum", "det(q, qdot)", simple_constant(*sys, rotation())));
  e.notes = {"Initial velocity (0.2, 1.5) keeps the energy positive so the orbit escapes instead of falling in."};
  return e;
}

CatalogEntry homogeneous_calogero() {
  constexpr int n = 3;
  CatalogEntry e;
  e.id = "homogeneous_calogero";
  e.title = "Three-particle Calogero system";
  e.summary = "Pairwise 1/(q_j - q_k)^2 repulsion on a line: degree -2 scaling and total momentum.";
  e.tags = {"scaling", "homogeneous", "momentum", "nonlocal"};
  e.system = mechanical(
      "calogero", n, 1.0,
      [](double, const Vec& q) {
        double u = 0.0;
        for (int j = 0; j < q.size(); ++j) {
          for (int k = j + 1; k < q.size(); ++k) u += 1.0 / std::pow(q(j) - q(k), 2);
        }
        return u;
      },
      [](double, const Vec& q) -> Vec {
        Vec g = Vec::Zero(q.size());
        for (int j = 0; j < q.size(); ++j) {
          for (int k = 0; k < q.size(); ++k) {
            if (k != j) g(j) -= 2.0 / std::pow(q(j) - q(k), 3);
          }
        }
        return g;
      },
      [](double, const Vec& q, const Vec&) {
        for (int j = 0; j < q.size(); ++j) {
          for (int k = j + 1; k < q.size(); ++k) {
            if (std::abs(q(j) - q(k)) < 1e-9) return false;
          }
        }
        return true;
      });
  e.default_ivp = make_ivp(vec({-1.0, 0.0, 1.0}), vec({0.3, 0.0, -0.3}), {0.0, 10.0});
  e.off_shell = trig_curve(vec({-2.0, 0.0, 2.0}), vec({0.5, 0.5, 0.5}), vec({1.0, 1.3, 0.7}), vec({0.0, 0.3, 0.6}));
  const SystemPtr sys = e.system;
  add_inverse_square_scaling(e, 1.0);
  const SpaceChange shift = translation(Vec::Ones(n));
  e.triples.push_back(named("translation", "q + eps (1, 1, 1)", "momentum",
                            {shift, TimeChange::identity(), BHFunction::zero()}, Applicability::non_el_too));
  e.expected.push_back(expect("total_momentum", "sum of qdot_k", simple_constant(*sys, shift)));
  e.checks.push_back(cone_velocity_check(n));
  return e;
}

CatalogEntry toda(int n) {
  CatalogEntry e;
  e.id = "toda_n" + std::to_string(n);
  e.title = "Open Toda lattice, " + std::to_string(n) + " particles";
  e.summary = "A scaling family with no local symmetry gives sum k qdot_k - int V.";
  e.tags = {"nonlocal", "scaling", "momentum"};
  e.system = mechanical(
      e.id, n, 1.0,
      [](double, const Vec& q) {
        double v = 0.0;
        for (int k = 0; k + 1 < q.size(); ++k) v += std::exp(q(k) - q(k + 1));
        return v;
      },
      [](double, const Vec& q) -> Vec {
        Vec g = Vec::Zero(q.size());
        for (int k = 0; k + 1 < q.size(); ++k) {
          const double w = std::exp(q(k) - q(k + 1));
          g(k) += w;
          g(k + 1) -= w;
        }
        return g;
      });
  Vec q0(n), weights(n);
  for (int k = 0; k < n; ++k) {
    q0(k) = 2.0 * k - (n - 1);
    weights(k) = k + 1.0;
  }
  e.default_ivp = make_ivp(q0, Vec::Zero(n), {0.0, 10.0});
  Vec center(n), amp(n), omega(n), phase(n);
  for (int k = 0; k < n; ++k) {
    center(k) = 1.5 * k;
    amp(k) = 0.4;
    omega(k) = 0.8 + 0.3 * k;
    phase(k) = 0.2 * k;
  }
  e.off_shell = trig_curve(center, amp, omega, phase);
  const SystemPtr sys = e.system;

  // Q(e^{-eps} t) + eps (1, ..., n).
  const SpaceChange family = SpaceChange::trajectory_map(
      [weights](double eps, double t, const Trajectory& traj) -> Vec {
        return traj.position(std::exp(-eps) * t) + eps * weights;
      },
      [](double eps, double t, const Trajectory& traj) -> Vec {
        return std::exp(-eps) * traj.velocity(std::exp(-eps) * t);
      });
  auto kinetic = [](double, const State& s) -> Vec { return Vec::Constant(1, s.qdot.squaredNorm()); };
  const std::string key = "toda_kinetic:" + std::to_string(next_unique_id());
  const RateFn gauge = [key, kinetic](double t, const Trajectory& traj) {
    const auto integral = trajectory_integral(traj, key, kinetic);
    return t * traj.lagrangian_at(t) + 0.5 * integral->between(traj.interval().a, t)(0);
  };
  const SymmetryTriple scaling{family, TimeChange::identity(), BHFunction::linear(gauge, false)};
  e.triples.push_back(named("scaling_bh", "Q(e^{-eps} t) + eps (1..n), G = eps (t L + int |Qdot|^2 / 2)", "scaling",
                            scaling, Applicability::non_el_too));
  const SpaceChange shift = translation(Vec::Ones(n));
  e.triples.push_back(named("translation", "q + eps (1, ..., 1)", "momentum",
                            {shift, TimeChange::identity(), BHFunction::zero()}, Applicability::non_el_too));

  e.expected.push_back(expect("scaling_nonlocal", "p . dq - int d/deps L", nonlocal_constant(*sys, family)));
  e.expected.push_back(expect("scaling_gauge", "constant of the scaling triple", full_constant(*sys, scaling)));
  e.expected.push_back(expect("weighted_momentum", "sum k qdot_k - int V",
                              point_plus_integral(
                                  "weighted_momentum",
                                  [weights](double, const Vec&, const Vec& qd) { return weights.dot(qd); },
                                  [sys](double, const Vec& q, const Vec&) {
                                    return -sys->lagrangian(0.0, q, Vec::Zero(q.size()));
                                  },
                                  -1.0)));
  e.expected.push_back(expect("total_momentum", "sum of qdot_k", simple_constant(*sys, shift)));
  e.expected.push_back(expect("energy", "|qdot|^2 / 2 + V", energy_constant(sys)));

  e.checks.push_back({"scaling_identity", "d/deps L = -|Qdot|^2 / 2 - d/dt (t L) on the off-shell curve",
                      [sys, family, curve = e.off_shell](const Trajectory& motion, SplitMix64&) {
                        const Trajectory traj =
                            Trajectory::from_curve(sys, motion.interval(), motion.padding(), curve);
                        return at_most(grid_max(traj,
                                                [&](double t) {
                                                  const double tl = along(
                                                      traj, [&](double s) { return s * traj.lagrangian_at(s); }, t);
                                                  return d_eps_lagrangian(*sys, family, traj, t) +
                                                         0.5 * traj.velocity(t).squaredNorm() + tl;
                                                }),
                                       1e-6);
                      }});
  e.checks.push_back(cone_velocity_check(n));
  e.notes = {"V = sum exp(q_k - q_{k+1}); no local symmetry produces the weighted momentum."};
  return e;
}

}  // namespace noether::detail
