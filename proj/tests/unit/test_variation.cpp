#include "noether/errors.hpp"
#include "noether/variation.hpp"

#include "../support/fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace noether;
using noether::testing::vec;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory sine_curve(SystemPtr sys) {
  return noether::testing::curve1(
      std::move(sys), 0.0, 2 * kPi, [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
      [](double t) { return -std::sin(t); });
}

Trajectory parabola(SystemPtr sys) {
  return noether::testing::curve1(
      std::move(sys), 0.0, 2.0, [](double t) { return t * t; }, [](double t) { return 2 * t; },
      [](double) { return 2.0; });
}

SymmetryTriple shift_triple() {
  return {SpaceChange::pointwise([](double, const Vec&, const Vec&) -> Vec { return Vec::Ones(1); }),
          TimeChange::identity(), BHFunction::zero()};
}

SymmetryTriple dilation_triple(Style style) {
  return {SpaceChange::pointwise([](double, const Vec& q, const Vec&) -> Vec { return q; }),
          TimeChange::identity(style), BHFunction::zero()};
}

}  // namespace

TEST(SpaceChange, TimeShiftDerivativeIsVelocity) {
  const auto traj = sine_curve(noether::testing::harmonic());
  EXPECT_NEAR(d_eps_space(SpaceChange::time_shift(), traj, 0.0)(0), 1.0, 1e-9);
  EXPECT_NEAR(d_eps_velocity(SpaceChange::time_shift(), traj, 0.0)(0), 0.0, 1e-9);
}

TEST(SpaceChange, TranslationAndRotationGenerators) {
  auto sys = noether::testing::free_particle(2);
  const Vec u = vec({0.6, -0.8});
  const auto traj = noether::testing::solve(sys, vec({1.0, 0.0}), vec({0.3, 0.2}), 0.0, 1.0);
  const auto translate = SpaceChange::pointwise([u](double, const Vec&, const Vec&) -> Vec { return u; });
  EXPECT_LT((d_eps_space(translate, traj, 0.0) - u).norm(), 1e-12);

  const auto rotate = SpaceChange::pointwise(
      [](double, const Vec& q, const Vec&) -> Vec { return vec({-q(1), q(0)}); });
  EXPECT_LT((d_eps_space(rotate, traj, 0.0) - vec({0.0, 1.0})).norm(), 1e-12);
  EXPECT_LT((d_eps_velocity(rotate, traj, 0.5) - vec({-0.2, 0.3})).norm(), 1e-8);
}

TEST(SpaceChange, TrajectoryMapWithoutVelocityIsDifferencedInTime) {
  const auto traj = sine_curve(noether::testing::harmonic());
  const auto family = SpaceChange::trajectory_map(
      [](double eps, double t, const Trajectory& c) -> Vec { return (1.0 + eps) * c.position(t); });
  EXPECT_NEAR(family.velocity(0.1, 1.0, traj)(0), 1.1 * std::cos(1.0), 1e-8);
}

TEST(EpsDerivative, ShiftOfOscillator) {
  auto sys = noether::testing::harmonic();
  const auto traj = sine_curve(sys);
  EXPECT_NEAR(d_eps_lagrangian(*sys, shift_triple().space, traj, kPi / 2), -1.0, 1e-9);
}

TEST(EpsDerivative, DilationGivesTwiceTheLagrangian) {
  auto sys = noether::testing::harmonic();
  const auto traj = sine_curve(sys);
  for (double t : {0.1, 0.7, 2.5}) {
    EXPECT_NEAR(d_eps_lagrangian(*sys, dilation_triple(Style::tau).space, traj, t), 2 * traj.lagrangian_at(t),
                1e-8);
  }
}

TEST(EpsDerivative, QuadraticLagrangianLinearFamilyAgreesWithChainRule) {
  auto sys = noether::testing::harmonic();
  const auto traj = parabola(sys);
  const auto space = SpaceChange::pointwise(
      [](double t, const Vec& q, const Vec& qd) -> Vec { return vec({t * q(0) + qd(0)}); });
  for (double t : check_grid(0.0, 2.0, 9)) {
    EXPECT_NEAR(d_eps_lagrangian(*sys, space, traj, t), d_eps_lagrangian_chain(*sys, space, traj, t), 1e-7);
  }
}

TEST(EpsDerivative, CentralDifferenceErrorIsSecondOrder) {
  auto sys = noether::testing::kepler();
  SplitMix64 rng = SplitMix64::split(7, "order");
  for (int trial = 0; trial < 5; ++trial) {
    const double w = rng.uniform(0.5, 1.5), c = rng.uniform(-0.5, 0.5);
    const auto traj = Trajectory::from_curve(sys, {0.0, 1.0}, {0.2, 0.2}, [w, c](double t) {
      return State{t, vec({2.0 + std::cos(w * t), c + std::sin(w * t)}),
                   vec({-w * std::sin(w * t), w * std::cos(w * t)}),
                   vec({-w * w * std::cos(w * t), -w * w * std::sin(w * t)})};
    });
    auto space = SpaceChange::pointwise(
        [](double, const Vec& q, const Vec&) -> Vec { return vec({q(0) * q(0), -q(1)}); });
    const double t = rng.uniform(0.1, 0.9);
    const double exact = d_eps_lagrangian_chain(*sys, space, traj, t);
    double previous = 0.0;
    for (double eps : {1e-2, 5e-3, 2.5e-3}) {
      space.eps0 = eps;
      const double err = std::abs(d_eps_lagrangian(*sys, space, traj, t) - exact);
      if (previous > 0.0) EXPECT_NEAR(previous / err, 4.0, 0.4) << "trial " << trial;
      previous = err;
    }
  }
}

TEST(Residual, EnergyTimeTripleVanishesOnAnyCurve) {
  auto sys = noether::testing::harmonic();
  const SymmetryTriple energy{SpaceChange::time_shift(),
                              TimeChange::linear(Style::tau, [](double, const Trajectory&) { return -1.0; }),
                              BHFunction::zero()};
  EXPECT_LT(max_residual(*sys, energy, parabola(sys)), 1e-8);
  EXPECT_LT(max_residual(*sys, energy, sine_curve(sys)), 1e-8);
}

TEST(Residual, EnergyGaugeTripleVanishesOnAnyCurve) {
  auto sys = noether::testing::harmonic();
  const SymmetryTriple energy{SpaceChange::time_shift(), TimeChange::identity(),
                              BHFunction::linear([](double t, const Trajectory& c) { return -c.lagrangian_at(t); })};
  EXPECT_LT(max_residual(*sys, energy, parabola(sys)), 1e-6);
}

TEST(Residual, ShiftWithoutGaugeIsMinusPosition) {
  auto sys = noether::testing::harmonic();
  const auto traj = sine_curve(sys);
  for (double t : {0.3, 1.2, 4.0}) {
    EXPECT_NEAR(invariance_residual(*sys, shift_triple(), traj, t), -std::sin(t), 1e-9);
  }
}

TEST(Residual, DilationAlternativeResidualIsTwiceTheLagrangian) {
  auto sys = noether::testing::harmonic();
  const auto traj = sine_curve(sys);
  for (double t : {0.3, 1.2, 4.0}) {
    EXPECT_NEAR(alt_invariance_residual(*sys, dilation_triple(Style::theta), traj, t), 2 * traj.lagrangian_at(t),
                1e-8);
  }
}

TEST(Residual, WrongStyleThrows) {
  auto sys = noether::testing::harmonic();
  const auto traj = sine_curve(sys);
  EXPECT_THROW(invariance_residual(*sys, dilation_triple(Style::theta), traj, 1.0), StyleMismatch);
  EXPECT_THROW(alt_invariance_residual(*sys, dilation_triple(Style::tau), traj, 1.0), StyleMismatch);
}

TEST(Residual, LagrangianShiftEntersThroughTimeRate) {
  auto sys = noether::testing::harmonic();
  const auto traj = sine_curve(sys);
  SymmetryTriple triple{SpaceChange::identity(1),
                        TimeChange::linear(Style::tau, [](double t, const Trajectory&) { return t; }),
                        BHFunction::zero(), 0.0};
  const double base = invariance_residual(*sys, triple, traj, 1.0);
  triple.lagrangian_shift = 3.0;
  EXPECT_NEAR(invariance_residual(*sys, triple, traj, 1.0) - base, 3.0, 1e-8);
}

TEST(Residual, RandomTranslationsAndRotationsOfFreeMotion) {
  auto sys = noether::testing::free_particle(2);
  SplitMix64 rng = SplitMix64::split(11, "free");
  for (int trial = 0; trial < 8; ++trial) {
    const Vec q0 = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const Vec v0 = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const Vec u = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const auto traj = noether::testing::solve(sys, q0, v0, 0.0, 2.0);
    const SymmetryTriple translate{
        SpaceChange::pointwise([u](double, const Vec&, const Vec&) -> Vec { return u; }), TimeChange::identity(),
        BHFunction::zero()};
    const SymmetryTriple rotate{
        SpaceChange::pointwise([](double, const Vec& q, const Vec&) -> Vec { return vec({-q(1), q(0)}); }),
        TimeChange::identity(), BHFunction::zero()};
    EXPECT_LT(max_residual(*sys, translate, traj), 1e-8);
    EXPECT_LT(max_residual(*sys, rotate, traj), 1e-7);
  }
}

TEST(TotalDerivative, TimeShiftOfAutonomousLagrangianOnAnyCurve) {
  auto sys = noether::testing::harmonic();
  const ScalarField psi = [&sys](double t, const Vec& q, const Vec& qd) { return lagrangian(*sys, t, q, qd); };
  EXPECT_LT(total_derivative_check(*sys, SpaceChange::time_shift(), psi, parabola(sys)), 1e-6);
}

TEST(TotalDerivative, ShiftHoldsOnMotionsOnly) {
  auto sys = noether::testing::harmonic();
  const ScalarField psi = [](double, const Vec&, const Vec& qd) { return qd(0); };
  const auto motion = noether::testing::solve(sys, vec({0.0}), vec({1.0}), 0.0, 2 * kPi);
  EXPECT_LT(total_derivative_check(*sys, shift_triple().space, psi, motion), 1e-6);
  EXPECT_GT(total_derivative_check(*sys, shift_triple().space, psi, parabola(sys)), 1e-2);
}

TEST(TimeChange, NewtonInverseRoundTrips) {
  auto sys = noether::testing::harmonic();
  const auto traj = sine_curve(sys);
  const auto theta = TimeChange::general(
      Style::theta, [](double eps, double t, const Trajectory&) { return t + eps * std::sin(t); });
  SplitMix64 rng = SplitMix64::split(3, "inverse");
  for (int i = 0; i < 20; ++i) {
    const double eps = rng.uniform(-0.3, 0.3), xi = rng.uniform(0.0, 6.0);
    const double t = theta.inverse(eps, xi, traj);
    EXPECT_NEAR(theta.at(eps, t, traj), xi, 1e-12);
  }
  EXPECT_NEAR(theta.rate(1.0, traj), std::sin(1.0), 1e-9);
  EXPECT_NEAR(theta.rate_dt(1.0, traj), std::cos(1.0), 1e-8);
}

TEST(TimeChange, RateDerivativeNearPaddedEdge) {
  auto sys = noether::testing::harmonic();
  const auto traj = sine_curve(sys);
  const auto tau = TimeChange::general(Style::tau, [](double eps, double t, const Trajectory&) {
    return t + eps * t * t;
  });
  EXPECT_NEAR(tau.rate_dt(traj.hi() - 1e-4, traj), 2 * (traj.hi() - 1e-4), 1e-6);
  EXPECT_THROW(tau.rate_dt(traj.hi() + 1.0, traj), PadExceeded);
}

TEST(Integral, MemoizedAlongTrajectory) {
  auto sys = noether::testing::harmonic();
  const auto traj = sine_curve(sys);
  auto f = [](double, const State& s) -> Vec { return s.q; };
  const auto first = trajectory_integral(traj, "sin", f);
  const auto second = trajectory_integral(traj, "sin", f);
  EXPECT_EQ(first.get(), second.get());
  EXPECT_NEAR(first->between(0.0, 2.0)(0), 1.0 - std::cos(2.0), 1e-10);
}
