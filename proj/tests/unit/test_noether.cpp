#include "noether/errors.hpp"
#include "noether/noether.hpp"

#include "../support/fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace noether;
using noether::testing::vec;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory oscillator_motion(const SystemPtr& sys) {
  return noether::testing::solve(sys, vec({0.0}), vec({1.0}), 0.0, 2 * kPi);
}

Trajectory parabola(const SystemPtr& sys) {
  return noether::testing::curve1(
      sys, 0.0, 2.0, [](double t) { return t * t; }, [](double t) { return 2 * t; }, [](double) { return 2.0; });
}

SpaceChange shift_space() {
  return SpaceChange::pointwise([](double, const Vec&, const Vec&) -> Vec { return Vec::Ones(1); });
}

SymmetryTriple energy_gauge_triple() {
  return {SpaceChange::time_shift(), TimeChange::identity(),
          BHFunction::linear([](double t, const Trajectory& c) { return -c.lagrangian_at(t); })};
}

SymmetryTriple energy_time_triple() {
  return {SpaceChange::time_shift(),
          TimeChange::linear(Style::tau, [](double, const Trajectory&) { return -1.0; }), BHFunction::zero()};
}

// Energy of L = |qdot|^2/2 + 1/|q|.
double kepler_energy(const State& s) { return 0.5 * s.qdot.squaredNorm() - 1.0 / s.q.norm(); }

// Uniform circular motions with a phase shift, scaled by e^eps.
SymmetryTriple phase_shift_family() {
  return {SpaceChange::trajectory_map(
              [](double eps, double t, const Trajectory& c) -> Vec { return std::exp(eps) * c.position(t + eps); },
              [](double eps, double t, const Trajectory& c) -> Vec {
                return std::exp(eps) * c.velocity(t + eps);
              }),
          TimeChange::identity(), BHFunction::zero()};
}

double max_gap(const ConservedQuantity& x, const ConservedQuantity& y, const Trajectory& traj) {
  double worst = 0.0;
  for (double t : residual_grid(traj)) worst = std::max(worst, std::abs(x(t, traj) - y(t, traj)));
  return worst;
}

}  // namespace

TEST(SimpleConstant, TranslationGivesMomentumComponent) {
  auto sys = noether::testing::free_particle(2);
  const auto traj = noether::testing::solve(sys, vec({0.0, 1.0}), vec({0.4, -0.7}), 0.0, 3.0);
  const Vec u = vec({0.6, 0.8});
  const auto cq = simple_constant(*sys, SpaceChange::pointwise([u](double, const Vec&, const Vec&) -> Vec { return u; }));
  EXPECT_EQ(cq.kind, Locality::local);
  EXPECT_NEAR(cq(1.5, traj), 0.4 * 0.6 - 0.7 * 0.8, 1e-10);
  EXPECT_TRUE(drift(cq, traj, 1e-10).pass);
}

TEST(SimpleConstant, RotationGivesAngularMomentum) {
  auto sys = noether::testing::kepler();
  const auto traj = noether::testing::solve(sys, vec({1.0, 0.0}), vec({0.1, 1.2}), 0.0, 5.0);
  const auto cq = simple_constant(
      *sys, SpaceChange::pointwise([](double, const Vec& q, const Vec&) -> Vec { return vec({-q(1), q(0)}); }));
  EXPECT_NEAR(cq(3.0, traj), 1.2, 1e-8);
}

TEST(SimpleConstant, IdentityFamilyIsZero) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  const auto cq = simple_constant(*sys, SpaceChange::identity(1));
  EXPECT_EQ(cq(1.0, traj), 0.0);
  const auto report = drift(cq, traj, 0.0);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.samples.size(), 64u);
}

TEST(BHConstant, TimeShiftWithLagrangianGaugeIsEnergy) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  const auto triple = energy_gauge_triple();
  const auto cq = bh_constant(*sys, triple.space, triple.bh);
  for (double t : {0.0, 1.0, 4.0}) EXPECT_NEAR(cq(t, traj), 0.5, 1e-8);
}

TEST(NonlocalConstant, OscillatorShiftIsInitialVelocity) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  const auto cq = nonlocal_constant(*sys, shift_space(), 0.0);
  EXPECT_EQ(cq.kind, Locality::nonlocal);
  for (double t : residual_grid(traj)) EXPECT_NEAR(cq(t, traj), 1.0, 1e-8);
  const auto later = nonlocal_constant(*sys, shift_space(), 1.0);
  EXPECT_NEAR(later(5.0, traj), std::cos(1.0), 1e-8);
}

TEST(NonlocalConstant, DiffersFromGaugeConstantByAConstant) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  const auto nonlocal = nonlocal_constant(*sys, shift_space());
  // psi = qdot absorbs d/deps L = -q on motions; G = -eps psi.
  const auto gauge = bh_constant(*sys, shift_space(),
                                 BHFunction::linear([](double t, const Trajectory& c) { return -c.velocity(t)(0); }));
  EXPECT_NEAR(gauge(2.0, traj), 0.0, 1e-8);
  ConservedQuantity gap;
  gap.name = "gap";
  gap.evaluator = [&](double t, const Trajectory& c) { return nonlocal(t, c) - gauge(t, c); };
  EXPECT_TRUE(drift(gap, traj, 1e-6).pass);
}

TEST(FullConstant, TimeShiftWithReversedTimeIsEnergy) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  const auto cq = full_constant(*sys, energy_time_triple());
  for (double t : {0.0, 2.0, 6.0}) EXPECT_NEAR(cq(t, traj), 0.5, 1e-8);
  EXPECT_THROW(alt_full_constant(*sys, energy_time_triple()), StyleMismatch);
}

TEST(AltFullConstant, TrivialTripleIsZero) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  const SymmetryTriple trivial{SpaceChange::identity(1), TimeChange::identity(Style::theta), BHFunction::zero()};
  EXPECT_EQ(alt_full_constant(*sys, trivial)(1.0, traj), 0.0);
}

TEST(TrivializeBH, EnergyTripleBecomesReversedTime) {
  auto sys = noether::testing::kepler();
  const auto traj = noether::testing::solve(sys, vec({1.0, 0.0}), vec({0.0, 1.0}), 0.0, 2 * kPi);
  const auto out = trivialize_bh(*sys, energy_gauge_triple(), traj, 0.0);
  EXPECT_TRUE(out.bh.trivial());
  for (double t : {0.0, 1.0, 5.0}) {
    EXPECT_NEAR(out.time.rate(t, traj), -1.0, 1e-9);
    EXPECT_NEAR(out.time.at(0.01, t, traj), t - 0.01, 1e-9);
  }
  EXPECT_LT(max_residual(*sys, out, traj), 1e-6);
  EXPECT_LT(max_gap(full_constant(*sys, out), full_constant(*sys, energy_gauge_triple()), traj), 1e-8);
}

TEST(TrivializeBH, AutomaticShiftHandlesVanishingLagrangian) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  EXPECT_THROW(trivialize_bh(*sys, energy_gauge_triple(), traj, 0.0), ZeroDenominator);
  EXPECT_NEAR(select_lagrangian_shift(energy_gauge_triple(), traj), 2.0, 1e-6);
  const auto out = trivialize_bh(*sys, energy_gauge_triple(), traj);
  EXPECT_NEAR(out.lagrangian_shift, 2.0, 1e-6);
  EXPECT_LT(max_residual(*sys, out, traj), 1e-6);
  EXPECT_LT(max_gap(full_constant(*sys, out), full_constant(*sys, energy_gauge_triple()), traj), 1e-8);
}

TEST(TrivializeBH, ResidualPreservedOffShell) {
  auto sys = noether::testing::harmonic();
  const auto curve = parabola(sys);
  const auto out = trivialize_bh(*sys, energy_gauge_triple(), curve);
  EXPECT_LT(max_residual(*sys, out, curve), 1e-6);
}

TEST(TrivializeBH, ThetaStyleRoundTrip) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  const auto theta = standard_to_alternative(energy_gauge_triple());
  ASSERT_EQ(theta.style(), Style::theta);
  const auto out = trivialize_bh(*sys, theta, traj);
  EXPECT_EQ(out.style(), Style::theta);
  EXPECT_TRUE(out.bh.trivial());
  EXPECT_LT(max_residual(*sys, out, traj), 1e-6);
  EXPECT_LT(max_gap(alt_full_constant(*sys, out), full_constant(*sys, energy_gauge_triple()), traj), 1e-7);
}

TEST(TrivializeTime, ReversedTimeBecomesLagrangianGauge) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  const auto out = trivialize_time(*sys, energy_time_triple());
  EXPECT_TRUE(out.time.trivial());
  for (double t : {0.5, 3.0}) EXPECT_NEAR(out.bh.rate(t, traj), -traj.lagrangian_at(t), 1e-12);
  EXPECT_LT(max_residual(*sys, out, parabola(sys)), 1e-6);
  EXPECT_LT(max_gap(full_constant(*sys, out), full_constant(*sys, energy_time_triple()), traj), 1e-10);

  const auto unchanged = trivialize_time(*sys, energy_gauge_triple());
  EXPECT_NEAR(unchanged.bh.rate(1.0, traj), energy_gauge_triple().bh.rate(1.0, traj), 0.0);
}

TEST(StyleConversion, ResidualAndConstantMatchInBothForms) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  const auto curve = parabola(sys);
  const auto standard = energy_time_triple();
  for (auto form : {ConversionForm::first_order, ConversionForm::composition}) {
    const auto alt = standard_to_alternative(standard, form);
    EXPECT_EQ(alt.style(), Style::theta);
    for (double t : check_grid(0.0, 2.0, 7)) {
      EXPECT_NEAR(alt_invariance_residual(*sys, alt, curve, t), invariance_residual(*sys, standard, curve, t), 1e-6);
    }
    EXPECT_LT(max_gap(alt_full_constant(*sys, alt), full_constant(*sys, standard), traj), 1e-7);
    const auto back = alternative_to_standard(alt, form);
    EXPECT_EQ(back.style(), Style::tau);
    EXPECT_LT(max_gap(full_constant(*sys, back), full_constant(*sys, standard), traj), 1e-7);
  }
}

TEST(StyleConversion, EnergyTripleFirstOrderFamilyIsStatic) {
  auto sys = noether::testing::harmonic();
  const auto traj = oscillator_motion(sys);
  const auto alt = standard_to_alternative(energy_time_triple());
  // q(t + eps) - eps qdot(t) agrees with q(t) to first order.
  EXPECT_NEAR(d_eps_space(alt.space, traj, 1.0)(0), 0.0, 1e-9);
}

TEST(StyleConversion, TrivialTimeLeavesSpaceUnchanged) {
  const SymmetryTriple triple{shift_space(), TimeChange::identity(), BHFunction::zero()};
  const auto alt = standard_to_alternative(triple);
  EXPECT_EQ(alt.space.form, SpaceChange::Form::pointwise);
  EXPECT_EQ(alt.style(), Style::theta);
  EXPECT_THROW(standard_to_alternative(alt), StyleMismatch);
}

TEST(Drift, EnergyOnMotionPassesAndOffShellFails) {
  auto sys = noether::testing::harmonic();
  const auto energy = full_constant(*sys, energy_time_triple());
  const auto good = drift(energy, oscillator_motion(sys), 1e-6);
  EXPECT_TRUE(good.pass) << good.rel_drift;
  const auto bad = drift(energy, parabola(sys), 1e-6);
  EXPECT_FALSE(bad.pass);
  EXPECT_GT(bad.max_abs_drift, 1.0);
  EXPECT_DOUBLE_EQ(bad.rel_drift, bad.max_abs_drift / std::max(1.0, std::abs(bad.reference)));
}

TEST(SingleMotion, SpeedOnCircularOrbitOnly) {
  auto sys = noether::testing::kepler();
  const auto circle = noether::testing::solve(sys, vec({1.0, 0.0}), vec({0.0, 1.0}), 0.0, 2 * kPi);
  const auto cq = single_motion_constant(*sys, phase_shift_family(), circle);
  for (double t : {0.0, 2.0, 5.0}) EXPECT_NEAR(cq(t, circle), 1.0, 1e-8);

  const auto ellipse = noether::testing::solve(sys, vec({1.0, 0.0}), vec({0.0, 1.2}), 0.0, 2 * kPi);
  EXPECT_THROW(single_motion_constant(*sys, phase_shift_family(), ellipse), ResidualTooLarge);
  const auto speed = point_function("speed", [](double, const Vec&, const Vec& qd) { return qd.squaredNorm(); });
  EXPECT_FALSE(drift(speed, ellipse, 1e-2).pass);
  EXPECT_NEAR(kepler_energy(circle.at(3.0)), -0.5, 1e-9);
}

TEST(PointPlusIntegral, DissipationStyleConstant) {
  // E + int qdot^2 ds is constant for qddot = -q - qdot.
  auto sys = std::make_shared<LagrangianSystem>();
  sys->name = "damped";
  sys->dim = 1;
  sys->lagrangian = [](double t, const Vec& q, const Vec& qd) {
    return std::exp(t) * (0.5 * qd(0) * qd(0) - 0.5 * q(0) * q(0));
  };
  const auto traj = noether::testing::solve(sys, vec({1.0}), vec({0.0}), 0.0, 4.0);
  const auto cq = point_plus_integral(
      "energy_plus_loss", [](double, const Vec& q, const Vec& qd) { return 0.5 * qd(0) * qd(0) + 0.5 * q(0) * q(0); },
      [](double, const Vec&, const Vec& qd) { return qd(0) * qd(0); }, 1.0);
  EXPECT_TRUE(drift(cq, traj, 1e-8).pass);
}
