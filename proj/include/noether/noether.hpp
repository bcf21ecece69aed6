#pragma once

#include "noether/variation.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace noether {

enum class Locality { local, nonlocal };

/// A function of (t, trajectory) expected to be constant along motions.
struct ConservedQuantity {
  std::string name;
  Locality kind = Locality::local;
  std::function<double(double t, const Trajectory& traj)> evaluator;
  std::optional<double> t0;  ///< base time of the integral term; interval start when unset
  std::string provenance;

  double operator()(double t, const Trajectory& traj) const { return evaluator(t, traj); }
  double base_time(const Trajectory& traj) const { return t0.value_or(traj.interval().a); }
};

struct DriftReport {
  std::string constant_id;
  std::vector<std::pair<double, double>> samples;
  double reference = 0.0;  ///< N(a)
  double max_abs_drift = 0.0;
  double rel_drift = 0.0;
  double tolerance = 0.0;
  std::string residual_summary;
  bool pass = false;
};

/// Closed-form constant psi(t, q, qdot).
ConservedQuantity point_function(std::string name, ScalarField f);
/// point(t) + scale * int_{t0}^t integrand ds, integrand cached per trajectory.
ConservedQuantity point_plus_integral(std::string name, ScalarField point, ScalarField integrand, double scale,
                                      std::optional<double> t0 = std::nullopt);

/// p . d/deps q_eps.
ConservedQuantity simple_constant(const LagrangianSystem& sys, const SpaceChange& space);
/// p . d/deps q_eps + d/deps G.
ConservedQuantity bh_constant(const LagrangianSystem& sys, const SpaceChange& space, const BHFunction& bh);
/// p . d/deps q_eps - int_{t0}^t d/deps L ds; needs no invariance at all.
ConservedQuantity nonlocal_constant(const LagrangianSystem& sys, const SpaceChange& space,
                                    std::optional<double> t0 = std::nullopt);
/// p . dq + L_k dtau + dG for a tau-style triple.
ConservedQuantity full_constant(const LagrangianSystem& sys, const SymmetryTriple& triple);
/// p . (dq - dtheta qdot) + L_k dtheta + dG for a theta-style triple.
ConservedQuantity alt_full_constant(const LagrangianSystem& sys, const SymmetryTriple& triple);
/// Dispatches on the triple's style.
ConservedQuantity triple_constant(const LagrangianSystem& sys, const SymmetryTriple& triple);

/// Auto k_shift: 1 + 2 max(0, -min L_k) over the trajectory.
double select_lagrangian_shift(const SymmetryTriple& triple, const Trajectory& traj);

/// Moves the gauge term into the time change: tau + eps (dG - k dtau) / (L_k + k),
/// G = 0, Lagrangian shift raised by k. Theta-style triples pass through the
/// tau style in first-order form.
SymmetryTriple trivialize_bh(const LagrangianSystem& sys, const SymmetryTriple& triple, const Trajectory& traj,
                             std::optional<double> k_shift = std::nullopt);
/// Moves the time change into the gauge term: G + eps L_k dtau, tau = t.
SymmetryTriple trivialize_time(const LagrangianSystem& sys, const SymmetryTriple& triple);

enum class ConversionForm { first_order, composition };

/// tau style to theta style. First order: Q = q_eps + eps dtau qdot.
/// Composition: Q = q_eps(t + eps dtau).
SymmetryTriple standard_to_alternative(const SymmetryTriple& triple,
                                       ConversionForm form = ConversionForm::first_order);
/// theta style to tau style, the same maps with eps dtheta negated.
SymmetryTriple alternative_to_standard(const SymmetryTriple& triple,
                                       ConversionForm form = ConversionForm::first_order);

/// Samples cq on the 64-point check grid and compares against N(a).
DriftReport drift(const ConservedQuantity& cq, const Trajectory& traj, double tolerance);

/// The triple's constant, valid for this motion only; ResidualTooLarge
/// unless max_residual along traj is within tolerance.
ConservedQuantity single_motion_constant(const LagrangianSystem& sys, const SymmetryTriple& triple,
                                         const Trajectory& traj, double tolerance = 1e-6);

}  // namespace noether
