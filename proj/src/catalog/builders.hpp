#pragma once

// Shared construction helpers for catalog entries.

#include "noether/catalog.hpp"

#include <initializer_list>
#include <optional>
#include <string>

namespace noether::detail {

Vec vec(std::initializer_list<double> xs);

using Potential = std::function<double(double t, const Vec& q)>;
using PotentialGradient = std::function<Vec(double t, const Vec& q)>;

/// L = m |qdot|^2 / 2 - U(t, q) with closed-form derivatives.
SystemPtr mechanical(std::string name, int dim, double mass, Potential potential, PotentialGradient gradient,
                     DomainGuard guard = {});

InitialValueProblem make_ivp(Vec q0, Vec qdot0, Interval interval, std::optional<Padding> pad = std::nullopt);

/// center + amplitude * cos(omega t + phase), componentwise.
Trajectory::Curve trig_curve(Vec center, Vec amplitude, Vec omega, Vec phase);

ExpectedConstant expect(std::string id, std::string description, ConservedQuantity cq, double tolerance = 1e-6,
                        Applicability applicability = Applicability::all_motions);

NamedTriple named(std::string id, std::string description, std::string tag, SymmetryTriple triple,
                  Applicability applicability = Applicability::all_motions);

ConservedQuantity rename(ConservedQuantity cq, std::string name);

/// p . qdot - L as a point function.
ConservedQuantity energy_constant(const SystemPtr& sys);

/// Rate that evaluates f at the trajectory state.
RateFn state_rate(ScalarField f);

SpaceChange translation(Vec u);
/// Finite rotation R(eps) q(t) in the plane.
SpaceChange rotation();

double det2(const Vec& a, const Vec& b);

/// max over the residual grid of |f(t)|.
double grid_max(const Trajectory& traj, const std::function<double(double)>& f);

/// Check that passes when value <= tolerance.
CheckResult at_most(double value, double tolerance, std::string detail = {});
/// Check that passes when value > threshold.
CheckResult exceeds(double value, double threshold, std::string detail = {});

/// Max over the grid of |(x(t) - x(a)) - (y(t) - y(a))|.
double baseline_gap(const ConservedQuantity& x, const ConservedQuantity& y, const Trajectory& traj);

// Entry builders, one per catalog id.
CatalogEntry oscillator_energy();
CatalogEntry oscillator_shift();
CatalogEntry oscillator_dilation();
CatalogEntry oscillator_nonlocal();
CatalogEntry free_particle();
CatalogEntry central_force_2d();
CatalogEntry dissipative_quadratic();
CatalogEntry homogeneous_inverse_square();
CatalogEntry homogeneous_calogero();
CatalogEntry toda(int n);
CatalogEntry kepler_2d();
CatalogEntry kepler_circular();
CatalogEntry superintegrable(double a, std::string id);
CatalogEntry plane_wave();

/// Homogeneous degree -2 scaling triples and constants shared by the
/// inverse-square and Calogero entries.
void add_inverse_square_scaling(CatalogEntry& entry, double mass);
/// q(t0) . v checks of the translation nonlocal constant for random v.
EntryCheck cone_velocity_check(int dim, int draws = 3);

}  // namespace noether::detail
