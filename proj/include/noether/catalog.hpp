#pragma once

#include "noether/noether.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace noether {

/// Where an invariance or conservation claim is expected to hold.
enum class Applicability {
  all_motions,    ///< every solution of the Euler–Lagrange equations
  single_motion,  ///< only the entry's default motion
  non_el_too,     ///< every smooth curve, motion or not
};

std::string to_string(Applicability a);

struct NamedTriple {
  std::string id;
  std::string description;
  std::string tag;
  SymmetryTriple triple;
  Applicability applicability = Applicability::all_motions;
};

struct ExpectedConstant {
  std::string id;
  std::string description;
  std::function<ConservedQuantity(const Trajectory& traj)> build;
  double tolerance = 1e-6;
  Applicability applicability = Applicability::all_motions;
};

/// d/deps L = d/dt psi along the stated class of curves.
struct TotalDerivativeClaim {
  std::string id;
  std::string description;
  SpaceChange space;
  ScalarField psi;
  Applicability applicability = Applicability::all_motions;
  double tolerance = 1e-6;
};

struct CheckResult {
  double value = 0.0;      ///< the measured deviation or statistic
  double tolerance = 0.0;  ///< threshold it was compared against
  bool pass = false;
  std::string detail;
};

/// Entry-specific property that is not a plain drift or residual.
struct EntryCheck {
  std::string id;
  std::string description;
  std::function<CheckResult(const Trajectory& traj, SplitMix64& rng)> run;
};

struct CatalogEntry {
  std::string id;
  std::string title;
  std::string summary;
  std::vector<std::string> tags;
  SystemPtr system;
  InitialValueProblem default_ivp;
  Trajectory::Curve off_shell;  ///< smooth curve that is not a motion; empty when unused
  std::vector<NamedTriple> triples;
  std::vector<ExpectedConstant> expected;
  std::vector<TotalDerivativeClaim> total_derivatives;
  std::vector<EntryCheck> checks;
  std::vector<std::string> notes;
  double residual_tolerance = 1e-6;

  int dim() const { return system->dim; }
};

struct EntrySummary {
  std::string id;
  std::string title;
  int dim = 0;
  int triples = 0;
  int expected = 0;
  std::vector<std::string> tags;
};

/// All built-in entries in a fixed order.
std::vector<EntrySummary> list_entries();
std::vector<std::string> entry_ids();
/// UnknownEntry for ids not in the catalog.
CatalogEntry get_entry(const std::string& id);

/// Integrates the entry's default initial value problem.
Trajectory default_trajectory(const CatalogEntry& entry);
/// The entry's off-shell curve sampled on the same padded interval.
Trajectory off_shell_trajectory(const CatalogEntry& entry);

CatalogEntry lane_emden_entry(int n);

/// Tabulated solution of the coupled profile equations
///   mu''' = 6 a g',   24 a g^2 + 2 mu g'' + 3 g' mu' - 3 g mu'' = 0
/// for the Lagrangian xdot ydot - g(x) y, started at x = 0.
class SuperintegrableProfile {
 public:
  SuperintegrableProfile(double a, std::vector<double> x, std::vector<std::array<double, 6>> rows);

  double a() const { return a_; }
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }
  const std::vector<double>& grid() const { return x_; }

  double g(double x) const;
  double g_prime(double x) const;
  /// Primitive of g with V(0) = 0.
  double potential(double x) const;
  double mu(double x) const;
  double mu_prime(double x) const;
  double mu_second(double x) const;

  /// f(x, xdot) = g mu + xdot^2 mu' / 2 + a xdot^4.
  double f(double x, double xdot) const;
  double f_x(double x, double xdot) const;
  double f_xdot(double x, double xdot) const;

  /// Max over interior tabulation nodes of |mu''' - 6 a g'| and of the second
  /// equation, with mu''' and g'' taken by five-point differences of the table.
  std::pair<double, double> ode_residuals() const;

 private:
  enum Column { kG = 0, kG1 = 1, kMu = 2, kMu1 = 3, kMu2 = 4, kV = 5 };
  /// Quintic Hermite jet of one tabulated function from its exact first and
  /// second derivatives at the nodes, so only first derivatives of an
  /// interpolant ever enter a residual.
  HermiteJet interpolate(double x, Column value) const;
  std::array<double, 3> chain(const std::array<double, 6>& row, Column value) const;

  double a_;
  std::vector<double> x_;
  std::vector<std::array<double, 6>> rows_;
};

/// Solves the profile equations from g(0) = g0, g'(0) = g0prime,
/// (mu, mu', mu'')(0) = mu_init over x_range by classical RK4 with `step`.
SuperintegrableProfile build_superintegrable(double a, double g0, double g0prime, std::array<double, 3> mu_init,
                                             std::pair<double, double> x_range, double step = 1e-3);

/// User-declared mechanical system from a built-in potential family:
/// harmonic, kepler, inverse_square, toda, calogero, free.
struct CustomSystemSpec {
  std::string name;
  std::string potential;
  std::map<std::string, double> params;
  int dim = 1;
  Vec q0;
  Vec qdot0;
  Interval interval{0.0, 10.0};
};

/// ConfigError for unknown families, missing data or bad dimensions.
CatalogEntry make_custom_entry(const CustomSystemSpec& spec);

}  // namespace noether
