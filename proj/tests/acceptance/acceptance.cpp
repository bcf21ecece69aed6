// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "noether/catalog.hpp"
#include "noether/errors.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace noether;

namespace {

constexpr double kDriftTol = 1e-6;
constexpr double kOracleTol = 1e-6;
constexpr double kEquivalenceTol = 1e-6;
constexpr double kCircularTol = 1e-8;
constexpr double kEccentricFloor = 1e-2;
constexpr double kLaneEmdenTol = 1e-5;
constexpr double kVanishTol = 1e-8;
constexpr double kProfileTol = 1e-8;
constexpr double kResidualTol = 1e-6;
constexpr double kOffShellFloor = 1e-2;
constexpr double kIntegratorRelTol = 1e-10;
constexpr double kSuiteSeconds = 60.0;
constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
  void note(const std::string& label, double value) { detail << " " << label << "=" << value; }
};

double grid_max(const Trajectory& traj, const std::function<double(double)>& f) {
  double worst = 0.0;
  for (double t : residual_grid(traj)) {
    const double v = std::abs(f(t));
    if (!std::isfinite(v)) return v;
    worst = std::max(worst, v);
  }
  return worst;
}

double baseline_gap(const ConservedQuantity& x, const ConservedQuantity& y, const Trajectory& traj) {
  const double a = traj.interval().a;
  const double x0 = x(a, traj), y0 = y(a, traj);
  return grid_max(traj, [&](double t) { return (x(t, traj) - x0) - (y(t, traj) - y0); });
}

const ExpectedConstant& expected(const CatalogEntry& e, const std::string& id) {
  for (const auto& c : e.expected) {
    if (c.id == id) return c;
  }
  throw Error(e.id + " has no expected constant " + id);
}

const NamedTriple& triple(const CatalogEntry& e, const std::string& id) {
  for (const auto& t : e.triples) {
    if (t.id == id) return t;
  }
  throw Error(e.id + " has no triple " + id);
}

CheckResult run_check(const CatalogEntry& e, const std::string& id, const Trajectory& traj) {
  for (const auto& c : e.checks) {
    if (c.id == id) {
      SplitMix64 rng = SplitMix64::split(kSeed, e.id);
      return c.run(traj, rng);
    }
  }
  throw Error(e.id + " has no check " + id);
}

double expected_drift(const CatalogEntry& e, const std::string& id, const Trajectory& traj) {
  return drift(expected(e, id).build(traj), traj, kDriftTol).rel_drift;
}

Trajectory integrate_on(const CatalogEntry& e, Interval interval) {
  InitialValueProblem ivp = e.default_ivp;
  ivp.interval = interval;
  ivp.t0 = interval.a;
  ivp.step.rel_tol = kIntegratorRelTol;
  return integrate(e.system, ivp);
}

// 1: classical constants from closed forms independent of the catalog.
Outcome classical_constants() {
  Outcome out;
  const double period = 2 * std::numbers::pi;
  auto check = [&](const std::string& id, const std::string& label, auto&& value) {
    const CatalogEntry e = get_entry(id);
    const Trajectory traj = integrate_on(e, {0.0, period});
    const double d = drift(point_function(label, value), traj, kDriftTol).rel_drift;
    out.note(id + "." + label, d);
    out.require(d <= kDriftTol, id + "." + label);
  };
  auto energy_of = [](const std::string& id) {
    const SystemPtr sys = get_entry(id).system;
    return [sys](double t, const Vec& q, const Vec& qd) { return energy(*sys, t, q, qd); };
  };
  auto momentum_of = [](const std::string& id, int axis) {
    const SystemPtr sys = get_entry(id).system;
    return [sys, axis](double t, const Vec& q, const Vec& qd) { return momentum(*sys, t, q, qd)(axis); };
  };
  auto angular_of = [](const std::string& id) {
    const SystemPtr sys = get_entry(id).system;
    return [sys](double t, const Vec& q, const Vec& qd) {
      const Vec p = momentum(*sys, t, q, qd);
      return q(0) * p(1) - q(1) * p(0);
    };
  };
  check("oscillator_energy", "energy", energy_of("oscillator_energy"));
  check("free_particle", "energy", energy_of("free_particle"));
  check("free_particle", "momentum_x", momentum_of("free_particle", 0));
  check("free_particle", "momentum_y", momentum_of("free_particle", 1));
  check("free_particle", "angular_momentum", angular_of("free_particle"));
  check("central_force_2d", "angular_momentum", angular_of("central_force_2d"));
  return out;
}

// 2: nonlocal constants against their closed-form values.
Outcome nonlocal_oracles() {
  Outcome out;
  {
    const CatalogEntry e = get_entry("oscillator_shift");
    const Trajectory traj = default_trajectory(e);
    const SpaceChange shift = SpaceChange::pointwise([](double, const Vec&, const Vec&) { return Vec::Ones(1); });
    double worst = 0.0;
    for (double t0 : {0.0, 1.3, 4.0}) {
      const auto cq = nonlocal_constant(*e.system, shift, t0);
      const double target = traj.velocity(t0)(0);
      worst = std::max(worst, grid_max(traj, [&](double t) { return cq(t, traj) - target; }));
    }
    out.note("shift", worst);
    out.require(worst <= kOracleTol, "space shift equals qdot(t0)");
  }
  {
    const CatalogEntry e = get_entry("oscillator_nonlocal");
    const Trajectory traj = default_trajectory(e);
    const SpaceChange& family = e.triples.front().triple.space;
    double worst = 0.0;
    for (double t0 : {1.0, 2.5, 4.0, 5.5}) {
      const auto cq = nonlocal_constant(*e.system, family, t0);
      const double v0 = traj.velocity(t0)(0);
      const double target = (traj.velocity(0.0)(0) - v0) * v0;
      worst = std::max(worst, grid_max(traj, [&](double t) { return cq(t, traj) - target; }));
    }
    out.note("integral_family", worst);
    out.require(worst <= kOracleTol, "integral family closed form");
  }
  return out;
}

// 3: original, gauge-trivialized and time-trivialized constants coincide.
Outcome trivialization_equivalence() {
  Outcome out;
  int compared = 0;
  double worst = 0.0, worst_residual = 0.0;
  for (const char* id : {"oscillator_energy", "dissipative_quadratic", "kepler_2d", "homogeneous_inverse_square",
                         "homogeneous_calogero", "plane_wave"}) {
    const CatalogEntry e = get_entry(id);
    const Trajectory traj = default_trajectory(e);
    for (const auto& nt : e.triples) {
      if (nt.triple.style() != Style::tau) continue;
      const SymmetryTriple no_gauge = trivialize_bh(*e.system, nt.triple, traj);
      const SymmetryTriple no_time = trivialize_time(*e.system, nt.triple);
      const auto original = full_constant(*e.system, nt.triple);
      const double gap = std::max(baseline_gap(original, full_constant(*e.system, no_gauge), traj),
                                  baseline_gap(original, triple_constant(*e.system, no_time), traj));
      // The transformed triples must themselves be symmetries, not just share a constant.
      const double residual =
          std::max(max_residual(*e.system, no_gauge, traj), max_residual(*e.system, no_time, traj));
      worst = std::max(worst, gap);
      worst_residual = std::max(worst_residual, residual);
      ++compared;
      out.require(gap <= kEquivalenceTol, std::string(id) + "." + nt.id);
      out.require(residual <= kResidualTol, std::string(id) + "." + nt.id + " transformed residual");
    }
  }
  out.note("triples", compared);
  out.note("max_gap", worst);
  out.note("max_transformed_residual", worst_residual);
  out.require(compared >= 6, "enough tau-style triples");
  return out;
}

// 4: constants survive conversion between the tau and theta styles.
Outcome style_equivalence() {
  Outcome out;
  int compared = 0;
  double worst = 0.0, worst_residual = 0.0;
  bool saw_theta = false;
  for (const char* id : {"dissipative_quadratic", "kepler_2d"}) {
    const CatalogEntry e = get_entry(id);
    const Trajectory traj = default_trajectory(e);
    for (const auto& nt : e.triples) {
      double gap = 0.0;
      SymmetryTriple converted;
      if (nt.triple.style() == Style::tau) {
        converted = standard_to_alternative(nt.triple);
        gap = baseline_gap(full_constant(*e.system, nt.triple), alt_full_constant(*e.system, converted), traj);
      } else {
        saw_theta = true;
        converted = alternative_to_standard(nt.triple);
        gap = baseline_gap(alt_full_constant(*e.system, nt.triple), full_constant(*e.system, converted), traj);
      }
      const double residual = max_residual(*e.system, converted, traj);
      worst = std::max(worst, gap);
      worst_residual = std::max(worst_residual, residual);
      ++compared;
      out.require(gap <= kEquivalenceTol, std::string(id) + "." + nt.id);
      out.require(residual <= kResidualTol, std::string(id) + "." + nt.id + " converted residual");
    }
  }
  out.note("triples", compared);
  out.note("max_gap", worst);
  out.note("max_converted_residual", worst_residual);
  out.require(saw_theta, "a theta-style triple was compared");
  return out;
}

// 5: Laplace-Runge-Lenz vector over one eccentric period; circular speed.
Outcome kepler() {
  Outcome out;
  const CatalogEntry e = get_entry("kepler_2d");
  const Vec origin = e.default_ivp.q0;
  // L(q, 0) = k / |q| recovers the force constant from the Lagrangian itself.
  const double k = lagrangian(*e.system, 0.0, Vec::Unit(2, 0) * 2.0, Vec::Zero(2)) * 2.0;
  const double en = energy(*e.system, 0.0, origin, e.default_ivp.qdot0);
  const double semi_major = -k / (2 * en);
  const double period = 2 * std::numbers::pi * std::pow(semi_major, 1.5) / std::sqrt(k);
  const Trajectory traj = integrate_on(e, {0.0, period});
  out.note("period", period);

  for (int axis : {0, 1}) {
    const auto lrl = point_function("lrl", [k, axis](double, const Vec& q, const Vec& qd) {
      const Vec a = q * qd.squaredNorm() - qd.dot(q) * qd - k * q / q.norm();
      return a(axis);
    });
    const double d = drift(lrl, traj, kDriftTol).rel_drift;
    out.note(axis == 0 ? "lrl_x" : "lrl_y", d);
    out.require(d <= kDriftTol, "lrl component drift");
  }

  const auto gauge = full_constant(*e.system, triple(e, "lrl_bh").triple);
  const auto theta = alt_full_constant(*e.system, triple(e, "sarlet_cantrijn").triple);
  const double same = grid_max(traj, [&](double t) { return gauge(t, traj) - theta(t, traj); });
  const double opposite = grid_max(traj, [&](double t) { return gauge(t, traj) + theta(t, traj); });
  out.note("derivations_up_to_sign", std::min(same, opposite));
  out.require(std::min(same, opposite) <= kEquivalenceTol, "two derivations agree up to sign");

  const CatalogEntry c = get_entry("kepler_circular");
  const Trajectory circle = default_trajectory(c);
  const auto speed = point_function("speed", [](double, const Vec&, const Vec& qd) { return qd.squaredNorm(); });
  const double off_one = grid_max(circle, [&](double t) { return speed(t, circle) - 1.0; });
  const double single = drift(expected(c, "speed_squared").build(circle), circle, kCircularTol).max_abs_drift;
  out.note("circular_speed", off_one);
  out.note("single_motion_drift", single);
  out.require(off_one <= kCircularTol && single <= kCircularTol, "circular speed squared is 1");

  const double eccentric = drift(speed, traj, kEccentricFloor).max_abs_drift;
  out.note("eccentric_speed_drift", eccentric);
  out.require(eccentric > kEccentricFloor, "speed squared varies on the eccentric orbit");
  return out;
}

// 6: inverse-square scaling constants and the radius law.
Outcome homogeneous() {
  Outcome out;
  for (const char* id : {"homogeneous_inverse_square", "homogeneous_calogero"}) {
    const CatalogEntry e = get_entry(id);
    const Trajectory traj = default_trajectory(e);
    for (const char* c : {"dilation", "second_dilation"}) {
      const double d = expected_drift(e, c, traj);
      out.note(std::string(id) + "." + c, d);
      out.require(d <= kDriftTol, std::string(id) + "." + c);
    }
    // m |q|^2 / 2 has constant second derivative 2E, so it is a quadratic in t.
    const double a = traj.interval().a;
    const State s0 = traj.at(a);
    const double mass = hess_qdot_qdot(*e.system, a, s0.q, s0.qdot)(0, 0);
    const double en = energy(*e.system, a, s0.q, s0.qdot);
    const double slope = mass * s0.q.dot(s0.qdot);
    const double base = 0.5 * mass * s0.q.squaredNorm();
    const double radius = grid_max(traj, [&](double t) {
      const double dt = t - a;
      return traj.position(t).norm() - std::sqrt(2.0 / mass * (en * dt * dt + slope * dt + base));
    });
    out.note(std::string(id) + ".radius", radius);
    out.require(radius <= kOracleTol, std::string(id) + " radius");
  }
  return out;
}

// 7: Lane-Emden local integral, vanishing first family, monotone integral.
Outcome lane_emden() {
  Outcome out;
  {
    const CatalogEntry e = get_entry("lane_emden_n5");
    const Trajectory traj = default_trajectory(e);
    out.require(traj.interval().a == 1e-3 && traj.interval().b == 10.0, "n=5 interval [1e-3, 10]");
    const double d = drift(expected(e, "local_first_integral").build(traj), traj, kLaneEmdenTol).rel_drift;
    out.note("n5_local", d);
    out.require(d <= kLaneEmdenTol, "n=5 local first integral");
  }
  {
    const CatalogEntry e = get_entry("lane_emden_n1");
    const Trajectory traj = default_trajectory(e);
    const auto first = expected(e, "nonlocal_first").build(traj);
    const double size = grid_max(traj, [&](double t) { return first(t, traj); });
    out.note("n1_first", size);
    out.require(size <= kVanishTol, "n=1 first family vanishes");
  }
  {
    const CatalogEntry e = get_entry("lane_emden_n7");
    const CheckResult r = run_check(e, "integral_term_monotone", default_trajectory(e));
    out.note("n7_decreases", r.value);
    out.require(r.pass, "n=7 integral term monotone");
  }
  return out;
}

// 8: Toda nonlocal scaling constant; asymptotic-velocity constants.
Outcome cone_potentials() {
  Outcome out;
  for (const char* id : {"toda_n2", "toda_n3"}) {
    const CatalogEntry e = get_entry(id);
    const double d = expected_drift(e, "scaling_nonlocal", default_trajectory(e));
    out.note(std::string(id) + ".scaling", d);
    out.require(d <= kDriftTol, std::string(id) + " scaling constant");
  }
  SplitMix64 rng(kSeed);
  for (const char* id : {"toda_n2", "toda_n3", "homogeneous_calogero"}) {
    const CatalogEntry e = get_entry(id);
    const Trajectory traj = default_trajectory(e);
    const double t0 = traj.interval().a;
    double worst = 0.0;
    for (int draw = 0; draw < 3; ++draw) {
      Vec v(e.dim());
      for (int j = 0; j < e.dim(); ++j) v(j) = rng.uniform(-1.0, 1.0);
      const SpaceChange shift = SpaceChange::pointwise([v](double, const Vec&, const Vec&) { return v; });
      const auto cq = nonlocal_constant(*e.system, shift, t0);
      const double target = traj.velocity(t0).dot(v);
      worst = std::max(worst, grid_max(traj, [&](double t) { return cq(t, traj) - target; }));
    }
    out.note(std::string(id) + ".velocity", worst);
    out.require(worst <= kOracleTol, std::string(id) + " asymptotic velocity");
  }
  return out;
}

// 9: superintegrable profile equations and its three first integrals.
Outcome superintegrable() {
  Outcome out;
  for (const char* id : {"superintegrable_a0", "superintegrable_a01"}) {
    const CatalogEntry e = get_entry(id);
    const Trajectory traj = default_trajectory(e);
    const CheckResult ode = run_check(e, "profile_equations", traj);
    out.note(std::string(id) + ".ode", ode.value);
    out.require(ode.value <= kProfileTol, std::string(id) + " profile equations");
    for (const char* c : {"x_energy", "coupled_energy", "quartic"}) {
      const double d = expected_drift(e, c, traj);
      out.require(d <= kDriftTol, std::string(id) + "." + c);
      out.note(std::string(id) + "." + c, d);
    }
  }
  return out;
}

// 10: invariance residuals of every triple; total-derivative claims.
Outcome residuals() {
  Outcome out;
  double worst = 0.0;
  int triples = 0;
  for (const auto& id : entry_ids()) {
    const CatalogEntry e = get_entry(id);
    const Trajectory traj = default_trajectory(e);
    std::vector<const Trajectory*> curves{&traj};
    std::optional<Trajectory> off;
    if (e.off_shell) curves.push_back(&off.emplace(off_shell_trajectory(e)));
    for (const auto& nt : e.triples) {
      ++triples;
      for (const Trajectory* curve : curves) {
        if (!curve->euler_lagrange() && nt.applicability != Applicability::non_el_too) continue;
        const double r = max_residual(*e.system, nt.triple, *curve);
        worst = std::max(worst, r);
        out.require(r <= kResidualTol, id + "." + nt.id);
      }
    }
    for (const auto& claim : e.total_derivatives) {
      for (const Trajectory* curve : curves) {
        if (!curve->euler_lagrange() && claim.applicability != Applicability::non_el_too) continue;
        const double r = total_derivative_check(*e.system, claim.space, claim.psi, *curve);
        worst = std::max(worst, r);
        out.require(r <= kResidualTol, id + "." + claim.id);
      }
    }
  }
  out.note("triples", triples);
  out.note("max_residual", worst);

  const CatalogEntry osc = get_entry("oscillator_energy");
  const Trajectory motion = default_trajectory(osc);
  const SystemPtr sys = osc.system;
  const Trajectory parabola = Trajectory::from_curve(sys, motion.interval(), motion.padding(), [](double t) {
    return State{t, Vec::Constant(1, t * t), Vec::Constant(1, 2 * t), Vec::Constant(1, 2.0)};
  });
  const ScalarField lagrangian_psi = [sys](double t, const Vec& q, const Vec& qd) {
    return lagrangian(*sys, t, q, qd);
  };
  for (const Trajectory* curve : {&motion, &parabola}) {
    const double r = total_derivative_check(*sys, SpaceChange::time_shift(), lagrangian_psi, *curve);
    out.require(r <= kResidualTol, "time shift with psi = L");
  }
  const SpaceChange shift = SpaceChange::pointwise([](double, const Vec&, const Vec&) { return Vec::Ones(1); });
  const ScalarField velocity_psi = [](double, const Vec&, const Vec& qd) { return qd(0); };
  const double on_shell = total_derivative_check(*sys, shift, velocity_psi, motion);
  const double off_shell = total_derivative_check(*sys, shift, velocity_psi, parabola);
  out.note("qdot_on_motion", on_shell);
  out.note("qdot_on_parabola", off_shell);
  out.require(on_shell <= kResidualTol, "psi = qdot on motions");
  out.require(off_shell > kOffShellFloor, "psi = qdot fails on q = t^2");
  return out;
}

struct Captured {
  int code = -1;
  std::string out;
  double seconds = 0.0;
};

Captured run_cli(const std::string& args) {
  Captured c;
  const auto start = std::chrono::steady_clock::now();
  FILE* pipe = popen((std::string(NOETHER_CLI) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return c;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), n);
  const int status = pclose(pipe);
  c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

// 11: the full suite through the command line.
Outcome command_line() {
  Outcome out;
  const std::string args = "verify --entries all --seed " + std::to_string(kSeed) + " --format csv --report -";
  const Captured first = run_cli(args);
  const Captured second = run_cli(args);
  out.note("exit", first.code);
  out.note("seconds", std::max(first.seconds, second.seconds));
  out.require(first.code == 0 && second.code == 0, "exit status 0");
  out.require(!first.out.empty() && first.out == second.out, "identical reports");
  out.require(std::max(first.seconds, second.seconds) < kSuiteSeconds, "under 60 s");
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"classical constants", classical_constants},
      {"nonlocal constant oracles", nonlocal_oracles},
      {"trivialization equivalence", trivialization_equivalence},
      {"style equivalence", style_equivalence},
      {"kepler vector and circular speed", kepler},
      {"inverse-square scaling", homogeneous},
      {"lane-emden", lane_emden},
      {"cone potentials", cone_potentials},
      {"superintegrable family", superintegrable},
      {"invariance residuals", residuals},
      {"command line suite", command_line},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [error: " << e.what() << "]";
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ":" << o.detail.str()
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
