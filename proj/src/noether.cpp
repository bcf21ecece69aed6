#include "noether/noether.hpp"

#include "noether/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace noether {

namespace {

using SharedSystem = std::shared_ptr<const LagrangianSystem>;

SharedSystem share(const LagrangianSystem& sys) { return std::make_shared<const LagrangianSystem>(sys); }

bool exact(const TimeChange& c) { return c.trivial() || c.exact_rate; }
bool exact(const BHFunction& g) { return g.trivial() || g.exact_rate; }

Vec momentum_at(const LagrangianSystem& sys, double t, const Trajectory& traj) {
  const State s = traj.at(t);
  return grad_qdot(sys, t, s.q, s.qdot);
}

double shifted_lagrangian(const LagrangianSystem& sys, double shift, double t, const Trajectory& traj) {
  const State s = traj.at(t);
  return lagrangian(sys, t, s.q, s.qdot) + shift;
}

Locality locality(bool local) { return local ? Locality::local : Locality::nonlocal; }

std::string cache_key(const char* prefix) { return std::string(prefix) + ":" + std::to_string(next_unique_id()); }

// Samples used to decide whether L_k + k stays away from zero.
std::vector<double> denominator_samples(const Trajectory& traj) {
  std::vector<double> ts = residual_grid(traj);
  const Interval iv = traj.interval();
  for (double t : traj.grid()) {
    if (t >= iv.a && t <= iv.b) ts.push_back(t);
  }
  return ts;
}

SymmetryTriple convert(const SymmetryTriple& triple, ConversionForm form, double sign, Style target) {
  SymmetryTriple out = triple;
  out.time.style = target;
  out.time.inverse_fn = {};
  if (triple.time.trivial()) return out;

  const SpaceChange space = triple.space;
  const TimeChange time = triple.time;
  FamilyMap position, velocity;
  if (form == ConversionForm::first_order) {
    position = [=](double eps, double t, const Trajectory& traj) -> Vec {
      return space.position(eps, t, traj) + sign * eps * time.rate(t, traj) * traj.velocity(t);
    };
    velocity = [=](double eps, double t, const Trajectory& traj) -> Vec {
      const State s = traj.at(t);
      return space.velocity(eps, t, traj) +
             sign * eps * (time.rate_dt(t, traj) * s.qdot + time.rate(t, traj) * s.qddot);
    };
  } else {
    position = [=](double eps, double t, const Trajectory& traj) -> Vec {
      return space.position(eps, t + sign * eps * time.rate(t, traj), traj);
    };
    velocity = [=](double eps, double t, const Trajectory& traj) -> Vec {
      const double stretch = 1.0 + sign * eps * time.rate_dt(t, traj);
      return space.velocity(eps, t + sign * eps * time.rate(t, traj), traj) * stretch;
    };
  }
  out.space = SpaceChange::trajectory_map(std::move(position), std::move(velocity), space.local && time.local);
  out.space.eps0 = space.eps0;
  out.space.h_t = space.h_t;
  return out;
}

}  // namespace

ConservedQuantity point_function(std::string name, ScalarField f) {
  ConservedQuantity cq;
  cq.name = std::move(name);
  cq.provenance = "closed form";
  cq.evaluator = [f = std::move(f)](double t, const Trajectory& traj) {
    const State s = traj.at(t);
    return f(t, s.q, s.qdot);
  };
  return cq;
}

ConservedQuantity point_plus_integral(std::string name, ScalarField point, ScalarField integrand, double scale,
                                      std::optional<double> t0) {
  ConservedQuantity cq;
  cq.name = std::move(name);
  cq.kind = Locality::nonlocal;
  cq.t0 = t0;
  cq.provenance = "closed form with integral";
  const std::string key = cache_key("closed");
  cq.evaluator = [=](double t, const Trajectory& traj) {
    const auto integral = trajectory_integral(traj, key, [&](double s, const State& st) -> Vec {
      return Vec::Constant(1, integrand(s, st.q, st.qdot));
    });
    const State s = traj.at(t);
    const double base = t0.value_or(traj.interval().a);
    return point(t, s.q, s.qdot) + scale * integral->between(base, t)(0);
  };
  return cq;
}

ConservedQuantity simple_constant(const LagrangianSystem& sys, const SpaceChange& space) {
  return bh_constant(sys, space, BHFunction::zero());
}

ConservedQuantity bh_constant(const LagrangianSystem& sys, const SpaceChange& space, const BHFunction& bh) {
  ConservedQuantity cq;
  cq.name = bh.trivial() ? "simple" : "bh";
  cq.provenance = bh.trivial() ? "space change" : "space change with gauge term";
  cq.kind = locality(space.local && bh.local);
  cq.evaluator = [s = share(sys), space, bh](double t, const Trajectory& traj) {
    return momentum_at(*s, t, traj).dot(d_eps_space(space, traj, t)) + bh.rate(t, traj);
  };
  return cq;
}

ConservedQuantity nonlocal_constant(const LagrangianSystem& sys, const SpaceChange& space, std::optional<double> t0) {
  ConservedQuantity cq;
  cq.name = "nonlocal";
  cq.provenance = "space change with integral term";
  cq.kind = Locality::nonlocal;
  cq.t0 = t0;
  const std::string key = cache_key("nonlocal");
  cq.evaluator = [s = share(sys), space, t0, key](double t, const Trajectory& traj) {
    const auto integral = trajectory_integral(traj, key, [&](double u, const State&) -> Vec {
      return Vec::Constant(1, d_eps_lagrangian(*s, space, traj, u));
    });
    const double base = t0.value_or(traj.interval().a);
    return momentum_at(*s, t, traj).dot(d_eps_space(space, traj, t)) - integral->between(base, t)(0);
  };
  return cq;
}

ConservedQuantity full_constant(const LagrangianSystem& sys, const SymmetryTriple& triple) {
  if (triple.style() != Style::tau) throw StyleMismatch("full_constant expects a tau-style triple");
  ConservedQuantity cq;
  cq.name = "full";
  cq.provenance = "space and time change with gauge term";
  cq.kind = locality(triple.local());
  cq.evaluator = [s = share(sys), triple](double t, const Trajectory& traj) {
    const double lk = shifted_lagrangian(*s, triple.lagrangian_shift, t, traj);
    return momentum_at(*s, t, traj).dot(d_eps_space(triple.space, traj, t)) + lk * triple.time.rate(t, traj) +
           triple.bh.rate(t, traj);
  };
  return cq;
}

ConservedQuantity alt_full_constant(const LagrangianSystem& sys, const SymmetryTriple& triple) {
  if (triple.style() != Style::theta) throw StyleMismatch("alt_full_constant expects a theta-style triple");
  ConservedQuantity cq;
  cq.name = "alt_full";
  cq.provenance = "alternative space and time change with gauge term";
  cq.kind = locality(triple.local());
  cq.evaluator = [s = share(sys), triple](double t, const Trajectory& traj) {
    const State st = traj.at(t);
    const double dtheta = triple.time.rate(t, traj);
    const double lk = lagrangian(*s, t, st.q, st.qdot) + triple.lagrangian_shift;
    const Vec dq = d_eps_space(triple.space, traj, t) - dtheta * st.qdot;
    return grad_qdot(*s, t, st.q, st.qdot).dot(dq) + lk * dtheta + triple.bh.rate(t, traj);
  };
  return cq;
}

ConservedQuantity triple_constant(const LagrangianSystem& sys, const SymmetryTriple& triple) {
  return triple.style() == Style::tau ? full_constant(sys, triple) : alt_full_constant(sys, triple);
}

double select_lagrangian_shift(const SymmetryTriple& triple, const Trajectory& traj) {
  double lowest = std::numeric_limits<double>::infinity();
  for (double t : denominator_samples(traj)) {
    const double l = traj.lagrangian_at(t) + triple.lagrangian_shift;
    if (!std::isfinite(l)) {
      throw ZeroDenominator("Lagrangian is not finite at t=" + std::to_string(t) + "; no shift can be selected");
    }
    lowest = std::min(lowest, l);
  }
  return 1.0 + 2.0 * std::max(0.0, -lowest);
}

SymmetryTriple trivialize_bh(const LagrangianSystem& sys, const SymmetryTriple& triple, const Trajectory& traj,
                             std::optional<double> k_shift) {
  if (triple.style() == Style::theta) {
    const SymmetryTriple standard = alternative_to_standard(triple);
    return standard_to_alternative(trivialize_bh(sys, standard, traj, k_shift));
  }
  if (triple.bh.trivial()) return triple;

  const double k = k_shift ? *k_shift : select_lagrangian_shift(triple, traj);
  if (k_shift) {
    double lowest = std::numeric_limits<double>::infinity(), highest = -lowest, smallest = lowest;
    for (double t : denominator_samples(traj)) {
      const double d = traj.lagrangian_at(t) + triple.lagrangian_shift + k;
      if (!std::isfinite(d)) throw ZeroDenominator("L + k is not finite at t=" + std::to_string(t));
      lowest = std::min(lowest, d);
      highest = std::max(highest, d);
      smallest = std::min(smallest, std::abs(d));
    }
    const double scale = std::max({1.0, std::abs(lowest), std::abs(highest)});
    if (lowest * highest <= 0.0 || smallest < 1e-8 * scale) {
      throw ZeroDenominator("L + k changes sign or vanishes along the trajectory (min " + std::to_string(lowest) +
                            ", max " + std::to_string(highest) + ")");
    }
  }

  const auto s = share(sys);
  const TimeChange time = triple.time;
  const BHFunction bh = triple.bh;
  const double shift = triple.lagrangian_shift;
  RateFn extra = [=](double t, const Trajectory& c) {
    const double denominator = shifted_lagrangian(*s, shift, t, c) + k;
    return (bh.rate(t, c) - k * time.rate(t, c)) / denominator;
  };
  RateFn rate = [=](double t, const Trajectory& c) { return time.rate(t, c) + extra(t, c); };
  ScalarMap value = [=](double eps, double t, const Trajectory& c) {
    return time.at(eps, t, c) + eps * extra(t, c);
  };

  SymmetryTriple out = triple;
  out.time = TimeChange::general(Style::tau, std::move(value), std::move(rate), exact(time) && exact(bh));
  out.time.local = time.local && bh.local;
  out.time.eps0 = time.eps0;
  out.bh = BHFunction::zero();
  out.lagrangian_shift = shift + k;
  return out;
}

SymmetryTriple trivialize_time(const LagrangianSystem& sys, const SymmetryTriple& triple) {
  if (triple.style() != Style::tau) throw StyleMismatch("trivialize_time expects a tau-style triple");
  if (triple.time.trivial()) return triple;

  const auto s = share(sys);
  const TimeChange time = triple.time;
  const BHFunction bh = triple.bh;
  const double shift = triple.lagrangian_shift;
  RateFn extra = [=](double t, const Trajectory& c) {
    return shifted_lagrangian(*s, shift, t, c) * time.rate(t, c);
  };
  RateFn rate = [=](double t, const Trajectory& c) { return bh.rate(t, c) + extra(t, c); };
  ScalarMap value = [=](double eps, double t, const Trajectory& c) { return bh.at(eps, t, c) + eps * extra(t, c); };

  SymmetryTriple out = triple;
  out.bh = BHFunction::general(std::move(value), std::move(rate), exact(time) && exact(bh), time.local && bh.local);
  out.bh.eps0 = bh.eps0;
  out.time = TimeChange::identity(Style::tau);
  return out;
}

SymmetryTriple standard_to_alternative(const SymmetryTriple& triple, ConversionForm form) {
  if (triple.style() != Style::tau) throw StyleMismatch("standard_to_alternative expects a tau-style triple");
  return convert(triple, form, 1.0, Style::theta);
}

SymmetryTriple alternative_to_standard(const SymmetryTriple& triple, ConversionForm form) {
  if (triple.style() != Style::theta) throw StyleMismatch("alternative_to_standard expects a theta-style triple");
  return convert(triple, form, -1.0, Style::tau);
}

DriftReport drift(const ConservedQuantity& cq, const Trajectory& traj, double tolerance) {
  DriftReport report;
  report.constant_id = cq.name;
  report.tolerance = tolerance;
  const std::vector<double> ts = residual_grid(traj);
  report.samples.reserve(ts.size());
  for (double t : ts) report.samples.emplace_back(t, cq(t, traj));
  report.reference = report.samples.front().second;
  for (const auto& [t, value] : report.samples) {
    const double d = std::abs(value - report.reference);
    report.max_abs_drift = std::isfinite(d) ? std::max(report.max_abs_drift, d)
                                            : std::numeric_limits<double>::infinity();
  }
  report.rel_drift = report.max_abs_drift / std::max(1.0, std::abs(report.reference));
  report.pass = report.rel_drift <= tolerance;
  return report;
}

ConservedQuantity single_motion_constant(const LagrangianSystem& sys, const SymmetryTriple& triple,
                                         const Trajectory& traj, double tolerance) {
  const double r = max_residual(sys, triple, traj);
  if (!(r <= tolerance)) {
    throw ResidualTooLarge("invariance residual " + std::to_string(r) + " along this motion exceeds " +
                           std::to_string(tolerance));
  }
  ConservedQuantity cq = triple_constant(sys, triple);
  cq.name = "single_motion";
  cq.provenance = "single motion: " + cq.provenance;
  return cq;
}

}  // namespace noether
