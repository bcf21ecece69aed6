#include "noether/verify.hpp"

#include "noether/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <future>
#include <set>
#include <thread>

#ifndef NOETHER_VERSION
#define NOETHER_VERSION "0.0.0"
#endif

namespace noether {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool within(double value, double tolerance) { return std::isfinite(value) && value <= tolerance; }

VerificationRecord measured(std::string kind, std::string id, double t0, double value, double scale, double tol,
                            std::string detail = {}) {
  VerificationRecord r;
  r.kind = std::move(kind);
  r.id = std::move(id);
  r.t0 = t0;
  r.max_abs = value;
  r.rel = value / std::max(1.0, scale);
  r.tolerance = tol;
  r.pass = within(r.rel, tol);
  r.detail = std::move(detail);
  return r;
}

VerificationRecord failure(std::string kind, std::string id, double t0, double tol, const std::exception& e) {
  VerificationRecord r;
  r.kind = std::move(kind);
  r.id = std::move(id);
  r.t0 = t0;
  r.max_abs = std::numeric_limits<double>::quiet_NaN();
  r.rel = r.max_abs;
  r.tolerance = tol;
  r.pass = false;
  r.detail = e.what();
  return r;
}

// Runs `body`, turning any library error into a failing record.
template <class Body>
VerificationRecord guarded(const std::string& kind, const std::string& id, double t0, double tol, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return failure(kind, id, t0, tol, e);
  }
}

double grid_abs_max(const Trajectory& traj, const std::function<double(double)>& f) {
  double worst = 0.0;
  for (double t : residual_grid(traj)) {
    const double v = std::abs(f(t));
    if (!std::isfinite(v)) return v;
    worst = std::max(worst, v);
  }
  return worst;
}

// Max pointwise gap after subtracting both values at t = a, and the scale of x.
std::pair<double, double> constant_gap(const ConservedQuantity& x, const ConservedQuantity& y, const Trajectory& traj) {
  const double a = traj.interval().a;
  const double x0 = x(a, traj), y0 = y(a, traj);
  const double gap = grid_abs_max(traj, [&](double t) { return (x(t, traj) - x0) - (y(t, traj) - y0); });
  const double scale = grid_abs_max(traj, [&](double t) { return x(t, traj); });
  return {gap, scale};
}

std::string format_shift(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", k);
  return buf;
}

SymmetryTriple time_trivialized(const LagrangianSystem& sys, const SymmetryTriple& triple) {
  if (triple.style() == Style::tau) return trivialize_time(sys, triple);
  return standard_to_alternative(trivialize_time(sys, alternative_to_standard(triple)));
}

SymmetryTriple style_converted(const SymmetryTriple& triple) {
  return triple.style() == Style::tau ? standard_to_alternative(triple) : alternative_to_standard(triple);
}

void verify_triples(const CatalogEntry& entry, const Trajectory& traj, const std::optional<Trajectory>& curve,
                    std::vector<VerificationRecord>& out) {
  const LagrangianSystem& sys = *entry.system;
  const double a = traj.interval().a;
  const double tol = entry.residual_tolerance;
  for (const NamedTriple& nt : entry.triples) {
    const SymmetryTriple& triple = nt.triple;
    out.push_back(guarded("residual", nt.id, a, tol, [&] {
      return measured("residual", nt.id, a, max_residual(sys, triple, traj), 1.0, tol, to_string(nt.applicability));
    }));
    if (nt.applicability == Applicability::non_el_too && curve) {
      out.push_back(guarded("residual_off_shell", nt.id, a, tol, [&] {
        return measured("residual_off_shell", nt.id, a, max_residual(sys, triple, *curve), 1.0, tol);
      }));
    }

    const ConservedQuantity original = triple_constant(sys, triple);
    // Each transform is checked twice: its constant must match the original
    // after baseline subtraction, and the transformed triple must still be an
    // invariance of the (shifted) Lagrangian along the motion.
    auto transformed = [&](const std::string& kind, const std::function<SymmetryTriple()>& make) {
      std::optional<SymmetryTriple> moved;
      out.push_back(guarded(kind, nt.id, a, tol, [&] {
        moved = make();
        const auto [gap, scale] = constant_gap(original, triple_constant(sys, *moved), traj);
        return measured(kind, nt.id, a, gap, scale, tol);
      }));
      out.push_back(guarded(kind + "_residual", nt.id, a, tol, [&] {
        if (!moved) throw Error("transform failed");
        return measured(kind + "_residual", nt.id, a, max_residual(sys, *moved, traj), 1.0, tol,
                        "lagrangian shift " + format_shift(moved->lagrangian_shift));
      }));
    };
    if (!triple.bh.trivial()) transformed("trivialize_bh", [&] { return trivialize_bh(sys, triple, traj); });
    if (!triple.time.trivial()) transformed("trivialize_time", [&] { return time_trivialized(sys, triple); });
    transformed("style", [&] { return style_converted(triple); });
  }
}

}  // namespace

std::string tool_version() { return NOETHER_VERSION; }

std::vector<CatalogEntry> resolve_entries(const RunConfig& config) {
  std::vector<std::string> catalog = entry_ids();
  std::vector<CatalogEntry> out;
  std::set<std::string> chosen;
  const bool all = std::find(config.entries.begin(), config.entries.end(), "all") != config.entries.end();
  std::set<std::string> custom_ids;
  for (const auto& spec : config.custom) {
    if (std::find(catalog.begin(), catalog.end(), spec.name) != catalog.end() || !custom_ids.insert(spec.name).second) {
      throw ConfigError("custom system name '" + spec.name + "' is already taken");
    }
  }
  for (const auto& id : config.entries) {
    if (id == "all") continue;
    if (std::find(catalog.begin(), catalog.end(), id) == catalog.end() && !custom_ids.count(id)) {
      throw ConfigError("unknown entry '" + id + "'");
    }
    chosen.insert(id);
  }
  for (const auto& [id, unused] : config.overrides) {
    if (std::find(catalog.begin(), catalog.end(), id) == catalog.end() && !custom_ids.count(id)) {
      throw ConfigError("override for unknown entry '" + id + "'");
    }
  }
  for (const auto& id : catalog) {
    if (all || chosen.count(id)) out.push_back(get_entry(id));
  }
  for (const auto& spec : config.custom) {
    if (all || chosen.count(spec.name)) out.push_back(make_custom_entry(spec));
  }
  for (const auto& entry : out) {
    auto it = config.overrides.find(entry.id);
    if (it == config.overrides.end()) continue;
    const EntryOverride& o = it->second;
    if ((o.q0 && o.q0->size() != entry.dim()) || (o.qdot0 && o.qdot0->size() != entry.dim())) {
      throw ConfigError("override for '" + entry.id + "': initial data needs " + std::to_string(entry.dim()) +
                        " components");
    }
    if (o.tolerance && !(*o.tolerance > 0.0)) throw ConfigError("override for '" + entry.id + "': tolerance must be positive");
  }
  if (config.interval && !(config.interval->b > config.interval->a)) throw ConfigError("interval must have b > a");
  return out;
}

InitialValueProblem effective_ivp(const CatalogEntry& entry, const RunConfig& config) {
  InitialValueProblem ivp = entry.default_ivp;
  auto set_interval = [&](const Interval& iv) {
    ivp.interval = iv;
    ivp.t0 = iv.a;
  };
  if (config.interval) set_interval(*config.interval);
  if (config.rel_tol) ivp.step.rel_tol = *config.rel_tol;
  if (config.abs_tol) ivp.step.abs_tol = *config.abs_tol;
  if (config.h_max) ivp.step.h_max = *config.h_max;
  auto it = config.overrides.find(entry.id);
  if (it != config.overrides.end()) {
    if (it->second.interval) set_interval(*it->second.interval);
    if (it->second.q0) ivp.q0 = *it->second.q0;
    if (it->second.qdot0) ivp.qdot0 = *it->second.qdot0;
  }
  return ivp;
}

EntryReport verify_entry(const CatalogEntry& entry, const RunConfig& config) {
  const auto start = Clock::now();
  EntryReport report;
  report.id = entry.id;
  report.title = entry.title;
  auto& out = report.records;

  std::optional<double> tolerance_override;
  if (auto it = config.overrides.find(entry.id); it != config.overrides.end()) tolerance_override = it->second.tolerance;

  try {
    const InitialValueProblem ivp = effective_ivp(entry, config);
    const Trajectory traj = integrate(entry.system, ivp);
    std::optional<Trajectory> curve;
    if (entry.off_shell) {
      curve = Trajectory::from_curve(entry.system, ivp.interval, ivp.padding(), entry.off_shell);
    }
    SplitMix64 rng = SplitMix64::split(config.seed, entry.id);

    verify_triples(entry, traj, curve, out);

    for (const ExpectedConstant& c : entry.expected) {
      const double tol = tolerance_override.value_or(c.tolerance);
      out.push_back(guarded("drift", c.id, ivp.interval.a, tol, [&] {
        const ConservedQuantity cq = c.build(traj);
        const DriftReport d = drift(cq, traj, tol);
        VerificationRecord r;
        r.kind = "drift";
        r.id = c.id;
        r.t0 = cq.base_time(traj);
        r.max_abs = d.max_abs_drift;
        r.rel = d.rel_drift;
        r.tolerance = tol;
        r.pass = d.pass;
        r.detail = to_string(c.applicability);
        return r;
      }));
    }

    for (const TotalDerivativeClaim& claim : entry.total_derivatives) {
      out.push_back(guarded("total_derivative", claim.id, ivp.interval.a, claim.tolerance, [&] {
        return measured("total_derivative", claim.id, ivp.interval.a,
                        total_derivative_check(*entry.system, claim.space, claim.psi, traj), 1.0, claim.tolerance,
                        to_string(claim.applicability));
      }));
      if (claim.applicability == Applicability::non_el_too && curve) {
        out.push_back(guarded("total_derivative_off_shell", claim.id, ivp.interval.a, claim.tolerance, [&] {
          return measured("total_derivative_off_shell", claim.id, ivp.interval.a,
                          total_derivative_check(*entry.system, claim.space, claim.psi, *curve), 1.0,
                          claim.tolerance);
        }));
      }
    }

    for (const EntryCheck& check : entry.checks) {
      out.push_back(guarded("check", check.id, ivp.interval.a, 0.0, [&] {
        const CheckResult c = check.run(traj, rng);
        VerificationRecord r;
        r.kind = "check";
        r.id = check.id;
        r.t0 = ivp.interval.a;
        r.max_abs = c.value;
        r.rel = c.value;
        r.tolerance = c.tolerance;
        r.pass = c.pass;
        r.detail = c.detail;
        return r;
      }));
    }
  } catch (const std::exception& e) {
    out.push_back(failure("error", "trajectory", entry.default_ivp.interval.a, 0.0, e));
  }

  report.pass = !out.empty() && std::all_of(out.begin(), out.end(), [](const auto& r) { return r.pass; });
  report.seconds = seconds_since(start);
  return report;
}

ReportDocument run_verification(const RunConfig& config) {
  const auto start = Clock::now();
  ReportDocument doc;
  doc.tool_version = tool_version();
  doc.config = config;
  const std::vector<CatalogEntry> entries = resolve_entries(config);

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t width = config.threads > 0 ? static_cast<std::size_t>(config.threads) : hw;
  doc.entries.resize(entries.size());
  for (std::size_t begin = 0; begin < entries.size(); begin += width) {
    const std::size_t end = std::min(entries.size(), begin + width);
    std::vector<std::future<EntryReport>> batch;
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] { return verify_entry(entries[i], config); }));
    }
    for (std::size_t i = begin; i < end; ++i) doc.entries[i] = batch[i - begin].get();
  }
  doc.pass = std::all_of(doc.entries.begin(), doc.entries.end(), [](const auto& e) { return e.pass; });
  doc.seconds = seconds_since(start);
  return doc;
}

}  // namespace noether
