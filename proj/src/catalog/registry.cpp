#include "builders.hpp"

#include "noether/errors.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace noether {

namespace {

using Builder = std::function<CatalogEntry()>;

const std::vector<std::pair<std::string, Builder>>& registry() {
  static const std::vector<std::pair<std::string, Builder>> table = {
      {"oscillator_energy", detail::oscillator_energy},
      {"oscillator_shift", detail::oscillator_shift},
      {"oscillator_dilation", detail::oscillator_dilation},
      {"oscillator_nonlocal", detail::oscillator_nonlocal},
      {"free_particle", detail::free_particle},
      {"central_force_2d", detail::central_force_2d},
      {"dissipative_quadratic", detail::dissipative_quadratic},
      {"lane_emden_n1", [] { return lane_emden_entry(1); }},
      {"lane_emden_n5", [] { return lane_emden_entry(5); }},
      {"lane_emden_n7", [] { return lane_emden_entry(7); }},
      {"homogeneous_inverse_square", detail::homogeneous_inverse_square},
      {"homogeneous_calogero", detail::homogeneous_calogero},
      {"toda_n2", [] { return detail::toda(2); }},
      {"toda_n3", [] { return detail::toda(3); }},
      {"kepler_2d", detail::kepler_2d},
      {"kepler_circular", detail::kepler_circular},
      {"superintegrable_a0", [] { return detail::superintegrable(0.0, "superintegrable_a0"); }},
      {"superintegrable_a01", [] { return detail::superintegrable(0.1, "superintegrable_a01"); }},
      {"plane_wave", detail::plane_wave},
  };
  return table;
}

double param(const CustomSystemSpec& spec, const std::string& key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

}  // namespace

std::string to_string(Applicability a) {
  switch (a) {
    case Applicability::all_motions:
      return "all_motions";
    case Applicability::single_motion:
      return "single_motion";
    case Applicability::non_el_too:
      return "non_el_too";
  }
  return "unknown";
}

std::vector<std::string> entry_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, build] : registry()) ids.push_back(id);
  return ids;
}

CatalogEntry get_entry(const std::string& id) {
  for (const auto& [key, build] : registry()) {
    if (key == id) return build();
  }
  throw UnknownEntry("no catalog entry named '" + id + "'");
}

std::vector<EntrySummary> list_entries() {
  std::vector<EntrySummary> out;
  for (const auto& [id, build] : registry()) {
    const CatalogEntry e = build();
    out.push_back({e.id, e.title, e.dim(), static_cast<int>(e.triples.size()), static_cast<int>(e.expected.size()),
                   e.tags});
  }
  return out;
}

Trajectory default_trajectory(const CatalogEntry& entry) { return integrate(entry.system, entry.default_ivp); }

Trajectory off_shell_trajectory(const CatalogEntry& entry) {
  if (!entry.off_shell) throw Error("entry '" + entry.id + "' has no off-shell curve");
  return Trajectory::from_curve(entry.system, entry.default_ivp.interval, entry.default_ivp.padding(),
                                entry.off_shell);
}

CatalogEntry make_custom_entry(const CustomSystemSpec& spec) {
  using namespace detail;
  const int n = spec.dim;
  if (n < 1) throw ConfigError("custom system '" + spec.name + "': dim must be positive");
  if (spec.q0.size() != n || spec.qdot0.size() != n) {
    throw ConfigError("custom system '" + spec.name + "': q0 and qdot0 need " + std::to_string(n) + " components");
  }
  if (!(spec.interval.b > spec.interval.a)) {
    throw ConfigError("custom system '" + spec.name + "': interval must have b > a");
  }
  const double mass = param(spec, "mass", 1.0);
  if (!(mass > 0.0)) throw ConfigError("custom system '" + spec.name + "': mass must be positive");

  CatalogEntry e;
  e.id = spec.name;
  e.title = "Custom " + spec.potential + " system";
  e.summary = "User-declared system from the " + spec.potential + " family.";
  e.tags = {"custom", spec.potential};
  e.default_ivp = make_ivp(spec.q0, spec.qdot0, spec.interval);

  const std::string& family = spec.potential;
  bool two_d_rotation = false;
  if (family == "harmonic") {
    const double w = param(spec, "omega", 1.0);
    e.system = mechanical(
        spec.name, n, mass, [=](double, const Vec& q) { return 0.5 * mass * w * w * q.squaredNorm(); },
        [=](double, const Vec& q) -> Vec { return mass * w * w * q; });
    two_d_rotation = n == 2;
  } else if (family == "kepler") {
    const double k = param(spec, "k", 1.0);
    e.system = mechanical(
        spec.name, n, mass, [=](double, const Vec& q) { return -k / q.norm(); },
        [=](double, const Vec& q) -> Vec { return k * q / std::pow(q.norm(), 3); },
        [](double, const Vec& q, const Vec&) { return q.norm() > 1e-9; });
    two_d_rotation = n == 2;
  } else if (family == "inverse_square") {
    const double k = param(spec, "k", 1.0);
    e.system = mechanical(
        spec.name, n, mass, [=](double, const Vec& q) { return -k / q.squaredNorm(); },
        [=](double, const Vec& q) -> Vec { return 2 * k * q / std::pow(q.squaredNorm(), 2); },
        [](double, const Vec& q, const Vec&) { return q.norm() > 1e-9; });
    two_d_rotation = n == 2;
  } else if (family == "calogero") {
    if (n < 2) throw ConfigError("custom system '" + spec.name + "': calogero needs dim >= 2");
    const double g = param(spec, "g", 1.0);
    e.system = mechanical(
        spec.name, n, mass,
        [=](double, const Vec& q) {
          double u = 0.0;
          for (int j = 0; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) u += g / std::pow(q(j) - q(k), 2);
          }
          return u;
        },
        [=](double, const Vec& q) -> Vec {
          Vec grad = Vec::Zero(n);
          for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
              if (k != j) grad(j) -= 2 * g / std::pow(q(j) - q(k), 3);
            }
          }
          return grad;
        },
        [=](double, const Vec& q, const Vec&) {
          for (int j = 0; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
              if (std::abs(q(j) - q(k)) < 1e-9) return false;
            }
          }
          return true;
        });
  } else if (family == "toda") {
    if (n < 2) throw ConfigError("custom system '" + spec.name + "': toda needs dim >= 2");
    e.system = mechanical(
        spec.name, n, mass,
        [](double, const Vec& q) {
          double v = 0.0;
          for (int k = 0; k + 1 < q.size(); ++k) v += std::exp(q(k) - q(k + 1));
          return v;
        },
        [](double, const Vec& q) -> Vec {
          Vec grad = Vec::Zero(q.size());
          for (int k = 0; k + 1 < q.size(); ++k) {
            const double w = std::exp(q(k) - q(k + 1));
            grad(k) += w;
            grad(k + 1) -= w;
          }
          return grad;
        });
  } else if (family == "free") {
    e.system = mechanical(
        spec.name, n, mass, [](double, const Vec&) { return 0.0; },
        [n](double, const Vec&) -> Vec { return Vec::Zero(n); });
  } else {
    throw ConfigError("custom system '" + spec.name + "': unknown potential family '" + family +
                      "' (expected harmonic, kepler, inverse_square, toda, calogero or free)");
  }
  const SystemPtr sys = e.system;

  e.triples.push_back(named("time_translation", "q(t + eps), tau = t - eps", "energy",
                            {SpaceChange::time_shift(),
                             TimeChange::linear(Style::tau, [](double, const Trajectory&) { return -1.0; }),
                             BHFunction::zero()},
                            Applicability::non_el_too));
  e.expected.push_back(expect("energy", "m |qdot|^2 / 2 + U", full_constant(*sys, e.triples.back().triple)));

  if (family == "free" || family == "toda" || family == "calogero") {
    const SpaceChange shift = translation(Vec::Ones(n));
    e.triples.push_back(named("translation", "q + eps (1, ..., 1)", "momentum",
                              {shift, TimeChange::identity(), BHFunction::zero()}, Applicability::non_el_too));
    e.expected.push_back(expect("total_momentum", "m sum of qdot_k", simple_constant(*sys, shift)));
  }
  if (two_d_rotation) {
    e.triples.push_back(named("rotation", "R(eps) q", "angular-momentum",
                              {rotation(), TimeChange::identity(), BHFunction::zero()}, Applicability::non_el_too));
    e.expected.push_back(expect("angular_momentum", "m det(q, qdot)", simple_constant(*sys, rotation())));
  }
  if (family == "inverse_square" || family == "calogero") add_inverse_square_scaling(e, mass);
  return e;
}

}  // namespace noether
