#include "builders.hpp"

#include "noether/errors.hpp"

#include <algorithm>
#include <cmath>

namespace noether {

namespace {

using Row = std::array<double, 6>;

constexpr double kSingularMu = 1e-12;

// Right-hand side of the profile system in the column order g, g', mu, mu', mu'', V.
Row profile_rhs(double a, const Row& y, double x) {
  const double g = y[0], g1 = y[1], mu = y[2], mu1 = y[3], mu2 = y[4];
  double g2 = 0.0;
  if (std::abs(mu) < kSingularMu) {
    if (a != 0.0) throw Error("profile equations are singular at x=" + std::to_string(x) + " (mu = 0)");
  } else {
    g2 = (3 * g * mu2 - 3 * g1 * mu1 - 24 * a * g * g) / (2 * mu);
  }
  return {g1, g2, mu1, mu2, 6 * a * g1, g};
}

Row axpy(const Row& y, double h, const Row& k) {
  Row out;
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
  return out;
}

// RK4 from x = 0 to `end`, returning the nodes after the start.
void march(double a, Row y, double end, double step, std::vector<double>& xs, std::vector<Row>& rows) {
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(end) / step - 1e-9)));
  const double h = end / n;
  double x = 0.0;
  for (int i = 0; i < n; ++i) {
    const Row k1 = profile_rhs(a, y, x);
    const Row k2 = profile_rhs(a, axpy(y, h / 2, k1), x + h / 2);
    const Row k3 = profile_rhs(a, axpy(y, h / 2, k2), x + h / 2);
    const Row k4 = profile_rhs(a, axpy(y, h, k3), x + h);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    x = (i + 1) * h;
    xs.push_back(x);
    rows.push_back(y);
  }
}

}  // namespace

SuperintegrableProfile::SuperintegrableProfile(double a, std::vector<double> x, std::vector<std::array<double, 6>> rows)
    : a_(a), x_(std::move(x)), rows_(std::move(rows)) {
  if (x_.size() < 2 || x_.size() != rows_.size()) throw Error("profile table needs matching nodes and rows");
}

std::array<double, 3> SuperintegrableProfile::chain(const Row& r, Column value) const {
  const double g = r[kG], g1 = r[kG1], mu = r[kMu], mu1 = r[kMu1], mu2 = r[kMu2];
  const double g2 = profile_rhs(a_, r, 0.0)[1];
  const double mu3 = 6 * a_ * g1, mu4 = 6 * a_ * g2;
  // d/dx of 2 mu g'' = 3 g mu'' - 3 g' mu' - 24 a g^2.
  const double g3 = std::abs(mu) < kSingularMu ? 0.0 : (3 * g * mu3 - 5 * g2 * mu1 - 48 * a_ * g * g1) / (2 * mu);
  switch (value) {
    case kG:
      return {g, g1, g2};
    case kG1:
      return {g1, g2, g3};
    case kMu:
      return {mu, mu1, mu2};
    case kMu1:
      return {mu1, mu2, mu3};
    case kMu2:
      return {mu2, mu3, mu4};
    case kV:
      return {r[kV], g, g1};
  }
  return {};
}

HermiteJet SuperintegrableProfile::interpolate(double x, Column value) const {
  if (x < lo() || x > hi()) {
    throw DomainError("profile queried at x=" + std::to_string(x) + " outside [" + std::to_string(lo()) + ", " +
                      std::to_string(hi()) + "]");
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  i = std::min(i, x_.size() - 2);
  const auto left = chain(rows_[i], value), right = chain(rows_[i + 1], value);
  auto one = [](double v) { return Vec::Constant(1, v); };
  return quintic_hermite(x_[i], x_[i + 1], one(left[0]), one(left[1]), one(left[2]), one(right[0]), one(right[1]),
                         one(right[2]), x);
}

double SuperintegrableProfile::g(double x) const { return interpolate(x, kG).value(0); }
double SuperintegrableProfile::g_prime(double x) const { return interpolate(x, kG1).value(0); }
double SuperintegrableProfile::potential(double x) const { return interpolate(x, kV).value(0); }
double SuperintegrableProfile::mu(double x) const { return interpolate(x, kMu).value(0); }
double SuperintegrableProfile::mu_prime(double x) const { return interpolate(x, kMu1).value(0); }
double SuperintegrableProfile::mu_second(double x) const { return interpolate(x, kMu2).value(0); }

double SuperintegrableProfile::f(double x, double xdot) const {
  return g(x) * mu(x) + 0.5 * xdot * xdot * mu_prime(x) + a_ * std::pow(xdot, 4);
}

double SuperintegrableProfile::f_x(double x, double xdot) const {
  return g_prime(x) * mu(x) + g(x) * mu_prime(x) + 0.5 * xdot * xdot * mu_second(x);
}

double SuperintegrableProfile::f_xdot(double x, double xdot) const {
  return xdot * mu_prime(x) + 4 * a_ * std::pow(xdot, 3);
}

std::pair<double, double> SuperintegrableProfile::ode_residuals() const {
  double first = 0.0, second = 0.0;
  for (std::size_t i = 2; i + 2 < x_.size(); ++i) {
    const double h = x_[i + 1] - x_[i];
    bool uniform = true;
    for (std::size_t j = i - 2; j < i + 2; ++j) uniform = uniform && std::abs(x_[j + 1] - x_[j] - h) < 1e-12;
    if (!uniform) continue;
    auto diff = [&](Column c) {
      return (rows_[i - 2][c] - 8 * rows_[i - 1][c] + 8 * rows_[i + 1][c] - rows_[i + 2][c]) / (12 * h);
    };
    const Row& r = rows_[i];
    first = std::max(first, std::abs(diff(kMu2) - 6 * a_ * r[kG1]));
    second = std::max(second, std::abs(24 * a_ * r[kG] * r[kG] + 2 * r[kMu] * diff(kG1) + 3 * r[kG1] * r[kMu1] -
                                       3 * r[kG] * r[kMu2]));
  }
  return {first, second};
}

SuperintegrableProfile build_superintegrable(double a, double g0, double g0prime, std::array<double, 3> mu_init,
                                             std::pair<double, double> x_range, double step) {
  if (!(x_range.first <= 0.0 && 0.0 <= x_range.second && x_range.first < x_range.second)) {
    throw ConfigError("profile range must contain x = 0");
  }
  if (!(step > 0.0)) throw ConfigError("profile step must be positive");
  const Row start{g0, g0prime, mu_init[0], mu_init[1], mu_init[2], 0.0};
  std::vector<double> back_x, fwd_x;
  std::vector<Row> back_rows, fwd_rows;
  if (x_range.first < 0.0) march(a, start, x_range.first, step, back_x, back_rows);
  if (x_range.second > 0.0) march(a, start, x_range.second, step, fwd_x, fwd_rows);

  std::vector<double> xs(back_x.rbegin(), back_x.rend());
  std::vector<Row> rows(back_rows.rbegin(), back_rows.rend());
  xs.push_back(0.0);
  rows.push_back(start);
  xs.insert(xs.end(), fwd_x.begin(), fwd_x.end());
  rows.insert(rows.end(), fwd_rows.begin(), fwd_rows.end());
  return SuperintegrableProfile(a, std::move(xs), std::move(rows));
}

namespace detail {

CatalogEntry superintegrable(double a, std::string id) {
  auto profile = std::make_shared<const SuperintegrableProfile>(
      build_superintegrable(a, 0.0, 1.0, {1.0, 0.0, 0.0}, {-1.5, 1.5}));

  CatalogEntry e;
  e.id = std::move(id);
  e.title = "Superintegrable system xdot ydot - g(x) y, a = " + std::to_string(a).substr(0, 4);
  e.summary = "A point symmetry built from the profile equations gives a constant quartic in xdot.";
  e.tags = {"superintegrable"};

  auto s = std::make_shared<LagrangianSystem>();
  s->name = e.id;
  s->dim = 2;
  s->lagrangian = [profile](double, const Vec& q, const Vec& qd) { return qd(0) * qd(1) - profile->g(q(0)) * q(1); };
  s->grads.q = [profile](double, const Vec& q, const Vec&) -> Vec {
    return vec({-profile->g_prime(q(0)) * q(1), -profile->g(q(0))});
  };
  s->grads.qdot = [](double, const Vec&, const Vec& qd) -> Vec { return vec({qd(1), qd(0)}); };
  s->grads.qdot_qdot = [](double, const Vec&, const Vec&) -> Mat {
    Mat m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
  };
  s->grads.qdot_q = [](double, const Vec&, const Vec&) -> Mat { return Mat::Zero(2, 2); };
  s->grads.qdot_t = [](double, const Vec&, const Vec&) -> Vec { return Vec::Zero(2); };
  s->domain_guard = [profile](double, const Vec& q, const Vec&) {
    return q(0) >= profile->lo() && q(0) <= profile->hi();
  };
  e.system = s;
  const SystemPtr sys = e.system;
  e.default_ivp = make_ivp(vec({0.5, 1.0}), vec({0.0, 0.0}), {0.0, 10.0});
  e.off_shell = trig_curve(vec({0.1, 0.5}), vec({0.6, 0.8}), vec({1.1, 0.7}), vec({0.3, 0.0}));

  // d/dt f along the state, with xddot from the trajectory.
  auto f_rate = [profile](const State& st) {
    const double x = st.q(0), xd = st.qdot(0);
    return profile->f_x(x, xd) * xd + profile->f_xdot(x, xd) * st.qddot(0);
  };
  const SymmetryTriple point{
      SpaceChange::pointwise(
          [profile](double, const Vec& q, const Vec& qd) -> Vec { return vec({profile->f(q(0), qd(0)), 0.0}); }),
      TimeChange::identity(), BHFunction::linear([f_rate](double t, const Trajectory& traj) {
        const State st = traj.at(t);
        return -st.q(1) * f_rate(st);
      })};
  e.triples.push_back(named("profile_symmetry", "x + eps f(x, xdot), G = -eps y df/dt", "superintegrable", point));

  e.expected.push_back(expect("x_energy", "xdot^2 / 2 + V(x)",
                              point_function("x_energy", [profile](double, const Vec& q, const Vec& qd) {
                                return 0.5 * qd(0) * qd(0) + profile->potential(q(0));
                              })));
  e.expected.push_back(expect("coupled_energy", "xdot ydot + g(x) y",
                              point_function("coupled_energy", [profile](double, const Vec& q, const Vec& qd) {
                                return qd(0) * qd(1) + profile->g(q(0)) * q(1);
                              })));
  e.expected.push_back(expect("quartic", "ydot f - y df/dt", full_constant(*sys, point)));
  e.expected.push_back(expect(
      "quartic_closed_form", "a (4 xdot^3 y g + xdot^4 ydot) - xdot^3 y mu''/2 + xdot^2 ydot mu'/2 - xdot y mu g' + ydot g mu",
      point_function("quartic_closed_form", [profile](double, const Vec& q, const Vec& qd) {
        const double x = q(0), y = q(1), xd = qd(0), yd = qd(1), a = profile->a();
        const double g = profile->g(x), g1 = profile->g_prime(x);
        const double mu = profile->mu(x), mu1 = profile->mu_prime(x), mu2 = profile->mu_second(x);
        return a * (4 * std::pow(xd, 3) * y * g + std::pow(xd, 4) * yd) - 0.5 * std::pow(xd, 3) * y * mu2 +
               0.5 * xd * xd * yd * mu1 - xd * y * mu * g1 + yd * g * mu;
      })));

  e.checks.push_back({"profile_equations", "tabulated profile satisfies both equations",
                      [profile](const Trajectory&, SplitMix64&) {
                        const auto [first, second] = profile->ode_residuals();
                        return at_most(std::max(first, second), 1e-8);
                      }});
  if (a == 0.0) {
    e.checks.push_back({"linear_profile", "with a = 0 and mu = 1 the profile is g(x) = x",
                        [profile](const Trajectory&, SplitMix64&) {
                          double worst = 0.0;
                          for (double x : profile->grid()) worst = std::max(worst, std::abs(profile->g(x) - x));
                          return at_most(worst, 1e-12);
                        }});
    e.checks.push_back({"quartic_reduces", "with a = 0 and mu = 1 the quartic constant is ydot x - y xdot",
                        [sys, point](const Trajectory& traj, SplitMix64&) {
                          const auto cq = full_constant(*sys, point);
                          return at_most(grid_max(traj,
                                                  [&](double t) {
                                                    const State st = traj.at(t);
                                                    return cq(t, traj) - (st.qdot(1) * st.q(0) - st.q(1) * st.qdot(0));
                                                  }),
                                         1e-8);
                        }});
  }
  e.notes = {"Profile data g(0) = 0, g'(0) = 1, (mu, mu', mu'')(0) = (1, 0, 0), tabulated by RK4 with step 1e-3 "
             "on [-1.5, 1.5].",
             "The motion starts at x = 0.5, y = 1 at rest."};
  return e;
}

}  // namespace detail

}  // namespace noether
