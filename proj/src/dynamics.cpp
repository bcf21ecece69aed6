#include "noether/dynamics.hpp"

#include "noether/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

namespace noether {

std::uint64_t next_unique_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

namespace {

struct OutOfDomain {};

void require_domain(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  if (q.size() != sys.dim || qdot.size() != sys.dim) {
    throw DomainError(sys.name + ": state dimension does not match the system");
  }
  if (!sys.in_domain(t, q, qdot)) {
    throw DomainError(sys.name + ": point outside the domain at t=" + std::to_string(t));
  }
}

double stencil_value(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  if (!sys.in_domain(t, q, qdot)) throw OutOfDomain{};
  return sys.lagrangian(t, q, qdot);
}

double rel_step(double x, double rel) { return rel * std::max(1.0, std::abs(x)); }

// Runs body(scale); on a stencil leaving the domain retries once with half
// the step, then gives up.
template <class Body>
auto with_shrink(const LagrangianSystem& sys, Body body) {
  try {
    return body(1.0);
  } catch (const OutOfDomain&) {
  }
  try {
    return body(0.5);
  } catch (const OutOfDomain&) {
    throw DomainError(sys.name + ": finite-difference stencil leaves the domain");
  }
}

enum class Slot { q, qdot, t };

// A point (t, q, qdot) displaced along one coordinate of one slot.
struct Probe {
  double t;
  Vec q;
  Vec qdot;
  void shift(Slot slot, int i, double h) {
    switch (slot) {
      case Slot::q: q(i) += h; break;
      case Slot::qdot: qdot(i) += h; break;
      case Slot::t: t += h; break;
    }
  }
};

double coordinate(Slot slot, int i, double t, const Vec& q, const Vec& qdot) {
  switch (slot) {
    case Slot::q: return q(i);
    case Slot::qdot: return qdot(i);
    case Slot::t: return t;
  }
  return 0.0;
}

Vec first_fd(const LagrangianSystem& sys, Slot slot, double t, const Vec& q, const Vec& qdot) {
  require_domain(sys, t, q, qdot);
  return with_shrink(sys, [&](double scale) {
    Vec g(sys.dim);
    for (int i = 0; i < sys.dim; ++i) {
      const double h = scale * rel_step(coordinate(slot, i, t, q, qdot), kFirstDerivativeStep);
      Probe plus{t, q, qdot}, minus{t, q, qdot};
      plus.shift(slot, i, h);
      minus.shift(slot, i, -h);
      g(i) = (stencil_value(sys, plus.t, plus.q, plus.qdot) - stencil_value(sys, minus.t, minus.q, minus.qdot)) /
             (2.0 * h);
    }
    return g;
  });
}

// d2L / dqdot_i d(slot)_j from values of L.
Mat second_fd(const LagrangianSystem& sys, Slot slot, double t, const Vec& q, const Vec& qdot) {
  require_domain(sys, t, q, qdot);
  const int cols = slot == Slot::t ? 1 : sys.dim;
  return with_shrink(sys, [&](double scale) {
    Mat h2(sys.dim, cols);
    const double centre = stencil_value(sys, t, q, qdot);
    for (int i = 0; i < sys.dim; ++i) {
      const double hi = scale * rel_step(qdot(i), kSecondDerivativeStep);
      for (int j = 0; j < cols; ++j) {
        if (slot == Slot::qdot && j == i) {
          Probe plus{t, q, qdot}, minus{t, q, qdot};
          plus.shift(Slot::qdot, i, hi);
          minus.shift(Slot::qdot, i, -hi);
          h2(i, j) = (stencil_value(sys, plus.t, plus.q, plus.qdot) - 2.0 * centre +
                      stencil_value(sys, minus.t, minus.q, minus.qdot)) /
                     (hi * hi);
          continue;
        }
        const double hj = scale * rel_step(coordinate(slot, j, t, q, qdot), kSecondDerivativeStep);
        double acc = 0.0;
        for (int si : {1, -1}) {
          for (int sj : {1, -1}) {
            Probe p{t, q, qdot};
            p.shift(Slot::qdot, i, si * hi);
            p.shift(slot, j, sj * hj);
            acc += si * sj * stencil_value(sys, p.t, p.q, p.qdot);
          }
        }
        h2(i, j) = acc / (4.0 * hi * hj);
      }
    }
    return h2;
  });
}

// Jacobian of an analytic dL/dqdot along one slot by central differences.
Mat jacobian_of_momentum(const LagrangianSystem& sys, Slot slot, double t, const Vec& q, const Vec& qdot) {
  require_domain(sys, t, q, qdot);
  const int cols = slot == Slot::t ? 1 : sys.dim;
  return with_shrink(sys, [&](double scale) {
    Mat jac(sys.dim, cols);
    for (int j = 0; j < cols; ++j) {
      const double h = scale * rel_step(coordinate(slot, j, t, q, qdot), kFirstDerivativeStep);
      Probe plus{t, q, qdot}, minus{t, q, qdot};
      plus.shift(slot, j, h);
      minus.shift(slot, j, -h);
      if (!sys.in_domain(plus.t, plus.q, plus.qdot) || !sys.in_domain(minus.t, minus.q, minus.qdot)) {
        throw OutOfDomain{};
      }
      jac.col(j) = (sys.grads.qdot(plus.t, plus.q, plus.qdot) - sys.grads.qdot(minus.t, minus.q, minus.qdot)) /
                   (2.0 * h);
    }
    return jac;
  });
}

}  // namespace

double lagrangian(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  require_domain(sys, t, q, qdot);
  return sys.lagrangian(t, q, qdot);
}

namespace fd {
Vec grad_q(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  return first_fd(sys, Slot::q, t, q, qdot);
}
Vec grad_qdot(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  return first_fd(sys, Slot::qdot, t, q, qdot);
}
Mat hess_qdot_qdot(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  return second_fd(sys, Slot::qdot, t, q, qdot);
}
Mat hess_qdot_q(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  return second_fd(sys, Slot::q, t, q, qdot);
}
Vec hess_qdot_t(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  return second_fd(sys, Slot::t, t, q, qdot).col(0);
}
}  // namespace fd

Vec grad_q(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  if (!sys.grads.q) return fd::grad_q(sys, t, q, qdot);
  require_domain(sys, t, q, qdot);
  return sys.grads.q(t, q, qdot);
}

Vec grad_qdot(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  if (!sys.grads.qdot) return fd::grad_qdot(sys, t, q, qdot);
  require_domain(sys, t, q, qdot);
  return sys.grads.qdot(t, q, qdot);
}

Mat hess_qdot_qdot(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  if (sys.grads.qdot_qdot) {
    require_domain(sys, t, q, qdot);
    return sys.grads.qdot_qdot(t, q, qdot);
  }
  if (sys.grads.qdot) return jacobian_of_momentum(sys, Slot::qdot, t, q, qdot);
  return fd::hess_qdot_qdot(sys, t, q, qdot);
}

Mat hess_qdot_q(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  if (sys.grads.qdot_q) {
    require_domain(sys, t, q, qdot);
    return sys.grads.qdot_q(t, q, qdot);
  }
  if (sys.grads.qdot) return jacobian_of_momentum(sys, Slot::q, t, q, qdot);
  return fd::hess_qdot_q(sys, t, q, qdot);
}

Vec hess_qdot_t(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  if (sys.grads.qdot_t) {
    require_domain(sys, t, q, qdot);
    return sys.grads.qdot_t(t, q, qdot);
  }
  if (sys.grads.qdot) return jacobian_of_momentum(sys, Slot::t, t, q, qdot).col(0);
  return fd::hess_qdot_t(sys, t, q, qdot);
}

Vec lagrange_rhs(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  const Mat mass = hess_qdot_qdot(sys, t, q, qdot);
  const Vec force = grad_q(sys, t, q, qdot) - hess_qdot_t(sys, t, q, qdot) - hess_qdot_q(sys, t, q, qdot) * qdot;
  Eigen::PartialPivLU<Mat> lu(mass);
  // rcond() does not notice exactly zero pivots, so check those directly.
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double rcond = pivots.minCoeff() > kConditionFloor * pivots.maxCoeff() ? lu.rcond() : 0.0;
  if (!(rcond >= kConditionFloor)) {
    throw SingularMassMatrix(sys.name + ": mass matrix reciprocal condition " + std::to_string(rcond) +
                             " at t=" + std::to_string(t));
  }
  return lu.solve(force);
}

Vec euler_lagrange_residual(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot,
                            const Vec& qddot) {
  return hess_qdot_qdot(sys, t, q, qdot) * qddot + hess_qdot_q(sys, t, q, qdot) * qdot +
         hess_qdot_t(sys, t, q, qdot) - grad_q(sys, t, q, qdot);
}

Vec momentum(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  return grad_qdot(sys, t, q, qdot);
}

double energy(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  return momentum(sys, t, q, qdot).dot(qdot) - lagrangian(sys, t, q, qdot);
}

Padding InitialValueProblem::padding() const {
  if (pad) return *pad;
  const double width = 0.2 * interval.length();
  return {width, width};
}

Trajectory::Trajectory(SystemPtr system, Interval interval, Padding pad, std::vector<double> grid,
                       std::vector<Vec> q, std::vector<Vec> qdot, std::vector<Vec> qddot)
    : system_(std::move(system)),
      interval_(interval),
      pad_(pad),
      grid_(std::move(grid)),
      q_(std::move(q)),
      qdot_(std::move(qdot)),
      qddot_(std::move(qddot)),
      id_(next_unique_id()) {
  if (grid_.size() < 2 || q_.size() != grid_.size() || qdot_.size() != grid_.size() ||
      qddot_.size() != grid_.size()) {
    throw Error("trajectory needs at least two consistent samples");
  }
}

Trajectory Trajectory::from_curve(SystemPtr system, Interval interval, Padding pad, Curve curve, int nodes) {
  Trajectory out;
  out.system_ = std::move(system);
  out.interval_ = interval;
  out.pad_ = pad;
  out.curve_ = std::move(curve);
  out.id_ = next_unique_id();
  const double lo = interval.a - pad.before;
  const double hi = interval.b + pad.after;
  for (int i = 0; i < nodes; ++i) {
    const double t = i == nodes - 1 ? hi : lo + (hi - lo) * i / (nodes - 1);
    State s = out.curve_(t);
    out.grid_.push_back(t);
    out.q_.push_back(s.q);
    out.qdot_.push_back(s.qdot);
    out.qddot_.push_back(s.qddot);
  }
  return out;
}

std::size_t Trajectory::locate(double t) const {
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  if (it == grid_.begin()) return 0;
  std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  return std::min(i, grid_.size() - 2);
}

State Trajectory::at(double t) const {
  const double slack = 1e-13 * std::max(1.0, std::abs(hi() - lo()));
  if (!(t >= lo() - slack && t <= hi() + slack)) {
    throw PadExceeded(system_->name + ": sample at t=" + std::to_string(t) + " outside the padded interval [" +
                      std::to_string(lo()) + ", " + std::to_string(hi()) + "]");
  }
  t = std::clamp(t, lo(), hi());
  if (curve_) return curve_(t);
  const std::size_t i = locate(t);
  if (t == grid_[i]) return {t, q_[i], qdot_[i], qddot_[i]};
  if (t == grid_[i + 1]) return {t, q_[i + 1], qdot_[i + 1], qddot_[i + 1]};
  HermiteJet jet = quintic_hermite(grid_[i], grid_[i + 1], q_[i], qdot_[i], qddot_[i], q_[i + 1], qdot_[i + 1],
                                   qddot_[i + 1], t);
  State s{t, std::move(jet.value), std::move(jet.first), Vec()};
  s.qddot = lagrange_rhs(*system_, t, s.q, s.qdot);
  return s;
}

Vec Trajectory::position(double t) const { return at(t).q; }
Vec Trajectory::velocity(double t) const { return at(t).qdot; }

double Trajectory::lagrangian_at(double t) const {
  const State s = at(t);
  return lagrangian(*system_, t, s.q, s.qdot);
}

std::vector<double> Trajectory::quadrature_nodes() const {
  const double lo_q = std::max(lo(), interval_.a - 0.5 * pad_.before);
  const double hi_q = std::min(hi(), interval_.b + 0.5 * pad_.after);
  const double gap = 1e-9 * std::max(1.0, hi_q - lo_q);
  std::vector<double> nodes{lo_q};
  for (double t : grid_) {
    if (t > nodes.back() + gap && t < hi_q - gap) nodes.push_back(t);
  }
  nodes.push_back(hi_q);
  return nodes;
}

namespace {

struct Sample {
  double t;
  Vec y;
  Vec f;
};

Vec phase_rhs(const LagrangianSystem& sys, double t, const Vec& y) {
  const int n = sys.dim;
  Vec out(2 * n);
  out.head(n) = y.tail(n);
  out.tail(n) = lagrange_rhs(sys, t, y.head(n), y.tail(n));
  return out;
}

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

std::vector<Sample> run_adaptive(const LagrangianSystem& sys, Sample start, double t_end, const StepControl& sc,
                                 double span) {
  std::vector<Sample> out{start};
  if (start.t == t_end) return out;
  const double dir = t_end > start.t ? 1.0 : -1.0;
  const double h_max = sc.h_max > 0.0 ? sc.h_max : span / 100.0;

  auto scaled_norm = [&](const Vec& err, const Vec& y0, const Vec& y1) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const double sc_i = sc.abs_tol + sc.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
      acc += (err(i) / sc_i) * (err(i) / sc_i);
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
  };

  // Initial step after Hairer, Nørsett & Wanner, Sec. II.4.
  double h;
  {
    const double d0 = scaled_norm(start.y, start.y, start.y);
    const double d1 = scaled_norm(start.f, start.y, start.y);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, h_max);
  }

  Sample cur = std::move(start);
  std::size_t steps = 0;
  bool last_rejected = false;
  while (dir * (t_end - cur.t) > 0.0) {
    if (++steps > 5'000'000) throw StepFailure(sys.name + ": step budget exhausted");
    h = std::min(h, h_max);
    bool finishing = false;
    if (h >= std::abs(t_end - cur.t)) {
      h = std::abs(t_end - cur.t);
      finishing = true;
    }
    if (h < sc.h_min * std::max(1.0, std::abs(cur.t))) {
      throw StepFailure(sys.name + ": step size underflow near t=" + std::to_string(cur.t));
    }
    const double hs = dir * h;
    const double t = cur.t;
    const Vec& y = cur.y;
    Vec y_new, k7, err;
    double norm;
    try {
      const Vec& k1 = cur.f;
      const Vec k2 = phase_rhs(sys, t + c2 * hs, y + hs * a21 * k1);
      const Vec k3 = phase_rhs(sys, t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
      const Vec k4 = phase_rhs(sys, t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
      const Vec k5 = phase_rhs(sys, t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Vec k6 = phase_rhs(sys, t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const double t_new = finishing ? t_end : t + hs;
      k7 = phase_rhs(sys, t_new, y_new);
      err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      norm = scaled_norm(err, y, y_new);
    } catch (const DomainError&) {
      norm = std::numeric_limits<double>::infinity();
    } catch (const SingularMassMatrix&) {
      norm = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(norm)) {
      h *= 0.25;
      last_rejected = true;
      continue;
    }
    if (norm <= 1.0) {
      const double t_new = finishing ? t_end : t + hs;
      cur = Sample{t_new, std::move(y_new), std::move(k7)};
      out.push_back(cur);
      double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      if (last_rejected) factor = std::min(factor, 1.0);
      h *= factor;
      last_rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(norm, -0.2));
      last_rejected = true;
    }
  }
  return out;
}

std::vector<Sample> run_fixed(const LagrangianSystem& sys, Sample start, double t_end, double h_nominal) {
  std::vector<Sample> out{start};
  const double span = t_end - start.t;
  if (span == 0.0) return out;
  const auto steps = static_cast<long>(std::ceil(std::abs(span) / h_nominal - 1e-12));
  const double h = span / static_cast<double>(steps);
  Sample cur = std::move(start);
  for (long i = 0; i < steps; ++i) {
    const double t = cur.t;
    const Vec& y = cur.y;
    const Vec& k1 = cur.f;
    const Vec k2 = phase_rhs(sys, t + 0.5 * h, y + 0.5 * h * k1);
    const Vec k3 = phase_rhs(sys, t + 0.5 * h, y + 0.5 * h * k2);
    const Vec k4 = phase_rhs(sys, t + h, y + h * k3);
    const double t_new = i == steps - 1 ? t_end : out.front().t + h * static_cast<double>(i + 1);
    Vec y_new = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Vec f_new = phase_rhs(sys, t_new, y_new);
    cur = Sample{t_new, std::move(y_new), std::move(f_new)};
    out.push_back(cur);
  }
  return out;
}

}  // namespace

Trajectory integrate(SystemPtr system, const InitialValueProblem& ivp) {
  const LagrangianSystem& sys = *system;
  require_domain(sys, ivp.t0, ivp.q0, ivp.qdot0);
  const Padding pad = ivp.padding();
  const double lo = ivp.interval.a - pad.before;
  const double hi = ivp.interval.b + pad.after;
  if (!(ivp.interval.b > ivp.interval.a)) throw Error("integration interval must satisfy a < b");
  if (ivp.t0 < lo || ivp.t0 > hi) throw Error("t0 lies outside the padded interval");

  const int n = sys.dim;
  Vec y0(2 * n);
  y0 << ivp.q0, ivp.qdot0;
  Sample start{ivp.t0, y0, phase_rhs(sys, ivp.t0, y0)};

  std::vector<Sample> backward, forward;
  if (ivp.step.mode == StepControl::Mode::fixed) {
    if (!(ivp.step.h > 0.0)) throw Error("fixed step must be positive");
    backward = run_fixed(sys, start, lo, ivp.step.h);
    forward = run_fixed(sys, start, hi, ivp.step.h);
  } else {
    backward = run_adaptive(sys, start, lo, ivp.step, hi - lo);
    forward = run_adaptive(sys, start, hi, ivp.step, hi - lo);
  }

  std::vector<double> grid;
  std::vector<Vec> q, qdot, qddot;
  auto push = [&](const Sample& s) {
    grid.push_back(s.t);
    q.push_back(s.y.head(n));
    qdot.push_back(s.y.tail(n));
    qddot.push_back(s.f.tail(n));
  };
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) push(*it);
  for (std::size_t i = 1; i < forward.size(); ++i) push(forward[i]);
  return Trajectory(std::move(system), ivp.interval, pad, std::move(grid), std::move(q), std::move(qdot),
                    std::move(qddot));
}

}  // namespace noether
