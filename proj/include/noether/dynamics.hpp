#pragma once

#include "noether/numerics.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace noether {

using ScalarField = std::function<double(double t, const Vec& q, const Vec& qdot)>;
using VectorField = std::function<Vec(double t, const Vec& q, const Vec& qdot)>;
using MatrixField = std::function<Mat(double t, const Vec& q, const Vec& qdot)>;
using DomainGuard = std::function<bool(double t, const Vec& q, const Vec& qdot)>;

/// Optional closed-form derivatives of L. Any member may be left empty, in
/// which case the corresponding finite difference is used.
struct AnalyticGrads {
  VectorField q;
  VectorField qdot;
  MatrixField qdot_qdot;
  MatrixField qdot_q;  ///< entry (i, j) is d2L / dqdot_i dq_j
  VectorField qdot_t;
};

struct LagrangianSystem {
  std::string name;
  int dim = 1;
  ScalarField lagrangian;
  AnalyticGrads grads;
  DomainGuard domain_guard;  ///< true where L is regular; empty means everywhere

  bool in_domain(double t, const Vec& q, const Vec& qdot) const {
    return !domain_guard || domain_guard(t, q, qdot);
  }
};

using SystemPtr = std::shared_ptr<const LagrangianSystem>;

inline constexpr double kFirstDerivativeStep = 1e-6;
inline constexpr double kSecondDerivativeStep = 1e-4;
inline constexpr double kConditionFloor = 1e-12;

/// L at an in-domain point; DomainError otherwise.
double lagrangian(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);

Vec grad_q(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);
Vec grad_qdot(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);
Mat hess_qdot_qdot(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);
Mat hess_qdot_q(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);
Vec hess_qdot_t(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);

/// Finite-difference versions that ignore any analytic gradients; used by
/// gradient checks.
namespace fd {
Vec grad_q(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);
Vec grad_qdot(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);
Mat hess_qdot_qdot(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);
Mat hess_qdot_q(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);
Vec hess_qdot_t(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);
}  // namespace fd

/// Acceleration solving M qddot = dL/dq - d2L/dqdot dt - d2L/dqdot dq . qdot.
Vec lagrange_rhs(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);

/// Euler–Lagrange residual d/dt dL/dqdot - dL/dq for a given acceleration.
Vec euler_lagrange_residual(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot,
                            const Vec& qddot);

Vec momentum(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);
double energy(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot);

struct Interval {
  double a = 0.0;
  double b = 1.0;
  double length() const { return b - a; }
};

struct Padding {
  double before = 0.0;
  double after = 0.0;
};

struct StepControl {
  enum class Mode { adaptive, fixed };
  Mode mode = Mode::adaptive;
  double h = 1e-3;  ///< fixed step
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_max = 0.0;  ///< 0 selects span/100
  double h_min = 1e-12;

  static StepControl fixed(double h) {
    StepControl s;
    s.mode = Mode::fixed;
    s.h = h;
    return s;
  }
  static StepControl adaptive(double rel_tol, double abs_tol = 1e-12) {
    StepControl s;
    s.rel_tol = rel_tol;
    s.abs_tol = abs_tol;
    return s;
  }
};

struct InitialValueProblem {
  double t0 = 0.0;
  Vec q0;
  Vec qdot0;
  Interval interval;
  std::optional<Padding> pad;  ///< defaults to 0.2 (b - a) on both sides
  StepControl step;

  Padding padding() const;
};

struct State {
  double t = 0.0;
  Vec q;
  Vec qdot;
  Vec qddot;
};

/// A curve q(t) on a padded interval with dense output.
///
/// Integrated trajectories interpolate (q, qdot, qddot) by quintic Hermite
/// and report the Euler–Lagrange acceleration at interpolated states.
/// Trajectories built from a closed-form curve evaluate it directly.
class Trajectory {
 public:
  using Curve = std::function<State(double)>;

  Trajectory(SystemPtr system, Interval interval, Padding pad, std::vector<double> grid, std::vector<Vec> q,
             std::vector<Vec> qdot, std::vector<Vec> qddot);

  /// Samples `curve` on `nodes` uniform grid points over the padded interval.
  static Trajectory from_curve(SystemPtr system, Interval interval, Padding pad, Curve curve,
                               int nodes = 801);

  const LagrangianSystem& system() const { return *system_; }
  const SystemPtr& system_ptr() const { return system_; }
  Interval interval() const { return interval_; }
  Padding padding() const { return pad_; }
  double lo() const { return grid_.front(); }
  double hi() const { return grid_.back(); }
  bool euler_lagrange() const { return !curve_; }
  std::uint64_t id() const { return id_; }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<Vec>& positions() const { return q_; }
  const std::vector<Vec>& velocities() const { return qdot_; }
  const std::vector<Vec>& accelerations() const { return qddot_; }

  /// Dense output; PadExceeded outside [lo, hi].
  State at(double t) const;
  Vec position(double t) const;
  Vec velocity(double t) const;
  /// L(t, q(t), qdot(t)).
  double lagrangian_at(double t) const;

  /// Grid nodes inside [a - pad/2, b + pad/2] with both ends added; the
  /// range used for integrals along the trajectory.
  std::vector<double> quadrature_nodes() const;

  /// Per-trajectory cache shared by copies. `build` runs outside the lock.
  template <class T, class Build>
  std::shared_ptr<const T> memo(const std::string& key, Build&& build) const {
    {
      std::lock_guard<std::mutex> lock(memo_->mutex);
      auto it = memo_->items.find(key);
      if (it != memo_->items.end()) return std::static_pointer_cast<const T>(it->second);
    }
    auto made = std::make_shared<const T>(build());
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto [it, inserted] = memo_->items.emplace(key, made);
    return std::static_pointer_cast<const T>(it->second);
  }

 private:
  Trajectory() = default;
  std::size_t locate(double t) const;

  struct MemoStore {
    std::mutex mutex;
    std::unordered_map<std::string, std::shared_ptr<const void>> items;
  };

  SystemPtr system_;
  Interval interval_;
  Padding pad_;
  std::vector<double> grid_;
  std::vector<Vec> q_, qdot_, qddot_;
  Curve curve_;
  std::uint64_t id_ = 0;
  std::shared_ptr<MemoStore> memo_ = std::make_shared<MemoStore>();
};

/// Integrates the Euler–Lagrange equations over the padded interval,
/// backward and forward from t0. Adaptive mode is Dormand–Prince 5(4) with
/// step rejection; fixed mode is classical RK4.
Trajectory integrate(SystemPtr system, const InitialValueProblem& ivp);

/// Process-wide counter for cache keys.
std::uint64_t next_unique_id();

}  // namespace noether
