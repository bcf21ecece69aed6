#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace noether {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Central difference (f(x+h) - f(x-h)) / 2h.
template <class F>
auto central_difference(F&& f, double x, double h) {
  using R = std::decay_t<decltype(f(x))>;
  R plus = f(x + h);
  R minus = f(x - h);
  return R((plus - minus) / (2.0 * h));
}

/// Fourth-order five-point first derivative. Used when f is itself a
/// finite difference, where a wider step keeps roundoff in check.
template <class F>
auto five_point_difference(F&& f, double x, double h) {
  using R = std::decay_t<decltype(f(x))>;
  R m2 = f(x - 2.0 * h);
  R m1 = f(x - h);
  R p1 = f(x + h);
  R p2 = f(x + 2.0 * h);
  return R((m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h));
}

/// Shrinks a stencil step so that x +- reach*h stays inside [lo, hi].
double fit_step(double x, double h, double lo, double hi, double reach);

/// Chebyshev–Lobatto points on [a, b], endpoints included, ascending.
std::vector<double> check_grid(double a, double b, int n = 64);

/// Quintic Hermite interpolation on one interval from values, first and
/// second derivatives at both ends.
struct HermiteJet {
  Vec value;
  Vec first;
  Vec second;
};

HermiteJet quintic_hermite(double t0, double t1, const Vec& p0, const Vec& v0, const Vec& a0,
                           const Vec& p1, const Vec& v1, const Vec& a1, double t);

/// Cumulative integral of a vector-valued integrand over a node list.
///
/// Each node interval is split in four panels; the primary value is Boole's
/// rule (Richardson-extrapolated Simpson) and the two-panel Simpson sum is
/// carried alongside as a cross-check. Values between nodes integrate the
/// quartic through the five samples, so the result is C1 in t.
class CumulativeIntegral {
 public:
  using Integrand = std::function<Vec(double)>;

  CumulativeIntegral(std::vector<double> nodes, const Integrand& f, double check_tol = 1e-7);

  /// Integral from nodes().front() to t.
  Vec at(double t) const;
  /// Integral from s to t.
  Vec between(double s, double t) const { return at(t) - at(s); }

  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }
  /// Cumulative values at the nodes.
  const std::vector<Vec>& node_values() const { return cumulative_; }
  /// Largest |Boole - Simpson| seen over all prefixes.
  double max_disagreement() const { return max_disagreement_; }

 private:
  std::vector<double> nodes_;
  std::vector<Vec> cumulative_;
  std::vector<Vec> samples_;  // 5 per interval, stored as 4 interior+end, see .cpp
  double max_disagreement_ = 0.0;
};

/// Scalar wrapper around CumulativeIntegral.
CumulativeIntegral scalar_cumulative(std::vector<double> nodes, const std::function<double(double)>& f,
                                     double check_tol = 1e-7);

/// SplitMix64 generator; deterministic across platforms, unlike the
/// standard distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Independent stream derived from this seed and a label.
  static SplitMix64 split(std::uint64_t seed, std::string_view label);

 private:
  std::uint64_t state_;
};

}  // namespace noether
