#include "noether/numerics.hpp"

#include "noether/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace noether {

double fit_step(double x, double h, double lo, double hi, double reach) {
  const double room = std::min(x - lo, hi - x);
  if (!(room > 0.0)) {
    throw PadExceeded("stencil centre " + std::to_string(x) + " is not inside [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
  }
  return std::min(h, 0.999 * room / reach);
}

std::vector<double> check_grid(double a, double b, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int j = 0; j < n; ++j) {
    t[static_cast<std::size_t>(j)] = mid - half * std::cos(std::numbers::pi * j / (n - 1));
  }
  t.front() = a;
  t.back() = b;
  return t;
}

HermiteJet quintic_hermite(double t0, double t1, const Vec& p0, const Vec& v0, const Vec& a0,
                           const Vec& p1, const Vec& v1, const Vec& a1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;

  const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double h5 = 10 * s3 - 15 * s4 + 6 * s5;
  const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
  const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double h3 = 0.5 * s3 - s4 + 0.5 * s5;

  const double d0 = -30 * s2 + 60 * s3 - 30 * s4;
  const double d5 = -d0;
  const double d1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  const double d4 = -12 * s2 + 28 * s3 - 15 * s4;
  const double d2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
  const double d3 = 1.5 * s2 - 4 * s3 + 2.5 * s4;

  const double e0 = -60 * s + 180 * s2 - 120 * s3;
  const double e5 = -e0;
  const double e1 = -36 * s + 96 * s2 - 60 * s3;
  const double e4 = -24 * s + 84 * s2 - 60 * s3;
  const double e2 = 1 - 9 * s + 18 * s2 - 10 * s3;
  const double e3 = 3 * s - 12 * s2 + 10 * s3;

  HermiteJet jet;
  jet.value = h0 * p0 + h5 * p1 + h * (h1 * v0 + h4 * v1) + h * h * (h2 * a0 + h3 * a1);
  jet.first = (d0 * p0 + d5 * p1) / h + (d1 * v0 + d4 * v1) + h * (d2 * a0 + d3 * a1);
  jet.second = (e0 * p0 + e5 * p1) / (h * h) + (e1 * v0 + e4 * v1) / h + (e2 * a0 + e3 * a1);
  return jet;
}

namespace {

// Coefficients of the Lagrange basis on the nodes 0, 1/4, 1/2, 3/4, 1:
// ell_j(s) = sum_m C[j][m] s^m.
const std::array<std::array<double, 5>, 5>& lagrange_coefficients() {
  static const auto table = [] {
    Eigen::Matrix<double, 5, 5> vandermonde;
    for (int k = 0; k < 5; ++k) {
      for (int m = 0; m < 5; ++m) vandermonde(k, m) = std::pow(k / 4.0, m);
    }
    const Eigen::Matrix<double, 5, 5> c = vandermonde.inverse().transpose();
    std::array<std::array<double, 5>, 5> out{};
    for (int j = 0; j < 5; ++j) {
      for (int m = 0; m < 5; ++m) out[j][m] = c(j, m);
    }
    return out;
  }();
  return table;
}

// Integral over [0, s] of ell_j.
std::array<double, 5> partial_weights(double s) {
  const auto& c = lagrange_coefficients();
  std::array<double, 5> w{};
  for (int j = 0; j < 5; ++j) {
    double acc = 0.0, power = s;
    for (int m = 0; m < 5; ++m) {
      acc += c[j][m] * power / (m + 1);
      power *= s;
    }
    w[j] = acc;
  }
  return w;
}

}  // namespace

CumulativeIntegral::CumulativeIntegral(std::vector<double> nodes, const Integrand& f, double check_tol)
    : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw QuadratureFailure("cumulative integral needs at least two nodes");
  const std::size_t intervals = nodes_.size() - 1;
  samples_.reserve(5 * intervals);
  cumulative_.reserve(nodes_.size());

  Vec left = f(nodes_.front());
  Vec boole = Vec::Zero(left.size());
  Vec simpson = Vec::Zero(left.size());
  cumulative_.push_back(boole);

  for (std::size_t i = 0; i < intervals; ++i) {
    const double x0 = nodes_[i];
    const double h = nodes_[i + 1] - x0;
    if (!(h > 0.0)) throw QuadratureFailure("cumulative integral nodes must increase strictly");
    Vec f1 = f(x0 + 0.25 * h);
    Vec f2 = f(x0 + 0.5 * h);
    Vec f3 = f(x0 + 0.75 * h);
    Vec f4 = f(nodes_[i + 1]);
    boole += h / 90.0 * (7.0 * left + 32.0 * f1 + 12.0 * f2 + 32.0 * f3 + 7.0 * f4);
    simpson += h / 12.0 * (left + 4.0 * f1 + 2.0 * f2 + 4.0 * f3 + f4);
    const double gap = (boole - simpson).lpNorm<Eigen::Infinity>();
    max_disagreement_ = std::max(max_disagreement_, gap);
    if (!std::isfinite(gap) || gap > check_tol * (1.0 + boole.lpNorm<Eigen::Infinity>())) {
      throw QuadratureFailure("Boole and Simpson sums disagree by " + std::to_string(gap) + " at t=" +
                              std::to_string(nodes_[i + 1]) + "; grid too coarse");
    }
    cumulative_.push_back(boole);
    samples_.push_back(left);
    samples_.push_back(f1);
    samples_.push_back(f2);
    samples_.push_back(f3);
    samples_.push_back(f4);
    left = std::move(f4);
  }
}

Vec CumulativeIntegral::at(double t) const {
  const double span = hi() - lo();
  const double slack = 1e-13 * std::max(1.0, std::abs(span));
  if (t < lo() - slack || t > hi() + slack) {
    throw PadExceeded("cumulative integral queried at t=" + std::to_string(t) + " outside [" +
                      std::to_string(lo()) + ", " + std::to_string(hi()) + "]");
  }
  t = std::clamp(t, lo(), hi());
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (i >= nodes_.size() - 1) return cumulative_.back();
  const double h = nodes_[i + 1] - nodes_[i];
  const double s = (t - nodes_[i]) / h;
  if (s == 0.0) return cumulative_[i];
  const auto w = partial_weights(s);
  Vec out = cumulative_[i];
  for (int j = 0; j < 5; ++j) out += h * w[j] * samples_[5 * i + j];
  return out;
}

CumulativeIntegral scalar_cumulative(std::vector<double> nodes, const std::function<double(double)>& f,
                                     double check_tol) {
  return CumulativeIntegral(
      std::move(nodes), [&f](double t) { return Vec::Constant(1, f(t)); }, check_tol);
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

SplitMix64 SplitMix64::split(std::uint64_t seed, std::string_view label) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  SplitMix64 mixer(seed ^ hash);
  return SplitMix64(mixer.next());
}

}  // namespace noether
