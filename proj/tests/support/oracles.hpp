#pragma once

// Brute-force reference implementations used as test oracles. Each one is
// written directly from the defining formula with plain loops and shares no
// code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline bool rel_close(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

/// Mean and centered sum of squares of x[a..b] (1-based, inclusive).
struct Seg {
  double mean = 0.0;
  double css = 0.0;
};

inline Seg segment(const std::vector<double>& x, std::size_t a, std::size_t b) {
  Seg s;
  if (b < a) return s;
  double sum = 0.0;
  for (std::size_t i = a; i <= b; ++i) sum += x[i - 1];
  s.mean = sum / static_cast<double>(b - a + 1);
  for (std::size_t i = a; i <= b; ++i) s.css += (x[i - 1] - s.mean) * (x[i - 1] - s.mean);
  return s;
}

/// (1 - j/n) sum_{i<=j} x_i - (j/n) sum_{i>j} x_i.
inline double sx(const std::vector<double>& x, std::size_t j) {
  const double n = static_cast<double>(x.size());
  double head = 0.0, tail = 0.0;
  for (std::size_t i = 1; i <= x.size(); ++i) (i <= j ? head : tail) += x[i - 1];
  return (1.0 - static_cast<double>(j) / n) * head - (static_cast<double>(j) / n) * tail;
}

/// Self-normalized CUSUM ratio at j, recomputing both segments from scratch.
inline double sn_ratio(const std::vector<double>& x, std::size_t j) {
  const double n = static_cast<double>(x.size());
  const double t = static_cast<double>(j) / n;
  const Seg pre = segment(x, 1, j);
  const Seg post = segment(x, j + 1, x.size());
  return sx(x, j) / std::sqrt((1.0 - t) * (1.0 - t) * pre.css + t * t * post.css);
}

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Block D_j values of the self-normalized long-run variance estimator.
inline std::vector<double> lrv_selfnorm_d(const std::vector<double>& x, std::size_t k) {
  const std::size_t l = x.size() / k;
  const double xbar = mean(x);
  std::vector<double> d;
  for (std::size_t j = 0; j < l; ++j) {
    const Seg s = segment(x, j * k + 1, (j + 1) * k);
    d.push_back(static_cast<double>(k) * (s.mean - xbar) / std::sqrt(s.css));
  }
  return d;
}

inline std::vector<double> lrv_stationary_d(const std::vector<double>& x, std::size_t k) {
  const std::size_t l = x.size() / k;
  const double xbar = mean(x);
  std::vector<double> d;
  for (std::size_t j = 0; j < l; ++j) {
    const Seg s = segment(x, j * k + 1, (j + 1) * k);
    d.push_back(std::sqrt(static_cast<double>(k)) * (s.mean - xbar));
  }
  return d;
}

inline double mean_square(const std::vector<double>& d) {
  double s = 0.0;
  for (double v : d) s += v * v;
  return s / static_cast<double>(d.size());
}

/// Least squares for x_i = b0 + b1 t_i, t_i = i/n, by the 2x2 normal equations
/// solved with Cramer's rule.
struct Line {
  double b0 = 0.0;
  double b1 = 0.0;
};

inline Line ols_line(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double st = 0.0, stt = 0.0, sy = 0.0, sty = 0.0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    const double t = static_cast<double>(i) / n;
    st += t;
    stt += t * t;
    sy += x[i - 1];
    sty += t * x[i - 1];
  }
  const double det = n * stt - st * st;
  return {(sy * stt - st * sty) / det, (n * sty - st * sy) / det};
}

/// Riemann zeta by direct summation with an Euler-Maclaurin tail.
inline double zeta(double s, std::size_t terms = 100000) {
  double sum = 0.0;
  for (std::size_t m = terms; m >= 1; --m) sum += std::pow(static_cast<double>(m), -s);
  const double N = static_cast<double>(terms);
  return sum + std::pow(N, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(N, -s) + s / 12.0 * std::pow(N, -s - 1.0);
}

/// (sum a_j)^2 for a_j proportional to (j+1)^{-beta}, j = 0..J, unit sum of squares.
inline double b2_long_run_variance(double beta, std::size_t J) {
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t j = J + 1; j >= 1; --j) {
    const double w = std::pow(static_cast<double>(j), -beta);
    s1 += w;
    s2 += w * w;
  }
  return s1 * s1 / s2;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = -3.0, double hi = 3.0) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = u(eng);
  return x;
}

/// Kolmogorov-Smirnov distance of a sample to Uniform(0,1).
inline double ks_uniform(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - p[i]));
    d = std::max(d, std::abs(p[i] - static_cast<double>(i) / n));
  }
  return d;
}

/// Total downward movement of a sequence relative to its range: 0 for a
/// nondecreasing sequence.
inline double isotonic_violation_mass(const std::vector<double>& y) {
  double down = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) down += std::max(0.0, y[i - 1] - y[i]);
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  return *hi > *lo ? down / (*hi - *lo) : 0.0;
}

}  // namespace oracle
