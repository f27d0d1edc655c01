#pragma once

// Test-only oracles, kept independent of the implementation paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double var(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double cov(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a), mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size() - 1);
}

inline double corr(const std::vector<double>& a, const std::vector<double>& b) {
  return cov(a, b) / std::sqrt(var(a) * var(b));
}

// plain composite Simpson quadrature
template <typename F>
double simpson(const F& f, double a, double b, std::size_t panels = 4000) {
  const double h = (b - a) / static_cast<double>(2 * panels);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < 2 * panels; ++i)
    s += f(a + static_cast<double>(i) * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// three-stage grid refinement minimizer, independent of the library search
template <typename F>
double grid_minimize(const F& f, double lo, double hi, int stages = 4,
                     std::size_t points = 2001) {
  const double lo0 = lo, hi0 = hi;
  double best_x = lo;
  for (int s = 0; s < stages; ++s) {
    double best = 1e300;
    for (std::size_t i = 0; i < points; ++i) {
      const double x =
          lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
      const double v = f(x);
      if (v < best) {
        best = v;
        best_x = x;
      }
    }
    const double span = (hi - lo) / 10.0;
    lo = std::max(lo0, best_x - span);
    hi = std::min(hi0, best_x + span);
  }
  return best_x;
}

template <typename F>
double grid_maximize(const F& f, double lo, double hi) {
  return grid_minimize([&](double x) { return -f(x); }, lo, hi);
}

// brute-force two-sample KS statistic by evaluating both ecdfs at every point
inline double ks_d_bruteforce(const std::vector<double>& a, const std::vector<double>& b) {
  auto ecdf = [](const std::vector<double>& v, double x) {
    std::size_t c = 0;
    for (double t : v) c += t <= x;
    return static_cast<double>(c) / static_cast<double>(v.size());
  };
  double d = 0.0;
  for (double x : a) d = std::max(d, std::fabs(ecdf(a, x) - ecdf(b, x)));
  for (double x : b) d = std::max(d, std::fabs(ecdf(a, x) - ecdf(b, x)));
  return d;
}

// long-double erfc-based normal cdf for cross-checking tail values
inline long double normal_cdf_ld(long double x) {
  return 0.5L * erfcl(-x / 1.41421356237309504880168872420969808L);
}

// exact tail of the centered sum of 12 uniforms (Irwin-Hall shifted)
inline double clt12_tail_exact(double a) {
  // P(sum of 12 U(0,1) > a + 6)
  const double x = a + 6.0;
  long double cdf = 0.0L;
  long double fact12 = 479001600.0L;  // 12!
  long double comb = 1.0L;
  for (int k = 0; k <= static_cast<int>(std::floor(x)); ++k) {
    const long double term = comb * powl(static_cast<long double>(x - k), 12.0L);
    cdf += (k % 2 == 0 ? term : -term);
    comb = comb * (12 - k) / (k + 1);
  }
  return static_cast<double>(1.0L - cdf / fact12);
}

// conditional acceptance probabilities by enumerating acceptance patterns:
// rho_i = P(draw i accepted | m acceptances total, last draw accepted)
inline std::vector<double> recycle_rho_bruteforce(const std::vector<double>& w,
                                                  std::size_t m,
                                                  std::size_t stopping_index) {
  const std::size_t n = w.size();
  std::vector<double> num(n, 0.0);
  double denom = 0.0;
  for (std::size_t mask = 0; mask < (1ULL << n); ++mask) {
    if (!(mask >> stopping_index & 1)) continue;
    std::size_t count = 0;
    double prob = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1) {
        ++count;
        prob *= w[j];
      } else {
        prob *= 1.0 - w[j];
      }
    }
    if (count != m) continue;
    denom += prob;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1) num[j] += prob;
  }
  std::vector<double> rho(n);
  for (std::size_t j = 0; j < n; ++j) rho[j] = num[j] / denom;
  return rho;
}

}  // namespace oracle
