#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "carlo/errors.hpp"

namespace carlo {

/// Chain effective sample size n / (1 + 2 sum rho_k), the autocorrelation sum
/// truncated by the initial-positive-sequence rule: stop at the first lag
/// pair whose summed autocorrelations turn negative.
inline double ess_autocorr(const std::vector<double>& trace) {
  const std::size_t n = trace.size();
  if (n < 10) throw configuration_error("ess_autocorr: trace too short");
  double mean = 0.0;
  for (double x : trace) mean += x;
  mean /= static_cast<double>(n);
  double gamma0 = 0.0;
  for (double x : trace) gamma0 += (x - mean) * (x - mean);
  gamma0 /= static_cast<double>(n);
  if (gamma0 == 0.0) throw degenerate_input_error("ess_autocorr: zero-variance trace");

  auto rho = [&](std::size_t k) {
    double g = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) g += (trace[t] - mean) * (trace[t + k] - mean);
    return g / (static_cast<double>(n) * gamma0);
  };

  // tau = 2 * sum of positive pair sums (rho_{2m} + rho_{2m+1}) minus rho_0
  double tau = 0.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double pair = rho(2 * m) + rho(2 * m + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  tau -= 1.0;
  tau = std::max(tau, 1e-12);
  return std::clamp(static_cast<double>(n) / tau, 1.0, static_cast<double>(n));
}

/// Geweke drift statistic: (mean of the first frac_a of the chain minus mean
/// of the last frac_b) over the root of the summed window variances, each
/// window variance from 20 batch means. |z| < 1.96 is the usual no-drift call.
inline double geweke_z(const std::vector<double>& trace, double frac_a = 0.1,
                       double frac_b = 0.5, std::size_t n_batches = 20) {
  const std::size_t n = trace.size();
  if (!(frac_a > 0.0 && frac_b > 0.0 && frac_a + frac_b <= 1.0))
    throw configuration_error("geweke_z: windows overlap");
  const auto na = static_cast<std::size_t>(frac_a * static_cast<double>(n));
  const auto nb = static_cast<std::size_t>(frac_b * static_cast<double>(n));
  if (na < 2 * n_batches || nb < 2 * n_batches)
    throw configuration_error("geweke_z: window too short for batching");

  auto window_stats = [&](std::size_t begin, std::size_t len) {
    const std::size_t bs = len / n_batches;
    std::vector<double> bm(n_batches, 0.0);
    for (std::size_t b = 0; b < n_batches; ++b) {
      for (std::size_t i = 0; i < bs; ++i) bm[b] += trace[begin + b * bs + i];
      bm[b] /= static_cast<double>(bs);
    }
    double m = 0.0;
    for (double x : bm) m += x;
    m /= static_cast<double>(n_batches);
    double v = 0.0;
    for (double x : bm) v += (x - m) * (x - m);
    v /= static_cast<double>(n_batches - 1);
    // variance of the window mean
    return std::pair<double, double>{m, v / static_cast<double>(n_batches)};
  };

  const auto [ma, va] = window_stats(0, na);
  const auto [mb, vb] = window_stats(n - nb, nb);
  return (ma - mb) / std::sqrt(va + vb);
}

/// Gelman-Rubin potential scale reduction factor on the second halves of at
/// least two equal-length chains: sqrt(((n-1)/n W + B/n) / W).
inline double gelman_rubin_psrf(const std::vector<std::vector<double>>& traces) {
  if (traces.size() < 2) throw configuration_error("gelman_rubin_psrf: need >= 2 chains");
  const std::size_t full = traces.front().size();
  for (const auto& t : traces)
    if (t.size() != full) throw configuration_error("gelman_rubin_psrf: unequal chain lengths");
  if (full < 20) throw configuration_error("gelman_rubin_psrf: chains too short");
  const std::size_t n = full / 2;
  const std::size_t m = traces.size();

  std::vector<double> means(m, 0.0), vars(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t t = full - n; t < full; ++t) means[c] += traces[c][t];
    means[c] /= static_cast<double>(n);
    for (std::size_t t = full - n; t < full; ++t)
      vars[c] += (traces[c][t] - means[c]) * (traces[c][t] - means[c]);
    vars[c] /= static_cast<double>(n - 1);
  }
  double w = 0.0, grand = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    w += vars[c];
    grand += means[c];
  }
  w /= static_cast<double>(m);
  grand /= static_cast<double>(m);
  double b_over_n = 0.0;
  for (std::size_t c = 0; c < m; ++c) b_over_n += (means[c] - grand) * (means[c] - grand);
  b_over_n /= static_cast<double>(m - 1);
  if (w == 0.0) throw degenerate_input_error("gelman_rubin_psrf: zero within-chain variance");
  const double nd = static_cast<double>(n);
  return std::sqrt(((nd - 1.0) / nd * w + b_over_n) / w);
}

/// Two-sample Kolmogorov-Smirnov: exact D by a merged sweep of the sorted
/// samples, asymptotic p = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2) with
/// lambda = D sqrt(na nb / (na + nb)), terms dropped below 1e-12.
inline std::pair<double, double> ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw configuration_error("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double lambda = d * std::sqrt(na * nb / (na + nb));
  double p;
  if (lambda < 1e-8) {
    p = 1.0;
  } else {
    p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100000; ++k) {
      const double term = std::exp(-2.0 * static_cast<double>(k) * k * lambda * lambda);
      if (term < 1e-12) break;
      p += sign * term;
      sign = -sign;
    }
    p = std::clamp(2.0 * p, 0.0, 1.0);
  }
  return {d, p};
}

/// One-sample KS statistic against a cdf, with the same asymptotic p-value
/// series (lambda = D sqrt(n)).
template <typename Cdf>
std::pair<double, double> ks_one_sample(std::vector<double> sample, const Cdf& cdf) {
  if (sample.empty()) throw configuration_error("ks_one_sample: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
  }
  const double lambda = d * std::sqrt(n);
  double p = 0.0;
  if (lambda < 1e-8) {
    p = 1.0;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 100000; ++k) {
      const double term = std::exp(-2.0 * static_cast<double>(k) * k * lambda * lambda);
      if (term < 1e-12) break;
      p += sign * term;
      sign = -sign;
    }
    p = std::clamp(2.0 * p, 0.0, 1.0);
  }
  return {d, p};
}

/// Stationarity monitor: at each of `checkpoints` prefixes, split the prefix
/// in half, thin both halves, and KS-test them against each other. The
/// result vector is preallocated, not grown point by point.
inline std::vector<std::pair<std::size_t, double>> ks_half_trajectory(
    const std::vector<double>& trace, std::size_t thin = 10, std::size_t checkpoints = 100) {
  const std::size_t n = trace.size();
  if (n < 10 * thin) throw configuration_error("ks_half_trajectory: trace too short");
  std::vector<std::pair<std::size_t, double>> out(checkpoints);
  for (std::size_t c = 0; c < checkpoints; ++c) {
    const std::size_t t =
        n / 10 + (n - n / 10) * (c + 1) / checkpoints;  // prefixes from n/10 to n
    const std::size_t half = t / 2;
    std::vector<double> first, second;
    for (std::size_t k = 0; k < half; k += thin) {
      first.push_back(trace[k]);
      second.push_back(trace[half + k]);
    }
    out[c] = {t, ks_two_sample(first, second).second};
  }
  return out;
}

/// Running empirical quantiles of a trace. Exact recomputation happens every
/// max(1, n/500) iterations with linear interpolation in between, which keeps
/// the cost near-linear while the plotted bands stay smooth.
inline std::vector<std::vector<double>> cumulative_quantile_data(
    const std::vector<double>& trace,
    const std::vector<double>& quantiles = {0.025, 0.5, 0.975}) {
  const std::size_t n = trace.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(quantiles.size(), 0.0));
  if (n == 0) return out;
  const std::size_t stride = std::max<std::size_t>(1, n / 500);
  std::vector<double> sorted;
  sorted.reserve(n);
  std::size_t prev_exact = 0;
  std::vector<double> prev_vals(quantiles.size(), trace[0]);
  auto exact_at = [&](std::size_t t) {
    // empirical quantile of trace[0..t] by sorted insertion
    std::vector<double> vals(quantiles.size());
    for (std::size_t q = 0; q < quantiles.size(); ++q) {
      const double pos = quantiles[q] * static_cast<double>(t);
      const auto lo = static_cast<std::size_t>(pos);
      const double w = pos - static_cast<double>(lo);
      vals[q] = (1.0 - w) * sorted[lo] + w * sorted[std::min(lo + 1, t)];
    }
    return vals;
  };
  for (std::size_t t = 0; t < n; ++t) {
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), trace[t]), trace[t]);
    if (t % stride == 0 || t + 1 == n) {
      const auto vals = exact_at(t);
      // back-fill the gap by interpolation
      for (std::size_t s = prev_exact + 1; s < t; ++s) {
        const double w = static_cast<double>(s - prev_exact) / static_cast<double>(t - prev_exact);
        for (std::size_t q = 0; q < quantiles.size(); ++q)
          out[s][q] = (1.0 - w) * prev_vals[q] + w * vals[q];
      }
      out[t] = vals;
      prev_exact = t;
      prev_vals = vals;
    }
  }
  return out;
}

/// Bundle written into summary.json by the harness.
struct DiagnosticsReport {
  double ess = 0.0;
  double geweke = 0.0;
  double psrf = 0.0;  // multi-chain only; 0 when not computed
  std::vector<std::pair<std::size_t, double>> ks_trajectory;
  std::vector<std::string> notes;
};

}  // namespace carlo
