#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "carlo/distributions.hpp"
#include "carlo/errors.hpp"
#include "carlo/integrate.hpp"
#include "carlo/rng.hpp"

namespace carlo {

/// A plain estimator next to its variance-reduced counterpart.
/// variance_ratio = final-SE(reduced)^2 / final-SE(plain)^2.
struct PairedEstimate {
  RunningEstimate plain;
  RunningEstimate reduced;
  double variance_ratio = 0.0;
  // replicate-level estimator variances when the op ran replications
  double plain_replicate_var = 0.0;
  double reduced_replicate_var = 0.0;

  void finish_ratio() {
    const double sp = plain.se(), sr = reduced.se();
    variance_ratio = sp > 0.0 ? (sr * sr) / (sp * sp) : (sr > 0.0 ? 1e300 : 0.0);
  }
};

/// Average (h(U) + h(1-U))/2 against plain h(U) on the same uniforms.
/// For monotone h the pair is negatively correlated and the ratio drops
/// below one; nothing verifies monotonicity, a non-negative covariance is
/// the caller's signal that the assumption failed.
template <typename H>
PairedEstimate antithetic_estimate(const H& h, std::size_t n, RngStream& stream) {
  std::vector<double> plain(n), reduced(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = stream.uniform();
    plain[i] = h(u);
    reduced[i] = 0.5 * (h(u) + h(1.0 - u));
  }
  PairedEstimate out;
  out.plain = running_mean(plain);
  out.reduced = running_mean(reduced);
  out.finish_ratio();
  return out;
}

struct ControlVariateResult {
  double beta_star = 0.0;
  double adjusted_estimate = 0.0;
  double variance_ratio = 0.0;  // var(d - beta* c) / var(d)
};

/// Optimal control-variate coefficient beta* = cov(d,c)/var(c) (the
/// least-squares slope of d on c) and the adjusted mean.
inline ControlVariateResult control_variate(const std::vector<double>& d_values,
                                            const std::vector<double>& c_values,
                                            double c_mean) {
  const std::size_t n = d_values.size();
  if (n < 2 || c_values.size() != n)
    throw configuration_error("control_variate: need matching vectors, length >= 2");
  double md = 0.0, mc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    md += d_values[i];
    mc += c_values[i];
  }
  md /= static_cast<double>(n);
  mc /= static_cast<double>(n);
  double sdd = 0.0, scc = 0.0, sdc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dd = d_values[i] - md, cc = c_values[i] - mc;
    sdd += dd * dd;
    scc += cc * cc;
    sdc += dd * cc;
  }
  if (scc == 0.0) throw degenerate_input_error("control_variate: constant control values");
  ControlVariateResult out;
  out.beta_star = sdc / scc;
  out.adjusted_estimate = md - out.beta_star * (mc - c_mean);
  const double resid_var = sdd - out.beta_star * out.beta_star * scc;
  out.variance_ratio = sdd > 0.0 ? std::max(resid_var, 0.0) / sdd : 0.0;
  return out;
}

/// E[exp(-X^2) | y] for X | y ~ N(mu, sigma^2/y), by completing the square:
/// exp(-mu^2/(1 + 2 sigma^2/y)) / sqrt(1 + 2 sigma^2/y).
inline double rb_exp_negsquare(double mu, double sigma2, double y) {
  if (sigma2 <= 0.0 || y <= 0.0)
    throw domain_error("rb_exp_negsquare: sigma2 and y must be positive");
  const double s = 1.0 + 2.0 * sigma2 / y;
  return std::exp(-mu * mu / s) / std::sqrt(s);
}

enum class RbMixtureModel { poisson_gamma, normal_gamma_tsq, beta_binomial };

/// The three conditional-expectation swaps: X averaged against its
/// Rao-Blackwellized stand-in (Y, Y, nY). Both columns converge to a/b,
/// a/b and na/(a+b); the reduced column always does so with less noise.
inline PairedEstimate rb_mixture_compare(RbMixtureModel model, double a, double b,
                                         int n_trials, std::size_t n_sims,
                                         std::size_t replications, RngStream& stream) {
  if (a <= 0.0 || b <= 0.0) throw domain_error("rb_mixture_compare: a,b must be positive");
  if (model == RbMixtureModel::beta_binomial && n_trials < 1)
    throw domain_error("rb_mixture_compare: beta_binomial needs n_trials >= 1");
  std::vector<double> plain_terms, reduced_terms;
  plain_terms.reserve(n_sims);
  reduced_terms.reserve(n_sims);
  std::vector<double> plain_reps(replications), reduced_reps(replications);
  const DistributionSpec gam = DistributionSpec::gamma(a, b);
  for (std::size_t r = 0; r < replications; ++r) {
    double sp = 0.0, sr = 0.0;
    for (std::size_t i = 0; i < n_sims; ++i) {
      double x = 0.0, cond = 0.0;
      switch (model) {
        case RbMixtureModel::poisson_gamma: {
          const double y = gam.sample(stream);
          x = DistributionSpec::poisson(std::max(y, 1e-300)).sample(stream);
          cond = y;
          break;
        }
        case RbMixtureModel::normal_gamma_tsq: {
          const double y = gam.sample(stream);
          const double z = std::sqrt(y) * normal_quantile(stream.uniform());
          x = z * z;
          cond = y;
          break;
        }
        case RbMixtureModel::beta_binomial: {
          const double y = DistributionSpec::beta(a, b).sample(stream);
          x = DistributionSpec::binomial(n_trials, y).sample(stream);
          cond = n_trials * y;
          break;
        }
      }
      sp += x;
      sr += cond;
      if (r == 0) {
        plain_terms.push_back(x);
        reduced_terms.push_back(cond);
      }
    }
    plain_reps[r] = sp / static_cast<double>(n_sims);
    reduced_reps[r] = sr / static_cast<double>(n_sims);
  }
  PairedEstimate out;
  out.plain = running_mean(plain_terms);
  out.reduced = running_mean(reduced_terms);
  out.finish_ratio();
  auto var_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return v.size() > 1 ? s / static_cast<double>(v.size() - 1) : 0.0;
  };
  out.plain_replicate_var = var_of(plain_reps);
  out.reduced_replicate_var = var_of(reduced_reps);
  return out;
}

/// cov(Xbar_k, Xbar_k') for iid N(0, sigma2) draws: analytic sigma2/max(k,k')
/// next to the replication estimate.
inline std::pair<double, double> running_mean_cov(std::size_t k, std::size_t k_prime,
                                                  double sigma2, std::size_t replications,
                                                  RngStream& stream) {
  if (k < 1 || k > k_prime) throw domain_error("running_mean_cov: need 1 <= k <= k'");
  const double sd = std::sqrt(sigma2);
  std::vector<double> xk(replications), xkp(replications);
  for (std::size_t r = 0; r < replications; ++r) {
    double s = 0.0, sk = 0.0;
    for (std::size_t i = 0; i < k_prime; ++i) {
      s += sd * normal_quantile(stream.uniform());
      if (i + 1 == k) sk = s;
    }
    xk[r] = sk / static_cast<double>(k);
    xkp[r] = s / static_cast<double>(k_prime);
  }
  double mk = 0.0, mkp = 0.0;
  for (std::size_t r = 0; r < replications; ++r) {
    mk += xk[r];
    mkp += xkp[r];
  }
  mk /= static_cast<double>(replications);
  mkp /= static_cast<double>(replications);
  double cov = 0.0;
  for (std::size_t r = 0; r < replications; ++r) cov += (xk[r] - mk) * (xkp[r] - mkp);
  cov /= static_cast<double>(replications - 1);
  return {cov, sigma2 / static_cast<double>(k_prime)};
}

/// Batch-means variance estimates for the full average delta_1 and the
/// k-thinned average delta_k of h over one chain. The lemma says the full
/// average never loses; replications of the generating chain make the
/// comparison, this just reports the two estimates.
template <typename H>
std::pair<double, double> batch_thin_compare(const std::vector<double>& chain, const H& h,
                                             std::size_t k, std::size_t n_batches = 20) {
  const std::size_t n = chain.size();
  if (k < 1 || n % k != 0) throw configuration_error("batch_thin_compare: length must divide by k");
  auto batch_var_of_mean = [&](const std::vector<double>& v) {
    const std::size_t nb = std::min(n_batches, v.size());
    const std::size_t bs = v.size() / nb;
    std::vector<double> bm(nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t i = 0; i < bs; ++i) bm[b] += v[b * bs + i];
      bm[b] /= static_cast<double>(bs);
    }
    double m = 0.0;
    for (double x : bm) m += x;
    m /= static_cast<double>(nb);
    double s = 0.0;
    for (double x : bm) s += (x - m) * (x - m);
    return s / static_cast<double>(nb - 1) / static_cast<double>(nb);
  };
  std::vector<double> full(n), thinned;
  thinned.reserve(n / k);
  for (std::size_t i = 0; i < n; ++i) {
    full[i] = h(chain[i]);
    if ((i + 1) % k == 0) thinned.push_back(full[i]);
  }
  return {batch_var_of_mean(full), batch_var_of_mean(thinned)};
}

/// Statistic for the bootstrap: sees the resample plus an inner budget and a
/// stream, so double-bootstrap statistics can nest their own resampling.
using BootstrapStat =
    std::function<double(const std::vector<double>&, std::size_t, RngStream&)>;

inline BootstrapStat mean_stat() {
  return [](const std::vector<double>& v, std::size_t, RngStream&) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
}

inline double empirical_quantile(std::vector<double> sorted_copy, double q) {
  std::sort(sorted_copy.begin(), sorted_copy.end());
  const double pos = q * (static_cast<double>(sorted_copy.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted_copy.size() - 1);
  const double w = pos - std::floor(pos);
  return (1.0 - w) * sorted_copy[lo] + w * sorted_copy[hi];
}

/// q-th quantile of the bootstrap distribution of the mean; this is the
/// inner loop of the double bootstrap.
inline BootstrapStat quantile_of_mean_stat(double q) {
  return [q](const std::vector<double>& v, std::size_t n_inner, RngStream& stream) {
    std::vector<double> means(n_inner);
    for (std::size_t j = 0; j < n_inner; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto idx = static_cast<std::size_t>(stream.uniform() * v.size());
        s += v[std::min(idx, v.size() - 1)];
      }
      means[j] = s / static_cast<double>(v.size());
    }
    return empirical_quantile(means, q);
  };
}

/// Percentile bootstrap interval for stat: n_outer resamples with
/// replacement, empirical (1-level)/2 and 1-(1-level)/2 quantiles.
inline std::pair<double, double> bootstrap_ci(const std::vector<double>& data,
                                              const BootstrapStat& stat,
                                              std::size_t n_outer, std::size_t n_inner,
                                              double level, RngStream& stream) {
  if (data.size() < 2) throw domain_error("bootstrap_ci: need at least two observations");
  std::vector<double> vals(n_outer);
  std::vector<double> resample(data.size());
  for (std::size_t r = 0; r < n_outer; ++r) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto idx = static_cast<std::size_t>(stream.uniform() * data.size());
      resample[i] = data[std::min(idx, data.size() - 1)];
    }
    vals[r] = stat(resample, n_inner, stream);
  }
  const double tail = (1.0 - level) / 2.0;
  return {empirical_quantile(vals, tail), empirical_quantile(vals, 1.0 - tail)};
}

struct VarianceBand {
  std::size_t t = 0;
  double center = 0.0;
  double half_width = 0.0;
};

/// Bootstrap bands for the running mean of an MCMC trace: at each checkpoint
/// T_j, `batch` columns of T_j values resampled with replacement from the
/// trace, band = prefix mean +- 2 sd of the column means.
inline std::vector<VarianceBand> bootstrap_variance_bands(
    const std::vector<double>& trace, const std::vector<std::size_t>& checkpoints,
    std::size_t batch, RngStream& stream) {
  std::vector<VarianceBand> bands;
  bands.reserve(checkpoints.size());
  std::size_t prev = 0;
  for (std::size_t t : checkpoints) {
    if (t < prev || t > trace.size())
      throw configuration_error("bootstrap_variance_bands: checkpoints must increase within the trace");
    prev = t;
    std::vector<double> col_means(batch, 0.0);
    for (std::size_t c = 0; c < batch; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < t; ++i) {
        const auto idx = static_cast<std::size_t>(stream.uniform() * trace.size());
        s += trace[std::min(idx, trace.size() - 1)];
      }
      col_means[c] = s / static_cast<double>(t);
    }
    double m = 0.0;
    for (double x : col_means) m += x;
    m /= static_cast<double>(batch);
    double v = 0.0;
    for (double x : col_means) v += (x - m) * (x - m);
    v /= static_cast<double>(batch - 1);
    double prefix_mean = 0.0;
    for (std::size_t i = 0; i < t; ++i) prefix_mean += trace[i];
    prefix_mean /= static_cast<double>(t);
    bands.push_back({t, prefix_mean, 2.0 * std::sqrt(v)});
  }
  return bands;
}

}  // namespace carlo
