#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "carlo/distributions.hpp"
#include "carlo/errors.hpp"
#include "carlo/rng.hpp"
#include "carlo/search.hpp"

namespace carlo {

/// Proposal g, possibly-unnormalized target f~, and a log bound with
/// f~ <= M g over the support. `strict` envelopes are grid-checked before
/// sampling; the min(f, Mg) scheme some exercises print sets strict = false
/// and accepts that the output follows min(f, Mg) rather than f.
struct Envelope {
  std::function<double(double)> target_logpdf;
  DistributionSpec proposal;
  double log_M = 0.0;
  bool strict = true;
};

/// Spot-check f~ <= M g on a quantile grid of the proposal.
inline void validate_envelope(const Envelope& env, std::size_t grid = 1000) {
  if (!std::isfinite(env.log_M)) throw domain_error("Envelope: log_M must be finite");
  for (std::size_t i = 0; i < grid; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
    const double x = env.proposal.quantile(p);
    const double gap = env.target_logpdf(x) - env.proposal.log_density(x) - env.log_M;
    if (gap > 1e-9)
      throw domain_error("Envelope: bound violated at x=" + std::to_string(x) +
                         " by exp(" + std::to_string(gap) + ")");
  }
}

/// Output of an accept-reject run. All proposals and their acceptance
/// weights w_j = f~/(M g) are kept so a run can be recycled afterwards.
struct ArResult {
  std::vector<double> accepted;
  std::size_t proposals_used = 0;
  double acceptance_rate = 0.0;
  std::vector<double> proposals;
  std::vector<double> weights;
  std::vector<bool> accept_flags;
};

/// Draw until n acceptances. Expected acceptance rate is 1/M when both
/// densities are normalized.
inline ArResult ar_sample(const Envelope& env, std::size_t n, RngStream& stream) {
  if (env.strict) validate_envelope(env);
  ArResult res;
  res.accepted.reserve(n);
  std::size_t consecutive_rejects = 0;
  while (res.accepted.size() < n) {
    const double y = env.proposal.sample(stream);
    const double w =
        std::exp(env.target_logpdf(y) - env.proposal.log_density(y) - env.log_M);
    const bool accept = stream.uniform() <= w;
    ++res.proposals_used;
    res.proposals.push_back(y);
    res.weights.push_back(std::min(w, 1.0));
    res.accept_flags.push_back(accept);
    if (accept) {
      res.accepted.push_back(y);
      consecutive_rejects = 0;
    } else if (++consecutive_rejects >= 10000000) {
      throw divergence_error("ar_sample: 1e7 consecutive rejections, bound suspect");
    }
  }
  res.acceptance_rate =
      static_cast<double>(res.accepted.size()) / static_cast<double>(res.proposals_used);
  return res;
}

/// log M for proposing Be(a,b) at a Be(alpha,beta) target:
/// the gamma-ratio constant times the maximized x-power term, with the
/// degenerate a=alpha / b=beta limits taken by continuity (0 log 0 = 0).
inline double beta_envelope(double alpha, double beta, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw domain_error("beta_envelope: a,b must be positive");
  if (a > alpha || b > beta)
    throw domain_error("beta_envelope: ratio diverges unless a <= alpha and b <= beta");
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  const double da = alpha - a, db = beta - b;
  return std::lgamma(alpha + beta) + std::lgamma(a) + std::lgamma(b) -
         std::lgamma(alpha) - std::lgamma(beta) - std::lgamma(a + b) + xlogx(da) +
         xlogx(db) - xlogx(da + db);
}

/// Optimal rate and log bound for proposing Ga(a,b) at a Ga(alpha,1) target:
/// b* = a/alpha and, up to the Gamma(a)/Gamma(alpha) normalization, the
/// profiled bound b^{-a} ((alpha-a)/((1-b)e))^{alpha-a} at b* is
/// M = alpha^alpha / (a^a e^{alpha-a}).  (Simplifying away the e factor is a
/// common slip; the numeric minimum over b confirms this form.)  M decreases
/// in a, so the best integer shape is floor(alpha).
inline std::pair<double, double> gamma_envelope(double alpha, double a) {
  if (!(a > 0.0)) throw domain_error("gamma_envelope: a must be positive");
  if (a > alpha) throw domain_error("gamma_envelope: need a <= alpha");
  const double b_opt = a / alpha;
  const double log_M = alpha * std::log(alpha) - a * std::log(a) - (alpha - a);
  return {b_opt, log_M};
}

/// The complete accept-reject bound for Ga(alpha,1) from Ga(a, a/alpha),
/// including the normalizing-constant ratio gamma_envelope leaves out.
inline double gamma_envelope_full_log_bound(double alpha, double a) {
  return gamma_envelope(alpha, a).second + std::lgamma(a) - std::lgamma(alpha);
}

/// log M for proposing a double exponential with rate alpha at N(0,1);
/// minimized at alpha = 1.
inline double laplace_normal_envelope(double alpha) {
  if (alpha <= 0.0) throw domain_error("laplace_normal_envelope: alpha must be positive");
  return 0.5 * std::log(2.0 / kPi) + 0.5 * alpha * alpha - std::log(alpha);
}

/// Accept-reject from the posterior prior x likelihood, bounding the
/// likelihood by its maximum located with golden-section over [search_lo,
/// search_up] (in practice the observed data range).
template <typename LogLik>
ArResult posterior_ar(const LogLik& loglik, const DistributionSpec& prior, std::size_t n,
                      RngStream& stream, double search_lo, double search_up) {
  if (!(search_lo < search_up)) throw configuration_error("posterior_ar: empty search range");
  const double arg = golden_section_maximize(loglik, search_lo, search_up, 1e-9);
  const double span = search_up - search_lo;
  // a likelihood still rising into either edge means the bracket failed
  if (search_up - arg < 1e-6 * span &&
      loglik(search_up) > loglik(search_up - 0.01 * span) + 1e-12)
    throw configuration_error("posterior_ar: likelihood maximum not bracketed");
  if (arg - search_lo < 1e-6 * span &&
      loglik(search_lo) > loglik(search_lo + 0.01 * span) + 1e-12)
    throw configuration_error("posterior_ar: likelihood maximum not bracketed");
  const double log_M = loglik(arg);
  Envelope env{[&prior, &loglik](double t) { return prior.log_density(t) + loglik(t); },
               prior, log_M, false};
  return ar_sample(env, n, stream);
}

/// Missing-constant estimate from an unnormalized envelope run:
/// k = 1 / (M~ x observed acceptance rate).
inline double constant_from_acceptance(double log_M_tilde, double observed_rate) {
  if (observed_rate <= 0.0)
    throw divergence_error("constant_from_acceptance: zero acceptance rate");
  if (observed_rate > 1.0)
    throw domain_error("constant_from_acceptance: rate must be in (0,1]");
  return 1.0 / (std::exp(log_M_tilde) * observed_rate);
}

/// Conditional acceptance probabilities rho_i given a run that stopped at
/// draw N with m acceptances: rho_i = w_i S_{m-2}(others) / S_{m-1}(others),
/// the S_k summing products of w / (1-w) over k-subsets. The subset sums are
/// evaluated exactly (Poisson-binomial recursion); rho_N = 1 by construction.
inline std::vector<double> recycle_weights(const std::vector<double>& weights,
                                           std::size_t m, std::size_t stopping_index) {
  const std::size_t n = weights.size();
  if (n > 18) throw capability_error("recycle_weights: n above the enumeration bound 18");
  if (m < 2 || m > n) throw domain_error("recycle_weights: need 2 <= m <= n");
  if (stopping_index >= n) throw domain_error("recycle_weights: bad stopping index");
  for (double w : weights)
    if (!(w > 0.0 && w <= 1.0)) throw domain_error("recycle_weights: weights must be in (0,1]");

  // subset_sums[k] = sum over k-subsets T of `idx` of prod_{T} w prod_{not T} (1-w)
  auto subset_sums = [&](const std::vector<std::size_t>& idx) {
    std::vector<double> s(idx.size() + 1, 0.0);
    s[0] = 1.0;
    for (std::size_t j : idx) {
      for (std::size_t k = s.size() - 1; k > 0; --k)
        s[k] = s[k] * (1.0 - weights[j]) + s[k - 1] * weights[j];
      s[0] *= 1.0 - weights[j];
    }
    return s;
  };

  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < n; ++j)
    if (j != stopping_index) others.push_back(j);
  const std::vector<double> denom_sums = subset_sums(others);
  const double denom = denom_sums[m - 1];
  if (denom <= 0.0) throw divergence_error("recycle_weights: impossible configuration");

  std::vector<double> rho(n, 0.0);
  rho[stopping_index] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == stopping_index) continue;
    std::vector<std::size_t> rest;
    for (std::size_t j : others)
      if (j != i) rest.push_back(j);
    const std::vector<double> num_sums = subset_sums(rest);
    rho[i] = weights[i] * num_sums[m - 2] / denom;
  }
  return rho;
}

}  // namespace carlo
