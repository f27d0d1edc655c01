#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "carlo/distributions.hpp"
#include "carlo/errors.hpp"
#include "carlo/rng.hpp"

namespace carlo {

/// Cumulative mean and standard-error track of a stream of values.
/// ses[t] = sqrt(sum_{i<=t} (x_i - mean_t)^2) / t, the biased divide-by-t
/// form, so the plotted mean +- 2*se band matches the usual cumsum pattern.
struct RunningEstimate {
  std::vector<double> means;
  std::vector<double> ses;

  std::size_t size() const { return means.size(); }
  double estimate() const { return means.back(); }
  double se() const { return ses.back(); }
};

inline RunningEstimate running_mean(const std::vector<double>& values) {
  if (values.empty()) throw domain_error("running_mean: need at least one value");
  RunningEstimate out;
  out.means.reserve(values.size());
  out.ses.reserve(values.size());
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
    out.means.push_back(mean);
    out.ses.push_back(std::sqrt(std::max(m2, 0.0)) / static_cast<double>(i + 1));
  }
  return out;
}

/// Points with unnormalized log weights. normalize() rescales in log space
/// (max-shift) so the linear weights sum to one.
struct WeightedSample {
  std::vector<double> points;
  std::vector<double> log_weights;
  bool normalized = false;

  std::size_t size() const { return points.size(); }

  void normalize() {
    if (log_weights.empty()) throw domain_error("WeightedSample: empty");
    const double shift = *std::max_element(log_weights.begin(), log_weights.end());
    double total = 0.0;
    for (double lw : log_weights) total += std::exp(lw - shift);
    const double log_total = shift + std::log(total);
    for (double& lw : log_weights) lw -= log_total;
    normalized = true;
  }

  std::vector<double> weights() const {
    std::vector<double> w(log_weights.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i]);
    return w;
  }
};

/// ESS = 1 / sum of squared normalized weights; n iff all equal, 1 iff a
/// single weight carries everything.
inline double ess_weights(const WeightedSample& ws) {
  double total = 0.0, total_sq = 0.0;
  const double shift = *std::max_element(ws.log_weights.begin(), ws.log_weights.end());
  if (!std::isfinite(shift)) throw domain_error("ess_weights: all weights zero");
  for (double lw : ws.log_weights) {
    const double w = std::exp(lw - shift);
    total += w;
    total_sq += w * w;
  }
  if (total <= 0.0) throw domain_error("ess_weights: all weights zero");
  return total * total / total_sq;
}

/// Importance sampling estimate of E_f[h(X)] from proposal draws.
/// Raw form averages h(Y) f(Y)/g(Y); the self-normalized form divides by the
/// weight mean and tracks the classic v_n variance recursion for its band.
template <typename TargetLogPdf, typename H>
std::pair<RunningEstimate, WeightedSample> is_estimate(
    const TargetLogPdf& target_logpdf, const DistributionSpec& proposal, const H& h,
    std::size_t n, RngStream& stream, bool self_normalized = false) {
  if (n == 0) throw domain_error("is_estimate: n must be positive");
  WeightedSample ws;
  ws.points.reserve(n);
  ws.log_weights.reserve(n);
  RunningEstimate run;
  run.means.reserve(n);
  run.ses.reserve(n);
  double sum_hw = 0.0, sum_w = 0.0;
  double mean = 0.0, m2 = 0.0, band = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = proposal.sample(stream);
    const double lw = target_logpdf(y) - proposal.log_density(y);
    if (std::isnan(lw) || lw == std::numeric_limits<double>::infinity())
      throw poisoned_estimate_error("is_estimate: non-finite weight at point " +
                                    std::to_string(y));
    const double w = std::exp(lw);
    ws.points.push_back(y);
    ws.log_weights.push_back(lw);
    const double t = static_cast<double>(i + 1);
    if (self_normalized) {
      sum_hw += h(y) * w;
      sum_w += w;
      const double est = sum_w > 0.0 ? sum_hw / sum_w : 0.0;
      band += (1.0 - est) * (1.0 - est) * w;
      run.means.push_back(est);
      run.ses.push_back(std::sqrt(std::max(band, 0.0)) / t);
    } else {
      const double x = h(y) * w;
      const double delta = x - mean;
      mean += delta / t;
      m2 += delta * (x - mean);
      run.means.push_back(mean);
      run.ses.push_back(std::sqrt(std::max(m2, 0.0)) / t);
    }
  }
  return {std::move(run), std::move(ws)};
}

enum class TailKind { normal, chisq3, t5 };

/// Tail probabilities by sampling the shifted exponential Exp+(a,1):
///   normal  P(Z > a)      weight phi(y) e^{y-a}
///   chisq3  P(X > c)      weight sqrt(t) e^{-c/2} / Gamma(3/2), t = c/2 + Exp(1)
///   t5      P(T > c)      weight f_t5(y) e^{y-c}  (infinite variance; see
///                         divergence_flag, the printed numbers cannot be trusted)
inline std::pair<RunningEstimate, WeightedSample> tail_probability_shifted(
    TailKind kind, double threshold, std::size_t n, RngStream& stream) {
  std::vector<double> terms(n);
  WeightedSample ws;
  ws.points.resize(n);
  ws.log_weights.resize(n);
  const DistributionSpec expo = DistributionSpec::exponential(1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = expo.sample(stream);
    double lw = 0.0, y = 0.0;
    switch (kind) {
      case TailKind::normal:
        y = threshold + e;
        lw = normal_logpdf(y) + e;
        break;
      case TailKind::chisq3: {
        y = threshold / 2.0 + e;
        lw = 0.5 * std::log(y) - threshold / 2.0 - std::lgamma(1.5);
        break;
      }
      case TailKind::t5: {
        y = threshold + e;
        const double c5 = std::lgamma(3.0) - 0.5 * std::log(5.0 * kPi) - std::lgamma(2.5);
        lw = c5 - 3.0 * std::log1p(y * y / 5.0) + e;
        break;
      }
    }
    ws.points[i] = y;
    ws.log_weights[i] = lw;
    terms[i] = std::exp(lw);
  }
  return {running_mean(terms), std::move(ws)};
}

/// P(Z > a) for extreme a through the change of variable u ~ U(0, 1/a):
/// the integrand exp(-1/(2u^2)) / (u^2 sqrt(2 pi)) averaged over (0, 1/a).
inline std::pair<RunningEstimate, WeightedSample> normal_tail_uniform(
    double a, std::size_t n, RngStream& stream) {
  if (a <= 0.0) throw domain_error("normal_tail_uniform: threshold must be positive");
  std::vector<double> terms(n);
  WeightedSample ws;
  ws.points.resize(n);
  ws.log_weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = stream.uniform() / a;
    const double lt = -1.0 / (2.0 * u * u) - 2.0 * std::log(u) - kLogSqrt2Pi - std::log(a);
    ws.points[i] = u;
    ws.log_weights[i] = lt;
    terms[i] = std::exp(lt);
  }
  return {running_mean(terms), std::move(ws)};
}

struct DivergenceReport {
  bool flagged = false;
  double max_normalized_weight = 0.0;
  double late_variance_growth = 0.0;
  std::string note;
};

/// Heuristic infinite-variance sentinel: fires when a single normalized
/// weight exceeds 0.05 or the running weight variance grows by more than 50%
/// over the last decile. Thresholds are a calibration choice, not a theorem.
inline DivergenceReport divergence_flag(const WeightedSample& ws) {
  const std::size_t n = ws.size();
  if (n < 100) throw domain_error("divergence_flag: need at least 100 points");
  WeightedSample copy = ws;
  copy.normalize();
  DivergenceReport rep;
  for (double lw : copy.log_weights)
    rep.max_normalized_weight = std::max(rep.max_normalized_weight, std::exp(lw));

  const auto w = ws.weights();
  double mean = 0.0, m2 = 0.0, var_at_90 = 0.0;
  const std::size_t cut = n - n / 10;
  for (std::size_t i = 0; i < n; ++i) {
    const double delta = w[i] - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (w[i] - mean);
    if (i + 1 == cut) var_at_90 = m2 / static_cast<double>(i + 1);
  }
  const double var_end = m2 / static_cast<double>(n);
  rep.late_variance_growth = var_at_90 > 0.0 ? var_end / var_at_90 - 1.0
                                             : (var_end > 0.0 ? 1e300 : 0.0);
  if (rep.max_normalized_weight > 0.05) {
    rep.flagged = true;
    rep.note = "single weight dominates";
  } else if (rep.late_variance_growth > 0.5) {
    rep.flagged = true;
    rep.note = "weight variance still growing";
  }
  return rep;
}

enum class PosteriorRatioKind { cauchy_prior_normal_lik, normal_prior_cauchy_lik };

struct PosteriorRatioResult {
  RunningEstimate ratio;      // running numerator/denominator
  RunningEstimate numerator;  // E[theta * weight]
  RunningEstimate denominator;
  double sigma_hat_numerator = 0.0;
  double sigma_hat_denominator = 0.0;
};

/// Posterior mean delta(x) for the Cauchy-prior / normal-likelihood model,
/// written as a ratio of two expectations and simulated from either side.
inline PosteriorRatioResult posterior_ratio(double x, PosteriorRatioKind kind,
                                            std::size_t n, RngStream& stream) {
  if (n == 0) throw domain_error("posterior_ratio: n must be positive");
  std::vector<double> num(n), den(n);
  const DistributionSpec cauchy = DistributionSpec::cauchy(0.0, 1.0);
  const DistributionSpec norm = DistributionSpec::normal(x, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double theta, w;
    if (kind == PosteriorRatioKind::cauchy_prior_normal_lik) {
      theta = cauchy.sample(stream);
      w = normal_pdf(theta - x);
    } else {
      theta = norm.sample(stream);
      w = 1.0 / (kPi * (1.0 + theta * theta));
    }
    num[i] = theta * w;
    den[i] = w;
  }
  PosteriorRatioResult res;
  res.numerator = running_mean(num);
  res.denominator = running_mean(den);
  res.ratio.means.resize(n);
  res.ratio.ses.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = res.denominator.means[i];
    if (i + 1 == n && d <= 0.0)
      throw divergence_error("posterior_ratio: denominator estimate not positive");
    res.ratio.means[i] = d != 0.0 ? res.numerator.means[i] / d : 0.0;
    // delta-method band from the separate tracks
    const double r = res.ratio.means[i];
    res.ratio.ses[i] = d != 0.0
        ? std::fabs(r) * std::sqrt(std::pow(res.numerator.ses[i] /
              (res.numerator.means[i] == 0.0 ? 1.0 : res.numerator.means[i]), 2.0) +
              std::pow(res.denominator.ses[i] / d, 2.0))
        : 0.0;
  }
  const double nf = static_cast<double>(n);
  res.sigma_hat_numerator = res.numerator.ses.back() * std::sqrt(nf);
  res.sigma_hat_denominator = res.denominator.ses.back() * std::sqrt(nf);
  return res;
}

/// Smallest n with 2 sigma_hat / sqrt(n) <= 10^-digits, i.e. ceil((2 sigma_hat 10^digits)^2).
inline std::size_t required_sample_size(double sigma_hat, int digits) {
  if (sigma_hat <= 0.0) throw domain_error("required_sample_size: sigma_hat must be positive");
  const double bound = 2.0 * sigma_hat * std::pow(10.0, digits);
  return std::max<std::size_t>(static_cast<std::size_t>(std::ceil(bound * bound)), 1);
}

/// Marginal density f_X(x*) from joint draws: average of
/// f_XY(x*, y_i) w(x_i) / f_XY(x_i, y_i).
template <typename JointLogPdf>
double marginal_from_joint(double x_star,
                           const std::vector<std::pair<double, double>>& pairs,
                           const DistributionSpec& w, const JointLogPdf& joint_logpdf) {
  if (pairs.empty()) throw domain_error("marginal_from_joint: no pairs");
  double acc = 0.0;
  for (const auto& [xi, yi] : pairs) {
    const double denom = joint_logpdf(xi, yi);
    if (!std::isfinite(denom))
      throw poisoned_estimate_error("marginal_from_joint: zero joint density at x=" +
                                    std::to_string(xi));
    acc += std::exp(joint_logpdf(x_star, yi) + w.log_density(xi) - denom);
  }
  return acc / static_cast<double>(pairs.size());
}

/// Harmonic-mean style evidence: 1 over the posterior average of
/// tau(theta) / (f(x|theta) pi(theta)), tau a normalized density living
/// inside the posterior support.
template <typename LogLik, typename LogPrior>
double harmonic_mean_evidence(const std::vector<double>& posterior_draws,
                              const LogLik& loglik, const LogPrior& logprior,
                              const DistributionSpec& tau) {
  if (posterior_draws.empty()) throw domain_error("harmonic_mean_evidence: no draws");
  double acc = 0.0;
  for (double th : posterior_draws) {
    const double ll = loglik(th);
    if (!std::isfinite(ll))
      throw poisoned_estimate_error("harmonic_mean_evidence: zero likelihood at theta=" +
                                    std::to_string(th));
    acc += std::exp(tau.log_density(th) - ll - logprior(th));
  }
  return static_cast<double>(posterior_draws.size()) / acc;
}

/// Prior-side importance estimate of the evidence:
/// (1/n) sum f(x|theta_i) pi(theta_i) / g(theta_i) with theta_i ~ g.
template <typename LogLik, typename LogPrior>
double evidence_from_sampling(const std::vector<double>& g_draws, const LogLik& loglik,
                              const LogPrior& logprior, const DistributionSpec& g) {
  if (g_draws.empty()) throw domain_error("evidence_from_sampling: no draws");
  double acc = 0.0;
  for (double th : g_draws) acc += std::exp(loglik(th) + logprior(th) - g.log_density(th));
  return acc / static_cast<double>(g_draws.size());
}

/// Bridge estimator of c1/c2 from samples of both posteriors:
/// mean over pi2 draws of pi1~ * alpha over mean over pi1 draws of pi2~ * alpha.
/// Multiplying alpha by a constant cancels exactly.
template <typename LogPdf1, typename LogPdf2, typename AlphaFn>
double bridge_ratio(const LogPdf1& tilde1_logpdf, const LogPdf2& tilde2_logpdf,
                    const std::vector<double>& draws1, const std::vector<double>& draws2,
                    const AlphaFn& alpha_fn) {
  if (draws1.empty() || draws2.empty()) throw domain_error("bridge_ratio: empty draws");
  double num = 0.0, den = 0.0;
  for (double th : draws2) num += std::exp(tilde1_logpdf(th)) * alpha_fn(th);
  for (double th : draws1) den += std::exp(tilde2_logpdf(th)) * alpha_fn(th);
  num /= static_cast<double>(draws2.size());
  den /= static_cast<double>(draws1.size());
  if (num == 0.0 && den == 0.0)
    throw divergence_error("bridge_ratio: supports do not overlap (all cross-weights zero)");
  if (den == 0.0)
    throw divergence_error("bridge_ratio: denominator cross-weights all zero");
  return num / den;
}

/// The reciprocal-importance alpha = 1/(pi1~ pi2~). Only valid when the
/// parameter space is bounded; on unbounded supports the expectations blow up.
template <typename LogPdf1, typename LogPdf2>
auto make_reciprocal_alpha(const LogPdf1& tilde1_logpdf, const LogPdf2& tilde2_logpdf) {
  return [=](double th) { return std::exp(-tilde1_logpdf(th) - tilde2_logpdf(th)); };
}

/// Normalizing constant from a chain targeting f~/C: the ergodic average of
/// phi(x_t)/f~(x_t) converges to 1/C. phi must be normalized with support
/// inside the target's; a finite variance needs the integral of phi^2/f finite.
template <typename TargetLogPdf>
double candidate_constant(const std::vector<double>& chain_states,
                          const TargetLogPdf& target_unnorm_logpdf,
                          const DistributionSpec& phi) {
  if (chain_states.empty()) throw domain_error("candidate_constant: empty chain");
  double acc = 0.0;
  for (double x : chain_states) {
    const double lf = target_unnorm_logpdf(x);
    if (!std::isfinite(lf))
      throw poisoned_estimate_error("candidate_constant: zero target density at x=" +
                                    std::to_string(x));
    acc += std::exp(phi.log_density(x) - lf);
  }
  return static_cast<double>(chain_states.size()) / acc;
}

/// Weight trace omega_t = f(x|theta_t) pi(theta_t) / pihat_t(theta_t), the
/// kernel estimate pihat_t built from the chain up to t. Converges to the
/// marginal likelihood as the chain reaches the posterior.
template <typename LogLik, typename LogPrior>
RunningEstimate chib_weight_trace(const std::vector<double>& chain, const LogLik& loglik,
                                  const LogPrior& logprior, double bandwidth) {
  if (bandwidth < 0.0) throw domain_error("chib_weight_trace: bandwidth must be positive");
  const std::size_t n = chain.size();
  if (n < 10) throw domain_error("chib_weight_trace: chain too short");
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = chain[i] - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (chain[i] - mean);
  }
  const double sd = std::sqrt(m2 / static_cast<double>(n));
  if (sd == 0.0) throw degenerate_input_error("chib_weight_trace: constant chain");
  if (bandwidth == 0.0)
    bandwidth = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);  // rule of thumb

  RunningEstimate run;
  run.means.resize(n);
  run.ses.assign(n, 0.0);
  std::vector<double> omega(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double th = chain[t];
    double kde = 0.0;
    for (std::size_t j = 0; j <= t; ++j)
      kde += normal_pdf((th - chain[j]) / bandwidth);
    kde /= (static_cast<double>(t + 1) * bandwidth);
    omega[t] = std::exp(loglik(th) + logprior(th)) / kde;
    run.means[t] = omega[t];
  }
  return run;
}

/// Closed-form log marginal likelihood under the unit-information prior on the
/// regression coefficients and 1/sigma^2 on the variance:
/// (n+1)^{-(k+1)/2} pi^{-n/2} Gamma(n/2)
///   [y'y - n/(n+1) y'X(X'X)^{-1}X'y - 1/(n+1) bt'X'X bt]^{-n/2}.
inline double log_evidence_gprior(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& beta_tilde) {
  const auto n = X.rows();
  const auto k = X.cols();
  if (y.size() != n || beta_tilde.size() != k)
    throw configuration_error("log_evidence_gprior: shape mismatch");
  if (n <= k) throw configuration_error("log_evidence_gprior: need n > k");
  const Eigen::MatrixXd xtx = X.transpose() * X;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
  if (lu.rank() < k) throw linalg_error("log_evidence_gprior: X is rank deficient");
  const Eigen::VectorXd xty = X.transpose() * y;
  const double proj = xty.dot(lu.solve(xty));
  const double nd = static_cast<double>(n);
  const double bracket = y.squaredNorm() - nd / (nd + 1.0) * proj -
                         beta_tilde.dot(xtx * beta_tilde) / (nd + 1.0);
  if (bracket <= 0.0) throw linalg_error("log_evidence_gprior: non-positive bracket");
  return -(static_cast<double>(k) + 1.0) / 2.0 * std::log(nd + 1.0) -
         nd / 2.0 * std::log(kPi) + std::lgamma(nd / 2.0) - nd / 2.0 * std::log(bracket);
}

}  // namespace carlo
