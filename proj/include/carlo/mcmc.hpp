#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "carlo/distributions.hpp"
#include "carlo/errors.hpp"
#include "carlo/rng.hpp"

namespace carlo {

/// Per-chain record of states, acceptance flags and log-target values.
/// Acceptance is counted from the flags; the unique-value proxy some
/// runs print is reported alongside but never asserted against, since
/// it conflates rejection with coincidence.
struct Trace {
  std::vector<std::vector<double>> states;  // iterations x dimension
  std::vector<bool> accept_flags;
  std::vector<double> log_target;
  std::string kernel_name;
  std::vector<std::string> param_names;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::size_t burn_in = 0;

  std::size_t size() const { return states.size(); }
  std::size_t dim() const { return states.empty() ? 0 : states.front().size(); }

  double acceptance_rate() const {
    if (accept_flags.empty()) return 0.0;
    std::size_t acc = 0;
    for (bool f : accept_flags) acc += f;
    return static_cast<double>(acc) / static_cast<double>(accept_flags.size());
  }

  /// length(unique(x))/n on one coordinate, the efficiency proxy some printed
  /// runs report.
  double unique_rate(std::size_t d = 0) const {
    std::set<double> uniq;
    for (const auto& s : states) uniq.insert(s[d]);
    return static_cast<double>(uniq.size()) / static_cast<double>(states.size());
  }

  std::vector<double> component(std::size_t d) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s[d]);
    return out;
  }

  std::vector<double> component_post_burnin(std::size_t d) const {
    std::vector<double> out;
    out.reserve(states.size() - std::min(burn_in, states.size()));
    for (std::size_t t = burn_in; t < states.size(); ++t) out.push_back(states[t][d]);
    return out;
  }

  void default_burn_in() { burn_in = states.size() / 10; }
};

enum class ProposalKind { independent, random_walk };

/// q(y|x): either independent draws from `increment` or a random walk
/// x + scale * increment. Random-walk increments must be symmetric about 0;
/// that is checked for the packaged families.
struct ProposalKernel {
  ProposalKind kind = ProposalKind::random_walk;
  DistributionSpec increment = DistributionSpec::normal(0.0, 1.0);
  double scale = 1.0;
};

inline void check_rw_symmetry(const DistributionSpec& inc) {
  switch (inc.family()) {
    case Family::normal:
    case Family::cauchy:
    case Family::double_exponential:
      if (inc.param(0) != 0.0)
        throw configuration_error("random_walk increment must be centered at 0");
      return;
    case Family::uniform:
      if (inc.param(0) != -inc.param(1))
        throw configuration_error("random_walk uniform increment must be symmetric");
      return;
    default:
      throw configuration_error("random_walk increment family not symmetric about 0");
  }
}

/// Metropolis-Hastings with the standard acceptance
/// min(1, f(y) q(x|y) / f(x) q(y|x)); for independent proposals the q-ratio
/// is g(x)/g(y). On rejection the state repeats exactly.
template <typename TargetLogPdf>
Trace mh_chain(const TargetLogPdf& target_logpdf, const ProposalKernel& proposal,
               double init, std::size_t n, RngStream& stream) {
  double cur = init;
  double cur_lt = target_logpdf(cur);
  if (!std::isfinite(cur_lt))
    throw configuration_error("mh_chain: target not finite at init");
  if (proposal.kind == ProposalKind::random_walk) check_rw_symmetry(proposal.increment);

  Trace tr;
  tr.kernel_name = "mh";
  tr.param_names = {"x"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  tr.states.reserve(n);
  tr.accept_flags.reserve(n);
  tr.log_target.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    double cand, log_q_ratio = 0.0;
    if (proposal.kind == ProposalKind::independent) {
      cand = proposal.increment.sample(stream);
      const double lq_cand = proposal.increment.log_density(cand);
      const double lq_cur = proposal.increment.log_density(cur);
      if (!std::isfinite(lq_cand))
        throw configuration_error("mh_chain: proposal density vanished at its own draw");
      log_q_ratio = lq_cur - lq_cand;  // g(x)/g(y); -inf when g(x) = 0
    } else {
      cand = cur + proposal.scale * proposal.increment.sample(stream);
    }
    const double cand_lt = target_logpdf(cand);
    const double log_alpha = cand_lt - cur_lt + log_q_ratio;
    const bool accept = std::log(stream.uniform()) < log_alpha;
    if (accept) {
      cur = cand;
      cur_lt = cand_lt;
    }
    tr.states.push_back({cur});
    tr.accept_flags.push_back(accept);
    tr.log_target.push_back(cur_lt);
  }
  tr.default_burn_in();
  return tr;
}

/// x_t = rho x_{t-1} + N(0,1); stationary marginal N(0, 1/(1-rho^2)).
inline Trace ar1_chain(double rho, std::size_t n, RngStream& stream) {
  if (!(std::fabs(rho) < 1.0)) throw domain_error("ar1_chain: need |rho| < 1");
  Trace tr;
  tr.kernel_name = "ar1";
  tr.param_names = {"x"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  tr.states.reserve(n);
  double x = normal_quantile(stream.uniform());
  for (std::size_t t = 0; t < n; ++t) {
    x = rho * x + normal_quantile(stream.uniform());
    tr.states.push_back({x});
    tr.accept_flags.push_back(true);
    tr.log_target.push_back(0.0);
  }
  tr.default_burn_in();
  return tr;
}

enum class ScanFamily { laplace_indep, normal_indep, laplace_rw };

/// Acceptance rate of a normal-target MH sampler along a grid of proposal
/// parameters: iid Laplace(alpha), iid N(0, omega^2), or Laplace random walk.
inline std::vector<std::pair<double, double>> acceptance_scan(
    const DistributionSpec& target, ScanFamily family, const std::vector<double>& grid,
    std::size_t n, RngStream& stream) {
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  auto logf = [&target](double x) { return target.log_density(x); };
  for (double g : grid) {
    if (g <= 0.0) throw domain_error("acceptance_scan: grid values must be positive");
    ProposalKernel prop;
    switch (family) {
      case ScanFamily::laplace_indep:
        prop = {ProposalKind::independent, DistributionSpec::double_exponential(0.0, g), 1.0};
        break;
      case ScanFamily::normal_indep:
        prop = {ProposalKind::independent, DistributionSpec::normal(0.0, std::sqrt(g)), 1.0};
        break;
      case ScanFamily::laplace_rw:
        prop = {ProposalKind::random_walk, DistributionSpec::double_exponential(0.0, 1.0),
                1.0 / g};
        break;
    }
    const Trace tr = mh_chain(logf, prop, target.param(0), n, stream);
    out.emplace_back(g, tr.acceptance_rate());
  }
  return out;
}

/// Logistic regression by iteratively reweighted least squares.
/// Returns the coefficients and the unscaled covariance (X'WX)^{-1}.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> logistic_mle(const Eigen::MatrixXd& X,
                                                                const Eigen::VectorXd& y) {
  const auto n = X.rows();
  const auto k = X.cols();
  if (y.size() != n) throw configuration_error("logistic_mle: shape mismatch");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd mu(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      mu[i] = 1.0 / (1.0 + std::exp(-eta[i]));
      w[i] = mu[i] * (1.0 - mu[i]);
    }
    const Eigen::VectorXd grad = X.transpose() * (y - mu);
    const Eigen::MatrixXd hess = X.transpose() * w.asDiagonal() * X;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(hess);
    if (lu.rank() < k) throw linalg_error("logistic_mle: singular information matrix");
    beta += lu.solve(grad);
    if (beta.norm() > 1e4)
      throw divergence_error("logistic_mle: coefficients diverging (separation?)");
    if (grad.lpNorm<Eigen::Infinity>() < 1e-8) {
      const Eigen::VectorXd eta2 = X * beta;
      Eigen::VectorXd w2(n);
      bool perfect = true;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double m = 1.0 / (1.0 + std::exp(-eta2[i]));
        w2[i] = m * (1.0 - m);
        perfect = perfect && std::fabs(m - y[i]) < 1e-6;
      }
      if (perfect)
        throw divergence_error("logistic_mle: data are separated, the MLE diverges");
      const Eigen::MatrixXd info = X.transpose() * w2.asDiagonal() * X;
      return {beta, info.inverse()};
    }
  }
  throw divergence_error("logistic_mle: IRLS did not converge (separation?)");
}

/// Componentwise MH for the O-ring logistic regression: symmetric Laplace
/// steps scaled by the MLE standard errors, normal priors N(0,25) on the
/// intercept and N(0, 25/var(temps)) on the slope.
inline Trace challenger_mh(const std::vector<double>& temps,
                           const std::vector<double>& failures, std::size_t n,
                           RngStream& stream,
                           double prior_sd_a = 5.0, double prior_sd_b = 0.0) {
  const auto nobs = static_cast<Eigen::Index>(temps.size());
  Eigen::MatrixXd X(nobs, 2);
  Eigen::VectorXd y(nobs);
  double mean_t = 0.0;
  for (Eigen::Index i = 0; i < nobs; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = temps[i];
    y[i] = failures[i];
    mean_t += temps[i];
  }
  mean_t /= static_cast<double>(nobs);
  double var_t = 0.0;
  for (double t : temps) var_t += (t - mean_t) * (t - mean_t);
  var_t /= static_cast<double>(nobs - 1);
  if (prior_sd_b <= 0.0) prior_sd_b = 5.0 / std::sqrt(var_t);

  const auto [beta, cov] = logistic_mle(X, y);
  const double scale_a = std::sqrt(cov(0, 0));
  const double scale_b = std::sqrt(cov(1, 1));

  auto lpost = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < temps.size(); ++i) {
      const double eta = a + b * temps[i];
      s += failures[i] * eta - std::log1p(std::exp(eta));
    }
    return s + normal_logpdf(a / prior_sd_a) - std::log(prior_sd_a) +
           normal_logpdf(b / prior_sd_b) - std::log(prior_sd_b);
  };

  Trace tr;
  tr.kernel_name = "challenger_mh";
  tr.param_names = {"alpha", "beta"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  double a = beta[0], b = beta[1];
  double lp = lpost(a, b);
  const DistributionSpec expo = DistributionSpec::exponential(1.0);
  for (std::size_t t = 0; t < n; ++t) {
    bool moved = false;
    const double step_a = (stream.uniform() < 0.5 ? -1.0 : 1.0) * expo.sample(stream) * scale_a;
    const double prop_a = a + step_a;
    double lp_prop = lpost(prop_a, b);
    if (std::log(stream.uniform()) < lp_prop - lp) {
      a = prop_a;
      lp = lp_prop;
      moved = true;
    }
    const double step_b = (stream.uniform() < 0.5 ? -1.0 : 1.0) * expo.sample(stream) * scale_b;
    const double prop_b = b + step_b;
    lp_prop = lpost(a, prop_b);
    if (std::log(stream.uniform()) < lp_prop - lp) {
      b = prop_b;
      lp = lp_prop;
      moved = true;
    }
    tr.states.push_back({a, b});
    tr.accept_flags.push_back(moved);
    tr.log_target.push_back(lp);
  }
  tr.default_burn_in();
  return tr;
}

/// Componentwise acceptance rates of a two-parameter componentwise MH trace,
/// counted from state changes coordinate by coordinate.
inline std::array<double, 2> componentwise_acceptance(const Trace& tr) {
  std::array<double, 2> acc{0.0, 0.0};
  for (std::size_t t = 1; t < tr.size(); ++t) {
    acc[0] += tr.states[t][0] != tr.states[t - 1][0];
    acc[1] += tr.states[t][1] != tr.states[t - 1][1];
  }
  const double n = static_cast<double>(tr.size() - 1);
  return {acc[0] / n, acc[1] / n};
}

/// Quadratic-regression MH for the stopping-distance data:
/// dist = b1 + b2 speed + b3 speed^2 + N(0, sigma2), flat priors on the
/// coefficients and on log sigma2. Componentwise normal steps scaled by the
/// least-squares standard errors; mixing is known to be poor.
inline Trace braking_mh(const std::vector<double>& speed, const std::vector<double>& dist,
                        std::size_t n, RngStream& stream) {
  const auto nobs = static_cast<Eigen::Index>(speed.size());
  Eigen::MatrixXd X(nobs, 3);
  Eigen::VectorXd y(nobs);
  for (Eigen::Index i = 0; i < nobs; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = speed[i];
    X(i, 2) = speed[i] * speed[i];
    y[i] = dist[i];
  }
  const Eigen::MatrixXd xtx = X.transpose() * X;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
  if (lu.rank() < 3) throw linalg_error("braking_mh: singular design");
  const Eigen::VectorXd bhat = lu.solve(X.transpose() * y);
  const Eigen::VectorXd resid = y - X * bhat;
  const double s2hat = resid.squaredNorm() / static_cast<double>(nobs - 3);
  const Eigen::MatrixXd covhat = s2hat * xtx.inverse();

  // flat priors on the coefficients and on log sigma2
  auto lpost = [&](const Eigen::Vector3d& b, double s2) {
    const Eigen::VectorXd r = y - X * b;
    return -(0.5 * static_cast<double>(nobs) + 1.0) * std::log(s2) -
           r.squaredNorm() / (2.0 * s2);
  };

  Trace tr;
  tr.kernel_name = "braking_mh";
  tr.param_names = {"b1", "b2", "b3", "sigma2"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  Eigen::Vector3d b = bhat;
  double s2 = s2hat;
  double lp = lpost(b, s2);
  for (std::size_t t = 0; t < n; ++t) {
    bool moved = false;
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d prop = b;
      prop[j] += std::sqrt(covhat(j, j)) * normal_quantile(stream.uniform());
      const double lpp = lpost(prop, s2);
      if (std::log(stream.uniform()) < lpp - lp) {
        b = prop;
        lp = lpp;
        moved = true;
      }
    }
    const double prop_s2 = s2 * std::exp(0.5 * normal_quantile(stream.uniform()));
    const double lpp = lpost(b, prop_s2);
    // random walk on log sigma2: the Jacobian contributes prop/cur
    if (std::log(stream.uniform()) < lpp - lp + std::log(prop_s2 / s2)) {
      s2 = prop_s2;
      lp = lpp;
      moved = true;
    }
    tr.states.push_back({b[0], b[1], b[2], s2});
    tr.accept_flags.push_back(moved);
    tr.log_target.push_back(lp);
  }
  tr.default_burn_in();
  return tr;
}

/// Two-stage Gibbs for a centered bivariate normal with variances
/// (sigma_x^2, sigma_y^2) and correlation rho. An explicit init plus a copy
/// of the stream reproduces a continuation exactly, which is how the
/// homogeneous-Markov-chain property is checked.
inline Trace gibbs_bivariate_normal(double sigma_x2, double sigma_y2, double rho,
                                    std::size_t n, RngStream& stream,
                                    std::optional<std::pair<double, double>> init = {}) {
  if (!(std::fabs(rho) < 1.0)) throw domain_error("gibbs_bivariate_normal: need |rho| < 1");
  if (sigma_x2 <= 0.0 || sigma_y2 <= 0.0)
    throw domain_error("gibbs_bivariate_normal: variances must be positive");
  Trace tr;
  tr.kernel_name = "gibbs_bivariate_normal";
  tr.param_names = {"x", "y"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  const double sx = std::sqrt(sigma_x2), sy = std::sqrt(sigma_y2);
  const double res = std::sqrt(1.0 - rho * rho);
  double x, y;
  if (init) {
    x = init->first;
    y = init->second;
  } else {
    x = normal_quantile(stream.uniform());
    y = normal_quantile(stream.uniform());
  }
  for (std::size_t t = 0; t < n; ++t) {
    y = rho * (sy / sx) * x + sy * res * normal_quantile(stream.uniform());
    x = rho * (sx / sy) * y + sx * res * normal_quantile(stream.uniform());
    tr.states.push_back({x, y});
    tr.accept_flags.push_back(true);
    tr.log_target.push_back(0.0);
  }
  tr.default_burn_in();
  return tr;
}

/// Gibbs for the p-variate equicorrelated normal, covariance (1-r)I + rJ:
/// each coordinate is N((p-1) r m / (1+(p-2)r), (1+(p-2)r-(p-1)r^2)/(1+(p-2)r))
/// given the mean m of the others. In constrained mode a proposed coordinate
/// is kept only if sum_{i<=m} x_i^2 <= sum_{i>m} x_i^2 still holds (the
/// hybrid step), so every retained state satisfies the inequality.
inline Trace gibbs_equicorrelated(std::size_t p, double r, std::size_t n, bool constrained,
                                  std::size_t m, RngStream& stream) {
  if (p < 2) throw domain_error("gibbs_equicorrelated: need p >= 2");
  const double pd = static_cast<double>(p);
  if (!(r > -1.0 / (pd - 1.0) && r < 1.0))
    throw domain_error("gibbs_equicorrelated: r outside (-1/(p-1), 1)");
  if (constrained && (m == 0 || m >= p))
    throw domain_error("gibbs_equicorrelated: need 0 < m < p in constrained mode");
  const double denom = 1.0 + (pd - 2.0) * r;
  const double cond_sd = std::sqrt((denom - (pd - 1.0) * r * r) / denom);
  Trace tr;
  tr.kernel_name = constrained ? "gibbs_equicorrelated_constrained" : "gibbs_equicorrelated";
  for (std::size_t j = 0; j < p; ++j) tr.param_names.push_back("x" + std::to_string(j + 1));
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  std::vector<double> cur(p, 0.0);
  auto lower_sq = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += v[i] * v[i];
    return s;
  };
  auto upper_sq = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = m; i < p; ++i) s += v[i] * v[i];
    return s;
  };
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < p; ++j) {
      double mean_rest = 0.0;
      for (std::size_t i = 0; i < p; ++i)
        if (i != j) mean_rest += cur[i];
      mean_rest /= (pd - 1.0);
      const double mu = (pd - 1.0) * r * mean_rest / denom;
      const double prop = mu + cond_sd * normal_quantile(stream.uniform());
      if (!constrained) {
        cur[j] = prop;
      } else {
        const double old = cur[j];
        cur[j] = prop;
        if (lower_sq(cur) > upper_sq(cur)) cur[j] = old;
      }
    }
    tr.states.push_back(cur);
    tr.accept_flags.push_back(true);
    tr.log_target.push_back(0.0);
  }
  tr.default_burn_in();
  return tr;
}

/// Exact draw from the equicorrelated normal via the Cholesky factor of
/// (1-r)I + rJ, for cross-checking the Gibbs marginals.
inline std::vector<double> equicorrelated_direct_sample(std::size_t p, double r,
                                                        RngStream& stream) {
  const auto pi = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd S = Eigen::MatrixXd::Constant(pi, pi, r);
  S.diagonal().setConstant(1.0);
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw linalg_error("equicorrelated_direct_sample: covariance not positive definite");
  Eigen::VectorXd z(pi);
  for (Eigen::Index i = 0; i < pi; ++i) z[i] = normal_quantile(stream.uniform());
  const Eigen::VectorXd x = llt.matrixL() * z;
  return {x.data(), x.data() + p};
}

/// Data augmentation for the right-censored normal sample: the censored
/// units are completed from N(theta,1) truncated to (a, inf), then
/// theta ~ N((m ybar + (n-m) zbar)/n, 1/n). Trace columns: theta, zbar.
inline Trace gibbs_censored_normal(const std::vector<double>& y, std::size_t n_total,
                                   double a, std::size_t n, RngStream& stream) {
  const std::size_t m = y.size();
  if (n_total <= m) throw domain_error("gibbs_censored_normal: nothing censored");
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(m);
  const double md = static_cast<double>(m), nd = static_cast<double>(n_total);
  Trace tr;
  tr.kernel_name = "gibbs_censored_normal";
  tr.param_names = {"theta", "zbar"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  double theta = ybar;
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    double zsum = 0.0;
    for (std::size_t i = 0; i < n_total - m; ++i)
      zsum += truncated_normal_sample(theta, 1.0, a, inf, stream);
    const double zbar = zsum / (nd - md);
    theta = (md * ybar + (nd - md) * zbar) / nd +
            normal_quantile(stream.uniform()) / std::sqrt(nd);
    tr.states.push_back({theta, zbar});
    tr.accept_flags.push_back(true);
    tr.log_target.push_back(0.0);
  }
  tr.default_burn_in();
  return tr;
}

/// Allele-frequency Gibbs for ABO blood-group counts (nA, nB, nAB, nO):
/// binomial completion of the AA/BB genotypes, then a Dirichlet update.
/// Trace columns: pA, pB (pO = 1 - pA - pB).
inline Trace gibbs_blood_groups(const std::array<double, 4>& counts, std::size_t n,
                                RngStream& stream) {
  for (double c : counts)
    if (c < 0.0) throw domain_error("gibbs_blood_groups: counts must be non-negative");
  const double nA = counts[0], nB = counts[1], nAB = counts[2], nO = counts[3];
  Trace tr;
  tr.kernel_name = "gibbs_blood_groups";
  tr.param_names = {"pA", "pB"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  double pA = 0.25, pB = 0.05;
  for (std::size_t t = 0; t < n; ++t) {
    const double pO = 1.0 - pA - pB;
    const double zA =
        nA > 0.0 ? DistributionSpec::binomial(static_cast<int>(nA),
                                              pA * pA / (pA * pA + 2.0 * pA * pO))
                       .sample(stream)
                 : 0.0;
    const double zB =
        nB > 0.0 ? DistributionSpec::binomial(static_cast<int>(nB),
                                              pB * pB / (pB * pB + 2.0 * pB * pO))
                       .sample(stream)
                 : 0.0;
    const std::vector<double> probs = dirichlet_sample(
        {nA + nAB + zA + 1.0, nB + nAB + zB + 1.0, nA - zA + nB - zB + 2.0 * nO + 1.0},
        stream);
    pA = probs[0];
    pB = probs[1];
    tr.states.push_back({pA, pB});
    tr.accept_flags.push_back(true);
    tr.log_target.push_back(0.0);
  }
  tr.default_burn_in();
  return tr;
}

/// Gibbs for a Poisson sample censored at 4: the censored counts are drawn
/// from a truncated Poisson (table inversion capped at the 1-1e-9 quantile,
/// not the mean+6sd window the printed code uses), then
/// lambda ~ Gamma(sum_uncensored + sum z, rate n_obs). Trace: lambda and the
/// Rao-Blackwell column (sum_uncensored + sum z)/n_obs.
inline Trace gibbs_truncated_poisson(double sum_uncensored, double n_obs,
                                     std::size_t n_censored, std::size_t n,
                                     RngStream& stream) {
  Trace tr;
  tr.kernel_name = "gibbs_truncated_poisson";
  tr.param_names = {"lambda", "rb"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  double lambda = sum_uncensored / n_obs;
  for (std::size_t t = 0; t < n; ++t) {
    const DistributionSpec pois = DistributionSpec::poisson(lambda);
    const double floor_mass = pois.cdf(3.0);
    double zsum = 0.0;
    for (std::size_t i = 0; i < n_censored; ++i) {
      const double u = floor_mass + stream.uniform() * (1.0 - floor_mass);
      zsum += pois.discrete_inverse(u);
    }
    const double rb = (sum_uncensored + zsum) / n_obs;
    lambda = DistributionSpec::gamma(sum_uncensored + zsum, n_obs).sample(stream);
    tr.states.push_back({lambda, rb});
    tr.accept_flags.push_back(true);
    tr.log_target.push_back(0.0);
  }
  tr.default_burn_in();
  return tr;
}

/// The exponential conditional pair f(x|y) = y e^{-yx}. With a bound B the
/// conditionals are truncated exponentials simulated by inversion and the
/// joint exp(-xy) is proper on (0,B)^2; without it the pair has no joint
/// density (the running mean never settles, which is the point of the demo).
inline Trace gibbs_truncexp_pair(double bound, std::size_t n, RngStream& stream) {
  Trace tr;
  tr.kernel_name = bound > 0.0 ? "gibbs_truncexp_pair" : "gibbs_truncexp_improper";
  tr.param_names = {"x", "y"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  const DistributionSpec expo = DistributionSpec::exponential(1.0);
  double x = expo.sample(stream), y = expo.sample(stream);
  for (std::size_t t = 0; t < n; ++t) {
    if (bound > 0.0) {
      x = -std::log1p(-stream.uniform() * (1.0 - std::exp(-bound * y))) / y;
      y = -std::log1p(-stream.uniform() * (1.0 - std::exp(-bound * x))) / x;
    } else {
      x = -std::log(stream.uniform()) / y;
      y = -std::log(stream.uniform()) / x;
    }
    tr.states.push_back({x, y});
    tr.accept_flags.push_back(true);
    tr.log_target.push_back(0.0);
  }
  tr.default_burn_in();
  return tr;
}

/// Slice sampler for f(x) = (1/2) e^{-sqrt(x)}: U | x uniform on
/// (0, f(x)), X | u uniform on (0, log(2u)^2). Every stored pair satisfies
/// u <= f(x).
inline Trace slice_expsqrt(std::size_t n, RngStream& stream) {
  Trace tr;
  tr.kernel_name = "slice_expsqrt";
  tr.param_names = {"x", "u"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  double x = stream.uniform();
  for (std::size_t t = 0; t < n; ++t) {
    const double fx = 0.5 * std::exp(-std::sqrt(x));
    const double u = stream.uniform() * fx;
    const double edge = std::log(2.0 * u);
    x = stream.uniform() * edge * edge;
    tr.states.push_back({x, u});
    tr.accept_flags.push_back(true);
    tr.log_target.push_back(0.0);
  }
  tr.default_burn_in();
  return tr;
}

/// Direct sampler for the same density: X = Y^2 with Y ~ Gamma(2,1).
inline double slice_expsqrt_direct(RngStream& stream) {
  const double y = DistributionSpec::gamma(2.0, 1.0).sample(stream);
  return y * y;
}

/// Three-block Gibbs for the hierarchical batting-average model
/// y_i ~ N(theta_i, sigma2), theta_i ~ N(mu, alpha), mu ~ N(0,1),
/// alpha ~ IG(2,2):
///   theta_i | .  ~  N((mu/alpha + y_i/sigma2)/(1/alpha + 1/sigma2), ...)
///   mu | .       ~  N(sum theta / (n + alpha), (n/alpha + 1)^{-1})
///   alpha | .    ~  IG(2 + n/2, 2 + sum (theta_i - mu)^2 / 2)
/// Trace columns: theta_1..theta_n, mu, alpha.
inline Trace gibbs_baseball(const std::vector<double>& y, double sigma2, std::size_t n,
                            RngStream& stream) {
  const std::size_t ny = y.size();
  const double nd = static_cast<double>(ny);
  Trace tr;
  tr.kernel_name = "gibbs_baseball";
  for (std::size_t i = 0; i < ny; ++i) tr.param_names.push_back("theta" + std::to_string(i + 1));
  tr.param_names.push_back("mu");
  tr.param_names.push_back("alpha");
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  double mu = 0.0, alpha = 1.0;
  std::vector<double> theta(y);
  std::vector<double> row(ny + 2);
  const double prec_y = 1.0 / sigma2;
  for (std::size_t t = 0; t < n; ++t) {
    const double prec = 1.0 / alpha + prec_y;
    const double sd = 1.0 / std::sqrt(prec);
    double sum_theta = 0.0;
    for (std::size_t i = 0; i < ny; ++i) {
      theta[i] = (mu / alpha + y[i] * prec_y) / prec + sd * normal_quantile(stream.uniform());
      sum_theta += theta[i];
    }
    mu = sum_theta / (nd + alpha) +
         normal_quantile(stream.uniform()) / std::sqrt(nd / alpha + 1.0);
    double ss = 0.0;
    for (double th : theta) ss += (th - mu) * (th - mu);
    alpha = DistributionSpec::inverse_gamma(2.0 + nd / 2.0, 2.0 + 0.5 * ss).sample(stream);
    for (std::size_t i = 0; i < ny; ++i) row[i] = theta[i];
    row[ny] = mu;
    row[ny + 1] = alpha;
    tr.states.push_back(row);
    tr.accept_flags.push_back(true);
    tr.log_target.push_back(0.0);
  }
  tr.default_burn_in();
  return tr;
}

/// Unnormalized closed-form marginal posterior of alpha for gibbs_baseball;
/// normalize it by quadrature to compare with the chain.
inline double baseball_alpha_marginal(double alpha, const std::vector<double>& y,
                                      double sigma2) {
  const double nd = static_cast<double>(y.size());
  double sy = 0.0, syy = 0.0;
  for (double v : y) {
    sy += v;
    syy += v * v;
  }
  const double as = alpha + sigma2;
  return std::pow(alpha, -3.0) / (std::sqrt(1.0 + nd / as) * std::pow(as, nd / 2.0)) *
         std::exp(-2.0 / alpha - 0.5 * syy / as +
                  0.5 * sy * sy / (as * as * (1.0 + nd / as)));
}

enum class BetaKernelVariant { bernoulli_move, ratio_move };

/// The Be(alpha,1)-stationary kernels: propose y ~ Be(alpha+1, 1) and accept
/// with probability x (bernoulli_move, satisfies detailed balance exactly) or
/// with probability min(1, x/y) (ratio_move).
inline Trace beta_kernel_chain(double alpha, BetaKernelVariant variant, std::size_t n,
                               RngStream& stream) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("beta_kernel_chain: alpha in (0,1)");
  Trace tr;
  tr.kernel_name = variant == BetaKernelVariant::bernoulli_move ? "beta_kernel_bernoulli"
                                                                : "beta_kernel_ratio";
  tr.param_names = {"x"};
  tr.seed = stream.seed();
  tr.stream_id = stream.stream_id();
  double x = stream.uniform();
  for (std::size_t t = 0; t < n; ++t) {
    const double y = std::pow(stream.uniform(), 1.0 / (alpha + 1.0));
    bool accept;
    if (variant == BetaKernelVariant::bernoulli_move) {
      accept = stream.uniform() < x;
    } else {
      accept = stream.uniform() < x / y;
    }
    if (accept) x = y;
    tr.states.push_back({x});
    tr.accept_flags.push_back(accept);
    tr.log_target.push_back((alpha - 1.0) * std::log(x));
  }
  tr.default_burn_in();
  return tr;
}

/// Off-diagonal transition density of the bernoulli_move kernel:
/// K(x,y) = x (alpha+1) y^alpha for y != x.
inline double beta_kernel_density(double alpha, double x, double y) {
  return x * (alpha + 1.0) * std::pow(y, alpha);
}

/// One random-walk move on log v against an unnormalized density pi(v) with
/// the printed v_old/v_prop factor, i.e. the chain is stationary for
/// pi(v)/v^2 in v-space. Exposed for the stationarity unit test.
template <typename Density>
double log_scale_rw_step(const Density& pi, double cur, double step_sd, RngStream& stream) {
  const double prop = cur * std::exp(step_sd * normal_quantile(stream.uniform()));
  if (stream.uniform() < cur * pi(prop) / (prop * pi(cur))) return prop;
  return cur;
}

/// Probit posterior sampler for the diabetes data, exactly as printed:
/// likelihood terms Phi(+-r beta / sigma2), priors N(0,25) on beta and
/// Ga(2,1) on 1/sigma2, beta moved by a normal step scaled by
/// sqrt(sigma2 * cov_unscaled) and sigma2 by the log random walk above.
inline std::vector<Trace> pima_probit_mh(const std::vector<double>& pedigree,
                                         const std::vector<double>& type,
                                         std::size_t n_chains, std::size_t n,
                                         RngStream& stream) {
  if (pedigree.size() != type.size() || pedigree.empty())
    throw ingestion_error("pima_probit_mh: bad dataset");
  // probit MLE for d ~ r - 1 (single coefficient, no intercept)
  double beta_hat = 0.0;
  double cov_unscaled = 0.0;
  {
    double b = 0.1;
    for (int it = 0; it < 200; ++it) {
      double grad = 0.0, info = 0.0;
      for (std::size_t i = 0; i < pedigree.size(); ++i) {
        const double eta = pedigree[i] * b;
        const double mu = normal_cdf(eta);
        const double phi = normal_pdf(eta);
        const double denom = std::max(mu * (1.0 - mu), 1e-12);
        grad += pedigree[i] * phi * (type[i] - mu) / denom;
        info += pedigree[i] * pedigree[i] * phi * phi / denom;
      }
      b += grad / info;
      if (std::fabs(grad) < 1e-10) break;
    }
    beta_hat = b;
    double info = 0.0;
    for (std::size_t i = 0; i < pedigree.size(); ++i) {
      const double eta = pedigree[i] * beta_hat;
      const double phi = normal_pdf(eta);
      const double mu = normal_cdf(eta);
      info += pedigree[i] * pedigree[i] * phi * phi / std::max(mu * (1.0 - mu), 1e-12);
    }
    cov_unscaled = 1.0 / info;
  }

  auto log_post = [&](double beta, double sigma2) {
    double s = 0.0;
    for (std::size_t i = 0; i < pedigree.size(); ++i) {
      const double z = pedigree[i] * beta / sigma2;
      s += type[i] > 0.5 ? log_normal_cdf(z) : log_normal_cdf(-z);
    }
    s += normal_logpdf(beta / 5.0) - std::log(5.0);
    const double inv = 1.0 / sigma2;
    s += std::log(inv) - inv;  // Ga(2,1) density at 1/sigma2, up to constants
    return s;
  };

  std::vector<Trace> chains;
  chains.reserve(n_chains);
  for (std::size_t c = 0; c < n_chains; ++c) {
    RngStream sub = stream.substream(stream.stream_id() * 1000 + c + 1);
    Trace tr;
    tr.kernel_name = "pima_probit_mh";
    tr.param_names = {"beta", "sigma2"};
    tr.seed = sub.seed();
    tr.stream_id = sub.stream_id();
    double beta = beta_hat, sigma2 = 1.0 / sub.uniform();
    double lp = log_post(beta, sigma2);
    for (std::size_t t = 0; t < n; ++t) {
      bool moved = false;
      const double prop_b =
          beta + std::sqrt(sigma2 * cov_unscaled) * normal_quantile(sub.uniform());
      double lpp = log_post(prop_b, sigma2);
      if (std::log(sub.uniform()) < lpp - lp) {
        beta = prop_b;
        lp = lpp;
        moved = true;
      }
      const double prop_s = sigma2 * std::exp(normal_quantile(sub.uniform()));
      lpp = log_post(beta, prop_s);
      if (std::log(sub.uniform()) < lpp - lp + std::log(sigma2 / prop_s)) {
        sigma2 = prop_s;
        lp = lpp;
        moved = true;
      }
      tr.states.push_back({beta, sigma2});
      tr.accept_flags.push_back(moved);
      tr.log_target.push_back(lp);
    }
    tr.default_burn_in();
    chains.push_back(std::move(tr));
  }
  return chains;
}

}  // namespace carlo
