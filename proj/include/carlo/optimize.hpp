#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carlo/distributions.hpp"
#include "carlo/errors.hpp"
#include "carlo/rng.hpp"
#include "carlo/search.hpp"

namespace carlo {

/// Two-component normal mixture with fixed weights (1/4, 3/4), unit
/// variances, and free means. Only the means are estimated.
struct MixtureModel {
  static constexpr double w1 = 0.25;
  static constexpr double w2 = 0.75;
  std::vector<double> data;
};

/// Observations from 0.25 N(mu1,1) + 0.75 N(mu2,1) with (mu1,mu2)=(0,2.5).
inline MixtureModel make_mixture_data(std::size_t n, RngStream& stream) {
  MixtureModel m;
  m.data.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double shift = stream.uniform() < 0.75 ? 2.5 : 0.0;
    m.data.push_back(normal_quantile(stream.uniform()) + shift);
  }
  return m;
}

/// Observed-data log-likelihood, positive orientation.
inline double mixture_loglik(const MixtureModel& model, double mu1, double mu2) {
  if (!std::isfinite(mu1) || !std::isfinite(mu2))
    throw domain_error("mixture_loglik: means must be finite");
  double ll = 0.0;
  for (double x : model.data)
    ll += std::log(MixtureModel::w1 * normal_pdf(x - mu1) +
                   MixtureModel::w2 * normal_pdf(x - mu2));
  return ll;
}

inline std::array<double, 2> mixture_loglik_grad(const MixtureModel& model, double mu1,
                                                 double mu2) {
  double g1 = 0.0, g2 = 0.0;
  for (double x : model.data) {
    const double f1 = MixtureModel::w1 * normal_pdf(x - mu1);
    const double f2 = MixtureModel::w2 * normal_pdf(x - mu2);
    const double f = f1 + f2;
    g1 += f1 * (x - mu1) / f;
    g2 += f2 * (x - mu2) / f;
  }
  return {g1, g2};
}

enum class ScheduleKind { log_inverse, scaled_log_inverse, sqrt_log_inverse, geometric };

/// Temperature schedule T_t, positive and non-increasing. With scale = 1 the
/// four kinds give 1/log(1+t), 1/(10 log(1+t)), 1/(10 sqrt(log(1+t))) and
/// 0.95^t; geometric uses `scale` as the ratio instead.
struct Schedule {
  ScheduleKind kind = ScheduleKind::log_inverse;
  double scale = 1.0;

  double temperature(std::size_t t) const {
    const double tt = static_cast<double>(t);
    switch (kind) {
      case ScheduleKind::log_inverse:
        return scale / std::log(1.0 + tt);
      case ScheduleKind::scaled_log_inverse:
        return scale / (10.0 * std::log(1.0 + tt));
      case ScheduleKind::sqrt_log_inverse:
        return scale / (10.0 * std::sqrt(std::log(1.0 + tt)));
      case ScheduleKind::geometric:
        return std::pow(scale, tt);
    }
    return 0.0;
  }
};

struct DomainSample {
  std::vector<std::pair<double, double>> points_inside;
  double acceptance_rate = 0.0;
};

/// Uniform sampling over an implicit planar set by subsampling a bounding
/// ellipse, with the ellipse drawn exactly as the exercise prints it:
/// theta ~ U(0,2pi), rho ~ U(0,1), x = rho cos(theta)/x_factor,
/// y = rho sin(theta). Every returned point re-satisfies the constraint.
inline DomainSample uniform_over_domain(
    const std::function<bool(double, double)>& constraint, double x_factor,
    std::size_t n, RngStream& stream) {
  DomainSample out;
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = 2.0 * kPi * stream.uniform();
    const double rho = stream.uniform();
    const double x = rho * std::cos(theta) / x_factor;
    const double y = rho * std::sin(theta);
    if (constraint(x, y)) out.points_inside.emplace_back(x, y);
  }
  out.acceptance_rate =
      static_cast<double>(out.points_inside.size()) / static_cast<double>(n);
  return out;
}

/// The constraint set of the sampling exercise:
/// x^2 (1 + sin(y/3) cos(8x)) + y^2 (2 + cos(5x) cos(8y)) <= 1.
/// Bounded below by 0.77 x^2 + y^2, hence the 0.77 x-axis factor.
inline bool printed_domain_constraint(double x, double y) {
  return x * x * (1.0 + std::sin(y / 3.0) * std::cos(8.0 * x)) +
             y * y * (2.0 + std::cos(5.0 * x) * std::cos(8.0 * y)) <=
         1.0;
}

struct GradientPath {
  std::vector<std::array<double, 2>> path;
  bool converged = false;
  std::string failure;  // non-empty when the likelihood went non-finite
};

/// Kiefer-Wolfowitz stochastic gradient on the mixture log-likelihood:
/// theta_{j+1} = theta_j + (alpha_j / 2 beta_j) Dh(theta_j, beta_j zeta_j) zeta_j
/// with zeta_j uniform on the unit circle and Dh the symmetric difference of
/// the log-likelihood along zeta_j. Stops when the step norm drops below tol.
inline GradientPath stochastic_gradient(const MixtureModel& model,
                                        std::array<double, 2> start,
                                        const std::function<double(std::size_t)>& alpha,
                                        const std::function<double(std::size_t)>& beta,
                                        std::size_t max_iter, double tol,
                                        RngStream& stream) {
  if (tol <= 0.0) throw domain_error("stochastic_gradient: tol must be positive");
  GradientPath out;
  out.path.push_back(start);
  std::array<double, 2> cur = start;
  for (std::size_t j = 1; j <= max_iter; ++j) {
    const double ang = 2.0 * kPi * stream.uniform();
    const std::array<double, 2> zeta{std::cos(ang), std::sin(ang)};
    const double a = alpha(j), b = beta(j);
    const double hp = mixture_loglik(model, cur[0] + b * zeta[0], cur[1] + b * zeta[1]);
    const double hm = mixture_loglik(model, cur[0] - b * zeta[0], cur[1] - b * zeta[1]);
    if (!std::isfinite(hp) || !std::isfinite(hm)) {
      out.failure = "non-finite likelihood at iteration " + std::to_string(j);
      return out;
    }
    const double step = a / (2.0 * b) * (hp - hm);
    cur[0] += step * zeta[0];
    cur[1] += step * zeta[1];
    out.path.push_back(cur);
    if (std::fabs(step) < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

template <std::size_t Dim>
struct AnnealingResult {
  std::vector<std::array<double, Dim>> path;
  std::array<double, Dim> final{};
  std::size_t iterations = 0;
};

/// Simulated annealing maximizing `objective`: uniform-box proposals of width
/// proposal_scale * sqrt(T_t) per coordinate, acceptance exp(dh / T_t).
template <std::size_t Dim, typename Objective>
AnnealingResult<Dim> simulated_annealing(const Objective& objective,
                                         std::array<double, Dim> start,
                                         const Schedule& schedule, double proposal_scale,
                                         std::size_t max_iter, RngStream& stream) {
  double cur_val = objective(start);
  if (!std::isfinite(cur_val))
    throw domain_error("simulated_annealing: objective not finite at start");
  AnnealingResult<Dim> out;
  out.path.push_back(start);
  std::array<double, Dim> cur = start;
  for (std::size_t t = 1; t <= max_iter; ++t) {
    const double temp = schedule.temperature(t);
    const double width = proposal_scale * std::sqrt(temp);
    std::array<double, Dim> prop = cur;
    for (auto& c : prop) c += (stream.uniform() - 0.5) * 2.0 * width;
    const double prop_val = objective(prop);
    const double dh = prop_val - cur_val;
    if (dh > 0.0 || stream.uniform() < std::exp(dh / temp)) {
      cur = prop;
      cur_val = prop_val;
    }
    out.path.push_back(cur);
    out.iterations = t;
  }
  out.final = cur;
  return out;
}

enum class MixtureMode { main, secondary };

/// Closer to (0, 2.5) means the main mode; ties go to main.
inline MixtureMode attribute_mode(std::array<double, 2> final) {
  const double dm = (final[0] - 0.0) * (final[0] - 0.0) + (final[1] - 2.5) * (final[1] - 2.5);
  const double ds = (final[0] - 2.5) * (final[0] - 2.5) + (final[1] - 0.0) * (final[1] - 0.0);
  return dm <= ds ? MixtureMode::main : MixtureMode::secondary;
}

/// EM for the genetic-linkage multinomial: the scalar update
/// theta' = (theta x1/(2+theta) + x4) / (theta x1/(2+theta) + x2 + x3 + x4),
/// iterated to |change| < tol.
inline std::vector<double> em_linkage(const std::array<double, 4>& x, double theta0,
                                      double tol = 1e-3) {
  for (double c : x)
    if (c < 0.0) throw domain_error("em_linkage: counts must be non-negative");
  if (!(theta0 > 0.0 && theta0 < 1.0)) throw domain_error("em_linkage: theta0 must be in (0,1)");
  std::vector<double> path{theta0};
  double cur = theta0;
  for (int guard = 0; guard < 100000; ++guard) {
    const double comp = cur * x[0] / (2.0 + cur);
    const double next = (comp + x[3]) / (comp + x[1] + x[2] + x[3]);
    if (!(next >= 0.0 && next <= 1.0))
      throw domain_error("em_linkage: update left [0,1]");
    path.push_back(next);
    const double diff = std::fabs(next - cur);
    cur = next;
    if (diff < tol) break;
  }
  return path;
}

/// Observed-data log-likelihood of the linkage model, used to check EM
/// monotonicity: cell probabilities (2+t)/4, (1-t)/4, (1-t)/4, t/4.
inline double linkage_loglik(const std::array<double, 4>& x, double theta) {
  return x[0] * std::log((2.0 + theta) / 4.0) + (x[1] + x[2]) * std::log((1.0 - theta) / 4.0) +
         x[3] * std::log(theta / 4.0);
}

struct McemEnvelope {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::vector<double>> paths;  // n_paths x n_iter
};

/// Monte Carlo EM for the linkage model: the E-step expectation replaced by a
/// Binomial(M x1, theta/(theta+2)) draw scaled back by M. Returns the min/max
/// envelope across paths, which shrinks as M grows and straddles the exact
/// EM sequence.
inline McemEnvelope mcem_linkage(const std::array<double, 4>& x, double theta0,
                                 std::size_t m_completions, std::size_t n_paths,
                                 std::size_t n_iter, RngStream& stream) {
  if (m_completions < 1) throw domain_error("mcem_linkage: M must be >= 1");
  McemEnvelope env;
  env.paths.assign(n_paths, std::vector<double>(n_iter + 1, theta0));
  const auto total = m_completions * static_cast<std::size_t>(x[0]);
  for (std::size_t p = 0; p < n_paths; ++p) {
    double cur = theta0;
    for (std::size_t i = 1; i <= n_iter; ++i) {
      const double prob = 1.0 / (1.0 + 2.0 / cur);
      // Bin(M x1, prob) as a Bernoulli sum; M x1 can be large
      std::size_t hits = 0;
      for (std::size_t j = 0; j < total; ++j) hits += stream.uniform() < prob;
      const double z = static_cast<double>(hits) / static_cast<double>(m_completions);
      cur = 1.0 / (1.0 + (x[1] + x[2]) / (x[3] + z));
      env.paths[p][i] = cur;
    }
  }
  env.lower.assign(n_iter + 1, 1e300);
  env.upper.assign(n_iter + 1, -1e300);
  for (const auto& path : env.paths)
    for (std::size_t i = 0; i <= n_iter; ++i) {
      env.lower[i] = std::min(env.lower[i], path[i]);
      env.upper[i] = std::max(env.upper[i], path[i]);
    }
  return env;
}

/// EM for a normal mean with right-censoring at a: the E-step completes each
/// censored unit with theta + phi(a-theta)/(1-Phi(a-theta)), the M-step
/// averages.
inline std::vector<double> em_censored_normal(const std::vector<double>& y, double a,
                                              std::size_t n_total, double theta0,
                                              double tol = 1e-6) {
  const std::size_t m = y.size();
  if (n_total < m) throw domain_error("em_censored_normal: n_total < observed count");
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(m);
  std::vector<double> path{theta0};
  double cur = theta0;
  const double nm = static_cast<double>(n_total - m);
  const double nd = static_cast<double>(n_total);
  for (int guard = 0; guard < 100000; ++guard) {
    const double ez = cur + normal_mills_inverse(a - cur);
    const double next = (static_cast<double>(m) * ybar + nm * ez) / nd;
    path.push_back(next);
    const double diff = std::fabs(next - cur);
    cur = next;
    if (diff < tol) break;
  }
  return path;
}

/// Censored-normal observed-data log-likelihood (for monotonicity checks).
inline double censored_normal_loglik(const std::vector<double>& y, double a,
                                     std::size_t n_total, double theta) {
  double ll = static_cast<double>(n_total - y.size()) * log_normal_cdf(theta - a);
  for (double v : y) ll += normal_logpdf(v - theta);
  return ll;
}

struct ExpMixturePath {
  // columns p, lambda, mu per iteration
  std::vector<std::array<double, 3>> path;
  bool degenerate_component = false;
};

/// EM for the two-exponential mixture with the update exactly as the
/// exercise prints it: p = P/n, lambda = S1/P, mu = S2/P. The printed M-step
/// inverts the usual rate estimate, and on the 12-point data it collapses
/// both components onto the sample mean; the degenerate flag reports that.
inline ExpMixturePath em_exp_mixture(const std::vector<double>& x,
                                     std::array<double, 3> start, double tol = 1e-5) {
  auto [p, lam, mu] = start;
  if (!(p > 0.0 && p < 1.0) || lam <= 0.0 || mu <= 0.0)
    throw domain_error("em_exp_mixture: start must have p in (0,1) and positive rates");
  const double n = static_cast<double>(x.size());
  ExpMixturePath out;
  out.path.push_back(start);
  for (int guard = 0; guard < 100000; ++guard) {
    double sp = 0.0, s1 = 0.0, s2 = 0.0;
    for (double xi : x) {
      const double f1 = p * lam * std::exp(-lam * xi);
      const double f2 = (1.0 - p) * mu * std::exp(-mu * xi);
      const double r = f1 / (f1 + f2);
      sp += r;
      s1 += xi * r;
      s2 += xi * (1.0 - r);
    }
    const std::array<double, 3> next{sp / n, s1 / sp, s2 / sp};
    const double diff = std::fabs(next[0] - p) + std::fabs(next[1] - lam) +
                        std::fabs(next[2] - mu);
    p = next[0];
    lam = next[1];
    mu = next[2];
    out.path.push_back(next);
    if (diff < tol) break;  // the printed rule is diff * 1e5 < 1
  }
  const auto& last = out.path.back();
  const double sep = std::fabs(last[1] - last[2]) / (last[1] + last[2]);
  if (sep < 1e-3 || last[0] < 1e-3 || last[0] > 1.0 - 1e-3)
    out.degenerate_component = true;
  return out;
}

inline double exp_mixture_loglik(const std::vector<double>& x, std::array<double, 3> th) {
  double ll = 0.0;
  for (double xi : x)
    ll += std::log(th[0] * th[1] * std::exp(-th[1] * xi) +
                   (1.0 - th[0]) * th[2] * std::exp(-th[2] * xi));
  return ll;
}

}  // namespace carlo
