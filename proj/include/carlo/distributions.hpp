#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "carlo/errors.hpp"
#include "carlo/rng.hpp"
#include "carlo/special.hpp"

namespace carlo {

enum class Family {
  uniform,
  normal,
  exponential,
  gamma,
  inverse_gamma,
  beta,
  cauchy,
  pareto,
  double_exponential,
  poisson,
  binomial,
  dirichlet,
  noncentral_chisq,
  truncated_normal,
};

namespace detail {

// Invert a monotone cdf by bisection on [lo, hi]; 200 halvings exhaust
// double precision with margin.
template <typename Cdf>
double invert_monotone_cdf(const Cdf& cdf, double p, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double sample_std_normal(RngStream& stream) {
  return normal_quantile(stream.uniform());
}

// Marsaglia-Tsang squeeze; consumes a variable number of uniforms.
inline double sample_std_gamma(double shape, RngStream& stream) {
  if (shape < 1.0) {
    const double u = stream.uniform();
    return sample_std_gamma(shape + 1.0, stream) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_std_normal(stream);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

}  // namespace detail

/// A named distribution plus its parameter vector, exposing the density,
/// cdf, quantile and a sampler as one object. Parameters are validated on
/// construction (shapes/rates positive, probabilities in [0,1], ...).
class DistributionSpec {
 public:
  DistributionSpec(Family family, std::vector<double> params)
      : family_(family), params_(std::move(params)) {
    validate();
  }

  static DistributionSpec uniform(double a, double b) { return {Family::uniform, {a, b}}; }
  static DistributionSpec normal(double mu, double sigma) { return {Family::normal, {mu, sigma}}; }
  static DistributionSpec exponential(double rate) { return {Family::exponential, {rate}}; }
  static DistributionSpec gamma(double shape, double rate) { return {Family::gamma, {shape, rate}}; }
  static DistributionSpec inverse_gamma(double a, double b) { return {Family::inverse_gamma, {a, b}}; }
  static DistributionSpec beta(double a, double b) { return {Family::beta, {a, b}}; }
  static DistributionSpec cauchy(double loc, double scale) { return {Family::cauchy, {loc, scale}}; }
  static DistributionSpec pareto(double alpha) { return {Family::pareto, {alpha}}; }
  static DistributionSpec double_exponential(double mu, double alpha) {
    return {Family::double_exponential, {mu, alpha}};
  }
  static DistributionSpec poisson(double lambda) { return {Family::poisson, {lambda}}; }
  static DistributionSpec binomial(int n, double p) {
    return {Family::binomial, {static_cast<double>(n), p}};
  }
  static DistributionSpec dirichlet(std::vector<double> alphas) {
    return {Family::dirichlet, std::move(alphas)};
  }
  static DistributionSpec noncentral_chisq(double dof, double lambda) {
    return {Family::noncentral_chisq, {dof, lambda}};
  }
  static DistributionSpec truncated_normal(double mu, double sigma, double lo, double up) {
    return {Family::truncated_normal, {mu, sigma, lo, up}};
  }

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double param(std::size_t i) const { return params_[i]; }

  bool is_discrete() const {
    return family_ == Family::poisson || family_ == Family::binomial;
  }

  double log_density(double x) const {
    const auto& p = params_;
    switch (family_) {
      case Family::uniform:
        return (x >= p[0] && x <= p[1]) ? -std::log(p[1] - p[0])
                                        : -std::numeric_limits<double>::infinity();
      case Family::normal:
        return normal_logpdf((x - p[0]) / p[1]) - std::log(p[1]);
      case Family::exponential:
        return x < 0.0 ? -std::numeric_limits<double>::infinity()
                       : std::log(p[0]) - p[0] * x;
      case Family::gamma:
        return x <= 0.0 ? -std::numeric_limits<double>::infinity()
                        : p[0] * std::log(p[1]) + (p[0] - 1.0) * std::log(x) -
                              p[1] * x - std::lgamma(p[0]);
      case Family::inverse_gamma:
        return x <= 0.0 ? -std::numeric_limits<double>::infinity()
                        : p[0] * std::log(p[1]) - (p[0] + 1.0) * std::log(x) -
                              p[1] / x - std::lgamma(p[0]);
      case Family::beta:
        return (x <= 0.0 || x >= 1.0)
                   ? -std::numeric_limits<double>::infinity()
                   : (p[0] - 1.0) * std::log(x) + (p[1] - 1.0) * std::log1p(-x) -
                         log_beta(p[0], p[1]);
      case Family::cauchy: {
        const double z = (x - p[0]) / p[1];
        return -std::log(kPi * p[1] * (1.0 + z * z));
      }
      case Family::pareto:
        return x <= 1.0 ? -std::numeric_limits<double>::infinity()
                        : std::log(p[0]) - (p[0] + 1.0) * std::log(x);
      case Family::double_exponential:
        return std::log(0.5 * p[1]) - p[1] * std::fabs(x - p[0]);
      case Family::poisson: {
        const double k = std::round(x);
        if (k < 0.0) return -std::numeric_limits<double>::infinity();
        return k * std::log(p[0]) - p[0] - std::lgamma(k + 1.0);
      }
      case Family::binomial: {
        const double k = std::round(x), n = p[0], q = p[1];
        if (k < 0.0 || k > n) return -std::numeric_limits<double>::infinity();
        double lp = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        if (k > 0.0) lp += k * std::log(q);
        if (k < n) lp += (n - k) * std::log1p(-q);
        return lp;
      }
      case Family::noncentral_chisq: {
        if (x <= 0.0) return -std::numeric_limits<double>::infinity();
        // Poisson mixture of central chi-squared densities.
        const double dof = p[0], lam = p[1];
        if (lam == 0.0)
          return DistributionSpec::gamma(dof / 2.0, 0.5).log_density(x);
        double acc = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 500; ++k) {
          const double lw = k * std::log(lam / 2.0) - lam / 2.0 - std::lgamma(k + 1.0);
          const double ld = DistributionSpec::gamma(dof / 2.0 + k, 0.5).log_density(x);
          const double term = lw + ld;
          acc = std::max(acc, term) + std::log1p(std::exp(-std::fabs(acc - term)));
          if (k > lam && lw < acc - 40.0) break;
        }
        return acc;
      }
      case Family::truncated_normal: {
        const double mu = p[0], sig = p[1], lo = p[2], up = p[3];
        if (x < lo || x > up) return -std::numeric_limits<double>::infinity();
        const double lz = std::log(mass_between(mu, sig, lo, up));
        return normal_logpdf((x - mu) / sig) - std::log(sig) - lz;
      }
      case Family::dirichlet:
        throw capability_error("dirichlet has no scalar density");
    }
    throw capability_error("unhandled family");
  }

  double density(double x) const { return std::exp(log_density(x)); }

  double cdf(double x) const {
    const auto& p = params_;
    switch (family_) {
      case Family::uniform:
        return std::clamp((x - p[0]) / (p[1] - p[0]), 0.0, 1.0);
      case Family::normal:
        return normal_cdf((x - p[0]) / p[1]);
      case Family::exponential:
        return x <= 0.0 ? 0.0 : -std::expm1(-p[0] * x);
      case Family::gamma:
        return x <= 0.0 ? 0.0 : gamma_p(p[0], p[1] * x);
      case Family::inverse_gamma:
        return x <= 0.0 ? 0.0 : gamma_q(p[0], p[1] / x);
      case Family::beta:
        return beta_inc(p[0], p[1], x);
      case Family::cauchy:
        return 0.5 + std::atan2(x - p[0], p[1]) / kPi;
      case Family::pareto:
        return x <= 1.0 ? 0.0 : -std::expm1(-p[0] * std::log(x));
      case Family::double_exponential: {
        const double z = x - p[0];
        return z < 0.0 ? 0.5 * std::exp(p[1] * z) : 1.0 - 0.5 * std::exp(-p[1] * z);
      }
      case Family::poisson: {
        if (x < 0.0) return 0.0;
        return gamma_q(std::floor(x) + 1.0, p[0]);
      }
      case Family::binomial: {
        if (x < 0.0) return 0.0;
        const double n = p[0], k = std::floor(x);
        if (k >= n) return 1.0;
        if (p[1] <= 0.0) return 1.0;
        if (p[1] >= 1.0) return 0.0;
        return beta_inc(n - k, k + 1.0, 1.0 - p[1]);
      }
      case Family::noncentral_chisq: {
        if (x <= 0.0) return 0.0;
        const double dof = p[0], lam = p[1];
        double acc = 0.0, w = std::exp(-lam / 2.0);
        for (int k = 0; k < 2000; ++k) {
          acc += w * gamma_p(dof / 2.0 + k, x / 2.0);
          if (k > lam / 2.0 && w < 1e-16) break;
          w *= (lam / 2.0) / (k + 1.0);
        }
        return std::min(acc, 1.0);
      }
      case Family::truncated_normal: {
        const double mu = p[0], sig = p[1], lo = p[2], up = p[3];
        if (x <= lo) return 0.0;
        if (x >= up) return 1.0;
        const double flo = normal_cdf((lo - mu) / sig);
        return (normal_cdf((x - mu) / sig) - flo) / mass_between(mu, sig, lo, up);
      }
      case Family::dirichlet:
        throw capability_error("dirichlet has no scalar cdf");
    }
    throw capability_error("unhandled family");
  }

  /// Inverse cdf. For the discrete families this is the smallest integer k
  /// with cdf(k) >= p.
  double quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("quantile: p must be in (0,1)");
    const auto& par = params_;
    switch (family_) {
      case Family::uniform:
        return par[0] + p * (par[1] - par[0]);
      case Family::normal:
        return par[0] + par[1] * normal_quantile(p);
      case Family::exponential:
        return -std::log1p(-p) / par[0];
      case Family::gamma: {
        const double mean = par[0] / par[1];
        const double sd = std::sqrt(par[0]) / par[1];
        double hi = mean + 10.0 * sd + 1.0;
        while (cdf(hi) < p) hi *= 2.0;
        return detail::invert_monotone_cdf([this](double x) { return cdf(x); }, p, 0.0, hi);
      }
      case Family::inverse_gamma: {
        // 1/X with X ~ Gamma(a, rate b).
        const double x = DistributionSpec::gamma(par[0], par[1]).quantile(1.0 - p);
        return 1.0 / x;
      }
      case Family::beta:
        return detail::invert_monotone_cdf([this](double x) { return cdf(x); }, p, 0.0, 1.0);
      case Family::cauchy:
        return par[0] + par[1] * std::tan(kPi * (p - 0.5));
      case Family::pareto:
        return std::pow(1.0 - p, -1.0 / par[0]);
      case Family::double_exponential:
        return p < 0.5 ? par[0] + std::log(2.0 * p) / par[1]
                       : par[0] - std::log(2.0 * (1.0 - p)) / par[1];
      case Family::poisson:
      case Family::binomial: {
        double k = 0.0;
        const double kmax = (family_ == Family::binomial)
                                ? par[0]
                                : par[0] + 20.0 * std::sqrt(par[0] + 1.0) + 200.0;
        while (k < kmax && cdf(k) < p) k += 1.0;
        return k;
      }
      case Family::noncentral_chisq: {
        double hi = par[0] + par[1] + 10.0 * std::sqrt(2.0 * (par[0] + 2.0 * par[1])) + 10.0;
        while (cdf(hi) < p) hi *= 2.0;
        return detail::invert_monotone_cdf([this](double x) { return cdf(x); }, p, 0.0, hi);
      }
      case Family::truncated_normal: {
        const double mu = par[0], sig = par[1], lo = par[2], up = par[3];
        const double flo = normal_cdf((lo - mu) / sig);
        const double mass = mass_between(mu, sig, lo, up);
        const double q = mu + sig * normal_quantile(std::clamp(flo + p * mass, 1e-320, 1.0 - 1e-16));
        return std::clamp(q, lo, up);
      }
      case Family::dirichlet:
        throw capability_error("dirichlet has no scalar quantile");
    }
    throw capability_error("unhandled family");
  }

  /// One draw. Gamma-type families use rejection (variable uniform
  /// consumption); everything else inverts the cdf on a single uniform.
  double sample(RngStream& stream) const {
    const auto& p = params_;
    switch (family_) {
      case Family::gamma:
        return detail::sample_std_gamma(p[0], stream) / p[1];
      case Family::inverse_gamma:
        return p[1] / detail::sample_std_gamma(p[0], stream);
      case Family::beta: {
        const double g1 = detail::sample_std_gamma(p[0], stream);
        const double g2 = detail::sample_std_gamma(p[1], stream);
        return g1 / (g1 + g2);
      }
      case Family::noncentral_chisq: {
        // Poisson mixture representation.
        const double k =
            p[1] > 0.0 ? DistributionSpec::poisson(p[1] / 2.0).sample(stream) : 0.0;
        return DistributionSpec::gamma(p[0] / 2.0 + k, 0.5).sample(stream);
      }
      case Family::poisson:
      case Family::binomial:
        return discrete_inverse(stream.uniform());
      case Family::dirichlet:
        throw capability_error("use dirichlet_sample for vector draws");
      default:
        return quantile(stream.uniform());
    }
  }

  /// Smallest k with cdf(k) >= u, walking a pmf-recursion table truncated at
  /// the 1 - 1e-9 quantile; support starts at zero so no negative values.
  double discrete_inverse(double u) const {
    if (!is_discrete()) throw capability_error("discrete_inverse needs a discrete family");
    if (family_ == Family::binomial) {
      const double n = params_[0], p = params_[1];
      if (p <= 0.0 || n == 0.0) return 0.0;
      if (p >= 1.0) return n;
      const double ratio = p / (1.0 - p);
      double k = 0.0, pmf = std::exp(n * std::log1p(-p)), cum = pmf;
      while (k < n && cum < u && cum < 1.0 - 1e-9) {
        pmf *= (n - k) / (k + 1.0) * ratio;
        k += 1.0;
        cum += pmf;
      }
      return k;
    }
    const double lam = params_[0];
    double k = 0.0, pmf = std::exp(-lam), cum = pmf;
    while (cum < u && cum < 1.0 - 1e-9) {
      pmf *= lam / (k + 1.0);
      k += 1.0;
      cum += pmf;
    }
    return k;
  }

  std::string name() const {
    switch (family_) {
      case Family::uniform: return "uniform";
      case Family::normal: return "normal";
      case Family::exponential: return "exponential";
      case Family::gamma: return "gamma";
      case Family::inverse_gamma: return "inverse_gamma";
      case Family::beta: return "beta";
      case Family::cauchy: return "cauchy";
      case Family::pareto: return "pareto";
      case Family::double_exponential: return "double_exponential";
      case Family::poisson: return "poisson";
      case Family::binomial: return "binomial";
      case Family::dirichlet: return "dirichlet";
      case Family::noncentral_chisq: return "noncentral_chisq";
      case Family::truncated_normal: return "truncated_normal";
    }
    return "?";
  }

 private:
  static double mass_between(double mu, double sig, double lo, double up) {
    const double flo = std::isinf(lo) ? 0.0 : normal_cdf((lo - mu) / sig);
    const double fup = std::isinf(up) ? 1.0 : normal_cdf((up - mu) / sig);
    const double mass = fup - flo;
    if (mass < 1e-300)
      throw domain_error("truncated_normal: truncation interval mass underflows");
    return mass;
  }

  void require(bool ok, const char* what) const {
    if (!ok) throw domain_error(std::string(name()) + ": " + what);
  }

  void arity(std::size_t n) const {
    require(params_.size() == n, "wrong parameter count");
  }

  void validate() const {
    switch (family_) {
      case Family::uniform: arity(2); require(params_[0] < params_[1], "needs a < b"); break;
      case Family::normal: arity(2); require(params_[1] > 0.0, "sigma must be positive"); break;
      case Family::exponential: arity(1); require(params_[0] > 0.0, "rate must be positive"); break;
      case Family::gamma:
        arity(2);
        require(params_[0] > 0.0 && params_[1] > 0.0, "shape and rate must be positive");
        break;
      case Family::inverse_gamma:
        arity(2);
        require(params_[0] > 0.0 && params_[1] > 0.0, "a and b must be positive");
        break;
      case Family::beta:
        arity(2);
        require(params_[0] > 0.0 && params_[1] > 0.0, "shapes must be positive");
        break;
      case Family::cauchy: arity(2); require(params_[1] > 0.0, "scale must be positive"); break;
      case Family::pareto: arity(1); require(params_[0] > 0.0, "alpha must be positive"); break;
      case Family::double_exponential:
        arity(2);
        require(params_[1] > 0.0, "alpha must be positive");
        break;
      case Family::poisson: arity(1); require(params_[0] > 0.0, "lambda must be positive"); break;
      case Family::binomial:
        arity(2);
        require(params_[0] >= 0.0 && params_[0] == std::floor(params_[0]), "n must be a count");
        require(params_[1] >= 0.0 && params_[1] <= 1.0, "p must be in [0,1]");
        break;
      case Family::dirichlet:
        require(params_.size() >= 2, "needs at least two alphas");
        for (double a : params_) require(a > 0.0, "alphas must be positive");
        break;
      case Family::noncentral_chisq:
        arity(2);
        require(params_[0] >= 1.0, "dof must be >= 1");
        require(params_[1] >= 0.0, "noncentrality must be >= 0");
        break;
      case Family::truncated_normal:
        arity(4);
        require(params_[1] > 0.0, "sigma must be positive");
        require(params_[2] < params_[3], "needs lo < up");
        break;
    }
  }

  Family family_;
  std::vector<double> params_;
};

/// quantile(u) for a single uniform draw u; output has cdf F.
inline double inverse_cdf_sample(const DistributionSpec& spec, RngStream& stream) {
  if (spec.family() == Family::dirichlet)
    throw capability_error("inverse_cdf_sample: no quantile for dirichlet");
  return spec.quantile(stream.uniform());
}

/// Table inversion for poisson/binomial: smallest k with cdf(k) >= u.
inline long discrete_inverse_sample(const DistributionSpec& spec, RngStream& stream) {
  return static_cast<long>(spec.discrete_inverse(stream.uniform()));
}

/// Counts exponential(lambda) inter-arrivals until their sum exceeds 1, so the
/// value is 1 + Poisson(lambda). The unit offset is part of the construction;
/// subtract one to compare against the table sampler.
inline long poisson_waiting_sample(double lambda, RngStream& stream) {
  if (lambda <= 0.0) throw domain_error("poisson_waiting_sample: lambda must be positive");
  const DistributionSpec expo = DistributionSpec::exponential(lambda);
  double sum = expo.sample(stream);
  long k = 1;
  while (sum < 1.0) {
    sum += expo.sample(stream);
    ++k;
  }
  return k;
}

/// One Box-Muller pair of independent standard normals (two uniforms in).
inline std::pair<double, double> box_muller_pair(RngStream& stream) {
  const double u1 = stream.uniform();
  const double u2 = stream.uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
}

/// Sum of 12 uniforms on (-1/2, 1/2): mean 0, variance 1, support [-6, 6].
/// The tails are too short for the draw to pass as normal far out.
inline double clt12_normal(RngStream& stream) {
  double s = 0.0;
  for (int i = 0; i < 12; ++i) s += stream.uniform() - 0.5;
  return s;
}

/// Exact inverse-cdf draw from N(mu, sigma^2) restricted to [lo, up].
inline double truncated_normal_sample(double mu, double sigma, double lo, double up,
                                      RngStream& stream) {
  return DistributionSpec::truncated_normal(mu, sigma, lo, up).sample(stream);
}

enum class NoncentralMethod { poisson_mixture, normal_square };

/// Two routes to the noncentral chi-squared: a Poisson number of extra
/// central degrees of freedom, or chisq(p-1) plus a squared shifted normal.
inline double noncentral_chisq_sample(double dof, double lambda, RngStream& stream,
                                      NoncentralMethod method) {
  if (dof < 1.0 || lambda < 0.0)
    throw domain_error("noncentral_chisq_sample: need dof >= 1 and lambda >= 0");
  if (method == NoncentralMethod::poisson_mixture)
    return DistributionSpec::noncentral_chisq(dof, lambda).sample(stream);
  double central = 0.0;
  if (dof > 1.0) central = DistributionSpec::gamma((dof - 1.0) / 2.0, 0.5).sample(stream);
  const double z = std::sqrt(lambda) + detail::sample_std_normal(stream);
  return central + z * z;
}

/// Positive simplex draw by normalizing gamma variables.
inline std::vector<double> dirichlet_sample(const std::vector<double>& alphas,
                                            RngStream& stream) {
  for (double a : alphas)
    if (a <= 0.0) throw domain_error("dirichlet_sample: alphas must be positive");
  std::vector<double> g(alphas.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    g[i] = detail::sample_std_gamma(alphas[i], stream);
    total += g[i];
  }
  for (double& v : g) v /= total;
  return g;
}

/// Reciprocal of a Gamma(a, rate b) draw; density b^a y^{-a-1} e^{-b/y} / Gamma(a).
inline double inverse_gamma_sample(double a, double b, RngStream& stream) {
  return DistributionSpec::inverse_gamma(a, b).sample(stream);
}

}  // namespace carlo
