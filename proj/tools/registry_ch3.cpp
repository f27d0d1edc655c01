#include <array>
#include <cmath>

#include "carlo/diagnostics.hpp"
#include "carlo/distributions.hpp"
#include "carlo/integrate.hpp"
#include "registry.hpp"

namespace carlo::registry {

namespace {

// target of the proposal-comparison exercise, unnormalized
double fitz_target(double x) {
  if (x <= 0.0) return 0.0;
  const double s = std::sin(x);
  return std::exp(-std::sqrt(x)) * s * s;
}

}  // namespace

// The three weight vectors exactly as the exercise prints them. The first
// line's formula multiplies by dexp rather than dividing by the proposal
// density 0.5 exp(-|x|); it is reproduced verbatim because the exercise's
// reported ranking depends on it.
std::array<WeightedSample, 3> fitz_printed_weight_sets(std::size_t n, RngStream& s1,
                                                       RngStream& s2, RngStream& s3) {
  std::array<WeightedSample, 3> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = -std::log(s1.uniform());
    const double x1 = (s1.uniform() < 0.5 ? -1.0 : 1.0) * e;
    const double v1 = x1 > 0.0 ? fitz_target(x1) / 0.5 * std::exp(-x1) : 0.0;
    out[0].points.push_back(x1);
    out[0].log_weights.push_back(v1 > 0.0 ? std::log(v1) : -1e300);

    const double x2 = 2.0 * std::tan(kPi * (s2.uniform() - 0.5));
    const double v2 = fitz_target(x2) * (kPi * (1.0 + x2 * x2 / 4.0));
    out[1].points.push_back(x2);
    out[1].log_weights.push_back(v2 > 0.0 ? std::log(v2) : -1e300);

    const double x3 = normal_quantile(s3.uniform());
    const double v3 = fitz_target(x3) / normal_pdf(x3);
    out[2].points.push_back(x3);
    out[2].log_weights.push_back(v3 > 0.0 ? std::log(v3) : -1e300);
  }
  return out;
}

void add_ch3(std::vector<ExperimentDef>& defs) {
  defs.push_back(
      {"ch3.cauchy-normal-posterior", "3",
       "posterior mean under a Cauchy prior as a ratio of expectations", "", 10000, 1,
       {"x"},
       [](RunContext& ctx) {
         const double x = ctx.param_or("x", 4.0);
         RngStream s = ctx.stream();
         const auto res =
             posterior_ratio(x, PosteriorRatioKind::cauchy_prior_normal_lik, ctx.spec.n, s);
         ctx.estimate("delta", res.ratio.estimate());
         ctx.se("delta", res.ratio.se());
         ctx.estimate("required_n_3digits",
                      static_cast<double>(required_sample_size(
                          std::max(res.sigma_hat_numerator, res.sigma_hat_denominator), 3)));
         RngStream s2 = ctx.stream(2);
         const auto other =
             posterior_ratio(x, PosteriorRatioKind::normal_prior_cauchy_lik, ctx.spec.n, s2);
         ctx.estimate("delta_normal_side", other.ratio.estimate());
         ctx.estimate("required_n_3digits_normal_side",
                      static_cast<double>(required_sample_size(
                          std::max(other.sigma_hat_numerator, other.sigma_hat_denominator), 3)));
         ctx.band("running_delta", res.ratio);
         ctx.chains.push_back(series_as_trace(res.ratio.means, "delta"));
       }});

  defs.push_back(
      {"ch3.tail-normal-20", "3",
       "P(Z > 20) by the uniform change of variable on (0, 1/20)", "", 10000, 1, {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         auto [run, ws] = normal_tail_uniform(20.0, ctx.spec.n, s);
         ctx.estimate("tail", run.estimate());
         ctx.se("tail", run.se());
         ctx.estimate("tail_exact", std::exp(log_normal_cdf(-20.0)));
         ctx.band("running_tail", run);
         ctx.chains.push_back(series_as_trace(run.means, "estimate"));
       }});

  defs.push_back(
      {"ch3.tail-normal-45", "3", "P(Z > 4.5) by the shifted exponential", "", 10000, 1,
       {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         auto [run, ws] = tail_probability_shifted(TailKind::normal, 4.5, ctx.spec.n, s);
         const auto rep = divergence_flag(ws);
         ctx.estimate("tail", run.estimate());
         ctx.se("tail", run.se());
         ctx.estimate("tail_exact", 1.0 - normal_cdf(4.5));
         ctx.estimate("divergence_flag", rep.flagged ? 1.0 : 0.0);
         ctx.band("running_tail", run);
         ctx.chains.push_back(series_as_trace(run.means, "estimate"));
       }});

  defs.push_back(
      {"ch3.tail-chisq-25", "3", "P(chisq3 > 25) by the shifted exponential", "", 10000,
       1, {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         auto [run, ws] = tail_probability_shifted(TailKind::chisq3, 25.0, ctx.spec.n, s);
         ctx.estimate("tail", run.estimate());
         ctx.se("tail", run.se());
         ctx.estimate("tail_reference", 1.544050e-05);
         ctx.band("running_tail", run);
         ctx.chains.push_back(series_as_trace(run.means, "estimate"));
       }});

  defs.push_back(
      {"ch3.tail-t5-50", "3",
       "P(t5 > 50) by the shifted exponential: an infinite-variance estimator", "",
       10000, 1, {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         auto [run, ws] = tail_probability_shifted(TailKind::t5, 50.0, ctx.spec.n, s);
         const auto rep = divergence_flag(ws);
         ctx.estimate("tail", run.estimate());
         ctx.se("tail", run.se());
         ctx.estimate("tail_exact", 3.023879e-08);
         ctx.estimate("divergence_flag", rep.flagged ? 1.0 : 0.0);
         ctx.estimate("max_normalized_weight", rep.max_normalized_weight);
         ctx.note("the estimate cannot be trusted; the flag is the deliverable");
         ctx.band("running_tail", run);
         ctx.chains.push_back(series_as_trace(run.means, "estimate"));
       }});

  defs.push_back(
      {"ch3.is-small-n", "3",
       "100-draw importance estimate of P(Z > 4.5) and the naive sampling bound", "",
       100, 1, {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         auto [run, ws] = tail_probability_shifted(TailKind::normal, 4.5, ctx.spec.n, s);
         const auto w = ws.weights();
         const double var_mean = var_of(w) / static_cast<double>(ctx.spec.n);
         ctx.estimate("tail", run.estimate());
         ctx.estimate("estimator_variance", var_mean);
         const double p = 1.0 - normal_cdf(4.5);
         ctx.estimate("naive_bound",
                      static_cast<double>(required_sample_size(std::sqrt(p * (1.0 - p)), 6)));
         ctx.chains.push_back(series_as_trace(w, "weight"));
       }});

  defs.push_back(
      {"ch3.fitz-proposals", "3",
       "importance proposals ranked by weight ESS: double exponential, Cauchy, normal",
       "", 10000, 1, {},
       [](RunContext& ctx) {
         auto ltarget = [](double x) {
           const double v = fitz_target(x);
           return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
         };
         auto h = [](double x) { return x; };
         RngStream s1 = ctx.stream(1), s2 = ctx.stream(2), s3 = ctx.stream(3);
         auto [r1, w1] = is_estimate(ltarget, DistributionSpec::double_exponential(0.0, 1.0),
                                     h, ctx.spec.n, s1, true);
         auto [r2, w2] = is_estimate(ltarget, DistributionSpec::cauchy(0.0, 2.0), h,
                                     ctx.spec.n, s2, true);
         auto [r3, w3] = is_estimate(ltarget, DistributionSpec::normal(0.0, 1.0), h,
                                     ctx.spec.n, s3, true);
         ctx.estimate("ess_double_exponential", ess_weights(w1));
         ctx.estimate("ess_cauchy_scale2", ess_weights(w2));
         ctx.estimate("ess_normal", ess_weights(w3));
         ctx.estimate("mean_double_exponential", r1.estimate());
         // The ESS ranking the exercise reports comes from its printed
         // weight lines, whose first one multiplies by the proposal density
         // instead of dividing (R: targ/.5*dexp(x)); those bounded weights
         // are what make the double exponential look best. Both sets are
         // reported; see the printed_* estimates for the reproduced ranking.
         RngStream p1 = ctx.stream(11), p2 = ctx.stream(12), p3 = ctx.stream(13);
         const auto printed = fitz_printed_weight_sets(ctx.spec.n, p1, p2, p3);
         ctx.estimate("printed_ess_double_exponential", ess_weights(printed[0]));
         ctx.estimate("printed_ess_cauchy_scale2", ess_weights(printed[1]));
         ctx.estimate("printed_ess_normal", ess_weights(printed[2]));
         ctx.band("running_de", r1);
         ctx.band("running_cauchy", r2);
         ctx.band("running_normal", r3);
         ctx.chains.push_back(series_as_trace(w1.weights(), "weight_de"));
       }});

  defs.push_back(
      {"ch3.marginal-joint", "3",
       "marginal density from joint draws; exact answer (1+x)^-2", "", 100000, 1,
       {"x_star"},
       [](RunContext& ctx) {
         const double x_star = ctx.param_or("x_star", 1.0);
         RngStream s = ctx.stream();
         std::vector<std::pair<double, double>> pairs(ctx.spec.n);
         const auto expo = DistributionSpec::exponential(1.0);
         for (auto& pr : pairs) {
           const double y = expo.sample(s);
           const double x = DistributionSpec::gamma(1.0, y).sample(s);
           pr = {x, y};
         }
         auto joint = [](double x, double y) {
           if (x < 0.0 || y <= 0.0) return -std::numeric_limits<double>::infinity();
           return std::log(y) - y * x - y;
         };
         const auto w = DistributionSpec::gamma(7.0, 3.0);
         const double est = marginal_from_joint(x_star, pairs, w, joint);
         ctx.estimate("marginal", est);
         ctx.estimate("marginal_exact", 1.0 / ((1.0 + x_star) * (1.0 + x_star)));
         std::vector<double> xs;
         xs.reserve(pairs.size());
         for (const auto& pr : pairs) xs.push_back(pr.first);
         ctx.chains.push_back(series_as_trace(xs, "x"));
         ctx.histogram("histogram_x", xs);
       }});

  defs.push_back(
      {"ch3.evidence-estimators", "3",
       "marginal likelihood by prior sampling and by the harmonic-mean identity", "",
       100000, 1, {"x"},
       [](RunContext& ctx) {
         const double x = ctx.param_or("x", 1.5);
         // theta ~ N(0,1), x | theta ~ N(theta,1); m(x) = N(x; 0, 2)
         auto loglik = [x](double th) { return normal_logpdf(x - th); };
         auto logprior = [](double th) { return normal_logpdf(th); };
         const double m_exact = normal_pdf(x / std::sqrt(2.0)) / std::sqrt(2.0);
         RngStream s = ctx.stream();
         const auto prior = DistributionSpec::normal(0.0, 1.0);
         std::vector<double> prior_draws(ctx.spec.n);
         for (auto& v : prior_draws) v = prior.sample(s);
         const double m_prior = evidence_from_sampling(prior_draws, loglik, logprior, prior);
         const auto post = DistributionSpec::normal(x / 2.0, std::sqrt(0.5));
         std::vector<double> post_draws(ctx.spec.n);
         for (auto& v : post_draws) v = post.sample(s);
         const double m_harmonic = harmonic_mean_evidence(post_draws, loglik, logprior, post);
         ctx.estimate("evidence_prior_sampling", m_prior);
         ctx.estimate("evidence_harmonic", m_harmonic);
         ctx.estimate("evidence_exact", m_exact);
         ctx.chains.push_back(series_as_trace(post_draws, "theta"));
         ctx.histogram("histogram_theta", post_draws);
       }});
}

}  // namespace carlo::registry
