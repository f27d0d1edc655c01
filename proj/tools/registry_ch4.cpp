#include <cmath>

#include "carlo/accept_reject.hpp"
#include "carlo/distributions.hpp"
#include "carlo/integrate.hpp"
#include "carlo/parallel.hpp"
#include "carlo/variance_reduction.hpp"
#include "registry.hpp"

namespace carlo::registry {

void add_ch4(std::vector<ExperimentDef>& defs) {
  defs.push_back(
      {"ch4.bridge-ratio", "4",
       "ratio of normalizing constants: direct estimator vs bridge identity", "", 10000,
       1, {},
       [](RunContext& ctx) {
         auto t1 = [](double x) { return -0.5 * x * x; };                       // c1 = sqrt(2pi)
         auto t2 = [](double x) { return std::log(3.0) - 0.5 * (x - 0.5) * (x - 0.5); };
         RngStream s = ctx.stream();
         const auto pi1 = DistributionSpec::normal(0.0, 1.0);
         const auto pi2 = DistributionSpec::normal(0.5, 1.0);
         std::vector<double> d1(ctx.spec.n), d2(ctx.spec.n);
         for (auto& v : d1) v = pi1.sample(s);
         for (auto& v : d2) v = pi2.sample(s);
         const double rho_bridge =
             bridge_ratio(t1, t2, d1, d2, [](double) { return 1.0; });
         // direct: mean of pi1~/pi2~ under pi2
         std::vector<double> direct(ctx.spec.n);
         for (std::size_t i = 0; i < ctx.spec.n; ++i)
           direct[i] = std::exp(t1(d2[i]) - t2(d2[i]));
         const auto run = running_mean(direct);
         ctx.estimate("rho_bridge", rho_bridge);
         ctx.estimate("rho_direct", run.estimate());
         ctx.se("rho_direct", run.se());
         ctx.estimate("rho_exact", 1.0 / 3.0);
         ctx.band("running_direct", run);
         ctx.chains.push_back(series_as_trace(direct, "ratio_term"));
       }});

  defs.push_back(
      {"ch4.ess-weights", "4", "weight effective sample size and its bounds", "", 1000,
       1, {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         WeightedSample ws;
         ws.points.resize(ctx.spec.n);
         ws.log_weights.resize(ctx.spec.n);
         for (std::size_t i = 0; i < ctx.spec.n; ++i) {
           ws.points[i] = static_cast<double>(i);
           ws.log_weights[i] = std::log(s.uniform());
         }
         ctx.estimate("ess_random", ess_weights(ws));
         WeightedSample equal{std::vector<double>(ctx.spec.n, 0.0),
                              std::vector<double>(ctx.spec.n, 0.0), false};
         ctx.estimate("ess_equal", ess_weights(equal));
         WeightedSample point = equal;
         for (std::size_t i = 1; i < ctx.spec.n; ++i)
           point.log_weights[i] = -std::numeric_limits<double>::infinity();
         ctx.estimate("ess_single", ess_weights(point));
         ctx.chains.push_back(series_as_trace(ws.log_weights, "log_weight"));
       }});

  defs.push_back(
      {"ch4.running-cov", "4", "covariance of nested running means equals sigma2/max(k,k')",
       "", 10000, 1, {"k", "k_prime", "sigma2"},
       [](RunContext& ctx) {
         const auto k = static_cast<std::size_t>(ctx.param_or("k", 10));
         const auto kp = static_cast<std::size_t>(ctx.param_or("k_prime", 100));
         const double sigma2 = ctx.param_or("sigma2", 1.0);
         RngStream s = ctx.stream();
         const auto [emp, ana] = running_mean_cov(k, kp, sigma2, ctx.spec.n, s);
         ctx.estimate("empirical_cov", emp);
         ctx.estimate("analytic_cov", ana);
         ctx.chains.push_back(series_as_trace({emp, ana}, "cov"));
       }});

  defs.push_back(
      {"ch4.rb-expsquare", "4",
       "conditional expectation of exp(-X^2) in closed form vs Monte Carlo", "", 100000,
       1, {"mu", "sigma2", "y"},
       [](RunContext& ctx) {
         const double mu = ctx.param_or("mu", 1.0);
         const double sigma2 = ctx.param_or("sigma2", 1.0);
         const double y = ctx.param_or("y", 2.0);
         const double closed = rb_exp_negsquare(mu, sigma2, y);
         RngStream s = ctx.stream();
         std::vector<double> terms(ctx.spec.n);
         const double sd = std::sqrt(sigma2 / y);
         for (auto& t : terms) {
           const double x = mu + sd * normal_quantile(s.uniform());
           t = std::exp(-x * x);
         }
         const auto run = running_mean(terms);
         ctx.estimate("closed_form", closed);
         ctx.estimate("monte_carlo", run.estimate());
         ctx.se("monte_carlo", run.se());
         ctx.band("running_mc", run);
         ctx.chains.push_back(series_as_trace(terms, "term"));
       }});

  defs.push_back(
      {"ch4.antithetic", "4", "antithetic pairs for a monotone transform", "", 10000, 1,
       {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         const auto pe = antithetic_estimate([](double u) { return std::exp(u); },
                                             ctx.spec.n, s);
         ctx.estimate("plain", pe.plain.estimate());
         ctx.estimate("reduced", pe.reduced.estimate());
         ctx.estimate("exact", std::exp(1.0) - 1.0);
         ctx.estimate("variance_ratio", pe.variance_ratio);
         ctx.band("running_plain", pe.plain);
         ctx.band("running_reduced", pe.reduced);
         ctx.chains.push_back(series_as_trace(pe.reduced.means, "reduced_mean"));
       }});

  defs.push_back(
      {"ch4.rb-mixtures", "4",
       "Rao-Blackwellization of three mixture draws (Poisson-gamma, t^2, beta-binomial)",
       "", 1000, 100, {"a", "b", "n_trials"},
       [](RunContext& ctx) {
         const double a = ctx.param_or("a", 4.0), b = ctx.param_or("b", 2.0);
         const int n_trials = static_cast<int>(ctx.param_or("n_trials", 10));
         RngStream s1 = ctx.stream(1), s2 = ctx.stream(2), s3 = ctx.stream(3);
         const auto pg = rb_mixture_compare(RbMixtureModel::poisson_gamma, a, b, 0,
                                            ctx.spec.n, ctx.spec.replications, s1);
         const auto tg = rb_mixture_compare(RbMixtureModel::normal_gamma_tsq, a, b, 0,
                                            ctx.spec.n, ctx.spec.replications, s2);
         const auto bb = rb_mixture_compare(RbMixtureModel::beta_binomial, a, b, n_trials,
                                            ctx.spec.n, ctx.spec.replications, s3);
         ctx.estimate("pg_plain", pg.plain.estimate());
         ctx.estimate("pg_reduced", pg.reduced.estimate());
         ctx.estimate("pg_var_ratio_reps", pg.reduced_replicate_var / pg.plain_replicate_var);
         ctx.estimate("tsq_var_ratio_reps", tg.reduced_replicate_var / tg.plain_replicate_var);
         ctx.estimate("bb_var_ratio_reps", bb.reduced_replicate_var / bb.plain_replicate_var);
         ctx.estimate("pg_target", a / b);
         ctx.estimate("bb_target", n_trials * a / (a + b));
         ctx.band("running_pg_plain", pg.plain);
         ctx.band("running_pg_reduced", pg.reduced);
         ctx.chains.push_back(series_as_trace(pg.reduced.means, "pg_reduced_mean"));
       }});

  defs.push_back(
      {"ch4.recycle", "4",
       "recycling rejected accept-reject draws with exact conditional weights", "", 12,
       2000, {"m"},
       [](RunContext& ctx) {
         // N(0,1) from a double-exponential envelope, h(x) = x^2
         const double log_M = laplace_normal_envelope(1.0);
         const auto prop = DistributionSpec::double_exponential(0.0, 1.0);
         const auto m = static_cast<std::size_t>(ctx.param_or("m", 4));
         auto h = [](double x) { return x * x; };
         std::vector<double> d1(ctx.spec.replications), d2(ctx.spec.replications);
         RngStream root = ctx.stream();
         for (std::size_t r = 0; r < ctx.spec.replications; ++r) {
           RngStream s = root.substream(r + 1);
           Envelope env{[](double x) { return normal_logpdf(x); }, prop, log_M, false};
           // draw until m acceptances, cap the proposal count at the
           // enumeration bound by retrying the replicate
           ArResult res;
           do {
             res = ar_sample(env, m, s);
           } while (res.proposals_used > 18);
           double acc_sum = 0.0;
           for (double x : res.accepted) acc_sum += h(x);
           d1[r] = acc_sum / static_cast<double>(m);
           const auto rho =
               recycle_weights(res.weights, m, res.proposals_used - 1);
           double rb = 0.0;
           for (std::size_t j = 0; j < res.proposals.size(); ++j)
             rb += rho[j] * h(res.proposals[j]);
           d2[r] = rb / static_cast<double>(m);
         }
         ctx.estimate("delta1_mean", mean_of(d1));
         ctx.estimate("delta2_mean", mean_of(d2));
         ctx.estimate("delta1_var", var_of(d1));
         ctx.estimate("delta2_var", var_of(d2));
         ctx.chains.push_back(series_as_trace(d2, "delta2"));
         ctx.histogram("histogram_delta2", d2);
       }});

  defs.push_back(
      {"ch4.control-variates", "4", "optimal control variate for E[exp(U)]", "", 10000,
       1, {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         std::vector<double> d(ctx.spec.n), c(ctx.spec.n);
         for (std::size_t i = 0; i < ctx.spec.n; ++i) {
           const double u = s.uniform();
           d[i] = std::exp(u);
           c[i] = u;
         }
         const auto res = control_variate(d, c, 0.5);
         ctx.estimate("beta_star", res.beta_star);
         ctx.estimate("adjusted", res.adjusted_estimate);
         ctx.estimate("plain", mean_of(d));
         ctx.estimate("exact", std::exp(1.0) - 1.0);
         ctx.estimate("variance_ratio", res.variance_ratio);
         ctx.chains.push_back(series_as_trace(d, "d"));
       }});

  defs.push_back(
      {"ch4.bootstrap-mean", "4", "double bootstrap for a quantile of the mean", "", 50,
       1000, {"level", "q"},
       [](RunContext& ctx) {
         const double level = ctx.param_or("level", 0.90);
         const double q = ctx.param_or("q", 0.95);
         RngStream data_stream = ctx.stream(1);
         std::vector<double> data(ctx.spec.n);
         for (auto& v : data) v = 5.0 + normal_quantile(data_stream.uniform());
         RngStream s = ctx.stream(2);
         const auto simple =
             bootstrap_ci(data, mean_stat(), ctx.spec.replications, 0, level, s);
         const auto dbl = bootstrap_ci(data, quantile_of_mean_stat(q),
                                       ctx.spec.replications, ctx.spec.replications,
                                       level, s);
         ctx.estimate("mean_ci_lo", simple.first);
         ctx.estimate("mean_ci_hi", simple.second);
         ctx.estimate("quantile_ci_lo", dbl.first);
         ctx.estimate("quantile_ci_hi", dbl.second);
         ctx.chains.push_back(series_as_trace(data, "y"));
         ctx.histogram("histogram_y", data);
       }});
}

}  // namespace carlo::registry
