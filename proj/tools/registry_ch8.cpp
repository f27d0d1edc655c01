#include <cmath>

#include "carlo/datasets.hpp"
#include "carlo/diagnostics.hpp"
#include "carlo/distributions.hpp"
#include "carlo/integrate.hpp"
#include "carlo/mcmc.hpp"
#include "carlo/variance_reduction.hpp"
#include "registry.hpp"

namespace carlo::registry {

void add_ch8(std::vector<ExperimentDef>& defs) {
  defs.push_back(
      {"ch8.baseball", "8",
       "hierarchical Gibbs for the batting averages; alpha has a closed-form marginal",
       "embedded", 10000, 1, {},
       [](RunContext& ctx) {
         const auto& y = datasets::baseball();
         RngStream s = ctx.stream();
         Trace tr = gibbs_baseball(y, 0.00434, ctx.spec.n, s);
         const std::size_t alpha_col = y.size() + 1;
         const auto alpha = tr.component_post_burnin(alpha_col);
         ctx.estimate("alpha_mean", mean_of(alpha));
         ctx.estimate("mu_mean", mean_of(tr.component_post_burnin(y.size())));
         // KS of the thinned chain against the quadrature-normalized marginal
         auto marg = [&y](double a) { return baseball_alpha_marginal(a, y, 0.00434); };
         const double z = simpson(marg, 1e-4, 60.0, 6000);
         auto cdf = [&](double a) {
           return simpson(marg, 1e-4, std::max(a, 2e-4), 1200) / z;
         };
         const auto thinned = thin_series(alpha, 20);
         const auto [d, p] = ks_one_sample(thinned, cdf);
         ctx.estimate("alpha_ks_p_closed_form", p);
         ctx.diagnostics["ess_alpha"] = ess_autocorr(alpha);
         ctx.diagnostics["geweke_alpha"] = geweke_z(tr.component(alpha_col));
         const auto traj = ks_half_trajectory(tr.component(alpha_col), 10, 100);
         nlohmann::json kst = nlohmann::json::array();
         for (const auto& [t, pv] : traj) kst.push_back({t, pv});
         ctx.diagnostics["ks_trajectory"] = kst;
         ctx.chains.push_back(std::move(tr));
         ctx.histogram("histogram_alpha", alpha);
       }});

  defs.push_back(
      {"ch8.beta-kernel", "8",
       "the Be(alpha,1)-stationary kernels: detailed balance but slow mixing", "", 10000,
       1, {"alpha"},
       [](RunContext& ctx) {
         const double alpha = ctx.param_or("alpha", 0.2);
         RngStream s1 = ctx.stream(1), s2 = ctx.stream(2);
         Trace bern = beta_kernel_chain(alpha, BetaKernelVariant::bernoulli_move,
                                        ctx.spec.n, s1);
         Trace ratio = beta_kernel_chain(alpha, BetaKernelVariant::ratio_move,
                                         ctx.spec.n, s2);
         const auto xb = bern.component(0);
         ctx.diagnostics["ess_bernoulli"] = ess_autocorr(xb);
         ctx.diagnostics["ess_ratio"] = ess_autocorr(ratio.component(0));
         ctx.accept_rate("bernoulli_move", bern.acceptance_rate());
         ctx.accept_rate("ratio_move", ratio.acceptance_rate());
         // exact detailed-balance residual on a grid
         double worst = 0.0;
         for (int i = 1; i <= 50; ++i)
           for (int j = 1; j <= 50; ++j) {
             const double x = i / 51.0, yv = j / 51.0;
             const double lhs = alpha * std::pow(x, alpha - 1.0) *
                                beta_kernel_density(alpha, x, yv);
             const double rhs = alpha * std::pow(yv, alpha - 1.0) *
                                beta_kernel_density(alpha, yv, x);
             worst = std::max(worst, std::fabs(lhs - rhs));
           }
         ctx.estimate("detailed_balance_residual", worst);
         const auto target = DistributionSpec::beta(alpha, 1.0);
         const auto [d, p] = ks_one_sample(thin_series(bern.component_post_burnin(0), 50),
                                           [&](double v) { return target.cdf(v); });
         ctx.estimate("thinned_ks_p", p);
         const auto quants = cumulative_quantile_data(xb);
         RunningEstimate med;
         med.means.reserve(quants.size());
         med.ses.assign(quants.size(), 0.0);
         for (const auto& row : quants) med.means.push_back(row[1]);
         ctx.band("running_median", med);
         ctx.chains.push_back(std::move(bern));
         ctx.histogram("histogram_x", xb);
       }});

  defs.push_back(
      {"ch8.pima", "8",
       "probit posterior for the diabetes data: five chains and their shrink factor",
       "pima", 10000, 1, {"n_chains"},
       [](RunContext& ctx) {
         const Dataset pima = ctx.load_dataset(CsvSchema::pima);
         const auto n_chains = static_cast<std::size_t>(ctx.param_or("n_chains", 5));
         RngStream s = ctx.stream();
         const auto chains =
             pima_probit_mh(pima.column(0), pima.column(1), n_chains, ctx.spec.n, s);
         std::vector<std::vector<double>> betas;
         betas.reserve(chains.size());
         for (const auto& c : chains) betas.push_back(c.component(0));
         ctx.diagnostics["psrf_beta"] = gelman_rubin_psrf(betas);
         double ess_total = 0.0;
         for (const auto& b : betas) ess_total += ess_autocorr(b);
         ctx.diagnostics["ess_beta_combined"] = ess_total;
         ctx.accept_rate("sweep", chains.front().acceptance_rate());
         ctx.estimate("beta_mean", mean_of(betas.front()));
         ctx.chains = chains;
         ctx.histogram("histogram_beta", betas.front());
       }});

  defs.push_back(
      {"ch8.bootstrap-bands", "8", "bootstrap error bands along an MCMC running mean",
       "", 10000, 1, {"rho", "batch"},
       [](RunContext& ctx) {
         const double rho = ctx.param_or("rho", 0.9);
         const auto batch = static_cast<std::size_t>(ctx.param_or("batch", 100));
         RngStream s1 = ctx.stream(1), s2 = ctx.stream(2);
         Trace tr = ar1_chain(rho, ctx.spec.n, s1);
         const auto x = tr.component(0);
         std::vector<std::size_t> checkpoints;
         for (std::size_t j = 1; j <= 25; ++j) checkpoints.push_back(ctx.spec.n * j / 25);
         const auto bands = bootstrap_variance_bands(x, checkpoints, batch, s2);
         ctx.estimate("first_half_width", bands.front().half_width);
         ctx.estimate("last_half_width", bands.back().half_width);
         RunningEstimate run;
         for (const auto& b : bands) {
           run.means.push_back(b.center);
           run.ses.push_back(b.half_width / 2.0);
         }
         ctx.band("bootstrap_bands", run);
         ctx.chains.push_back(std::move(tr));
       }});

  defs.push_back(
      {"ch8.batch-thin", "8", "variance of the full average vs a thinned average", "",
       5000, 1000, {"rho", "k"},
       [](RunContext& ctx) {
         const double rho = ctx.param_or("rho", 0.9);
         const auto k = static_cast<std::size_t>(ctx.param_or("k", 10));
         std::vector<double> d1(ctx.spec.replications), dk(ctx.spec.replications);
         RngStream root = ctx.stream();
         for (std::size_t r = 0; r < ctx.spec.replications; ++r) {
           RngStream s = root.substream(r + 1);
           Trace tr = ar1_chain(rho, ctx.spec.n, s);
           const auto x = tr.component(0);
           double full = 0.0, thin = 0.0;
           for (std::size_t i = 0; i < x.size(); ++i) {
             full += x[i];
             if ((i + 1) % k == 0) thin += x[i];
           }
           d1[r] = full / static_cast<double>(x.size());
           dk[r] = thin / static_cast<double>(x.size() / k);
         }
         ctx.estimate("var_delta1", var_of(d1));
         ctx.estimate("var_deltak", var_of(dk));
         RngStream s = ctx.stream(12345);
         Trace one = ar1_chain(rho, ctx.spec.n, s);
         const auto [v1, vk] =
             batch_thin_compare(one.component(0), [](double v) { return v; }, k);
         ctx.estimate("batch_est_var_delta1", v1);
         ctx.estimate("batch_est_var_deltak", vk);
         ctx.chains.push_back(series_as_trace(d1, "delta1"));
       }});

  defs.push_back(
      {"ch8.candidate-constant", "8",
       "normalizing constant of an unnormalized target from an MCMC run", "", 100000, 1,
       {},
       [](RunContext& ctx) {
         auto tilde = [](double x) { return std::log(7.0) - 0.5 * x * x; };  // 7 N(0,1) sqrt(2pi)
         RngStream s = ctx.stream();
         Trace tr = mh_chain(tilde, {ProposalKind::random_walk,
                                     DistributionSpec::normal(0.0, 1.0), 2.0},
                             0.0, ctx.spec.n, s);
         const auto states = tr.component_post_burnin(0);
         const double c = candidate_constant(states, tilde,
                                             DistributionSpec::normal(0.0, 0.5));
         ctx.estimate("constant", c);
         ctx.estimate("constant_exact", 7.0 * std::sqrt(2.0 * kPi));
         ctx.accept_rate("rw", tr.acceptance_rate());
         ctx.chains.push_back(std::move(tr));
       }});

  defs.push_back(
      {"ch8.chib-weights", "8",
       "weight trace converging to the marginal likelihood on a conjugate toy", "",
       10000, 1, {"x"},
       [](RunContext& ctx) {
         const double x = ctx.param_or("x", 1.5);
         auto loglik = [x](double th) { return normal_logpdf(x - th); };
         auto logprior = [](double th) { return normal_logpdf(th); };
         const auto post = DistributionSpec::normal(x / 2.0, std::sqrt(0.5));
         RngStream s = ctx.stream();
         std::vector<double> chain(ctx.spec.n);
         for (auto& v : chain) v = post.sample(s);
         const auto run = chib_weight_trace(chain, loglik, logprior, 0.0);
         ctx.estimate("omega_final", run.estimate());
         ctx.estimate("evidence_exact", normal_pdf(x / std::sqrt(2.0)) / std::sqrt(2.0));
         ctx.band("omega_trace", run);
         ctx.chains.push_back(series_as_trace(chain, "theta"));
       }});

  defs.push_back(
      {"ch8.ks-monitor", "8", "thinned half-chain KS trajectory on the baseball alpha",
       "embedded", 10000, 1, {"thin"},
       [](RunContext& ctx) {
         const auto thin = static_cast<std::size_t>(ctx.param_or("thin", 10));
         RngStream s = ctx.stream();
         Trace tr = gibbs_baseball(datasets::baseball(), 0.00434, ctx.spec.n, s);
         const auto alpha = tr.component(datasets::baseball().size() + 1);
         const auto traj = ks_half_trajectory(alpha, thin, 100);
         double min_p = 1.0;
         std::size_t below = 0;
         for (const auto& [t, p] : traj) {
           min_p = std::min(min_p, p);
           below += p < 0.05;
         }
         ctx.estimate("min_p", min_p);
         ctx.estimate("frac_below_05", static_cast<double>(below) / traj.size());
         nlohmann::json kst = nlohmann::json::array();
         for (const auto& [t, p] : traj) kst.push_back({t, p});
         ctx.diagnostics["ks_trajectory"] = kst;
         ctx.chains.push_back(series_as_trace(alpha, "alpha"));
       }});

  defs.push_back(
      {"ch8.ess-monitor", "8", "effective sample size along three chapter-8 chains", "",
       10000, 1, {},
       [](RunContext& ctx) {
         RngStream s1 = ctx.stream(1), s2 = ctx.stream(2), s3 = ctx.stream(3);
         Trace base = gibbs_baseball(datasets::baseball(), 0.00434, ctx.spec.n, s1);
         Trace beta = beta_kernel_chain(0.2, BetaKernelVariant::bernoulli_move,
                                        ctx.spec.n, s2);
         Trace ar = ar1_chain(0.9, ctx.spec.n, s3);
         const auto alpha = base.component(datasets::baseball().size() + 1);
         auto ess_path = [](const std::vector<double>& x) {
           std::vector<double> out;
           for (std::size_t t = x.size() / 10; t <= x.size(); t += x.size() / 10)
             out.push_back(ess_autocorr(std::vector<double>(x.begin(), x.begin() + t)));
           return out;
         };
         const auto e1 = ess_path(alpha);
         const auto e2 = ess_path(beta.component(0));
         const auto e3 = ess_path(ar.component(0));
         ctx.estimate("ess_baseball_final", e1.back());
         ctx.estimate("ess_beta_kernel_final", e2.back());
         ctx.estimate("ess_ar1_final", e3.back());
         ctx.chains.push_back(series_as_trace(e2, "ess_beta_kernel"));
       }});
}

}  // namespace carlo::registry
