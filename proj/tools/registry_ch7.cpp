#include <cmath>

#include "carlo/datasets.hpp"
#include "carlo/diagnostics.hpp"
#include "carlo/distributions.hpp"
#include "carlo/mcmc.hpp"
#include "registry.hpp"

namespace carlo::registry {

void add_ch7(std::vector<ExperimentDef>& defs) {
  defs.push_back(
      {"ch7.bivariate-normal", "7", "two-stage Gibbs for a correlated normal pair", "",
       10000, 1, {"sx2", "sy2", "rho"},
       [](RunContext& ctx) {
         const double sx2 = ctx.param_or("sx2", 50.0);
         const double sy2 = ctx.param_or("sy2", 100.0);
         const double rho = ctx.param_or("rho", 0.8);
         RngStream s = ctx.stream();
         Trace tr = gibbs_bivariate_normal(sx2, sy2, rho, ctx.spec.n, s);
         const auto x = tr.component_post_burnin(0);
         const auto y = tr.component_post_burnin(1);
         std::vector<double> sum(x.size()), diff(x.size()), decor(x.size());
         const double a = rho * std::sqrt(sx2 / sy2);
         for (std::size_t i = 0; i < x.size(); ++i) {
           sum[i] = x[i] + y[i];
           diff[i] = x[i] - y[i];
           decor[i] = x[i] - a * y[i];
         }
         ctx.estimate("cov_sum_diff", cov_of(sum, diff));
         ctx.estimate("cov_sum_diff_exact", sx2 - sy2);
         ctx.estimate("corr_decorrelated", corr_of(decor, y));
         ctx.chains.push_back(std::move(tr));
         ctx.histogram("histogram_x", x);
       }});

  defs.push_back(
      {"ch7.equicorrelated", "7",
       "Gibbs on the equicorrelated normal, free and under a quadratic constraint", "",
       10000, 1, {"p", "r", "m"},
       [](RunContext& ctx) {
         const auto p = static_cast<std::size_t>(ctx.param_or("p", 5));
         const double r = ctx.param_or("r", 0.25);
         const auto m = static_cast<std::size_t>(ctx.param_or("m", 2));
         RngStream s1 = ctx.stream(1), s2 = ctx.stream(2), s3 = ctx.stream(3);
         Trace free = gibbs_equicorrelated(p, r, ctx.spec.n, false, 0, s1);
         const auto x1 = thin_series(free.component_post_burnin(0), 10);
         const auto [d, pval] = ks_one_sample(x1, [](double v) { return normal_cdf(v); });
         ctx.estimate("marginal_ks_p", pval);
         // direct sampler comparison on the first coordinate
         std::vector<double> direct(x1.size());
         for (auto& v : direct) v = equicorrelated_direct_sample(p, r, s3)[0];
         ctx.estimate("two_sample_ks_p", ks_two_sample(x1, direct).second);

         Trace constr = gibbs_equicorrelated(p, r, ctx.spec.n, true, m, s2);
         std::size_t violations = 0;
         for (const auto& st : constr.states) {
           double lo = 0.0, hi = 0.0;
           for (std::size_t i = 0; i < m; ++i) lo += st[i] * st[i];
           for (std::size_t i = m; i < p; ++i) hi += st[i] * st[i];
           violations += lo > hi;
         }
         ctx.estimate("constraint_violations", static_cast<double>(violations));
         ctx.chains.push_back(std::move(free));
         ctx.histogram("histogram_x1", x1);
       }});

  defs.push_back(
      {"ch7.censored-gibbs", "7",
       "data augmentation for the censored normal sample", "embedded", 10000, 1, {},
       [](RunContext& ctx) {
         const auto& y = datasets::censored_normal();
         RngStream s = ctx.stream();
         Trace tr = gibbs_censored_normal(y, datasets::censored_normal_total,
                                          datasets::censored_normal_cutoff, ctx.spec.n, s);
         const auto theta = tr.component_post_burnin(0);
         const auto zbar = tr.component_post_burnin(1);
         const double ybar = mean_of(y);
         const double md = static_cast<double>(y.size());
         const double nd = datasets::censored_normal_total;
         std::vector<double> rb(zbar.size());
         for (std::size_t i = 0; i < zbar.size(); ++i)
           rb[i] = (md * ybar + (nd - md) * zbar[i]) / nd;
         ctx.estimate("theta_mean", mean_of(theta));
         ctx.estimate("ybar", ybar);
         ctx.estimate("theta_var", var_of(theta));
         ctx.estimate("rb_var", var_of(rb));
         double min_z = zbar.front();
         for (double v : zbar) min_z = std::min(min_z, v);
         ctx.estimate("min_zbar", min_z);
         ctx.diagnostics["ess"] = ess_autocorr(theta);
         ctx.chains.push_back(std::move(tr));
         ctx.histogram("histogram_theta", theta);
       }});

  defs.push_back(
      {"ch7.blood-groups", "7",
       "allele frequencies for ABO counts by binomial completion", "embedded", 5000, 1,
       {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         Trace tr = gibbs_blood_groups(datasets::blood_groups, ctx.spec.n, s);
         const auto pa = tr.component_post_burnin(0);
         const auto pb = tr.component_post_burnin(1);
         ctx.estimate("pA_mean", mean_of(pa));
         ctx.estimate("pB_mean", mean_of(pb));
         ctx.estimate("pO_mean", 1.0 - mean_of(pa) - mean_of(pb));
         ctx.diagnostics["ess_pA"] = ess_autocorr(pa);
         ctx.chains.push_back(std::move(tr));
         ctx.histogram("histogram_pA", pa);
       }});

  defs.push_back(
      {"ch7.truncated-poisson", "7",
       "Gibbs for the censored Poisson counts with a Rao-Blackwell track", "embedded",
       10000, 1, {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         Trace tr = gibbs_truncated_poisson(
             datasets::truncated_poisson_sum, datasets::truncated_poisson_n,
             datasets::truncated_poisson_censored, ctx.spec.n, s);
         const auto lam = tr.component_post_burnin(0);
         const auto rb = tr.component_post_burnin(1);
         ctx.estimate("lambda_mean", mean_of(lam));
         ctx.estimate("lambda_var", var_of(lam));
         ctx.estimate("rb_var", var_of(rb));
         ctx.diagnostics["ess"] = ess_autocorr(lam);
         ctx.chains.push_back(std::move(tr));
         ctx.histogram("histogram_lambda", lam);
       }});

  defs.push_back(
      {"ch7.truncexp-pair", "7",
       "exponential conditional pair: proper when bounded, a drifting mean when not", "",
       10000, 1, {"bound"},
       [](RunContext& ctx) {
         const double bound = ctx.param_or("bound", 10.0);
         RngStream s1 = ctx.stream(1), s2 = ctx.stream(2);
         Trace proper = gibbs_truncexp_pair(bound, ctx.spec.n, s1);
         const auto x = thin_series(proper.component_post_burnin(0), 10);
         auto marge = [bound](double v) { return -std::expm1(-bound * v) / v; };
         const double z = simpson(marge, 1e-9, bound, 4000);
         // numeric cdf of the bounded marginal
         auto cdf = [&](double v) { return simpson(marge, 1e-9, std::min(v, bound), 800) / z; };
         const auto [d, pv] = ks_one_sample(x, cdf);
         ctx.estimate("bounded_ks_p", pv);
         Trace improper = gibbs_truncexp_pair(0.0, ctx.spec.n, s2);
         const auto xi = improper.component(0);
         // log x performs a symmetric random walk, which the half-chain KS
         // monitor catches far more reliably than a drift z-score
         std::vector<double> lx(xi.size());
         for (std::size_t i = 0; i < xi.size(); ++i) lx[i] = std::log(xi[i]);
         const auto traj = ks_half_trajectory(lx, 10, 50);
         double min_p = 1.0;
         for (const auto& [t, p2] : traj) min_p = std::min(min_p, p2);
         ctx.estimate("improper_ks_min_p", min_p);
         ctx.estimate("improper_geweke_z", geweke_z(xi));
         ctx.note("the unbounded pair has no joint density; its running mean drifts");
         ctx.chains.push_back(std::move(proper));
         ctx.histogram("histogram_x", x);
       }});

  defs.push_back(
      {"ch7.slice-expsqrt", "7", "slice sampler for exp(-sqrt(x))/2 vs the direct draw",
       "", 50000, 1, {},
       [](RunContext& ctx) {
         RngStream s1 = ctx.stream(1), s2 = ctx.stream(2);
         Trace tr = slice_expsqrt(ctx.spec.n, s1);
         std::size_t violations = 0;
         for (const auto& st : tr.states)
           violations += st[1] > 0.5 * std::exp(-std::sqrt(st[0]));
         ctx.estimate("slice_violations", static_cast<double>(violations));
         const auto xs = thin_series(tr.component_post_burnin(0), 40);
         std::vector<double> direct(xs.size());
         for (auto& v : direct) v = slice_expsqrt_direct(s2);
         ctx.estimate("two_sample_ks_p", ks_two_sample(xs, direct).second);
         ctx.estimate("direct_mean", mean_of(direct));
         ctx.estimate("mean_exact", 6.0);
         ctx.chains.push_back(std::move(tr));
         ctx.histogram("histogram_x", xs);
       }});

  defs.push_back(
      {"ch7.rb-traces", "7",
       "Rao-Blackwellized running means against raw draws, five constructions",
       "embedded", 5000, 1, {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         // (1) beta-binomial posterior mean: X | th ~ Bin(n, th), th ~ Be(a,b)
         {
           const int nb = 16;
           const double a = 2.0, b = 4.0;
           std::vector<double> raw(ctx.spec.n), rb(ctx.spec.n);
           for (std::size_t i = 0; i < ctx.spec.n; ++i) {
             const double th = DistributionSpec::beta(a, b).sample(s);
             const double x = DistributionSpec::binomial(nb, th).sample(s);
             raw[i] = th;
             rb[i] = (x + a) / (nb + a + b);
           }
           ctx.estimate("betabin_raw_var", var_of(raw));
           ctx.estimate("betabin_rb_var", var_of(rb));
         }
         // (2) normal-normal posterior mean
         {
           const double tau2 = 4.0, s2 = 1.0, theta0 = 0.0, xbar_n = 8.0;
           std::vector<double> raw(ctx.spec.n), rb(ctx.spec.n);
           const double B = s2 / (s2 + xbar_n * tau2);
           for (std::size_t i = 0; i < ctx.spec.n; ++i) {
             const double th = normal_quantile(s.uniform()) * std::sqrt(tau2) + theta0;
             double xb = th + normal_quantile(s.uniform()) * std::sqrt(s2 / xbar_n);
             raw[i] = th;
             rb[i] = B * theta0 + (1.0 - B) * xb;
           }
           ctx.estimate("normnorm_raw_var", var_of(raw));
           ctx.estimate("normnorm_rb_var", var_of(rb));
         }
         // (3) gamma-Poisson intensity: lam ~ Ga(a, b), x ~ Pois(lam t)
         {
           const double a = 1.8, b = 0.6, time = 2.0;
           std::vector<double> raw(ctx.spec.n), rb(ctx.spec.n);
           for (std::size_t i = 0; i < ctx.spec.n; ++i) {
             const double lam = DistributionSpec::gamma(a, b).sample(s);
             const double x = DistributionSpec::poisson(std::max(lam * time, 1e-12)).sample(s);
             raw[i] = lam;
             rb[i] = (x + a) / (time + b);
           }
           ctx.estimate("pump_raw_var", var_of(raw));
           ctx.estimate("pump_rb_var", var_of(rb));
         }
         // (4) censored normal (reuses the Gibbs kernel)
         {
           RngStream sc = ctx.stream(4);
           Trace tr = gibbs_censored_normal(datasets::censored_normal(),
                                            datasets::censored_normal_total,
                                            datasets::censored_normal_cutoff, ctx.spec.n, sc);
           const auto theta = tr.component_post_burnin(0);
           const auto zbar = tr.component_post_burnin(1);
           const double ybar = mean_of(datasets::censored_normal());
           const double md = 20.0, nd = 30.0;
           std::vector<double> rb(zbar.size());
           for (std::size_t i = 0; i < zbar.size(); ++i)
             rb[i] = (md * ybar + (nd - md) * zbar[i]) / nd;
           ctx.estimate("censored_raw_var", var_of(theta));
           ctx.estimate("censored_rb_var", var_of(rb));
         }
         // (5) truncated Poisson (reuses the Gibbs kernel)
         {
           RngStream sc = ctx.stream(5);
           Trace tr = gibbs_truncated_poisson(
               datasets::truncated_poisson_sum, datasets::truncated_poisson_n,
               datasets::truncated_poisson_censored, ctx.spec.n, sc);
           ctx.estimate("truncpois_raw_var", var_of(tr.component_post_burnin(0)));
           ctx.estimate("truncpois_rb_var", var_of(tr.component_post_burnin(1)));
           ctx.chains.push_back(std::move(tr));
         }
       }});
}

}  // namespace carlo::registry
