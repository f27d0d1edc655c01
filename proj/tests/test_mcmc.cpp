#include <catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/Dense>

#include "carlo/accept_reject.hpp"
#include "carlo/datasets.hpp"
#include "carlo/diagnostics.hpp"
#include "carlo/mcmc.hpp"
#include "helpers.hpp"

using carlo::DistributionSpec;
using carlo::ProposalKernel;
using carlo::ProposalKind;
using carlo::RngStream;
using carlo::Trace;

TEST_CASE("rejected moves repeat the state bitwise") {
  const auto target = DistributionSpec::beta(2.7, 6.3);
  RngStream s(1);
  const Trace tr = carlo::mh_chain([&](double x) { return target.log_density(x); },
                                   {ProposalKind::independent,
                                    DistributionSpec::uniform(0.0, 1.0), 1.0},
                                   0.3, 5000, s);
  for (std::size_t t = 1; t < tr.size(); ++t)
    if (!tr.accept_flags[t]) REQUIRE(tr.states[t][0] == tr.states[t - 1][0]);
  CHECK(tr.acceptance_rate() < 1.0);
}

TEST_CASE("proposal equal to target accepts every move") {
  const auto g = DistributionSpec::normal(0.0, 1.0);
  RngStream s(2);
  const Trace tr = carlo::mh_chain([&](double x) { return g.log_density(x); },
                                   {ProposalKind::independent, g, 1.0}, 0.0, 2000, s);
  CHECK(tr.acceptance_rate() == 1.0);
}

TEST_CASE("beta target: uniform proposal vs a too-narrow beta proposal") {
  const auto target = DistributionSpec::beta(2.7, 6.3);
  auto logf = [&target](double x) { return target.log_density(x); };
  RngStream s(3);
  const Trace uni = carlo::mh_chain(logf, {ProposalKind::independent,
                                           DistributionSpec::uniform(0.0, 1.0), 1.0},
                                    0.3, 10000, s);
  CHECK_THAT(uni.acceptance_rate(), Catch::Matchers::WithinAbs(0.458, 0.03));

  // Be(20,60) has sd ~ 0.05 around 0.25; from the target's upper tail the
  // chain cannot move, the printed "drops to zero"
  RngStream s2(4);
  const double tail_start = target.quantile(0.98);
  const Trace narrow = carlo::mh_chain(logf, {ProposalKind::independent,
                                              DistributionSpec::beta(20.0, 60.0), 1.0},
                                       tail_start, 10000, s2);
  CHECK(narrow.acceptance_rate() < 0.05);

  // random-walk symmetry is enforced for packaged families
  CHECK_THROWS_AS(carlo::mh_chain(logf, {ProposalKind::random_walk,
                                         DistributionSpec::normal(1.0, 1.0), 1.0},
                                  0.3, 10, s2),
                  carlo::configuration_error);
}

TEST_CASE("AR(1) chain") {
  RngStream s(5);
  const Trace tr = carlo::ar1_chain(0.9, 10000, s);
  const auto x = tr.component_post_burnin(0);
  const double target_var = 1.0 / (1.0 - 0.81);
  CHECK(std::fabs(oracle::var(x) - target_var) < 0.15 * target_var);
  // Yule-Walker oracle: lag-1 autocorrelation equals rho
  const std::vector<double> head(x.begin(), x.end() - 1), tail(x.begin() + 1, x.end());
  CHECK_THAT(oracle::corr(head, tail), Catch::Matchers::WithinAbs(0.9, 0.03));

  RngStream s2(6);
  const Trace iid = carlo::ar1_chain(0.0, 5000, s2);
  const auto z = iid.component(0);
  CHECK(std::fabs(oracle::corr(std::vector<double>(z.begin(), z.end() - 1),
                               std::vector<double>(z.begin() + 1, z.end()))) < 0.05);
  CHECK_THROWS_AS(carlo::ar1_chain(1.0, 100, s2), carlo::domain_error);
}

TEST_CASE("acceptance scans over proposal families") {
  const auto target = DistributionSpec::normal(0.0, 1.0);
  RngStream s1(7), s2(8), s3(9);
  const auto lap = carlo::acceptance_scan(target, carlo::ScanFamily::laplace_indep,
                                          {1.0, 3.0, 6.0, 10.0}, 5000, s1);
  CHECK(lap.front().second > lap.back().second + 0.1);  // decreasing in alpha

  const auto nor = carlo::acceptance_scan(target, carlo::ScanFamily::normal_indep,
                                          {0.25, 0.5, 1.0, 2.0, 4.0}, 5000, s2);
  double best = 0.0, best_w = 0.0;
  for (const auto& [w, r] : nor)
    if (r > best) {
      best = r;
      best_w = w;
    }
  CHECK(best_w == 1.0);  // proposal matches the target at omega^2 = 1
  CHECK(best > 0.95);

  const auto rw = carlo::acceptance_scan(target, carlo::ScanFamily::laplace_rw,
                                         {0.1, 1.0, 10.0}, 5000, s3);
  CHECK(rw.back().second > rw.front().second + 0.1);  // rises with alpha
}

TEST_CASE("logistic MLE on the O-ring data") {
  const auto& temps = carlo::datasets::challenger_temps();
  const auto& fails = carlo::datasets::challenger_failures();
  Eigen::MatrixXd X(temps.size(), 2);
  Eigen::VectorXd y(temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = temps[i];
    y[i] = fails[i];
  }
  const auto [beta, cov] = carlo::logistic_mle(X, y);
  CHECK_THAT(beta[0], Catch::Matchers::WithinAbs(15.0429, 1e-3));
  CHECK_THAT(beta[1], Catch::Matchers::WithinAbs(-0.2322, 1e-4));
  CHECK_THAT(cov(0, 0), Catch::Matchers::WithinAbs(54.4441826, 0.1));

  // balanced design with no effect: slope vanishes
  Eigen::MatrixXd Xb(4, 2);
  Xb << 1, -1, 1, -1, 1, 1, 1, 1;
  Eigen::VectorXd yb(4);
  yb << 0, 1, 0, 1;
  const auto [bb, cb] = carlo::logistic_mle(Xb, yb);
  CHECK(std::fabs(bb[1]) < 1e-8);

  // complete separation diverges
  Eigen::MatrixXd Xs(4, 2);
  Xs << 1, -2, 1, -1, 1, 1, 1, 2;
  Eigen::VectorXd ys(4);
  ys << 0, 0, 1, 1;
  CHECK_THROWS_AS(carlo::logistic_mle(Xs, ys), carlo::divergence_error);
}

TEST_CASE("challenger componentwise MH") {
  RngStream s(10);
  const Trace tr = carlo::challenger_mh(carlo::datasets::challenger_temps(),
                                        carlo::datasets::challenger_failures(), 10000, s);
  const auto acc = carlo::componentwise_acceptance(tr);
  CHECK_THAT(acc[0], Catch::Matchers::WithinAbs(0.10, 0.04));
  CHECK_THAT(acc[1], Catch::Matchers::WithinAbs(0.10, 0.04));
  const auto as = tr.component_post_burnin(0);
  const auto bs = tr.component_post_burnin(1);
  auto pred = [&](double temp) {
    double p = 0.0;
    for (std::size_t i = 0; i < as.size(); ++i)
      p += 1.0 / (1.0 + std::exp(-(as[i] + bs[i] * temp)));
    return p / static_cast<double>(as.size());
  };
  CHECK_THAT(pred(50.0), Catch::Matchers::WithinAbs(0.6898612, 0.08));
  CHECK_THAT(pred(60.0), Catch::Matchers::WithinAbs(0.4892585, 0.08));
  CHECK_THAT(pred(70.0), Catch::Matchers::WithinAbs(0.265691, 0.08));

  // prior domination: tight prior sds pin the coefficients near zero and
  // flatten the prediction curve while keeping it monotone decreasing
  RngStream s2(11);
  const Trace flat = carlo::challenger_mh(carlo::datasets::challenger_temps(),
                                          carlo::datasets::challenger_failures(), 20000, s2,
                                          0.05, 0.01);
  const auto fa = flat.component_post_burnin(0);
  const auto fb = flat.component_post_burnin(1);
  double p50 = 0.0, p70 = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    p50 += 1.0 / (1.0 + std::exp(-(fa[i] + fb[i] * 50.0)));
    p70 += 1.0 / (1.0 + std::exp(-(fa[i] + fb[i] * 70.0)));
  }
  p50 /= static_cast<double>(fa.size());
  p70 /= static_cast<double>(fa.size());
  CHECK(p50 >= p70);
  CHECK(p50 - p70 < 0.15);  // flattened relative to the 0.42 gap above
  CHECK(p50 > 0.25);
  CHECK(p50 < 0.65);
}

TEST_CASE("braking quadratic regression MH") {
  RngStream s(12);
  const Trace tr = carlo::braking_mh(carlo::datasets::braking_speed(),
                                     carlo::datasets::braking_distance(), 10000, s);
  const auto b1 = tr.component_post_burnin(0);
  std::vector<double> sorted = b1;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted[static_cast<std::size_t>(0.025 * sorted.size())];
  const double hi = sorted[static_cast<std::size_t>(0.975 * sorted.size())];
  const double half = (hi - lo) / 2.0;
  CHECK(half > 2.0);
  CHECK(half < 45.0);
  CHECK(lo < 2.47);  // the least-squares intercept sits inside
  CHECK(hi > 2.47);
  CHECK(oracle::mean(tr.component_post_burnin(3)) > 0.0);
  // the mixing here is known to be poor: strong correlation across iterations
  std::vector<double> a(b1.begin(), b1.end() - 10), b(b1.begin() + 10, b1.end());
  CHECK(oracle::corr(a, b) > 0.5);
}

TEST_CASE("bivariate normal Gibbs") {
  RngStream s(13);
  const std::size_t n = 20000;
  const Trace eq = carlo::gibbs_bivariate_normal(1.0, 1.0, 0.6, n, s);
  std::vector<double> sum(n), diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] = eq.states[i][0] + eq.states[i][1];
    diff[i] = eq.states[i][0] - eq.states[i][1];
  }
  CHECK(std::fabs(oracle::corr(sum, diff)) < 4.0 / std::sqrt(static_cast<double>(n)) + 0.02);

  RngStream s2(14);
  const Trace tr = carlo::gibbs_bivariate_normal(50.0, 100.0, 0.8, n, s2);
  std::vector<double> su(n), di(n), decor(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = tr.states[i][0], y = tr.states[i][1];
    su[i] = x + y;
    di[i] = x - y;
    decor[i] = x - 0.8 * std::sqrt(50.0 / 100.0) * y;
    ys[i] = y;
  }
  CHECK_THAT(oracle::cov(su, di), Catch::Matchers::WithinAbs(-50.0, 10.0));
  CHECK(std::fabs(oracle::corr(decor, ys)) < 4.0 / std::sqrt(static_cast<double>(n)) + 0.02);
}

TEST_CASE("two-stage Gibbs is a homogeneous Markov chain") {
  // coupling: continuation from (state, stream snapshot) reproduces the chain
  RngStream s(15);
  const Trace full = carlo::gibbs_bivariate_normal(50.0, 100.0, 0.8, 200, s);

  RngStream s2(15);
  const Trace head = carlo::gibbs_bivariate_normal(50.0, 100.0, 0.8, 100, s2);
  RngStream snapshot = s2;  // stream state at iteration 100
  const Trace tail = carlo::gibbs_bivariate_normal(
      50.0, 100.0, 0.8, 100, snapshot,
      std::pair{head.states.back()[0], head.states.back()[1]});
  for (std::size_t t = 0; t < 100; ++t) {
    REQUIRE(tail.states[t][0] == full.states[100 + t][0]);
    REQUIRE(tail.states[t][1] == full.states[100 + t][1]);
  }
}

TEST_CASE("equicorrelated Gibbs") {
  const std::size_t p = 5, n = 10000;
  RngStream s(16);
  const Trace free = carlo::gibbs_equicorrelated(p, 0.25, n, false, 0, s);
  // thinned marginals look standard normal
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> xj;
    for (std::size_t t = n / 10; t < n; t += 10) xj.push_back(free.states[t][j]);
    const auto [d, pv] = carlo::ks_one_sample(xj, [](double v) { return carlo::normal_cdf(v); });
    INFO("coordinate " << j);
    CHECK(pv > 0.001);
  }
  // against the exact Cholesky sampler
  RngStream s2(17);
  std::vector<double> gibbs_x, direct_x;
  for (std::size_t t = n / 10; t < n; t += 10) gibbs_x.push_back(free.states[t][0]);
  for (std::size_t i = 0; i < gibbs_x.size(); ++i)
    direct_x.push_back(carlo::equicorrelated_direct_sample(p, 0.25, s2)[0]);
  CHECK(carlo::ks_two_sample(gibbs_x, direct_x).second > 0.001);

  RngStream s3(18);
  const Trace constr = carlo::gibbs_equicorrelated(p, 0.25, 5000, true, 2, s3);
  for (const auto& st : constr.states) {
    const double lo = st[0] * st[0] + st[1] * st[1];
    const double hi = st[2] * st[2] + st[3] * st[3] + st[4] * st[4];
    REQUIRE(lo <= hi);
  }
  CHECK_THROWS_AS(carlo::gibbs_equicorrelated(5, 0.999 + 0.01, 10, false, 0, s3),
                  carlo::domain_error);
}

TEST_CASE("censored normal Gibbs") {
  RngStream s(19);
  const auto& y = carlo::datasets::censored_normal();
  const Trace tr = carlo::gibbs_censored_normal(y, 30, 3.5, 10000, s);
  const auto theta = tr.component_post_burnin(0);
  const auto zbar = tr.component_post_burnin(1);
  const double ybar = oracle::mean(y);
  CHECK(oracle::mean(theta) > ybar);  // censoring pulls the estimate up
  for (double z : zbar) REQUIRE(z >= 3.5);
  std::vector<double> rb(zbar.size());
  for (std::size_t i = 0; i < zbar.size(); ++i)
    rb[i] = (20.0 * ybar + 10.0 * zbar[i]) / 30.0;
  CHECK(oracle::var(rb) < oracle::var(theta));
}

TEST_CASE("blood group Gibbs against the Hardy-Weinberg MLE") {
  RngStream s(20);
  const Trace tr = carlo::gibbs_blood_groups(carlo::datasets::blood_groups, 5000, s);
  for (const auto& st : tr.states) {
    REQUIRE(st[0] > 0.0);
    REQUIRE(st[1] > 0.0);
    REQUIRE(st[0] + st[1] < 1.0);
  }
  // grid + refinement MLE oracle for the observed-data likelihood
  const double nA = 186, nB = 38, nAB = 13, nO = 284;
  auto loglik = [&](double pa, double pb) {
    const double po = 1.0 - pa - pb;
    if (po <= 0.0) return -1e300;
    return nA * std::log(pa * pa + 2.0 * pa * po) + nB * std::log(pb * pb + 2.0 * pb * po) +
           nAB * std::log(pa * pb) + 2.0 * nO * std::log(po);
  };
  double best = -1e300, mle_a = 0.0, mle_b = 0.0;
  double lo_a = 0.01, hi_a = 0.6, lo_b = 0.01, hi_b = 0.4;
  for (int stage = 0; stage < 4; ++stage) {
    for (int i = 0; i <= 200; ++i)
      for (int j = 0; j <= 200; ++j) {
        const double pa = lo_a + (hi_a - lo_a) * i / 200.0;
        const double pb = lo_b + (hi_b - lo_b) * j / 200.0;
        const double ll = loglik(pa, pb);
        if (ll > best) {
          best = ll;
          mle_a = pa;
          mle_b = pb;
        }
      }
    const double span_a = (hi_a - lo_a) / 20.0, span_b = (hi_b - lo_b) / 20.0;
    lo_a = mle_a - span_a;
    hi_a = mle_a + span_a;
    lo_b = std::max(mle_b - span_b, 1e-4);
    hi_b = mle_b + span_b;
  }
  CHECK_THAT(oracle::mean(tr.component_post_burnin(0)), Catch::Matchers::WithinAbs(mle_a, 0.02));
  CHECK_THAT(oracle::mean(tr.component_post_burnin(1)), Catch::Matchers::WithinAbs(mle_b, 0.02));

  // data domination: everyone type O concentrates pO near one
  RngStream s2(21);
  const Trace conc = carlo::gibbs_blood_groups({0.0, 0.0, 0.0, 500.0}, 2000, s2);
  const double po_mean = 1.0 - oracle::mean(conc.component_post_burnin(0)) -
                         oracle::mean(conc.component_post_burnin(1));
  CHECK(po_mean > 0.95);
}

TEST_CASE("truncated Poisson Gibbs") {
  RngStream s(22);
  const Trace tr = carlo::gibbs_truncated_poisson(313.0, 360.0, 13, 10000, s);
  const auto lam = tr.component_post_burnin(0);
  const auto rb = tr.component_post_burnin(1);
  // completions never fall below the censoring point
  const double rb_floor = (313.0 + 13.0 * 4.0) / 360.0;
  for (double r : rb) REQUIRE(r >= rb_floor - 1e-12);
  CHECK(oracle::mean(lam) > 1.00);
  CHECK(oracle::mean(lam) < 1.05);
  CHECK(oracle::var(rb) < oracle::var(lam));
}

TEST_CASE("truncated exponential pair") {
  const double bound = 10.0;
  RngStream s(23);
  const Trace tr = carlo::gibbs_truncexp_pair(bound, 20000, s);
  std::vector<double> xs;
  for (std::size_t t = tr.burn_in; t < tr.size(); t += 10) {
    REQUIRE(tr.states[t][0] > 0.0);
    xs.push_back(tr.states[t][0]);
  }
  auto marge = [bound](double v) { return -std::expm1(-bound * v) / v; };
  const double z = oracle::simpson(marge, 1e-9, bound, 20000);
  auto cdf = [&](double v) {
    return oracle::simpson(marge, 1e-9, std::min(v, bound), 4000) / z;
  };
  CHECK(carlo::ks_one_sample(xs, cdf).second > 0.001);
}

TEST_CASE("slice sampler for exp(-sqrt(x))/2") {
  RngStream s(24);
  const Trace tr = carlo::slice_expsqrt(20000, s);
  for (const auto& st : tr.states)
    REQUIRE(st[1] <= 0.5 * std::exp(-std::sqrt(st[0])) + 1e-15);

  std::vector<double> xs;
  for (std::size_t t = tr.burn_in; t < tr.size() && xs.size() < 1000; t += 15)
    xs.push_back(tr.states[t][0]);
  RngStream s2(25);
  std::vector<double> direct(1000);
  for (auto& v : direct) v = carlo::slice_expsqrt_direct(s2);
  CHECK(carlo::ks_two_sample(xs, direct).second > 0.001);
  // Gamma(2,1) squared has mean E[Y^2] = 6
  const double se = std::sqrt(oracle::var(direct) / 1000.0);
  CHECK(std::fabs(oracle::mean(direct) - 6.0) <= 3.0 * se);
}

TEST_CASE("baseball hierarchical Gibbs") {
  const auto& y = carlo::datasets::baseball();
  RngStream s(26);
  const Trace tr = carlo::gibbs_baseball(y, 0.00434, 10000, s);
  const std::size_t acol = y.size() + 1;
  const auto alpha = tr.component_post_burnin(acol);
  for (double a : alpha) REQUIRE(a > 0.0);
  for (const auto& st : tr.states)
    for (std::size_t i = 0; i < y.size(); ++i) REQUIRE(std::fabs(st[i]) < 2.0);

  // quadrature oracle on the closed-form marginal
  auto marg = [&](double a) { return carlo::baseball_alpha_marginal(a, y, 0.00434); };
  const double z = oracle::simpson(marg, 1e-4, 60.0, 20000);
  const double mean_exact =
      oracle::simpson([&](double a) { return a * marg(a); }, 1e-4, 60.0, 20000) / z;
  CHECK_THAT(mean_exact, Catch::Matchers::WithinAbs(0.2183, 0.002));
  CHECK_THAT(oracle::mean(alpha), Catch::Matchers::WithinAbs(mean_exact, 0.01));
  CHECK_THAT(oracle::mean(alpha), Catch::Matchers::WithinAbs(0.226, 0.015));

  std::vector<double> thinned;
  for (std::size_t i = 0; i < alpha.size(); i += 20) thinned.push_back(alpha[i]);
  auto cdf = [&](double a) { return oracle::simpson(marg, 1e-4, std::max(a, 2e-4), 2000) / z; };
  CHECK(carlo::ks_one_sample(thinned, cdf).second > 0.001);
}

TEST_CASE("beta kernels: detailed balance and slow mixing") {
  const double alpha = 0.2;
  // exact detailed balance of the bernoulli move on a grid
  for (int i = 1; i <= 50; ++i)
    for (int j = 1; j <= 50; ++j) {
      const double x = i / 51.0, y = j / 51.0;
      const double lhs =
          alpha * std::pow(x, alpha - 1.0) * carlo::beta_kernel_density(alpha, x, y);
      const double rhs =
          alpha * std::pow(y, alpha - 1.0) * carlo::beta_kernel_density(alpha, y, x);
      REQUIRE(std::fabs(lhs - rhs) < 1e-12);
    }

  RngStream s(27);
  const Trace bern =
      carlo::beta_kernel_chain(alpha, carlo::BetaKernelVariant::bernoulli_move, 10000, s);
  CHECK(carlo::ess_autocorr(bern.component(0)) < 1000.0);

  // Marginal correctness via the quantile-function oracle. At alpha = 0.2
  // the holding time near zero is 1/x with E[1/X] infinite, so sticky
  // episodes outlast any thinning and a KS check cannot settle at feasible
  // lengths; alpha = 0.8 has the same kernel structure with P(X < 5e-5)
  // down at 4e-4, where heavy thinning does decorrelate.
  const double mild = 0.8;
  const auto target = DistributionSpec::beta(mild, 1.0);
  RngStream s1(127);
  const Trace bern_long =
      carlo::beta_kernel_chain(mild, carlo::BetaKernelVariant::bernoulli_move, 200000, s1);
  std::vector<double> heavy;
  const auto xs = bern_long.component_post_burnin(0);
  for (std::size_t i = 0; i < xs.size(); i += 400) heavy.push_back(xs[i]);
  CHECK(carlo::ks_one_sample(heavy, [&](double v) { return target.cdf(v); }).second > 0.001);

  RngStream s2(28);
  const Trace ratio =
      carlo::beta_kernel_chain(mild, carlo::BetaKernelVariant::ratio_move, 200000, s2);
  std::vector<double> heavy2;
  const auto xs2 = ratio.component_post_burnin(0);
  for (std::size_t i = 0; i < xs2.size(); i += 400) heavy2.push_back(xs2[i]);
  CHECK(carlo::ks_one_sample(heavy2, [&](double v) { return target.cdf(v); }).second > 0.001);
}

TEST_CASE("log-scale random walk with the printed Jacobian is stationary") {
  // pass pi(v) = v^2 lognormal(v); the printed v_old/v_prop factor makes the
  // chain target pi(v)/v^2, i.e. the lognormal itself
  const double mu = 0.3, sd = 0.7;
  auto pi = [&](double v) {
    const double l = std::log(v);
    return v * v * std::exp(-(l - mu) * (l - mu) / (2.0 * sd * sd)) / v;
  };
  RngStream s(29);
  double v = 1.0;
  std::vector<double> logs;
  for (int t = 0; t < 60000; ++t) {
    v = carlo::log_scale_rw_step(pi, v, 1.0, s);
    if (t > 5000 && t % 20 == 0) logs.push_back(std::log(v));
  }
  const auto [d, p] = carlo::ks_one_sample(
      logs, [&](double x) { return carlo::normal_cdf((x - mu) / sd); });
  CHECK(p > 0.001);
}

TEST_CASE("probit sampler machinery on a synthetic dataset") {
  RngStream gen(30);
  std::vector<double> ped(200), type(200);
  for (std::size_t i = 0; i < ped.size(); ++i) {
    ped[i] = 0.1 + 2.3 * gen.uniform();
    type[i] = gen.uniform() < carlo::normal_cdf(0.6 * ped[i] - 0.8) ? 1.0 : 0.0;
  }
  RngStream s(31);
  const auto chains = carlo::pima_probit_mh(ped, type, 3, 4000, s);
  REQUIRE(chains.size() == 3);
  for (const auto& c : chains) {
    CHECK(c.size() == 4000);
    CHECK(c.acceptance_rate() > 0.0);
    CHECK(c.acceptance_rate() < 1.0);
    for (const auto& st : c.states) REQUIRE(st[1] > 0.0);
  }
  // chains from different substreams differ
  CHECK(chains[0].states[100][0] != chains[1].states[100][0]);
}

TEST_CASE("unique-value proxy is reported but distinct from flag acceptance") {
  const auto target = DistributionSpec::beta(2.7, 6.3);
  RngStream s(32);
  const Trace tr = carlo::mh_chain([&](double x) { return target.log_density(x); },
                                   {ProposalKind::independent,
                                    DistributionSpec::uniform(0.0, 1.0), 1.0},
                                   0.3, 5000, s);
  const double uniq = tr.unique_rate();
  CHECK(uniq > 0.0);
  CHECK(uniq <= 1.0);
  CHECK_THAT(uniq, Catch::Matchers::WithinAbs(tr.acceptance_rate(), 0.01));
}

TEST_CASE("independent MH accepts at least as often as accept-reject") {
  // same target N(0,1) and proposal DE(1): AR accepts with rate 1/M while
  // the MH ratio min(1, f(y)g(x)/f(x)g(y)) >= f(y)/(M g(y))
  RngStream s1(60), s2(61);
  const double log_M = carlo::laplace_normal_envelope(1.0);
  carlo::Envelope env{[](double x) { return carlo::normal_logpdf(x); },
                      DistributionSpec::double_exponential(0.0, 1.0), log_M, true};
  const auto ar = carlo::ar_sample(env, 20000, s1);
  const Trace mh = carlo::mh_chain([](double x) { return carlo::normal_logpdf(x); },
                                   {ProposalKind::independent,
                                    DistributionSpec::double_exponential(0.0, 1.0), 1.0},
                                   0.0, 20000, s2);
  CHECK(mh.acceptance_rate() >= ar.acceptance_rate);
}

TEST_CASE("improper exponential pair is caught by the stationarity monitor") {
  RngStream s(62);
  const Trace improper = carlo::gibbs_truncexp_pair(0.0, 10000, s);
  const auto xi = improper.component(0);
  std::vector<double> lx(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) lx[i] = std::log(xi[i]);
  const auto traj = carlo::ks_half_trajectory(lx, 10, 50);
  double min_p = 1.0;
  for (const auto& [t, p] : traj) min_p = std::min(min_p, p);
  CHECK(min_p < 1e-4);
}

TEST_CASE("truncated beta target: window proposal beats the untruncated one") {
  const double c = 0.25, d = 0.75;
  const auto be = DistributionSpec::beta(2.7, 6.3);
  auto logf = [&](double x) {
    return (x > c && x < d) ? be.log_density(x)
                            : -std::numeric_limits<double>::infinity();
  };
  RngStream s1(63), s2(64);
  const Trace uni = carlo::mh_chain(logf, {ProposalKind::independent,
                                           DistributionSpec::uniform(c, d), 1.0},
                                    0.5, 10000, s1);
  const Trace bet = carlo::mh_chain(logf, {ProposalKind::independent,
                                           DistributionSpec::beta(2.0, 6.0), 1.0},
                                    0.5, 10000, s2);
  for (const auto& st : uni.states) REQUIRE((st[0] > c && st[0] < d));
  for (const auto& st : bet.states) REQUIRE((st[0] > c && st[0] < d));
  CHECK(uni.acceptance_rate() > bet.acceptance_rate());
}
