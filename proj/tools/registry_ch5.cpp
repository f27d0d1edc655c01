#include <array>
#include <cmath>

#include "carlo/datasets.hpp"
#include "carlo/optimize.hpp"
#include "carlo/parallel.hpp"
#include "registry.hpp"

namespace carlo::registry {

namespace {

std::function<double(std::size_t)> schedule_fn(double scale, double power) {
  return [scale, power](std::size_t j) {
    return scale / std::pow(std::log(static_cast<double>(j) + 1.0), power);
  };
}

}  // namespace

void add_ch5(std::vector<ExperimentDef>& defs) {
  defs.push_back(
      {"ch5.mixture-loglik", "5", "log-likelihood surface of the two-mean normal mixture",
       "", 400, 1, {"grid"},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         const MixtureModel model = make_mixture_data(ctx.spec.n, s);
         const auto grid = static_cast<std::size_t>(ctx.param_or("grid", 100));
         std::vector<double> lls;
         lls.reserve(grid * grid);
         double best = -1e300, b1 = 0.0, b2 = 0.0;
         for (std::size_t i = 0; i < grid; ++i)
           for (std::size_t j = 0; j < grid; ++j) {
             const double m1 = -2.0 + 6.0 * static_cast<double>(i) / (grid - 1);
             const double m2 = -2.0 + 6.0 * static_cast<double>(j) / (grid - 1);
             const double ll = mixture_loglik(model, m1, m2);
             lls.push_back(ll);
             if (ll > best) {
               best = ll;
               b1 = m1;
               b2 = m2;
             }
           }
         ctx.estimate("grid_max_loglik", best);
         ctx.estimate("grid_argmax_mu1", b1);
         ctx.estimate("grid_argmax_mu2", b2);
         ctx.estimate("loglik_at_truth", mixture_loglik(model, 0.0, 2.5));
         ctx.chains.push_back(series_as_trace(lls, "loglik"));
       }});

  defs.push_back(
      {"ch5.domain-sampling", "5",
       "uniform sampling over an implicit set via a bounding ellipse", "", 100000, 1, {},
       [](RunContext& ctx) {
         RngStream s = ctx.stream();
         const auto res =
             uniform_over_domain(printed_domain_constraint, 0.77, ctx.spec.n, s);
         ctx.accept_rate("constraint", res.acceptance_rate);
         std::size_t violations = 0;
         for (const auto& [x, y] : res.points_inside)
           violations += !printed_domain_constraint(x, y);
         ctx.estimate("replay_violations", static_cast<double>(violations));
         std::vector<double> xs;
         xs.reserve(res.points_inside.size());
         for (const auto& [x, y] : res.points_inside) xs.push_back(x);
         ctx.chains.push_back(series_as_trace(xs, "x"));
         ctx.histogram("histogram_x", xs);
       }});

  defs.push_back(
      {"ch5.stochastic-gradient", "5",
       "stochastic gradient paths on the mixture likelihood, four schedule pairs", "",
       400, 1, {"max_iter"},
       [](RunContext& ctx) {
         RngStream data_stream = ctx.stream(99);
         const MixtureModel model = make_mixture_data(ctx.spec.n, data_stream);
         const auto max_iter = static_cast<std::size_t>(ctx.param_or("max_iter", 5000));
         const std::array<std::pair<double, double>, 4> pairs{
             std::pair{0.01, 0.5}, {0.1, 0.5}, {0.01, 0.1}, {0.1, 0.1}};
         double dm = mean_of(model.data);
         int idx = 0;
         for (const auto& [a_scale, b_pow] : pairs) {
           ++idx;
           RngStream s = ctx.stream(idx);
           const auto path = stochastic_gradient(model, {dm, dm}, schedule_fn(a_scale, 1.0),
                                                 schedule_fn(1.0, b_pow), max_iter, 1e-5, s);
           const std::string tag = "pair" + std::to_string(idx);
           ctx.estimate(tag + "_iterations", static_cast<double>(path.path.size() - 1));
           ctx.estimate(tag + "_final_mu1", path.path.back()[0]);
           ctx.estimate(tag + "_final_mu2", path.path.back()[1]);
           ctx.estimate(tag + "_mode",
                        attribute_mode(path.path.back()) == MixtureMode::main ? 1.0 : 0.0);
           if (idx == 1) {
             std::vector<double> m1s;
             for (const auto& p : path.path) m1s.push_back(p[0]);
             ctx.chains.push_back(series_as_trace(m1s, "mu1"));
           }
         }
       }});

  defs.push_back(
      {"ch5.sa-mixture", "5",
       "simulated annealing on the mixture likelihood: recovery rate per schedule", "",
       400, 100, {"max_iter", "proposal_scale"},
       [](RunContext& ctx) {
         RngStream data_stream = ctx.stream(99);
         const MixtureModel model = make_mixture_data(ctx.spec.n, data_stream);
         const auto max_iter = static_cast<std::size_t>(ctx.param_or("max_iter", 2500));
         const double pscale = ctx.param_or("proposal_scale", 1.0);
         auto objective = [&model](const std::array<double, 2>& mu) {
           return mixture_loglik(model, mu[0], mu[1]);
         };
         const std::array<std::pair<std::string, Schedule>, 4> schedules{
             std::pair{std::string("log"), Schedule{ScheduleKind::log_inverse, 1.0}},
             {std::string("log10"), Schedule{ScheduleKind::scaled_log_inverse, 1.0}},
             {std::string("sqrtlog10"), Schedule{ScheduleKind::sqrt_log_inverse, 1.0}},
             {std::string("geom095"), Schedule{ScheduleKind::geometric, 0.95}}};
         const double dm = mean_of(model.data);
         std::vector<double> first_path;
         for (std::size_t sc = 0; sc < schedules.size(); ++sc) {
           std::vector<int> hits(ctx.spec.replications, 0);
           parallel_for(ctx.spec.replications, ctx.spec.threads, [&](std::size_t r) {
             RngStream s = ctx.stream(1 + sc * ctx.spec.replications + r);
             const std::array<double, 2> start{dm + normal_quantile(s.uniform()),
                                               dm + normal_quantile(s.uniform())};
             const auto res = simulated_annealing<2>(objective, start, schedules[sc].second,
                                                     pscale, max_iter, s);
             hits[r] = attribute_mode(res.final) == MixtureMode::main ? 1 : 0;
           });
           double rate = 0.0;
           for (int h : hits) rate += h;
           rate /= static_cast<double>(ctx.spec.replications);
           ctx.estimate("recovery_" + schedules[sc].first, rate);
         }
         RngStream s0 = ctx.stream(777);
         const auto demo = simulated_annealing<2>(
             objective, {dm, dm}, schedules[0].second, pscale, max_iter, s0);
         std::vector<double> mu1s;
         for (const auto& p : demo.path) mu1s.push_back(p[0]);
         ctx.chains.push_back(series_as_trace(mu1s, "mu1"));
       }});

  defs.push_back(
      {"ch5.em-linkage", "5", "EM for the genetic linkage counts", "", 10000, 1,
       {"theta0"},
       [](RunContext& ctx) {
         const double theta0 = ctx.param_or("theta0", 0.5);
         const auto path = em_linkage(datasets::linkage, theta0, 1e-8);
         ctx.estimate("theta_hat", path.back());
         ctx.estimate("iterations", static_cast<double>(path.size() - 1));
         // positive root of 92 t^2 - 3 t - 26
         ctx.estimate("quadratic_root", (3.0 + std::sqrt(9.0 + 4.0 * 92.0 * 26.0)) / 184.0);
         bool monotone = true;
         for (std::size_t i = 1; i < path.size(); ++i)
           monotone &= linkage_loglik(datasets::linkage, path[i]) >=
                       linkage_loglik(datasets::linkage, path[i - 1]) - 1e-10;
         ctx.estimate("loglik_monotone", monotone ? 1.0 : 0.0);
         ctx.chains.push_back(series_as_trace(path, "theta"));
       }});

  defs.push_back(
      {"ch5.mcem-linkage", "5", "Monte Carlo EM envelopes around the exact EM path", "",
       25, 500, {"theta0", "m_small", "m_large"},
       [](RunContext& ctx) {
         const double theta0 = ctx.param_or("theta0", 0.1);
         const auto m_small = static_cast<std::size_t>(ctx.param_or("m_small", 100));
         const auto m_large = static_cast<std::size_t>(ctx.param_or("m_large", 10000));
         const auto em = em_linkage(datasets::linkage, theta0, 1e-6);
         const std::size_t iters = ctx.spec.n;
         RngStream s1 = ctx.stream(1), s2 = ctx.stream(2);
         const auto env_small = mcem_linkage(datasets::linkage, theta0, m_small,
                                             ctx.spec.replications, iters, s1);
         const auto env_large =
             mcem_linkage(datasets::linkage, theta0, m_large, 20, iters, s2);
         auto width_at_end = [](const McemEnvelope& e) {
           return e.upper.back() - e.lower.back();
         };
         ctx.estimate("width_small_M", width_at_end(env_small));
         ctx.estimate("width_large_M", width_at_end(env_large));
         std::size_t contained = 0, total = 0;
         for (std::size_t i = 0; i < std::min(em.size(), env_small.lower.size()); ++i) {
           ++total;
           contained += em[i] >= env_small.lower[i] - 1e-12 &&
                        em[i] <= env_small.upper[i] + 1e-12;
         }
         ctx.estimate("em_containment_fraction",
                      static_cast<double>(contained) / static_cast<double>(total));
         ctx.chains.push_back(series_as_trace(env_small.paths.front(), "theta"));
       }});

  defs.push_back(
      {"ch5.em-censored", "5", "EM for the right-censored normal sample", "", 10000, 1,
       {"theta0"},
       [](RunContext& ctx) {
         const double theta0 = ctx.param_or("theta0", 2.0);
         const auto& y = datasets::censored_normal();
         const auto path = em_censored_normal(y, datasets::censored_normal_cutoff,
                                              datasets::censored_normal_total, theta0, 1e-10);
         ctx.estimate("theta_hat", path.back());
         ctx.estimate("iterations", static_cast<double>(path.size() - 1));
         bool monotone = true;
         for (std::size_t i = 1; i < path.size(); ++i)
           monotone &= censored_normal_loglik(y, datasets::censored_normal_cutoff,
                                              datasets::censored_normal_total, path[i]) >=
                       censored_normal_loglik(y, datasets::censored_normal_cutoff,
                                              datasets::censored_normal_total, path[i - 1]) -
                           1e-10;
         ctx.estimate("loglik_monotone", monotone ? 1.0 : 0.0);
         ctx.chains.push_back(series_as_trace(path, "theta"));
       }});

  defs.push_back(
      {"ch5.em-expmix", "5",
       "EM for the two-exponential mixture with the printed update", "", 100, 20, {},
       [](RunContext& ctx) {
         const auto& x = datasets::exp_mixture();
         const double xm = mean_of(x);
         RngStream s = ctx.stream();
         std::size_t degenerate = 0;
         double last_lam = 0.0, last_mu = 0.0, last_p = 0.0;
         for (std::size_t r = 0; r < ctx.spec.replications; ++r) {
           const std::array<double, 3> start{
               0.5, 1.0 / xm * (1.0 + 0.1 * (s.uniform() - 0.5)),
               1.0 / xm * (1.0 + 0.1 * (s.uniform() - 0.5))};
           const auto res = em_exp_mixture(x, start, 1e-8);
           degenerate += res.degenerate_component;
           last_p = res.path.back()[0];
           last_lam = res.path.back()[1];
           last_mu = res.path.back()[2];
         }
         ctx.estimate("degenerate_fraction",
                      static_cast<double>(degenerate) /
                          static_cast<double>(ctx.spec.replications));
         ctx.estimate("final_p", last_p);
         ctx.estimate("final_lambda", last_lam);
         ctx.estimate("final_mu", last_mu);
         ctx.note("printed M-step sets lambda = S1/P (inverted rate); kept as printed");
         ctx.chains.push_back(series_as_trace({last_p, last_lam, last_mu}, "final"));
       }});

  defs.push_back(
      {"ch5.bisection", "5", "bisection root finding on an oscillating cubic", "", 100,
       1, {},
       [](RunContext& ctx) {
         auto h = [](double x) {
           return (x - 3.0) * (x + 6.0) * (1.0 + std::sin(60.0 * x));
         };
         const double r1 = find_root_bisection(h, -2.0, 10.0, 1e-10);
         const double r2 = find_root_bisection(h, -8.0, 1.0, 1e-10);
         ctx.estimate("root_right", r1);
         ctx.estimate("root_left", r2);
         ctx.estimate("h_right", h(r1));
         ctx.estimate("h_left", h(r2));
         ctx.note("only one root per bracket is found; the sin factor hides the rest");
         ctx.chains.push_back(series_as_trace({r1, r2}, "root"));
       }});
}

}  // namespace carlo::registry
