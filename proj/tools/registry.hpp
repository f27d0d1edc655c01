#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "carlo/experiments.hpp"

namespace carlo::registry {

void add_ch2(std::vector<ExperimentDef>& defs);
void add_ch3(std::vector<ExperimentDef>& defs);
void add_ch4(std::vector<ExperimentDef>& defs);
void add_ch5(std::vector<ExperimentDef>& defs);
void add_ch6(std::vector<ExperimentDef>& defs);
void add_ch7(std::vector<ExperimentDef>& defs);
void add_ch8(std::vector<ExperimentDef>& defs);

// pb:fitz weight vectors exactly as printed (see registry_ch3.cpp)
std::array<WeightedSample, 3> fitz_printed_weight_sets(std::size_t n, RngStream& s1,
                                                       RngStream& s2, RngStream& s3);

// small numeric helpers shared by experiment bodies

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double corr_of(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double cov_of(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sab += (a[i] - ma) * (b[i] - mb);
  return sab / static_cast<double>(a.size() - 1);
}

inline double lag_autocorr(const std::vector<double>& v, std::size_t lag) {
  const double m = mean_of(v);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < v.size(); ++t) {
    den += (v[t] - m) * (v[t] - m);
    if (t + lag < v.size()) num += (v[t] - m) * (v[t + lag] - m);
  }
  return num / den;
}

template <typename F>
double simpson(const F& f, double a, double b, std::size_t n_panels = 2000) {
  const double h = (b - a) / static_cast<double>(2 * n_panels);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < 2 * n_panels; ++i)
    s += f(a + static_cast<double>(i) * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline std::vector<double> thin_series(const std::vector<double>& v, std::size_t by) {
  std::vector<double> out;
  out.reserve(v.size() / by + 1);
  for (std::size_t i = 0; i < v.size(); i += by) out.push_back(v[i]);
  return out;
}

}  // namespace carlo::registry
