#pragma once

#include <array>
#include <vector>

namespace carlo::datasets {

// 18 opening-season batting averages for the hierarchical shrinkage example.
inline const std::vector<double>& baseball() {
  static const std::vector<double> v{0.395, 0.375, 0.355, 0.334, 0.313, 0.313,
                                     0.291, 0.269, 0.247, 0.247, 0.224, 0.224,
                                     0.224, 0.224, 0.224, 0.200, 0.175, 0.148};
  return v;
}

// The 20 observed units of the censored-normal sample (10 more censored at 3.5).
inline const std::vector<double>& censored_normal() {
  static const std::vector<double> v{3.64, 2.78, 2.91, 2.85, 2.54, 2.62, 3.16,
                                     2.21, 4.05, 2.19, 2.97, 4.32, 3.56, 3.39,
                                     3.59, 4.13, 4.21, 1.68, 3.88, 4.33};
  return v;
}
inline constexpr double censored_normal_cutoff = 3.5;
inline constexpr std::size_t censored_normal_total = 30;

// ABO blood group phenotype counts (nA, nB, nAB, nO).
inline constexpr std::array<double, 4> blood_groups{186.0, 38.0, 13.0, 284.0};

// Genetic linkage multinomial counts.
inline constexpr std::array<double, 4> linkage{58.0, 12.0, 9.0, 13.0};

// The 12 observations fitted with a two-exponential mixture.
inline const std::vector<double>& exp_mixture() {
  static const std::vector<double> v{0.12, 0.17, 0.32, 0.56, 0.98, 1.03,
                                     1.10, 1.18, 1.23, 1.67, 1.68, 2.33};
  return v;
}

// Truncated Poisson summary: 313 = sum of the 347 fully observed counts,
// 360 observations, 13 censored at ">= 4".
inline constexpr double truncated_poisson_sum = 313.0;
inline constexpr double truncated_poisson_n = 360.0;
inline constexpr std::size_t truncated_poisson_censored = 13;

// Space-shuttle O-ring data, 23 flights: launch temperature (F) and whether
// any primary O-ring showed distress.
inline const std::vector<double>& challenger_temps() {
  static const std::vector<double> v{66, 70, 69, 68, 67, 72, 73, 70, 57, 63, 70, 78,
                                     67, 53, 67, 75, 70, 81, 76, 79, 75, 76, 58};
  return v;
}
inline const std::vector<double>& challenger_failures() {
  static const std::vector<double> v{0, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0,
                                     0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1};
  return v;
}

// The classic 50-point stopping-distance data: speed (mph), distance (ft).
inline const std::vector<double>& braking_speed() {
  static const std::vector<double> v{4,  4,  7,  7,  8,  9,  10, 10, 10, 11, 11, 12, 12,
                                     12, 12, 13, 13, 13, 13, 14, 14, 14, 14, 15, 15, 15,
                                     16, 16, 17, 17, 17, 18, 18, 18, 18, 19, 19, 19, 20,
                                     20, 20, 20, 20, 22, 23, 24, 24, 24, 24, 25};
  return v;
}
inline const std::vector<double>& braking_distance() {
  static const std::vector<double> v{2,  10, 4,  22, 16, 10, 18, 26, 34, 17,  28, 14, 20,
                                     24, 28, 26, 34, 34, 46, 26, 36, 60, 80,  20, 26, 54,
                                     32, 40, 32, 40, 50, 42, 56, 76, 84, 36,  46, 68, 32,
                                     48, 52, 56, 64, 66, 54, 70, 92, 93, 120, 85};
  return v;
}

}  // namespace carlo::datasets
