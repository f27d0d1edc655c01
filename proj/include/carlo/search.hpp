#pragma once

#include <cmath>
#include <functional>

#include "carlo/errors.hpp"

namespace carlo {

/// Golden-section search for the minimum of a unimodal f on [lo, up].
template <typename F>
double golden_section_minimize(const F& f, double lo, double up, double tol = 1e-10) {
  const double invphi = 0.6180339887498949;
  double a = lo, b = up;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

template <typename F>
double golden_section_maximize(const F& f, double lo, double up, double tol = 1e-10) {
  return golden_section_minimize([&](double x) { return -f(x); }, lo, up, tol);
}

/// Interval halving on a sign change. Finds one root; nothing is said about
/// the others (a function with many oscillations keeps them all hidden).
template <typename F>
double find_root_bisection(const F& h, double lo, double up, double tol = 1e-10) {
  double flo = h(lo), fup = h(up);
  if (flo == 0.0) return lo;
  if (fup == 0.0) return up;
  if (flo * fup > 0.0)
    throw domain_error("find_root_bisection: no sign change over the bracket");
  while (up - lo > tol) {
    const double mid = 0.5 * (lo + up);
    const double fm = h(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      up = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + up);
}

}  // namespace carlo
