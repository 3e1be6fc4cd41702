#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "frbank/common.hpp"

namespace frbank {

// Bracketing bisection on [lo, hi]; f(lo) and f(hi) must straddle zero.
// With xtol = 0 it runs until the bracket collapses to adjacent doubles,
// which yields close to full double precision on well-scaled problems.
template <class F>
double bisect(F&& f, double lo, double hi, int max_iter = 200,
              double xtol = 0.0) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw SolverError("bisect: no sign change over bracket");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= std::min(lo, hi) || mid >= std::max(lo, hi)) break;
    if (std::abs(hi - lo) <= xtol) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Safeguarded Newton within a shrinking sign bracket: Newton proposals that
// stay inside the bracket are taken, anything else falls back to the
// midpoint. Globally convergent with near-quadratic tail.
template <class F, class DF>
double bisect_newton(F&& f, DF&& df, double lo, double hi, int max_iter = 110) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw SolverError("bisect_newton: no sign change over bracket");
  if (lo > hi) {
    std::swap(lo, hi);
    flo = fhi;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double d = df(x);
    double next = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(d) && d != 0.0) next = x - fx / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next <= lo || next >= hi ||
        std::abs(next - x) <= 4e-16 * std::max(1.0, std::abs(next)))
      return next > lo && next < hi ? next : 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

// Grows the upper end of [lo, hi] geometrically until f changes sign.
// Failure after max_doublings signals economically inadmissible parameters.
template <class F>
std::pair<double, double> grow_upper_bracket(F&& f, double lo, double hi,
                                             int max_doublings = 60) {
  const double flo = f(lo);
  for (int it = 0; it < max_doublings; ++it) {
    if ((f(hi) > 0.0) != (flo > 0.0)) return {lo, hi};
    hi *= 2.0;
  }
  throw SolverError("grow_upper_bracket: no sign change after 60 doublings");
}

}  // namespace frbank
