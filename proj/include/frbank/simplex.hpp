#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "frbank/common.hpp"

namespace frbank {

struct SimplexOptions {
  int max_iter = 4000;      // per restart
  int restarts = 4;         // fresh simplexes around the incumbent best
  double f_tol = 1e-14;     // relative spread of simplex values
  double x_tol = 1e-12;     // simplex diameter
  double init_scale = 0.10; // first simplex edge, relative to the box
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  long evals = 0;
  int iters = 0;
};

// Nelder-Mead downhill simplex with box constraints enforced by projection.
// Deterministic for fixed inputs. Restarts rebuild the simplex around the
// incumbent best with a shrinking edge, which recovers from degenerate
// collapse along a boundary.
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x0,
                                 const std::vector<double>& lo,
                                 const std::vector<double>& hi,
                                 const SimplexOptions& opt = {}) {
  const std::size_t dim = x0.size();
  if (lo.size() != dim || hi.size() != dim)
    throw DomainError("nelder_mead: bound dimensions do not match x0");
  for (std::size_t d = 0; d < dim; ++d) {
    if (!(lo[d] < hi[d])) throw DomainError("nelder_mead: empty box");
    x0[d] = std::clamp(x0[d], lo[d], hi[d]);
  }

  SimplexResult best;
  best.x = x0;
  auto project = [&](std::vector<double>& x) {
    for (std::size_t d = 0; d < dim; ++d) x[d] = std::clamp(x[d], lo[d], hi[d]);
  };
  best.f = f(best.x);
  ++best.evals;

  constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  for (int round = 0; round <= opt.restarts; ++round) {
    const double edge = opt.init_scale * std::pow(0.5, round);
    std::vector<std::vector<double>> xs(dim + 1, best.x);
    for (std::size_t d = 0; d < dim; ++d) {
      double step = edge * (hi[d] - lo[d]);
      if (xs[d + 1][d] + step > hi[d]) step = -step;
      xs[d + 1][d] += step;
      project(xs[d + 1]);
    }
    std::vector<double> fs(dim + 1);
    for (std::size_t v = 0; v <= dim; ++v) {
      fs[v] = f(xs[v]);
      ++best.evals;
    }

    for (int it = 0; it < opt.max_iter; ++it) {
      std::vector<std::size_t> order(dim + 1);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
      const std::size_t ibest = order.front(), iworst = order.back();
      const std::size_t isecond = order[dim - 1];
      ++best.iters;

      double diam = 0.0;
      for (std::size_t v = 0; v <= dim; ++v)
        for (std::size_t d = 0; d < dim; ++d)
          diam = std::max(diam, std::abs(xs[v][d] - xs[ibest][d]));
      const double spread = std::abs(fs[iworst] - fs[ibest]);
      if (spread <= opt.f_tol * (1.0 + std::abs(fs[ibest])) && diam <= opt.x_tol)
        break;

      std::vector<double> centroid(dim, 0.0);
      for (std::size_t v = 0; v <= dim; ++v) {
        if (v == iworst) continue;
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += xs[v][d];
      }
      for (std::size_t d = 0; d < dim; ++d) centroid[d] /= dim;

      auto blend = [&](double t) {
        std::vector<double> x(dim);
        for (std::size_t d = 0; d < dim; ++d)
          x[d] = centroid[d] + t * (centroid[d] - xs[iworst][d]);
        project(x);
        return x;
      };

      const std::vector<double> xr = blend(alpha);
      const double fr = f(xr);
      ++best.evals;
      if (fr < fs[ibest]) {
        const std::vector<double> xe = blend(gamma);
        const double fe = f(xe);
        ++best.evals;
        if (fe < fr) {
          xs[iworst] = xe;
          fs[iworst] = fe;
        } else {
          xs[iworst] = xr;
          fs[iworst] = fr;
        }
      } else if (fr < fs[isecond]) {
        xs[iworst] = xr;
        fs[iworst] = fr;
      } else {
        const std::vector<double> xc = blend(fr < fs[iworst] ? rho : -rho);
        const double fc = f(xc);
        ++best.evals;
        if (fc < std::min(fr, fs[iworst])) {
          xs[iworst] = xc;
          fs[iworst] = fc;
        } else {
          for (std::size_t v = 0; v <= dim; ++v) {
            if (v == ibest) continue;
            for (std::size_t d = 0; d < dim; ++d)
              xs[v][d] = xs[ibest][d] + sigma * (xs[v][d] - xs[ibest][d]);
            project(xs[v]);
            fs[v] = f(xs[v]);
            ++best.evals;
          }
        }
      }
    }

    for (std::size_t v = 0; v <= dim; ++v) {
      if (fs[v] < best.f) {
        best.f = fs[v];
        best.x = xs[v];
      }
    }
  }
  return best;
}

}  // namespace frbank
