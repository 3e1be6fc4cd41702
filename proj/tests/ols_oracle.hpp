#pragma once

// Hand-rolled normal-equations regression oracle used by the unit and
// acceptance suites. Builds X'X and X'y with plain loops and solves by
// Gaussian elimination; shares no code with the library's QR path.

#include <cmath>
#include <cstddef>
#include <vector>

namespace testutil {

struct OracleFit {
  std::vector<double> coef;
  std::vector<double> se;
  std::vector<double> resid;
  double rss = 0.0;
};

inline std::vector<double> gauss_solve(std::vector<std::vector<double>> M,
                                       std::vector<double> rhs) {
  const std::size_t k = rhs.size();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
    std::swap(M[c], M[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = M[r][c] / M[c][c];
      for (std::size_t j = c; j < k; ++j) M[r][j] -= f * M[c][j];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<double> x(k);
  for (std::size_t c = 0; c < k; ++c) x[c] = rhs[c] / M[c][c];
  return x;
}

inline OracleFit ols_oracle(const std::vector<double>& y,
                            const std::vector<std::vector<double>>& X, int lag) {
  const std::size_t n = y.size();
  const std::size_t k = X.size() + 1;
  auto row = [&](std::size_t t) {
    std::vector<double> r(k, 1.0);
    for (std::size_t c = 0; c + 1 < k; ++c) r[c + 1] = X[c][t];
    return r;
  };
  std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
  std::vector<double> xty(k, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const auto r = row(t);
    for (std::size_t a = 0; a < k; ++a) {
      xty[a] += r[a] * y[t];
      for (std::size_t b = 0; b < k; ++b) xtx[a][b] += r[a] * r[b];
    }
  }
  OracleFit fit;
  fit.coef = gauss_solve(xtx, xty);
  fit.resid.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto r = row(t);
    double fitv = 0.0;
    for (std::size_t a = 0; a < k; ++a) fitv += r[a] * fit.coef[a];
    fit.resid[t] = y[t] - fitv;
    fit.rss += fit.resid[t] * fit.resid[t];
  }
  // Bartlett-weighted sandwich, scaled by n/(n-k).
  std::vector<std::vector<double>> S(k, std::vector<double>(k, 0.0));
  for (std::size_t t = 0; t < n; ++t) {
    const auto r = row(t);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        S[a][b] += fit.resid[t] * fit.resid[t] * r[a] * r[b];
  }
  for (int s = 1; s <= lag; ++s) {
    const double w = 1.0 - static_cast<double>(s) / (lag + 1.0);
    for (std::size_t t = s; t < n; ++t) {
      const auto rt = row(t);
      const auto rl = row(t - s);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
          S[a][b] += w * fit.resid[t] * fit.resid[t - s] *
                     (rt[a] * rl[b] + rl[a] * rt[b]);
    }
  }
  std::vector<std::vector<double>> inv(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> e(k, 0.0);
    e[c] = 1.0;
    inv[c] = gauss_solve(xtx, e);  // column c of (X'X)^{-1}
  }
  fit.se.resize(k);
  const double dof = static_cast<double>(n) / static_cast<double>(n - k);
  for (std::size_t a = 0; a < k; ++a) {
    double v = 0.0;
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = 0; q < k; ++q)
        v += inv[p][a] * S[p][q] * inv[q][a];
    fit.se[a] = std::sqrt(dof * v);
  }
  return fit;
}

}  // namespace testutil
