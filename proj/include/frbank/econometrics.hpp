#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "frbank/common.hpp"

namespace frbank {

struct RegressionResult {
  std::vector<double> coef;  // intercept first, regressors in input order
  std::vector<double> se;    // HAC standard errors
  double r2 = 0.0;
  double adj_r2 = 0.0;
  std::vector<double> residuals;
  std::size_t n = 0;
  std::size_t n_coef = 0;
};

namespace detail {

inline Eigen::MatrixXd design_matrix(const std::vector<std::vector<double>>& X,
                                     std::size_t n) {
  Eigen::MatrixXd D(n, X.size() + 1);
  D.col(0).setOnes();
  for (std::size_t c = 0; c < X.size(); ++c) {
    if (X[c].size() != n)
      throw DomainError("ols_nw: regressor length mismatch");
    for (std::size_t t = 0; t < n; ++t) D(t, c + 1) = X[c][t];
  }
  return D;
}

}  // namespace detail

// Intercept-augmented least squares with Newey-West standard errors using
// Bartlett weights w_s = 1 - s/(lag+1) and an n/(n-k) small-sample
// adjustment, so lag 0 on constant-magnitude residuals reproduces the
// textbook homoskedastic errors.
inline RegressionResult ols_nw(const std::vector<double>& y,
                               const std::vector<std::vector<double>>& X,
                               int lag) {
  const std::size_t n = y.size();
  const std::size_t k = X.size() + 1;
  if (lag < 0) throw DomainError("ols_nw: lag must be nonnegative");
  if (n <= X.size() + 1)
    throw DomainError("ols_nw: need more observations than regressors");

  const Eigen::MatrixXd D = detail::design_matrix(X, n);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
  qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(qr.rank()) < k)
    throw DomainError("ols_nw: rank-deficient design matrix");
  const Eigen::VectorXd beta = qr.solve(yv);
  const Eigen::VectorXd e = yv - D * beta;

  const Eigen::MatrixXd xtx_inv =
      (D.transpose() * D).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t t = 0; t < n; ++t)
    meat += e(t) * e(t) * D.row(t).transpose() * D.row(t);
  for (int s = 1; s <= lag; ++s) {
    const double w = 1.0 - static_cast<double>(s) / (lag + 1.0);
    for (std::size_t t = s; t < n; ++t) {
      const Eigen::MatrixXd cross =
          e(t) * e(t - s) * D.row(t).transpose() * D.row(t - s);
      meat += w * (cross + cross.transpose());
    }
  }
  const double dof_adj = static_cast<double>(n) / static_cast<double>(n - k);
  const Eigen::MatrixXd cov = dof_adj * xtx_inv * meat * xtx_inv;

  RegressionResult out;
  out.n = n;
  out.n_coef = k;
  out.coef.assign(beta.data(), beta.data() + k);
  out.se.resize(k);
  for (std::size_t c = 0; c < k; ++c)
    out.se[c] = std::sqrt(std::max(cov(c, c), 0.0));
  out.residuals.assign(e.data(), e.data() + n);

  const double mean = yv.mean();
  const double tss = (yv.array() - mean).matrix().squaredNorm();
  const double rss = e.squaredNorm();
  out.r2 = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  out.adj_r2 = 1.0 - (1.0 - out.r2) * (n - 1.0) / (n - static_cast<double>(k));
  return out;
}

struct ChowResult {
  double f = 0.0;
  std::size_t q = 0;         // restrictions: breaks x (regressors + intercept)
  std::size_t df_denom = 0;  // n - segments x (regressors + intercept)
  double rss_restricted = 0.0;
  double rss_unrestricted = 0.0;
};

namespace detail {

inline double segment_rss(const std::vector<double>& y,
                          const std::vector<std::vector<double>>& X,
                          std::size_t lo, std::size_t hi) {
  std::vector<double> ys(y.begin() + lo, y.begin() + hi);
  std::vector<std::vector<double>> Xs;
  Xs.reserve(X.size());
  for (const auto& col : X)
    Xs.emplace_back(col.begin() + lo, col.begin() + hi);
  const RegressionResult r = ols_nw(ys, Xs, 0);
  double rss = 0.0;
  for (double e : r.residuals) rss += e * e;
  return rss;
}

}  // namespace detail

// Chow test for coefficient breaks at known dates. Each break adds a full
// set of shift and interaction terms, so the restriction count is
// breaks x (regressors + 1) and the unrestricted model is segment-by-segment
// least squares. A perfect pooled fit yields F = 0; a perfect segmented fit
// with pooled misfit yields an infinite statistic rather than a fault.
inline ChowResult chow_f(const std::vector<double>& y,
                         const std::vector<std::vector<double>>& X,
                         const std::vector<std::size_t>& breaks) {
  const std::size_t n = y.size();
  const std::size_t k = X.size() + 1;
  if (breaks.empty()) throw DomainError("chow_f: need at least one break");
  std::vector<std::size_t> edges{0};
  for (std::size_t b : breaks) {
    if (b <= edges.back() || b >= n)
      throw DomainError("chow_f: breaks must be increasing interior indices");
    edges.push_back(b);
  }
  edges.push_back(n);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s)
    if (edges[s + 1] - edges[s] <= k)
      throw DomainError("chow_f: a segment has too few observations");

  ChowResult out;
  out.q = breaks.size() * k;
  out.df_denom = n - (breaks.size() + 1) * k;
  out.rss_restricted = detail::segment_rss(y, X, 0, n);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s)
    out.rss_unrestricted += detail::segment_rss(y, X, edges[s], edges[s + 1]);

  const double gain = std::max(out.rss_restricted - out.rss_unrestricted, 0.0);
  if (gain == 0.0) {
    out.f = 0.0;
  } else if (out.rss_unrestricted == 0.0) {
    out.f = std::numeric_limits<double>::infinity();
  } else {
    out.f = (gain / out.q) / (out.rss_unrestricted / out.df_denom);
  }
  return out;
}

}  // namespace frbank
