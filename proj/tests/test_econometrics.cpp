#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "frbank/econometrics.hpp"
#include "ols_oracle.hpp"

using frbank::ChowResult;
using frbank::DomainError;
using frbank::RegressionResult;



TEST_CASE("exact linear fit") {
  std::vector<double> x(20), y(20);
  for (int t = 0; t < 20; ++t) {
    x[t] = 0.3 * t - 1.0;
    y[t] = 2.0 * x[t];
  }
  const RegressionResult r = frbank::ols_nw(y, {x}, 1);
  CHECK_THAT(r.coef[0], Catch::Matchers::WithinAbs(0.0, 1e-12));
  CHECK_THAT(r.coef[1], Catch::Matchers::WithinRel(2.0, 1e-12));
  for (double e : r.residuals) CHECK(std::abs(e) <= 1e-12);
  CHECK(r.se[1] <= 1e-12);
  CHECK_THAT(r.r2, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("lag zero on constant-magnitude errors matches textbook errors") {
  // Paired regressor values make the alternating error pattern orthogonal
  // to the design, so the fitted residuals are exactly +-c.
  const int n = 40;
  const double c = 0.25;
  std::vector<double> x(n), y(n);
  for (int t = 0; t < n; ++t) {
    x[t] = 1.0 + t / 2;
    y[t] = 0.7 + 1.3 * x[t] + (t % 2 == 0 ? c : -c);
  }
  const RegressionResult r = frbank::ols_nw(y, {x}, 0);
  CHECK_THAT(r.coef[1], Catch::Matchers::WithinRel(1.3, 1e-12));

  // Textbook: se_j = sqrt(rss/(n-k) * (X'X)^{-1}_jj).
  double sxx = 0.0, sx = 0.0;
  for (int t = 0; t < n; ++t) {
    sxx += x[t] * x[t];
    sx += x[t];
  }
  const double det = n * sxx - sx * sx;
  const double sigma2 = n * c * c / (n - 2.0);
  const double se_slope = std::sqrt(sigma2 * n / det);
  const double se_icept = std::sqrt(sigma2 * sxx / det);
  CHECK_THAT(r.se[1], Catch::Matchers::WithinRel(se_slope, 1e-10));
  CHECK_THAT(r.se[0], Catch::Matchers::WithinRel(se_icept, 1e-10));
}

TEST_CASE("AR(1)-error dataset against the normal-equations oracle") {
  const int n = 200;
  std::mt19937 rng(42);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::vector<double> x1(n), x2(n), y(n);
  double e = 0.0;
  for (int t = 0; t < n; ++t) {
    x1[t] = static_cast<double>(t) / n;
    x2[t] = std::sin(0.37 * t);
    e = 0.6 * e + noise(rng);
    y[t] = 1.0 + 2.0 * x1[t] - 3.0 * x2[t] + e;
  }
  for (int lag : {0, 1, 4}) {
    const RegressionResult r = frbank::ols_nw(y, {x1, x2}, lag);
    const testutil::OracleFit o = testutil::ols_oracle(y, {x1, x2}, lag);
    for (int c = 0; c < 3; ++c) {
      CHECK_THAT(r.coef[c], Catch::Matchers::WithinAbs(o.coef[c], 1e-10));
      CHECK_THAT(r.se[c], Catch::Matchers::WithinAbs(o.se[c], 1e-10));
    }
  }
}

TEST_CASE("degenerate designs are rejected") {
  std::vector<double> y{1, 2, 3, 4, 5, 6};
  std::vector<double> constant(6, 2.0);
  CHECK_THROWS_AS(frbank::ols_nw(y, {constant}, 0), DomainError);

  std::vector<double> x{1, 2, 3, 4, 5, 6};
  std::vector<double> x2{2, 4, 6, 8, 10, 12};
  CHECK_THROWS_AS(frbank::ols_nw(y, {x, x2}, 0), DomainError);

  std::vector<double> shorty{1, 2};
  CHECK_THROWS_AS(frbank::ols_nw(shorty, {{1.0, 2.0}}, 0), DomainError);
  CHECK_THROWS_AS(frbank::ols_nw(y, {x}, -1), DomainError);
}

TEST_CASE("structural break statistic") {
  // Identical process on both sides of the break, exactly linear: F = 0.
  {
    std::vector<double> x(30), y(30);
    for (int t = 0; t < 30; ++t) {
      x[t] = 0.1 * t;
      y[t] = 2.0 + 3.0 * x[t];
    }
    const ChowResult c = frbank::chow_f(y, {x}, {15});
    CHECK(c.f == 0.0);
  }

  // Noise-free slope break: restricted misfit with a perfect segmented fit
  // sends the statistic to infinity without a division fault.
  {
    const int n = 100;
    std::vector<double> x(n), y(n);
    for (int t = 0; t < n; ++t) {
      x[t] = 0.05 * t;
      y[t] = 1.0 + (t < n / 2 ? 1.0 : 11.0) * x[t];
    }
    const ChowResult c = frbank::chow_f(y, {x}, {static_cast<std::size_t>(n / 2)});
    CHECK(c.f > 1e6);
    CHECK(!std::isnan(c.f));
    CHECK(c.rss_restricted > 1.0);
    CHECK(c.rss_unrestricted <= 1e-18);
    CHECK(c.q == 2);
    CHECK(c.df_denom == n - 4);
  }

  // Noisy break against a direct two-regression RSS computation.
  {
    const int n = 120;
    std::mt19937 rng(7);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<double> x(n), y(n);
    for (int t = 0; t < n; ++t) {
      x[t] = 0.05 * t;
      y[t] = (t < 60 ? 1.0 + 2.0 * x[t] : 0.5 + 2.8 * x[t]) + noise(rng);
    }
    const ChowResult c = frbank::chow_f(y, {x}, {60});

    const testutil::OracleFit pooled = testutil::ols_oracle(y, {x}, 0);
    std::vector<double> ya(y.begin(), y.begin() + 60), xa(x.begin(), x.begin() + 60);
    std::vector<double> yb(y.begin() + 60, y.end()), xb(x.begin() + 60, x.end());
    const double rss_u = testutil::ols_oracle(ya, {xa}, 0).rss + testutil::ols_oracle(yb, {xb}, 0).rss;
    const double f_oracle =
        ((pooled.rss - rss_u) / 2.0) / (rss_u / (n - 4.0));
    CHECK_THAT(c.f, Catch::Matchers::WithinAbs(f_oracle, 1e-8));
  }

  // Segments must keep enough observations.
  std::vector<double> y{1, 2, 3, 4, 5, 6};
  std::vector<double> x{0, 1, 2, 3, 4, 5};
  CHECK_THROWS_AS(frbank::chow_f(y, {x}, {1}), DomainError);
}
