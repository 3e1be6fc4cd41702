#pragma once

#include <cmath>
#include <limits>

#include "frbank/common.hpp"
#include "frbank/rootfind.hpp"

namespace frbank {

// Decentralized-market preferences and Kalai proportional bargaining.
//
// u(q) = B q^{1-b}/(1-b), c(q) = q, and the buyer keeps a fixed share theta
// of the match surplus. The payment function v, the liquidity premium, and
// the premium-of-real-balances map L (with its inverse) are the demand-side
// objects every regime solver calls.
struct Preferences {
  double B;      // utility scale, > 0
  double b;      // utility curvature, in (0,1) so u(0) = 0
  double theta;  // buyer bargaining share, in (0,1]

  Preferences(double B_, double b_, double theta_) : B(B_), b(b_), theta(theta_) {
    if (!(B > 0.0) || !std::isfinite(B))
      throw DomainError("Preferences: utility scale B must be positive");
    if (!(b > 0.0) || !(b < 1.0))
      throw DomainError("Preferences: curvature b must lie in (0,1)");
    if (!(theta > 0.0) || !(theta <= 1.0))
      throw DomainError("Preferences: bargaining share theta must lie in (0,1]");
  }

  double u(double q) const { return B * std::pow(q, 1.0 - b) / (1.0 - b); }
  double u_prime(double q) const { return B * std::pow(q, -b); }
  double u_second(double q) const { return -b * B * std::pow(q, -b - 1.0); }

  static double c(double q) { return q; }
  static double c_prime(double) { return 1.0; }

  // Efficient quantity: u'(q*) = c'(q*) = 1.
  double q_star() const { return std::pow(B, 1.0 / b); }

  // Kalai payment p = v(q) = (1-theta) u(q) + theta c(q), valid on [0, q*].
  double payment(double q) const {
    check_quantity(q);
    return (1.0 - theta) * u(q) + theta * q;
  }

  double payment_prime(double q) const {
    return (1.0 - theta) * u_prime(q) + theta;
  }

  // Payment at the efficient quantity; liquidity beyond p* is never used.
  double p_star() const {
    const double qs = q_star();
    return (1.0 - theta) * u(qs) + theta * qs;
  }

  // Inverse of the strictly increasing payment function on [0, p*].
  double payment_inverse(double p) const {
    const double ps = p_star();
    if (!(p >= 0.0) || p > ps * (1.0 + 1e-12))
      throw DomainError("payment_inverse: payment outside [0, p*]");
    if (p == 0.0) return 0.0;
    if (p >= ps) return q_star();
    auto f = [&](double q) { return payment(q) - p; };
    auto df = [&](double q) { return payment_prime(q); };
    return bisect_newton(f, df, 0.0, q_star());
  }

  // lambda(q) = u'(q)/v'(q) - 1, the marginal surplus per unit of payment.
  // Positive below q*, zero at q*, strictly decreasing. Rounding in u' can
  // land a hair under 1 at q = q*; the premium is zero there by definition.
  double liquidity_premium(double q) const {
    check_quantity(q);
    if (q == 0.0)
      throw DomainError("liquidity_premium: q must be positive");
    const double up = u_prime(q);
    if (up <= 1.0) return 0.0;
    return theta * (up - 1.0) / ((1.0 - theta) * up + theta);
  }

  // d lambda / dq = theta u''(q) / v'(q)^2.
  double liquidity_premium_prime(double q) const {
    const double vp = payment_prime(q);
    return theta * u_second(q) / (vp * vp);
  }

  // Supremum of the premium as q -> 0. For theta < 1 the premium is bounded
  // by theta/(1-theta); no positive real balance supports rates above it.
  double premium_sup() const {
    if (theta < 1.0) return theta / (1.0 - theta);
    return std::numeric_limits<double>::infinity();
  }

  // L(z) = lambda(v^{-1}(z)); extended by 0 for z >= p* (satiation).
  double L(double z) const {
    if (!(z > 0.0)) throw DomainError("L: real balance must be positive");
    if (z >= p_star()) return 0.0;
    return liquidity_premium(payment_inverse(z));
  }

  // Real balance solving L(z) = i. Returns p* at i = 0 and 0 once i reaches
  // the premium supremum (money demand collapses).
  double L_inverse(double i) const {
    if (!(i >= 0.0)) throw DomainError("L_inverse: rate must be nonnegative");
    if (i == 0.0) return p_star();
    if (i >= premium_sup()) return 0.0;
    const double qs = q_star();
    // lambda is decreasing: find a lower endpoint with lambda > i.
    double lo = 0.5 * qs;
    int guard = 0;
    while (liquidity_premium(lo) <= i) {
      lo *= 0.5;
      if (++guard > 1100) throw SolverError("L_inverse: bracket search failed");
    }
    auto f = [&](double q) { return liquidity_premium(q) - i; };
    auto df = [&](double q) { return liquidity_premium_prime(q); };
    const double q = bisect_newton(f, df, lo, qs);
    return payment(q);
  }

 private:
  void check_quantity(double q) const {
    if (!(q >= 0.0) || q > q_star() * (1.0 + 1e-12))
      throw DomainError("quantity outside [0, q*]");
  }
};

}  // namespace frbank
