#include "greenlab/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <numbers>

#include "greenlab/error.hpp"

namespace greenlab::special {

double expint_e1(double x) {
  if (!(x > 0.0)) throw InvalidInput("E1 requires x > 0");
  return boost::math::expint(1, x);
}

double trigamma(double x) { return boost::math::trigamma(x); }

double upper_gamma_half(double a, double x) {
  if (!(x > 0.0)) throw InvalidInput("incomplete gamma requires x > 0");
  const double twice = 2.0 * a;
  if (std::abs(twice - std::round(twice)) > 1e-12) {
    throw InvalidInput("incomplete gamma order must be a multiple of 1/2");
  }
  const bool half_integer = static_cast<long>(std::round(twice)) % 2 != 0;
  // Seed at a0 = 1/2 or a0 = 0 and walk with Γ(a+1,x) = aΓ(a,x) + x^a e^{-x}.
  double a0 = half_integer ? 0.5 : 0.0;
  double g = half_integer ? std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x)) : expint_e1(x);
  const double ex = std::exp(-x);
  while (a0 < a - 1e-12) {
    g = a0 * g + std::pow(x, a0) * ex;
    a0 += 1.0;
  }
  while (a0 > a + 1e-12) {
    // Downward: Γ(a-1,x) = (Γ(a,x) - x^{a-1} e^{-x}) / (a-1).
    g = (g - std::pow(x, a0 - 1.0) * ex) / (a0 - 1.0);
    a0 -= 1.0;
  }
  return g;
}

double harmonic_dimension(int l, int d) {
  if (l == 0) return 1.0;
  // (2l+d-1)/(d-1) * C(l+d-2, d-2), an integer.
  double binom = 1.0;
  for (int k = 1; k <= d - 2; ++k) binom = binom * (l + k) / k;
  return std::round((2.0 * l + d - 1) * binom / (d - 1));
}

void normalized_gegenbauer(int L, int d, double t, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(L) + 1, 0.0);
  out[0] = 1.0;
  if (L == 0) return;
  out[1] = t;
  for (int l = 1; l < L; ++l) {
    out[l + 1] = ((2.0 * l + d - 1) * t * out[l] - l * out[l - 1]) / (l + d - 1.0);
  }
}

void legendre_with_derivative(int L, double t, std::vector<double>& p, std::vector<double>& dp) {
  p.assign(static_cast<std::size_t>(L) + 1, 0.0);
  dp.assign(static_cast<std::size_t>(L) + 1, 0.0);
  p[0] = 1.0;
  if (L == 0) return;
  p[1] = t;
  dp[1] = 1.0;
  for (int l = 1; l < L; ++l) {
    p[l + 1] = ((2.0 * l + 1) * t * p[l] - l * p[l - 1]) / (l + 1.0);
    // P'_{l+1} = P'_{l-1} + (2l+1) P_l avoids dividing by 1 - t^2.
    dp[l + 1] = dp[l - 1] + (2.0 * l + 1) * p[l];
  }
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  // Error estimates are relative to the L1 norm of f.
  double error = 0.0;
  double l1 = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, rel_tol, &error, &l1);
  if (std::isfinite(value) && error <= rel_tol * std::max(l1, 1e-300)) return value;
  // Double-exponential fallback for endpoint singularities.
  boost::math::quadrature::tanh_sinh<double> rule;
  value = rule.integrate(f, a, b, rel_tol, &error, &l1);
  const double scale = std::max(l1, 1e-300);
  if (!std::isfinite(value) || error > rel_tol * scale) {
    throw NumericalFailure("quadrature did not converge", error / scale);
  }
  return value;
}

double theta_sum(double a) {
  if (!(a > 0.0)) throw InvalidInput("theta_sum requires a > 0");
  // Poisson dual for small a keeps the number of terms bounded.
  if (a < 1.0) {
    const double b = std::numbers::pi * std::numbers::pi / a;
    double s = 1.0;
    for (int j = 1; j < 64; ++j) {
      const double term = 2.0 * std::exp(-b * j * j);
      s += term;
      if (term < 1e-18) break;
    }
    return std::sqrt(std::numbers::pi / a) * s;
  }
  double s = 1.0;
  for (int j = 1; j < 64; ++j) {
    const double term = 2.0 * std::exp(-a * j * j);
    s += term;
    if (term < 1e-18 * s) break;
  }
  return s;
}

}  // namespace greenlab::special
