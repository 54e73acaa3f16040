#pragma once

#include <functional>
#include <vector>

namespace greenlab::special {

/// Upper incomplete gamma Γ(a, x) for x > 0 and a a (possibly negative)
/// multiple of 1/2, as needed by the d-dimensional heat-split integrals.
double upper_gamma_half(double a, double x);

/// Exponential integral E1(x), x > 0.
double expint_e1(double x);

/// Trigamma ψ'(x), x > 0.
double trigamma(double x);

/// Dimension of the space of degree-l spherical harmonics on S^d.
double harmonic_dimension(int l, int d);

/// Gegenbauer polynomials normalized to value 1 at t = 1, degrees 0..L, for
/// the sphere S^d (d = 2 gives the Legendre polynomials). Writes L+1 values.
void normalized_gegenbauer(int L, int d, double t, std::vector<double>& out);

/// Legendre polynomials P_0..P_L and derivatives P'_0..P'_L at t in (-1, 1].
void legendre_with_derivative(int L, double t, std::vector<double>& p, std::vector<double>& dp);

/// Adaptive Gauss-Kronrod integral over [a, b]. Throws NumericalFailure when
/// the estimated relative error exceeds rel_tol.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

/// Jacobi theta-like sum Σ_{j∈Z} exp(-a j²), a > 0.
double theta_sum(double a);

}  // namespace greenlab::special
