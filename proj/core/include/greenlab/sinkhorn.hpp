#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace greenlab {

struct SinkhornOptions {
  double epsilon0 = 0.0;   // initial regularization; 0 = 0.1 * max cost
  int halvings = 8;        // ε is halved this many times after the first stage
  std::size_t max_iter = 20000;  // per stage
  double tolerance = 1e-7; // L1 violation of the row marginal
};

struct SinkhornResult {
  double primal = 0.0;     // cost of a feasible rounded plan (upper bound on OT)
  double dual = 0.0;       // c-transformed dual objective (lower bound on OT)
  double entropic = 0.0;   // <P, C> of the final regularized plan
  double regularized = 0.0;  // <a, f> + <b, g>, the entropic OT value at the final ε
  double epsilon = 0.0;    // final regularization
  double marginal_error = 0.0;
  std::size_t iterations = 0;
};

/// Entropic optimal transport between discrete measures a (rows) and b
/// (columns) with row-major cost matrix C, in the log domain with ε-scaling.
/// Throws NumericalFailure (residual = marginal error) when a stage does not
/// reach the tolerance within max_iter iterations.
SinkhornResult sinkhorn(std::span<const double> a, std::span<const double> b, std::span<const double> cost,
                        const SinkhornOptions& options = {});

/// Entropic OT value of the symmetric problem (a, a) at regularization ε,
/// used to debias: S = OT_ε(a,b) - OT_ε(a,a)/2 - OT_ε(b,b)/2.
double sinkhorn_self_cost(std::span<const double> a, std::span<const double> cost, double epsilon);

}  // namespace greenlab
