#include "greenlab/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "greenlab/error.hpp"
#include "greenlab/parallel.hpp"

namespace greenlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Problem {
  std::size_t n, m;
  std::span<const double> a, b;
  std::span<const double> cost;  // n x m
  std::vector<double> cost_t;    // m x n
  std::vector<double> log_a, log_b;
};

// out_i = eps*log(w_i) - eps*LSE_j((pot_j - C_ij)/eps) over the rows of C.
void soft_c_transform(std::span<const double> C, std::size_t rows, std::size_t cols, std::span<const double> pot,
                      std::span<const double> log_w, double eps, std::span<double> out) {
  parallel::for_each_index(rows, [&](std::size_t i) {
    const double* c = C.data() + i * cols;
    double mx = kNegInf;
    for (std::size_t j = 0; j < cols; ++j) mx = std::max(mx, (pot[j] - c[j]) / eps);
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += std::exp((pot[j] - c[j]) / eps - mx);
    out[i] = eps * log_w[i] - eps * (mx + std::log(s));
  });
}

struct Bounds {
  double primal, dual, entropic;
};

Bounds evaluate(const Problem& p, std::span<const double> f, std::span<const double> g, double eps) {
  const std::size_t n = p.n, m = p.m;
  // Plan rows, their sums and the c-transform of g.
  std::vector<double> row_sum(n), entropic_row(n), fc(n);
  parallel::for_each_index(n, [&](std::size_t i) {
    const double* c = p.cost.data() + i * m;
    double s = 0.0, e = 0.0, mn = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      const double pij = std::exp((f[i] + g[j] - c[j]) / eps);
      s += pij;
      e += pij * c[j];
      mn = std::min(mn, c[j] - g[j]);
    }
    row_sum[i] = s;
    entropic_row[i] = e;
    fc[i] = mn;
  });
  Bounds out{};
  out.entropic = std::accumulate(entropic_row.begin(), entropic_row.end(), 0.0);
  out.dual = 0.0;
  for (std::size_t i = 0; i < n; ++i) out.dual += p.a[i] * fc[i];
  for (std::size_t j = 0; j < m; ++j) out.dual += p.b[j] * g[j];

  // Rounding onto the transport polytope: scale rows down, then columns
  // down, then add the rank-one correction.
  std::vector<double> row_scale(n);
  for (std::size_t i = 0; i < n; ++i) row_scale[i] = row_sum[i] > 0.0 ? std::min(1.0, p.a[i] / row_sum[i]) : 0.0;
  std::vector<double> col_sum(m, 0.0);
  parallel::for_each_index(m, [&](std::size_t j) {
    const double* c = p.cost_t.data() + j * n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += row_scale[i] * std::exp((f[i] + g[j] - c[i]) / eps);
    col_sum[j] = s;
  });
  std::vector<double> col_scale(m);
  for (std::size_t j = 0; j < m; ++j) col_scale[j] = col_sum[j] > 0.0 ? std::min(1.0, p.b[j] / col_sum[j]) : 0.0;

  std::vector<double> rows_y(n), cost_y(n);
  parallel::for_each_index(n, [&](std::size_t i) {
    const double* c = p.cost.data() + i * m;
    double s = 0.0, e = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double y = row_scale[i] * col_scale[j] * std::exp((f[i] + g[j] - c[j]) / eps);
      s += y;
      e += y * c[j];
    }
    rows_y[i] = s;
    cost_y[i] = e;
  });
  std::vector<double> err_r(n), err_c(m);
  double l1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err_r[i] = std::max(0.0, p.a[i] - rows_y[i]);
    l1 += err_r[i];
  }
  for (std::size_t j = 0; j < m; ++j) err_c[j] = std::max(0.0, p.b[j] - col_scale[j] * col_sum[j]);
  out.primal = std::accumulate(cost_y.begin(), cost_y.end(), 0.0);
  if (l1 > 0.0) {
    std::vector<double> corr(n, 0.0);
    parallel::for_each_index(n, [&](std::size_t i) {
      if (err_r[i] == 0.0) return;
      const double* c = p.cost.data() + i * m;
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += c[j] * err_c[j];
      corr[i] = err_r[i] * s;
    });
    out.primal += std::accumulate(corr.begin(), corr.end(), 0.0) / l1;
  }
  return out;
}

}  // namespace

SinkhornResult sinkhorn(std::span<const double> a, std::span<const double> b, std::span<const double> cost,
                        const SinkhornOptions& options) {
  Problem p{a.size(), b.size(), a, b, cost, {}, {}, {}};
  if (p.n == 0 || p.m == 0) throw InvalidInput("Sinkhorn needs nonempty marginals");
  if (cost.size() != p.n * p.m) throw InvalidInput("cost matrix has the wrong size");
  const double sa = std::accumulate(a.begin(), a.end(), 0.0);
  const double sb = std::accumulate(b.begin(), b.end(), 0.0);
  if (std::abs(sa - 1.0) > 1e-9 || std::abs(sb - 1.0) > 1e-9) throw InvalidInput("Sinkhorn marginals must sum to 1");
  for (double w : a) {
    if (!(w > 0.0)) throw InvalidInput("Sinkhorn weights must be positive");
  }
  for (double w : b) {
    if (!(w > 0.0)) throw InvalidInput("Sinkhorn weights must be positive");
  }
  p.log_a.resize(p.n);
  p.log_b.resize(p.m);
  std::transform(a.begin(), a.end(), p.log_a.begin(), [](double w) { return std::log(w); });
  std::transform(b.begin(), b.end(), p.log_b.begin(), [](double w) { return std::log(w); });
  p.cost_t.resize(cost.size());
  for (std::size_t i = 0; i < p.n; ++i) {
    for (std::size_t j = 0; j < p.m; ++j) p.cost_t[j * p.n + i] = cost[i * p.m + j];
  }
  const double max_cost = *std::max_element(cost.begin(), cost.end());

  double eps = options.epsilon0 > 0.0 ? options.epsilon0 : 0.1 * std::max(max_cost, 1e-300);
  std::vector<double> f(p.n, 0.0), g(p.m, 0.0), g_new(p.m);
  SinkhornResult result;
  for (int stage = 0; stage <= options.halvings; ++stage) {
    const bool last = stage == options.halvings;
    const double tol = last ? options.tolerance : std::max(options.tolerance, 1e-4);
    bool converged = false;
    double err = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < options.max_iter; ++it) {
      soft_c_transform(cost, p.n, p.m, g, p.log_a, eps, f);
      soft_c_transform(p.cost_t, p.m, p.n, f, p.log_b, eps, g_new);
      ++result.iterations;
      // Column sums of the current plan are b_j exp((g_j - g_new_j)/ε).
      err = 0.0;
      for (std::size_t j = 0; j < p.m; ++j) err += p.b[j] * std::abs(std::expm1((g[j] - g_new[j]) / eps));
      if (err < tol) {
        converged = true;
        break;
      }
      g.swap(g_new);
    }
    result.marginal_error = err;
    if (!converged) {
      const Bounds bd = evaluate(p, f, g, eps);
      throw NumericalFailure("Sinkhorn did not converge (eps=" + std::to_string(eps) + ")", bd.primal - bd.dual);
    }
    result.epsilon = eps;
    if (!last) eps *= 0.5;
  }
  const Bounds bd = evaluate(p, f, g, eps);
  result.primal = bd.primal;
  result.dual = std::min(bd.dual, bd.primal);
  result.entropic = bd.entropic;
  result.regularized = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) result.regularized += a[i] * f[i];
  for (std::size_t j = 0; j < p.m; ++j) result.regularized += b[j] * g[j];
  return result;
}

double sinkhorn_self_cost(std::span<const double> a, std::span<const double> cost, double epsilon) {
  const std::size_t n = a.size();
  if (cost.size() != n * n) throw InvalidInput("self-cost matrix has the wrong size");
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  std::vector<double> log_a(n);
  std::transform(a.begin(), a.end(), log_a.begin(), [](double w) { return std::log(w); });
  std::vector<double> f(n, 0.0), t(n);
  for (int it = 0; it < 100000; ++it) {
    soft_c_transform(cost, n, n, f, log_a, epsilon, t);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double next = 0.5 * (f[i] + t[i]);
      change = std::max(change, std::abs(next - f[i]));
      f[i] = next;
    }
    if (change < 1e-12 * std::max(1.0, epsilon)) break;
  }
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) value += 2.0 * a[i] * f[i];
  return value;
}

}  // namespace greenlab
