#include "greenlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "greenlab/error.hpp"
#include "greenlab/ewald.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/special.hpp"

namespace greenlab {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double t1_weight(double k, double t) { return std::exp(-8.0 * kPi * kPi * k * k * t) / (4.0 * kPi * kPi * k * k); }

// Σ_{k>K} e^{-8π²k²t} / (4π²k²), with an explicit cap for tiny t.
double t1_weight_tail(int K, double t) {
  if (t == 0.0) return special::trigamma(K + 1.0) / (4.0 * kPi * kPi);
  double sum = 0.0;
  const long cap = static_cast<long>(K) + 1000000;
  long k = K + 1;
  for (; k <= cap; ++k) {
    const double w = t1_weight(static_cast<double>(k), t);
    sum += w;
    if (w < 1e-24) return sum;
  }
  return sum + special::trigamma(static_cast<double>(k)) / (4.0 * kPi * kPi);
}

SpectralMeasure torus_measure(const PointConfiguration& config, int K, double t) {
  const auto& m = config.manifold();
  const int d = m.dim();
  const std::size_t n = config.size();
  const auto side = static_cast<std::size_t>(2 * K + 1);

  SpectralMeasure sm;
  sm.manifold = m;
  sm.truncation = K;
  sm.heat_time = t;
  sm.n = n;

  // Lines along the last axis: every combination of the first d-1 indices.
  std::size_t lines = 1;
  for (int a = 0; a + 1 < d; ++a) lines *= side;
  std::vector<cplx> cube(lines * side, cplx(0.0));
  parallel::for_each_index(lines, [&](std::size_t line) {
    std::vector<int> head(static_cast<std::size_t>(d - 1));
    std::size_t rest = line;
    for (int a = d - 2; a >= 0; --a) {
      head[a] = static_cast<int>(rest % side) - K;
      rest /= side;
    }
    cplx* out = cube.data() + line * side;
    for (std::size_t j = 0; j < n; ++j) {
      const auto x = config.point(j);
      double angle = 0.0;
      for (int a = 0; a + 1 < d; ++a) angle += head[a] * x[a];
      const cplx base = std::polar(1.0, -kTwoPi * (angle - std::floor(angle)));
      const double xl = x[d - 1];
      const cplx step = std::polar(1.0, -kTwoPi * xl);
      cplx cur;
      for (std::size_t s = 0; s < side; ++s) {
        const int k = static_cast<int>(s) - K;
        if (s % 32 == 0) {
          const double phase = k * xl;
          cur = base * std::polar(1.0, -kTwoPi * (phase - std::floor(phase)));
        }
        out[s] += cur;
        cur *= step;
      }
    }
  });

  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  std::vector<int> k(static_cast<std::size_t>(d));
  for (std::size_t idx = 0; idx < cube.size(); ++idx) {
    std::size_t rest = idx;
    bool zero = true;
    for (int a = d - 1; a >= 0; --a) {
      k[a] = static_cast<int>(rest % side) - K;
      rest /= side;
      zero = zero && k[a] == 0;
    }
    if (zero) continue;
    sm.modes.insert(sm.modes.end(), k.begin(), k.end());
    sm.coefficients.push_back(cube[idx] * inv_n);
  }

  if (d == 1) {
    // Self pairs (and coincident pairs) contribute exactly; the rest of the
    // tail is bounded by Abel summation: |Σ_{k>K} w_k cos(2πku)| <= w_{K+1}/|sin πu|.
    const double wtail = t1_weight_tail(K, t);
    const double wnext = t1_weight(K + 1.0, t);
    std::vector<double> exact(n, 0.0), bound(n, 0.0);
    parallel::for_each_index(n, [&](std::size_t j) {
      double e = 0.0, b = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == j) continue;
        double u = config.point(j)[0] - config.point(l)[0];
        u -= std::nearbyint(u);
        if (u == 0.0) {
          e += 2.0 * wtail;
        } else {
          b += std::min(2.0 * wnext / std::abs(std::sin(kPi * u)), 2.0 * wtail);
        }
      }
      exact[j] = e;
      bound[j] = b;
    });
    sm.exact_tail = (static_cast<double>(n) * 2.0 * wtail + parallel::ordered_sum(exact)) * inv_n * inv_n;
    sm.tail_bound = parallel::ordered_sum(bound) * inv_n * inv_n;
  } else {
    sm.tail_bound = t > 0.0 ? TorusGreen::fourier_tail(d, 8.0 * kPi * kPi * t, K) : kInf;
  }
  return sm;
}

SpectralMeasure sphere_measure(const PointConfiguration& config, int L, double t) {
  const auto& m = config.manifold();
  const int d = m.dim();
  const std::size_t n = config.size();
  SpectralMeasure sm;
  sm.manifold = m;
  sm.truncation = L;
  sm.heat_time = t;
  sm.n = n;

  const auto Ls = static_cast<std::size_t>(L);
  std::vector<double> rows(n * Ls, 0.0);
  parallel::for_each_index(n, [&](std::size_t j) {
    std::vector<double> p;
    double* row = rows.data() + j * Ls;
    const auto x = config.point(j);
    for (std::size_t l = j + 1; l < n; ++l) {
      const auto y = config.point(l);
      double tau = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) tau += x[a] * y[a];
      special::normalized_gegenbauer(L, d, std::clamp(tau, -1.0, 1.0), p);
      for (std::size_t deg = 1; deg <= Ls; ++deg) row[deg - 1] += p[deg];
    }
  });
  const double area = m.volume();
  const double inv_n2 = n > 0 ? 1.0 / (static_cast<double>(n) * static_cast<double>(n)) : 0.0;
  sm.degree_powers.assign(Ls, 0.0);
  for (std::size_t deg = 1; deg <= Ls; ++deg) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) off += rows[j * Ls + deg - 1];
    const double N = special::harmonic_dimension(static_cast<int>(deg), d);
    sm.degree_powers[deg - 1] = std::max(0.0, N / area * inv_n2 * (static_cast<double>(n) + 2.0 * off));
  }

  if (t == 0.0 && d >= 2) {
    sm.tail_bound = kInf;
  } else {
    double tail = 0.0;
    for (int l = L + 1; l < L + 2000000; ++l) {
      const double lam = sphere_laplace_eigenvalue(d, l);
      const double term = std::exp(-2.0 * lam * t) * special::harmonic_dimension(l, d) / (area * lam);
      tail += term;
      if (term < 1e-20 * std::max(tail, 1e-300) && l > L + 10) break;
    }
    sm.tail_bound = tail;
  }
  return sm;
}

}  // namespace

SpectralMeasure spectral_measure(const PointConfiguration& config, int truncation, double heat_time) {
  if (truncation < 1) throw InvalidInput("spectral truncation must be >= 1");
  if (!(heat_time >= 0.0)) throw InvalidInput("heat time must be >= 0");
  return config.manifold().is_torus() ? torus_measure(config, truncation, heat_time)
                                      : sphere_measure(config, truncation, heat_time);
}

NormEstimate hminus1_norm(const SpectralMeasure& sm) {
  NormEstimate out;
  const double t = sm.heat_time;
  if (sm.manifold.is_torus()) {
    const auto d = static_cast<std::size_t>(sm.manifold.dim());
    double sum = 0.0;
    for (std::size_t i = 0; i < sm.coefficients.size(); ++i) {
      double k2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) k2 += static_cast<double>(sm.modes[i * d + a]) * sm.modes[i * d + a];
      sum += std::exp(-8.0 * kPi * kPi * k2 * t) * std::norm(sm.coefficients[i]) / (4.0 * kPi * kPi * k2);
    }
    out.squared = sum + sm.exact_tail;
  } else {
    const int d = sm.manifold.dim();
    double sum = 0.0;
    for (std::size_t i = 0; i < sm.degree_powers.size(); ++i) {
      const double lam = sphere_laplace_eigenvalue(d, static_cast<int>(i) + 1);
      sum += std::exp(-2.0 * lam * t) * sm.degree_powers[i] / lam;
    }
    out.squared = sum;
  }
  out.value = std::sqrt(std::max(0.0, out.squared));
  out.tail_bound = sm.tail_bound;
  return out;
}

NormEstimate diaphony_t1(const PointConfiguration& config, int K) {
  const auto& m = config.manifold();
  if (!m.is_torus() || m.dim() != 1) throw InvalidInput("diaphony is defined on T^1");
  if (K < 0) throw InvalidInput("diaphony truncation must be >= 0");
  const std::size_t n = config.size();
  if (n == 0) throw InvalidInput("diaphony needs at least one point");
  if (K == 0) {
    // Choose K from the Abel bound 2 w_{K+1} A, A = (1/n²) Σ_{u≠0} 1/|sin πu|.
    std::vector<double> rows(n, 0.0);
    parallel::for_each_index(n, [&](std::size_t j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        double u = config.point(j)[0] - config.point(l)[0];
        u -= std::nearbyint(u);
        if (u != 0.0) acc += 1.0 / std::abs(std::sin(kPi * u));
      }
      rows[j] = acc;
    });
    const double A = parallel::ordered_sum(rows) / (static_cast<double>(n) * static_cast<double>(n));
    constexpr double tol = 1e-10;
    const double kk = std::sqrt(2.0 * A / (4.0 * kPi * kPi * tol));
    K = std::clamp(static_cast<int>(std::ceil(kk)), 16, 1 << 20);
  }
  return hminus1_norm(spectral_measure(config, K, 0.0));
}

double heat_density_1d(double u, double t, HeatRepresentation rep) {
  if (!(t > 0.0)) throw InvalidInput("heat time must be positive");
  u -= std::nearbyint(u);
  if (rep == HeatRepresentation::Auto) {
    rep = 4.0 * kPi * t < 1.0 ? HeatRepresentation::Images : HeatRepresentation::Fourier;
  }
  if (rep == HeatRepresentation::Images) {
    const int reach = static_cast<int>(std::ceil(std::sqrt(4.0 * t * 50.0))) + 1;
    double s = 0.0;
    for (int m = -reach; m <= reach; ++m) {
      const double y = u + m;
      s += std::exp(-y * y / (4.0 * t));
    }
    return s / std::sqrt(4.0 * kPi * t);
  }
  double s = 1.0;
  for (int k = 1;; ++k) {
    const double w = std::exp(-4.0 * kPi * kPi * k * k * t);
    s += 2.0 * w * std::cos(kTwoPi * k * u);
    if (w < 1e-22) break;
  }
  return s;
}

double heat_density_torus(std::span<const double> x, std::span<const double> center, double t, HeatRepresentation rep) {
  if (x.size() != center.size()) throw InvalidInput("dimension mismatch");
  if (!(t > 0.0)) throw InvalidInput("heat time must be positive");
  double p = 1.0;
  for (std::size_t a = 0; a < x.size(); ++a) p *= heat_density_1d(x[a] - center[a], t, rep);
  return p;
}

double sphere_laplace_eigenvalue(int d, int l) { return static_cast<double>(l) * (l + d - 1.0); }

double heat_density_sphere(int d, double tau, double t) {
  if (!(t > 0.0)) throw InvalidInput("heat time must be positive");
  const double area = sphere_area(d);
  tau = std::clamp(tau, -1.0, 1.0);
  // Recurrence inline so the degree range need not be known in advance.
  double p_prev = 1.0, p = tau;
  double sum = 1.0 / area;
  for (int l = 1; l < 100000; ++l) {
    const double w = std::exp(-sphere_laplace_eigenvalue(d, l) * t) * special::harmonic_dimension(l, d);
    sum += w / area * p;
    if (w < 1e-18 && l > 4) break;
    const double next = ((2.0 * l + d - 1) * tau * p - l * p_prev) / (l + d - 1.0);
    p_prev = p;
    p = next;
  }
  return sum;
}

double funk_hecke_eigenvalue(int d, int l) {
  if (d < 3) throw InvalidInput("Funk-Hecke eigenvalues are provided for d >= 3");
  if (l < 0) throw InvalidInput("degree must be >= 0");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({d, l}); it != cache.end()) return it->second;
  }
  const auto integrand = [d, l](double theta) {
    const double t = std::cos(theta);
    double p_prev = 1.0, p = l == 0 ? 1.0 : t;
    for (int k = 1; k < l; ++k) {
      const double next = ((2.0 * k + d - 1) * t * p - k * p_prev) / (k + d - 1.0);
      p_prev = p;
      p = next;
    }
    // (2 - 2cosθ)^{-(d-2)/2} sin^{d-1}θ = 2 sin(θ/2) cos^{d-1}(θ/2)
    return 2.0 * std::sin(0.5 * theta) * std::pow(std::cos(0.5 * theta), d - 1) * p;
  };
  const double value = sphere_area(d - 1) / sphere_area(d) * special::integrate(integrand, 0.0, kPi);
  std::lock_guard lock(mutex);
  cache.emplace(std::make_pair(d, l), value);
  return value;
}

LaplacianConstant riesz_laplacian_constant(int d) {
  if (d < 3) throw InvalidInput("riesz_laplacian_constant requires d >= 3");
  const auto f = [d](double theta) { return std::pow(2.0 - 2.0 * std::cos(theta), -0.5 * (d - 2)); };
  static constexpr double c1[] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  static constexpr double c2[] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  const double h = 5e-3;
  std::vector<double> ratios;
  for (int i = 0; i <= 8; ++i) {
    const double theta = kPi / 4 + i * (kPi / 2) / 8;
    double d1 = 0.0, d2 = 0.0;
    for (int s = -4; s <= 4; ++s) {
      const double v = f(theta + s * h);
      d1 += c1[s + 4] * v;
      d2 += c2[s + 4] * v;
    }
    d1 /= h;
    d2 /= h * h;
    const double lap = d2 + (d - 1) * std::cos(theta) / std::sin(theta) * d1;
    ratios.push_back(lap / f(theta));
  }
  LaplacianConstant out;
  for (double r : ratios) out.c1 += r;
  out.c1 /= static_cast<double>(ratios.size());
  for (double r : ratios) out.residual = std::max(out.residual, std::abs(r - out.c1) / std::abs(out.c1));
  if (out.residual > 1e-6) {
    throw NumericalFailure("Laplacian of the Coulomb kernel is not proportional to the kernel", out.residual);
  }
  return out;
}

double coulomb_heat_average(int d, double tau, double t) {
  if (!(t > 0.0)) throw InvalidInput("heat time must be positive");
  tau = std::clamp(tau, -1.0, 1.0);
  std::vector<double> p;
  double sum = 0.0;
  int L = 8;
  while (std::exp(-2.0 * sphere_laplace_eigenvalue(d, L) * t) * special::harmonic_dimension(L, d) > 1e-17) L *= 2;
  special::normalized_gegenbauer(L, d, tau, p);
  for (int l = 0; l <= L; ++l) {
    const double w = std::exp(-2.0 * sphere_laplace_eigenvalue(d, l) * t) * special::harmonic_dimension(l, d);
    if (w < 1e-18) break;
    sum += w * funk_hecke_eigenvalue(d, l) * p[static_cast<std::size_t>(l)];
  }
  return sum;
}

}  // namespace greenlab
