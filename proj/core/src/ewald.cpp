#include "greenlab/ewald.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

#include "greenlab/error.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/special.hpp"

namespace greenlab {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
// Image terms beyond exp(-40) relative weight are dropped.
constexpr double kImageCutoff = 40.0;

double default_split_time() { return 1.0 / (2.0 * kPi * kPi); }

void check_dim(int d) {
  if (d < 1) throw InvalidInput("torus dimension must be >= 1");
}

// Visits every nonzero k in the half-space (first nonzero component > 0)
// with |k|^2 <= K^2.
void for_each_half_mode(int d, int K, const std::function<void(const std::vector<int>&, int)>& visit) {
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  const int K2 = K * K;
  std::function<void(int, int, bool)> rec = [&](int axis, int used, bool free) {
    if (axis == d) {
      if (free) visit(k, used);
      return;
    }
    const int lim = static_cast<int>(std::floor(std::sqrt(static_cast<double>(K2 - used))));
    for (int v = free ? -lim : 0; v <= lim; ++v) {
      k[axis] = v;
      rec(axis + 1, used + v * v, free || v > 0);
    }
    k[axis] = 0;
  };
  rec(0, 0, false);
}

// ∫_{t0}^{t1} (4πs)^{-d/2} ds.
double heat_diagonal_integral(int d, double t0, double t1) {
  if (d == 2) return std::log(t1 / t0) / (4.0 * kPi);
  const double e = 1.0 - 0.5 * d;
  return std::pow(4.0 * kPi, -0.5 * d) * (std::pow(t1, e) - std::pow(t0, e)) / e;
}

}  // namespace

double heat_split_profile(int d, double r, double T, double* derivative) {
  if (r == 0.0) {
    if (d >= 2) throw Singularity("heat-split profile is singular at r = 0");
    if (derivative) *derivative = 0.0;
    return std::sqrt(T / kPi);
  }
  const double u0 = r * r / (4.0 * T);
  if (u0 > 700.0) {
    if (derivative) *derivative = 0.0;
    return 0.0;
  }
  const double pref = std::pow(4.0 * kPi, -0.5 * d);
  const double q = 0.25 * r * r;
  const double value = pref * std::pow(q, 1.0 - 0.5 * d) * special::upper_gamma_half(0.5 * d - 1.0, u0);
  if (derivative) {
    *derivative = -0.5 * r * pref * std::pow(q, -0.5 * d) * special::upper_gamma_half(0.5 * d, u0);
  }
  return value;
}

double TorusGreen::fourier_tail(int d, double a, double K) {
  if (K <= 0.0) return std::numeric_limits<double>::infinity();
  return std::exp(-0.5 * a * K * K) * std::pow(special::theta_sum(0.5 * a), d) / (4.0 * kPi * kPi * K * K);
}

int TorusGreen::default_truncation(int d, double T, double tol) {
  const double a = 4.0 * kPi * kPi * T;
  int K = 1;
  while (fourier_tail(d, a, K) >= tol) {
    ++K;
    if (K > 4096) throw NumericalFailure("cannot reach the requested Fourier tail tolerance", fourier_tail(d, a, K));
  }
  return K;
}

TorusGreen::TorusGreen(int d, int K, double T) : d_(d), K_(K), T_(T) {
  check_dim(d);
  if (T_ < 0.0 || K_ < 0) throw InvalidInput("truncation and split time must be nonnegative");
  if (T_ == 0.0) T_ = default_split_time();
  if (K_ == 0) K_ = default_truncation(d_, T_);
  const double a = 4.0 * kPi * kPi * T_;
  tail_ = fourier_tail(d_, a, K_);

  for_each_half_mode(d_, K_, [&](const std::vector<int>& k, int k2) {
    modes_.insert(modes_.end(), k.begin(), k.end());
    coeff_.push_back(2.0 * std::exp(-a * k2) / (4.0 * kPi * kPi * k2));
  });

  image_radius2_ = 4.0 * T_ * kImageCutoff;
  const int reach = static_cast<int>(std::ceil(std::sqrt(image_radius2_) + 0.5));
  std::vector<int> m(static_cast<std::size_t>(d_), -reach);
  while (true) {
    images_.insert(images_.end(), m.begin(), m.end());
    int axis = d_ - 1;
    while (axis >= 0 && ++m[axis] > reach) {
      m[axis] = -reach;
      --axis;
    }
    if (axis < 0) break;
  }
}

double TorusGreen::image_part(std::span<const double> z, std::span<double> grad) const {
  std::vector<double> w(static_cast<std::size_t>(d_));
  for (int a = 0; a < d_; ++a) w[a] = z[a] - std::nearbyint(z[a]);
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;
  std::vector<double> y(static_cast<std::size_t>(d_));
  for (std::size_t base = 0; base < images_.size(); base += static_cast<std::size_t>(d_)) {
    double r2 = 0.0;
    for (int a = 0; a < d_; ++a) {
      y[a] = w[a] + images_[base + a];
      r2 += y[a] * y[a];
    }
    if (r2 > image_radius2_) continue;
    const double r = std::sqrt(r2);
    double dphi = 0.0;
    total += heat_split_profile(d_, r, T_, want_grad ? &dphi : nullptr);
    if (want_grad && r > 0.0) {
      for (int a = 0; a < d_; ++a) grad[a] += dphi * y[a] / r;
    }
  }
  return total;
}

double TorusGreen::fourier_part(std::span<const double> z, std::span<double> grad) const {
  const auto width = static_cast<std::size_t>(K_) + 1;
  std::vector<cplx> phase(static_cast<std::size_t>(d_) * width);
  for (int a = 0; a < d_; ++a) {
    const cplx step = std::polar(1.0, 2.0 * kPi * z[a]);
    cplx cur = 1.0;
    for (std::size_t j = 0; j < width; ++j) {
      phase[a * width + j] = cur;
      cur *= step;
    }
  }
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;
  for (std::size_t m = 0; m < coeff_.size(); ++m) {
    cplx e = 1.0;
    const int* k = modes_.data() + m * static_cast<std::size_t>(d_);
    for (int a = 0; a < d_; ++a) {
      const cplx p = phase[a * width + static_cast<std::size_t>(std::abs(k[a]))];
      e *= k[a] >= 0 ? p : std::conj(p);
    }
    total += coeff_[m] * e.real();
    if (want_grad) {
      const double s = -2.0 * kPi * coeff_[m] * e.imag();
      for (int a = 0; a < d_; ++a) grad[a] += s * k[a];
    }
  }
  return total;
}

double TorusGreen::value(std::span<const double> z) const {
  if (static_cast<int>(z.size()) != d_) throw InvalidInput("displacement has the wrong dimension");
  return image_part(z, {}) - T_ + fourier_part(z, {});
}

double TorusGreen::value_and_gradient(std::span<const double> z, std::span<double> grad) const {
  if (static_cast<int>(z.size()) != d_ || static_cast<int>(grad.size()) != d_) {
    throw InvalidInput("displacement has the wrong dimension");
  }
  std::vector<double> g2(static_cast<std::size_t>(d_));
  const double v = image_part(z, grad) - T_ + fourier_part(z, g2);
  for (int a = 0; a < d_; ++a) grad[a] += g2[a];
  return v;
}

double TorusGreen::smoothed_value(std::span<const double> z, double t) const {
  if (!(t > 0.0)) throw InvalidInput("smoothing time must be positive");
  if (static_cast<int>(z.size()) != d_) throw InvalidInput("displacement has the wrong dimension");
  const double s = 2.0 * t;
  if (s >= T_) {
    // Only long-time modes remain; the damped Fourier series converges fast.
    const TorusGreen coarse(d_, default_truncation(d_, s, 1e-14), s);
    return coarse.fourier_part(z, {});
  }
  // G_t = ∫_s^∞ (Θ_u - 1) du = Σ_m ∫_s^T g_u(z+m) du - (T - s) + Fourier part.
  std::vector<double> w(static_cast<std::size_t>(d_)), y(static_cast<std::size_t>(d_));
  for (int a = 0; a < d_; ++a) w[a] = z[a] - std::nearbyint(z[a]);
  double total = 0.0;
  for (std::size_t base = 0; base < images_.size(); base += static_cast<std::size_t>(d_)) {
    double r2 = 0.0;
    for (int a = 0; a < d_; ++a) {
      y[a] = w[a] + images_[base + a];
      r2 += y[a] * y[a];
    }
    if (r2 > image_radius2_) continue;
    if (r2 == 0.0) {
      total += d_ == 1 ? (std::sqrt(T_) - std::sqrt(s)) / std::sqrt(kPi) : heat_diagonal_integral(d_, s, T_);
      continue;
    }
    const double r = std::sqrt(r2);
    total += heat_split_profile(d_, r, T_) - heat_split_profile(d_, r, s);
  }
  return total - (T_ - s) + fourier_part(z, {});
}

double heat_smoothed_green_torus(std::span<const double> z, int d, double t) {
  return TorusGreen(d).smoothed_value(z, t);
}

EwaldSum::EwaldSum(int d, double tolerance) : d_(d), cutoff_(0.5) {
  check_dim(d);
  if (!(tolerance > 0.0)) throw InvalidInput("Ewald tolerance must be positive");
  // Smallest u such that the profile at the cutoff is below tolerance/10.
  double u = 8.0;
  while (heat_split_profile(d_, cutoff_, cutoff_ * cutoff_ / (4.0 * u)) > 0.1 * tolerance) u += 0.5;
  T_ = cutoff_ * cutoff_ / (4.0 * u);
  K_ = TorusGreen::default_truncation(d_, T_, tolerance);
  const double a = 4.0 * kPi * kPi * T_;
  coeff_by_norm2_.assign(static_cast<std::size_t>(K_) * K_ + 1, 0.0);
  for (std::size_t k2 = 1; k2 < coeff_by_norm2_.size(); ++k2) {
    coeff_by_norm2_[k2] = 2.0 * std::exp(-a * static_cast<double>(k2)) / (4.0 * kPi * kPi * static_cast<double>(k2));
  }
  for_each_half_mode(d_, K_, [&](const std::vector<int>&, int) { ++mode_count_; });
}

double EwaldSum::energy(const PointConfiguration& config) const { return evaluate(config, nullptr); }

double EwaldSum::energy_and_gradient(const PointConfiguration& config, std::vector<double>& grad) const {
  return evaluate(config, &grad);
}

double EwaldSum::evaluate(const PointConfiguration& config, std::vector<double>* grad) const {
  if (!config.manifold().is_torus() || config.manifold().dim() != d_) {
    throw InvalidInput("Ewald sum expects a configuration on T^" + std::to_string(d_));
  }
  const std::size_t n = config.size();
  const auto d = static_cast<std::size_t>(d_);
  if (grad) grad->assign(n * d, 0.0);
  if (n < 2) return 0.0;

  // Real-space part: only the minimum image can lie within the cutoff.
  std::vector<double> row(n, 0.0);
  std::vector<double> real_grad(grad ? n * d : 0, 0.0);
  const double rc2 = cutoff_ * cutoff_;
  parallel::for_each_index(n, [&](std::size_t i) {
    std::vector<double> z(d);
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      if (l == i) continue;
      torus_displacement(config.point(i), config.point(l), z);
      double r2 = 0.0;
      for (double c : z) r2 += c * c;
      if (r2 >= rc2) continue;
      if (r2 == 0.0) throw Singularity("coincident points in Green energy", std::min(i, l), std::max(i, l));
      const double r = std::sqrt(r2);
      double dphi = 0.0;
      acc += heat_split_profile(d_, r, T_, grad ? &dphi : nullptr);
      if (grad) {
        for (std::size_t a = 0; a < d; ++a) real_grad[i * d + a] += 2.0 * dphi * z[a] / r;
      }
    }
    row[i] = acc;
  });
  double total = parallel::ordered_sum(row) - static_cast<double>(n) * static_cast<double>(n - 1) * T_;

  // Reciprocal part: Σ_half 2c_k (|S(k)|² - n), with per-axis phase tables and
  // prefix products shared along the enumeration.
  const auto width = static_cast<std::size_t>(K_) + 1;
  std::vector<cplx> phase(n * d * width);
  for (std::size_t j = 0; j < n; ++j) {
    const auto x = config.point(j);
    for (std::size_t a = 0; a < d; ++a) {
      const cplx step = std::polar(1.0, 2.0 * kPi * x[a]);
      cplx cur = 1.0;
      for (std::size_t m = 0; m < width; ++m) {
        phase[(j * d + a) * width + m] = cur;
        cur *= step;
      }
    }
  }
  std::vector<std::vector<cplx>> prefix(d + 1, std::vector<cplx>(n, cplx(1.0)));
  std::vector<int> k(d, 0);
  double recip = 0.0;
  const int K2 = K_ * K_;
  std::function<void(std::size_t, int, bool)> rec = [&](std::size_t axis, int used, bool free) {
    if (axis == d) {
      if (!free) return;
      const auto& e = prefix[d];
      cplx S = 0.0;
      for (std::size_t j = 0; j < n; ++j) S += e[j];
      const double c = coeff_by_norm2_[static_cast<std::size_t>(used)];
      recip += c * (std::norm(S) - static_cast<double>(n));
      // d|S|²/dx_j = -4πk Im(conj(S) e_j).
      if (grad) {
        for (std::size_t j = 0; j < n; ++j) {
          const double w = -4.0 * kPi * c * (std::conj(S) * e[j]).imag();
          for (std::size_t a = 0; a < d; ++a) (*grad)[j * d + a] += w * k[a];
        }
      }
      return;
    }
    const int lim = static_cast<int>(std::floor(std::sqrt(static_cast<double>(K2 - used))));
    for (int v = free ? -lim : 0; v <= lim; ++v) {
      k[axis] = v;
      const auto idx = static_cast<std::size_t>(std::abs(v));
      auto& out = prefix[axis + 1];
      const auto& in = prefix[axis];
      for (std::size_t j = 0; j < n; ++j) {
        const cplx p = phase[(j * d + axis) * width + idx];
        out[j] = in[j] * (v >= 0 ? p : std::conj(p));
      }
      rec(axis + 1, used + v * v, free || v > 0);
    }
    k[axis] = 0;
  };
  rec(0, 0, false);
  total += recip;

  if (grad) {
    for (std::size_t i = 0; i < n * d; ++i) (*grad)[i] += real_grad[i];
  }
  return total;
}

}  // namespace greenlab
