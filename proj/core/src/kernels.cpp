#include "greenlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "greenlab/error.hpp"
#include "greenlab/ewald.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/special.hpp"

namespace greenlab {

namespace {

constexpr double kPi = std::numbers::pi;

double chordal2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// |S^{d-1}| / |S^d|: density of the polar angle against sin^{d-1}θ dθ.
double polar_weight(int d) { return sphere_area(d - 1) / sphere_area(d); }

}  // namespace

KernelSpec KernelSpec::green_t1() { return KernelSpec{}; }

KernelSpec KernelSpec::green_torus(int d, int K, double T) {
  KernelSpec s;
  s.kind = KernelKind::GreenTorusSpectral;
  s.dim = d;
  s.truncation = K;
  s.split_time = T;
  s.validate();
  return s;
}

KernelSpec KernelSpec::green_sphere2(int L) {
  KernelSpec s;
  s.kind = KernelKind::GreenSphere2;
  s.dim = 2;
  s.truncation = L;
  s.validate();
  return s;
}

KernelSpec KernelSpec::coulomb(int d, Normalization norm) {
  KernelSpec s;
  s.kind = KernelKind::CoulombSphere;
  s.dim = d;
  s.normalization = norm;
  s.validate();
  return s;
}

KernelSpec KernelSpec::log_sphere2(Normalization norm) {
  KernelSpec s;
  s.kind = KernelKind::LogSphere2;
  s.dim = 2;
  s.normalization = norm;
  return s;
}

KernelSpec KernelSpec::riesz(int d, double exponent, Normalization norm) {
  KernelSpec s;
  s.kind = KernelKind::Riesz;
  s.dim = d;
  s.exponent = exponent;
  s.normalization = norm;
  s.validate();
  return s;
}

void KernelSpec::validate() const {
  if (dim < 1) throw InvalidInput("kernel dimension must be >= 1");
  if (truncation < 0 || split_time < 0.0) throw InvalidInput("kernel truncation and split time must be nonnegative");
  switch (kind) {
    case KernelKind::GreenTorus1:
      if (dim != 1) throw InvalidInput("green_t1 lives on T^1");
      break;
    case KernelKind::GreenTorusSpectral:
      break;
    case KernelKind::GreenSphere2:
    case KernelKind::LogSphere2:
      if (dim != 2) throw InvalidInput("this kernel lives on S^2");
      break;
    case KernelKind::CoulombSphere:
      if (dim < 3) throw InvalidInput("the Coulomb kernel requires a sphere of dimension >= 3");
      break;
    case KernelKind::Riesz:
      if (!(exponent > 0.0)) throw InvalidInput("Riesz exponent must be positive");
      if (normalization == Normalization::MeanZero && !(exponent < dim)) {
        throw InvalidInput("mean-zero Riesz kernel requires s < d");
      }
      break;
  }
}

Manifold KernelSpec::manifold() const {
  switch (kind) {
    case KernelKind::GreenTorus1:
    case KernelKind::GreenTorusSpectral:
      return Manifold::torus(dim);
    default:
      return Manifold::sphere(dim);
  }
}

bool KernelSpec::singular() const {
  if (kind == KernelKind::GreenTorus1) return false;
  if (kind == KernelKind::GreenTorusSpectral) return dim >= 2;
  return true;
}

std::string KernelSpec::name() const {
  std::ostringstream out;
  switch (kind) {
    case KernelKind::GreenTorus1: out << "green_t1"; break;
    case KernelKind::GreenTorusSpectral: out << "green_torus(d=" << dim; break;
    case KernelKind::GreenSphere2: out << "green_sphere2("; break;
    case KernelKind::CoulombSphere: out << "coulomb(d=" << dim; break;
    case KernelKind::LogSphere2: out << "log_sphere2("; break;
    case KernelKind::Riesz: out << "riesz(d=" << dim << ",s=" << exponent; break;
  }
  if (kind == KernelKind::GreenTorus1) return out.str();
  std::string sep = kind == KernelKind::GreenSphere2 || kind == KernelKind::LogSphere2 ? "" : ",";
  if (truncation > 0) {
    out << sep << (kind == KernelKind::GreenSphere2 ? "L=" : "K=") << truncation;
    sep = ",";
  }
  if (split_time > 0.0) {
    out << sep << "T=" << split_time;
    sep = ",";
  }
  if (normalization == Normalization::MeanZero) out << sep << "mean-zero";
  out << ')';
  return out.str();
}

double green_t1(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw InvalidInput("green_t1 expects u in [0, 1]");
  return 0.5 * u * u - 0.5 * u + 1.0 / 12.0;
}

double green_torus_spectral(std::span<const double> z, int d, int K, double T) {
  return TorusGreen(d, K, T).value(z);
}

double green_sphere2_profile(double t, int L, double* derivative) {
  if (L < 1) throw InvalidInput("sphere Green truncation must be >= 1");
  if (t >= 1.0) throw Singularity("green_sphere2 is singular for coincident points");
  t = std::max(t, -1.0);
  // Legendre recurrence with P'_{l+1} = P'_{l-1} + (2l+1) P_l.
  double p_prev = 1.0, p = t;
  double dp_prev = 0.0, dp = 1.0;
  double value = 0.0, slope = 0.0;
  for (int l = 1; l <= L; ++l) {
    double c = (2.0 * l + 1.0) / (4.0 * kPi * l * (l + 1.0));
    if (l == L) c *= 0.5;
    value += c * p;
    slope += c * dp;
    const double p_next = ((2.0 * l + 1.0) * t * p - l * p_prev) / (l + 1.0);
    const double dp_next = dp_prev + (2.0 * l + 1.0) * p;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  if (derivative) *derivative = slope;
  return value;
}

double green_sphere2(std::span<const double> x, std::span<const double> y, int L) {
  if (x.size() != 3 || y.size() != 3) throw InvalidInput("green_sphere2 expects points of S^2");
  if (chordal2(x, y) == 0.0) throw Singularity("green_sphere2 is singular for coincident points");
  return green_sphere2_profile(std::clamp(dot(x, y), -1.0, 1.0), L);
}

double coulomb_sphere(std::span<const double> x, std::span<const double> y, int d) {
  if (d < 3) throw InvalidInput("the Coulomb kernel requires d >= 3");
  if (x.size() != static_cast<std::size_t>(d + 1) || y.size() != x.size()) {
    throw InvalidInput("coulomb_sphere: points do not live on S^" + std::to_string(d));
  }
  const double r2 = chordal2(x, y);
  if (r2 == 0.0) throw Singularity("Coulomb kernel is singular for coincident points");
  return std::pow(r2, -0.5 * (d - 2));
}

double cd_constant(int d) {
  if (d < 3) throw InvalidInput("c_d is defined for d >= 3");
  static std::mutex mutex;
  static std::map<int, double> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(d); it != cache.end()) return it->second;
  // (2 - 2cosθ)^{-(d-2)/2} sin^{d-1}θ simplifies to 2 sin(θ/2) cos^{d-1}(θ/2).
  const double integral = special::integrate(
      [d](double theta) { return 2.0 * std::sin(0.5 * theta) * std::pow(std::cos(0.5 * theta), d - 1); }, 0.0, kPi);
  const double value = polar_weight(d) * integral;
  cache.emplace(d, value);
  return value;
}

double riesz_mean(int d, double s) {
  if (!(s > 0.0 && s < d)) throw InvalidInput("Riesz mean requires 0 < s < d");
  // (|S^{d-1}|/|S^d|) 2^{d-1-s} B((d-s)/2, d/2)
  const double a = 0.5 * (d - s), b = 0.5 * d;
  const double beta = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  return polar_weight(d) * std::pow(2.0, d - 1.0 - s) * beta;
}

double log_sphere2_mean() { return 0.5 - std::log(2.0); }

Kernel::Kernel(const KernelSpec& spec) : spec_(spec), manifold_(spec.manifold()) {
  spec_.validate();
  const bool mean_zero = spec_.normalization == Normalization::MeanZero;
  switch (spec_.kind) {
    case KernelKind::GreenTorusSpectral:
      green_ = std::make_shared<const TorusGreen>(spec_.dim, spec_.truncation, spec_.split_time);
      break;
    case KernelKind::GreenSphere2:
      degree_ = spec_.truncation > 0 ? spec_.truncation : kDefaultSphereGreenDegree;
      break;
    case KernelKind::CoulombSphere:
      if (mean_zero) offset_ = cd_constant(spec_.dim);
      break;
    case KernelKind::LogSphere2:
      if (mean_zero) offset_ = log_sphere2_mean();
      break;
    case KernelKind::Riesz:
      if (mean_zero) offset_ = riesz_mean(spec_.dim, spec_.exponent);
      break;
    case KernelKind::GreenTorus1:
      break;
  }
}

double Kernel::value(std::span<const double> a, std::span<const double> b) const {
  switch (spec_.kind) {
    case KernelKind::GreenTorus1:
      return green_t1(torus_distance(a, b));
    case KernelKind::GreenTorusSpectral: {
      std::vector<double> disp(a.size());
      torus_displacement(a, b, disp);
      if (spec_.dim >= 2 && std::all_of(disp.begin(), disp.end(), [](double c) { return c == 0.0; })) {
        throw Singularity("torus Green function is singular for coincident points");
      }
      return green_->value(disp);
    }
    case KernelKind::GreenSphere2:
      if (chordal2(a, b) == 0.0) throw Singularity("green_sphere2 is singular for coincident points");
      return green_sphere2_profile(std::clamp(dot(a, b), -1.0, 1.0), degree_);
    case KernelKind::CoulombSphere:
    case KernelKind::Riesz: {
      const double r2 = chordal2(a, b);
      if (r2 == 0.0) throw Singularity("Riesz kernel is singular for coincident points");
      const double s = spec_.kind == KernelKind::Riesz ? spec_.exponent : spec_.dim - 2.0;
      return std::pow(r2, -0.5 * s) - offset_;
    }
    case KernelKind::LogSphere2: {
      const double r2 = chordal2(a, b);
      if (r2 == 0.0) throw Singularity("logarithmic kernel is singular for coincident points");
      return -0.5 * std::log(r2) - offset_;
    }
  }
  return 0.0;
}

double Kernel::value_and_gradient(std::span<const double> a, std::span<const double> b, std::span<double> grad) const {
  switch (spec_.kind) {
    case KernelKind::GreenTorus1: {
      double u = a[0] - b[0];
      u -= std::floor(u);
      grad[0] = u == 0.0 ? 0.0 : u - 0.5;
      return green_t1(std::min(u, 1.0 - u));
    }
    case KernelKind::GreenTorusSpectral: {
      std::vector<double> disp(a.size());
      torus_displacement(a, b, disp);
      if (spec_.dim >= 2 && std::all_of(disp.begin(), disp.end(), [](double c) { return c == 0.0; })) {
        throw Singularity("torus Green function is singular for coincident points");
      }
      return green_->value_and_gradient(disp, grad);
    }
    case KernelKind::GreenSphere2: {
      if (chordal2(a, b) == 0.0) throw Singularity("green_sphere2 is singular for coincident points");
      double slope = 0.0;
      const double v = green_sphere2_profile(std::clamp(dot(a, b), -1.0, 1.0), degree_, &slope);
      for (std::size_t i = 0; i < a.size(); ++i) grad[i] = slope * b[i];
      return v;
    }
    case KernelKind::CoulombSphere:
    case KernelKind::Riesz: {
      const double r2 = chordal2(a, b);
      if (r2 == 0.0) throw Singularity("Riesz kernel is singular for coincident points");
      const double s = spec_.kind == KernelKind::Riesz ? spec_.exponent : spec_.dim - 2.0;
      const double v = std::pow(r2, -0.5 * s);
      for (std::size_t i = 0; i < a.size(); ++i) grad[i] = -s * v / r2 * (a[i] - b[i]);
      return v - offset_;
    }
    case KernelKind::LogSphere2: {
      const double r2 = chordal2(a, b);
      if (r2 == 0.0) throw Singularity("logarithmic kernel is singular for coincident points");
      for (std::size_t i = 0; i < a.size(); ++i) grad[i] = -(a[i] - b[i]) / r2;
      return -0.5 * std::log(r2) - offset_;
    }
  }
  return 0.0;
}

double min_pair_distance(const PointConfiguration& config) {
  const std::size_t n = config.size();
  if (n < 2) return config.manifold().diameter();
  std::vector<double> row(n, std::numeric_limits<double>::infinity());
  parallel::for_each_index(n, [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = i + 1; l < n; ++l) {
      best = std::min(best, geodesic_distance(config.manifold(), config.point(i), config.point(l)));
    }
    row[i] = best;
  });
  return *std::min_element(row.begin(), row.end());
}

EnergyReport pair_energy(const PointConfiguration& config, const KernelSpec& spec) {
  const Kernel kernel(spec);
  if (!(config.manifold() == kernel.manifold())) {
    throw InvalidInput("kernel " + spec.name() + " does not live on " + config.manifold().label());
  }
  const std::size_t n = config.size();
  std::vector<double> row(n, 0.0);
  parallel::for_each_index(n, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t l = i + 1; l < n; ++l) {
      try {
        acc += kernel.value(config.point(i), config.point(l));
      } catch (const Singularity& e) {
        throw Singularity(std::string(e.what()) + " (points " + std::to_string(i) + " and " + std::to_string(l) + ")", i, l);
      }
    }
    row[i] = 2.0 * acc;
  });
  EnergyReport report;
  report.kernel = spec;
  report.n = n;
  report.total = parallel::ordered_sum(row);
  report.normalized = n > 0 ? report.total / (static_cast<double>(n) * static_cast<double>(n)) : 0.0;
  report.min_separation = min_pair_distance(config);
  return report;
}

}  // namespace greenlab
