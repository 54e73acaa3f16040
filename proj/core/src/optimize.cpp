#include "greenlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "greenlab/ewald.hpp"
#include "greenlab/parallel.hpp"

namespace greenlab {

namespace {

constexpr int kMaxHalvings = 60;
constexpr double kCollisionDistance = 1e-9;
constexpr double kOptimizerEwaldTolerance = 1e-10;

bool uses_ewald(const KernelSpec& spec) {
  return spec.kind == KernelKind::GreenTorusSpectral && spec.dim >= 2;
}

class Objective {
 public:
  explicit Objective(const KernelSpec& spec) : kernel_(spec) {
    if (uses_ewald(spec)) ewald_.emplace(spec.dim, kOptimizerEwaldTolerance);
  }

  const Kernel& kernel() const noexcept { return kernel_; }

  double energy(const PointConfiguration& config) const {
    if (ewald_) return ewald_->energy(config);
    return pair_energy(config, kernel_.spec()).total;
  }

  double energy_and_gradient(const PointConfiguration& config, std::vector<double>& grad) const {
    const std::size_t n = config.size(), stride = config.stride();
    grad.assign(n * stride, 0.0);
    double total = 0.0;
    if (ewald_) {
      total = ewald_->energy_and_gradient(config, grad);
    } else {
      std::vector<double> partial(n, 0.0);
      parallel::for_each_index(n, [&](std::size_t k) {
        std::vector<double> g(stride);
        const auto xk = config.point(k);
        double* out = grad.data() + k * stride;
        double e = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          if (l == k) continue;
          try {
            e += kernel_.value_and_gradient(xk, config.point(l), g);
          } catch (const Singularity& s) {
            throw Singularity(s.what(), std::min(k, l), std::max(k, l));
          }
          for (std::size_t c = 0; c < stride; ++c) out[c] += 2.0 * g[c];
        }
        partial[k] = e;
      });
      total = parallel::ordered_sum(partial);
    }
    if (config.manifold().is_sphere()) {
      for (std::size_t k = 0; k < n; ++k) {
        const auto projected =
            tangent_project(config.point(k), std::span<const double>(grad.data() + k * stride, stride));
        std::copy(projected.begin(), projected.end(), grad.begin() + static_cast<std::ptrdiff_t>(k * stride));
      }
    }
    return total;
  }

 private:
  Kernel kernel_;
  std::optional<EwaldSum> ewald_;
};

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// x - alpha * g followed by the manifold's retraction.
PointConfiguration retract(const PointConfiguration& config, std::span<const double> direction, double alpha) {
  std::vector<double> coords(config.coords().begin(), config.coords().end());
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] -= alpha * direction[i];
  if (config.manifold().is_sphere()) {
    const std::size_t stride = config.stride();
    for (std::size_t k = 0; k < config.size(); ++k) {
      double* p = coords.data() + k * stride;
      const double r = std::sqrt(norm2(std::span<const double>(p, stride)));
      for (std::size_t c = 0; c < stride; ++c) p[c] /= r;
    }
  }
  return PointConfiguration(config.manifold(), std::move(coords));
}

double max_point_norm(std::span<const double> grad, std::size_t stride) {
  double mx = 0.0;
  for (std::size_t k = 0; k * stride < grad.size(); ++k) mx = std::max(mx, norm2(grad.subspan(k * stride, stride)));
  return std::sqrt(mx);
}

constexpr double kRoundoff = 4.0 * std::numeric_limits<double>::epsilon();

MinimizationResult descend(const Objective& objective, const PointConfiguration& start,
                           const OptimizerParams& params) {
  const bool singular = objective.kernel().spec().singular();
  const double n = static_cast<double>(start.size());
  const double spacing = std::pow(n, -1.0 / start.manifold().dim());

  MinimizationResult result{start, {}, 0.0, 0, false, 0.0, 0};
  std::vector<double> grad;
  double energy = objective.energy_and_gradient(start, grad);
  double gnorm2 = norm2(grad);
  result.energy_history.push_back(energy);

  double step = params.initial_step;
  if (!(step > 0.0)) {
    const double gmax = max_point_norm(grad, start.stride());
    step = gmax > 0.0 ? 0.1 * spacing / gmax : 1.0;
  }

  std::vector<double> trial_grad;
  for (std::size_t it = 0; it < params.max_iters; ++it) {
    if (std::sqrt(gnorm2) <= params.grad_tol) {
      result.converged = true;
      break;
    }
    double alpha = step;
    int halvings = 0;
    while (true) {
      PointConfiguration trial = retract(result.config, grad, alpha);
      bool ok = !singular || trial.size() < 2 || min_pair_distance(trial) >= kCollisionDistance;
      double trial_energy = std::numeric_limits<double>::infinity();
      if (ok) {
        try {
          trial_energy = objective.energy_and_gradient(trial, trial_grad);
        } catch (const Singularity&) {
          ok = false;
        }
      }
      const bool armijo = trial_energy < energy && trial_energy <= energy - params.c1 * alpha * gnorm2;
      // At roundoff-level energy changes a step counts as progress if it shrinks the gradient.
      const bool flat = trial_energy <= energy + kRoundoff * std::max(1.0, std::abs(energy)) &&
                        norm2(trial_grad) < gnorm2;
      if (ok && (armijo || flat)) {
        result.config = std::move(trial);
        energy = trial_energy;
        grad.swap(trial_grad);
        gnorm2 = norm2(grad);
        result.energy_history.push_back(energy);
        step = 2.0 * alpha;
        break;
      }
      alpha *= params.shrink;
      if (++halvings >= kMaxHalvings) {
        result.iterations_used = it;
        result.grad_norm_final = std::sqrt(gnorm2);
        result.min_separation = min_pair_distance(result.config);
        throw StallError("line search stalled after 60 step reductions", result.grad_norm_final, result);
      }
    }
    result.iterations_used = it + 1;
  }
  result.grad_norm_final = std::sqrt(gnorm2);
  if (result.grad_norm_final <= params.grad_tol) result.converged = true;
  result.min_separation = min_pair_distance(result.config);
  return result;
}

}  // namespace

void OptimizerParams::validate() const {
  if (max_iters == 0) throw InvalidInput("max_iters must be positive");
  if (!(grad_tol > 0.0)) throw InvalidInput("grad_tol must be positive");
  if (initial_step < 0.0) throw InvalidInput("initial_step must be positive (or 0 for automatic)");
  if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidInput("shrink factor must lie in (0, 1)");
  if (!(c1 > 0.0 && c1 < 1.0)) throw InvalidInput("sufficient-decrease constant must lie in (0, 1)");
  if (restarts == 0) throw InvalidInput("restarts must be positive");
}

double objective_energy(const PointConfiguration& config, const KernelSpec& kernel) {
  if (!(config.manifold() == kernel.manifold())) throw InvalidInput("kernel and configuration manifolds differ");
  return Objective(kernel).energy(config);
}

std::vector<double> energy_gradient(const PointConfiguration& config, const KernelSpec& kernel) {
  if (!(config.manifold() == kernel.manifold())) throw InvalidInput("kernel and configuration manifolds differ");
  std::vector<double> grad;
  Objective(kernel).energy_and_gradient(config, grad);
  return grad;
}

MinimizationResult minimize(const PointConfiguration& config0, const KernelSpec& kernel,
                            const OptimizerParams& params) {
  params.validate();
  if (!(config0.manifold() == kernel.manifold())) throw InvalidInput("kernel and configuration manifolds differ");
  if (config0.size() < 2) throw InvalidInput("minimization needs at least two points");
  const Objective objective(kernel);

  std::optional<MinimizationResult> best;
  for (std::size_t r = 0; r < params.restarts; ++r) {
    const PointConfiguration start =
        r == 0 ? config0 : uniform_sample(config0.manifold(), config0.size(), params.seed + r);
    MinimizationResult run = descend(objective, start, params);
    run.restart = r;
    if (!best || run.energy_history.back() < best->energy_history.back()) best = std::move(run);
  }
  return std::move(*best);
}

double min_separation(const PointConfiguration& config) {
  if (config.size() < 2) throw InvalidInput("min_separation needs at least two points");
  return min_pair_distance(config);
}

GradientCheck check_gradient(const PointConfiguration& config, const KernelSpec& kernel, double h) {
  if (!(config.manifold() == kernel.manifold())) throw InvalidInput("kernel and configuration manifolds differ");
  const Objective objective(kernel);
  std::vector<double> grad;
  objective.energy_and_gradient(config, grad);

  const std::size_t stride = config.stride();
  const bool sphere = config.manifold().is_sphere();
  std::vector<double> analytic, numeric;
  std::vector<double> dir(config.coords().size(), 0.0);
  for (std::size_t k = 0; k < config.size(); ++k) {
    for (std::size_t c = 0; c < stride; ++c) {
      std::vector<double> e(stride, 0.0);
      e[c] = 1.0;
      const auto v = sphere ? tangent_project(config.point(k), e) : e;
      if (norm2(v) < 1e-12) continue;
      std::fill(dir.begin(), dir.end(), 0.0);
      std::copy(v.begin(), v.end(), dir.begin() + static_cast<std::ptrdiff_t>(k * stride));
      // retract(x, dir, -h) moves to x + h dir.
      const double ep = objective.energy(retract(config, dir, -h));
      const double em = objective.energy(retract(config, dir, h));
      double an = 0.0;
      for (std::size_t j = 0; j < stride; ++j) an += grad[k * stride + j] * v[j];
      analytic.push_back(an);
      numeric.push_back((ep - em) / (2.0 * h));
    }
  }
  GradientCheck check;
  double scale = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    check.max_abs_error = std::max(check.max_abs_error, std::abs(analytic[i] - numeric[i]));
    scale = std::max(scale, std::abs(analytic[i]));
  }
  check.max_rel_error = scale > 0.0 ? check.max_abs_error / scale : check.max_abs_error;
  return check;
}

}  // namespace greenlab
