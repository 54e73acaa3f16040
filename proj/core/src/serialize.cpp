#include "greenlab/serialize.hpp"

#include <cmath>

#include "greenlab/error.hpp"

namespace greenlab {

namespace {

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

const char* version() noexcept { return GREENLAB_VERSION; }

std::string kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::GreenTorus1:
      return "green_t1";
    case KernelKind::GreenTorusSpectral:
      return "green_torus";
    case KernelKind::GreenSphere2:
      return "green_sphere2";
    case KernelKind::CoulombSphere:
      return "coulomb";
    case KernelKind::LogSphere2:
      return "log_sphere2";
    case KernelKind::Riesz:
      return "riesz";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(const std::string& name) {
  for (auto kind : {KernelKind::GreenTorus1, KernelKind::GreenTorusSpectral, KernelKind::GreenSphere2,
                    KernelKind::CoulombSphere, KernelKind::LogSphere2, KernelKind::Riesz}) {
    if (kernel_kind_name(kind) == name) return kind;
  }
  throw InvalidInput("unknown kernel '" + name + "'");
}

void to_json(nlohmann::json& j, const Manifold& m) {
  j = {{"kind", m.kind_name()}, {"dim", m.dim()}, {"volume", m.volume()}};
}

void to_json(nlohmann::json& j, const KernelSpec& spec) {
  j = {{"kind", kernel_kind_name(spec.kind)},
       {"name", spec.name()},
       {"dim", spec.dim},
       {"normalization", spec.normalization == Normalization::MeanZero ? "mean-zero" : "raw"}};
  if (spec.truncation > 0) j["truncation"] = spec.truncation;
  if (spec.split_time > 0.0) j["split_time"] = spec.split_time;
  if (spec.kind == KernelKind::Riesz) j["exponent"] = spec.exponent;
}

void to_json(nlohmann::json& j, const PointConfiguration& config) {
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto p = config.point(i);
    points.push_back(std::vector<double>(p.begin(), p.end()));
  }
  j = {{"manifold", config.manifold()}, {"n", config.size()}, {"points", std::move(points)}};
}

void to_json(nlohmann::json& j, const EnergyReport& report) {
  j = {{"kernel", report.kernel},
       {"n", report.n},
       {"total", number(report.total)},
       {"normalized", number(report.normalized)},
       {"min_separation", number(report.min_separation)}};
}

void to_json(nlohmann::json& j, const SpectralMeasure& sm) {
  j = {{"manifold", sm.manifold},
       {"truncation", sm.truncation},
       {"heat_time", sm.heat_time},
       {"n", sm.n},
       {"tail_bound", number(sm.tail_bound)}};
  if (sm.manifold.is_torus()) {
    const auto d = static_cast<std::size_t>(sm.manifold.dim());
    nlohmann::json coeffs = nlohmann::json::array();
    for (std::size_t m = 0; m < sm.coefficients.size(); ++m) {
      std::vector<int> k(sm.modes.begin() + static_cast<std::ptrdiff_t>(m * d),
                         sm.modes.begin() + static_cast<std::ptrdiff_t>((m + 1) * d));
      coeffs.push_back({{"k", k}, {"re", sm.coefficients[m].real()}, {"im", sm.coefficients[m].imag()}});
    }
    j["coefficients"] = std::move(coeffs);
  } else {
    j["degree_powers"] = sm.degree_powers;
  }
}

void to_json(nlohmann::json& j, const W2Estimate& est) {
  j = {{"p", est.p},
       {"value", number(est.value)},
       {"error_bound", number(est.error_bound)},
       {"method", method_name(est.method)},
       {"M", est.M},
       {"epsilon", est.epsilon},
       {"iterations", est.iterations}};
  if (est.debiased) j["debiased"] = number(*est.debiased);
}

void to_json(nlohmann::json& j, const MinimizationResult& result) {
  j = {{"config", result.config},
       {"energy_history", result.energy_history},
       {"grad_norm_final", number(result.grad_norm_final)},
       {"iterations_used", result.iterations_used},
       {"converged", result.converged},
       {"min_separation", number(result.min_separation)},
       {"restart", result.restart}};
}

}  // namespace greenlab
