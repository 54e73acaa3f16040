#pragma once

// JSON encodings of the library's report types. Non-finite numbers (an
// unbounded tail, for instance) are written as null.

#include <nlohmann/json.hpp>
#include <string>

#include "greenlab/geometry.hpp"
#include "greenlab/kernels.hpp"
#include "greenlab/optimize.hpp"
#include "greenlab/spectral.hpp"
#include "greenlab/transport.hpp"

namespace greenlab {

/// Library version, "major.minor.patch".
const char* version() noexcept;

std::string kernel_kind_name(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& name);

void to_json(nlohmann::json& j, const Manifold& m);
void to_json(nlohmann::json& j, const KernelSpec& spec);
void to_json(nlohmann::json& j, const PointConfiguration& config);
void to_json(nlohmann::json& j, const EnergyReport& report);
void to_json(nlohmann::json& j, const SpectralMeasure& sm);
void to_json(nlohmann::json& j, const W2Estimate& est);
void to_json(nlohmann::json& j, const MinimizationResult& result);

}  // namespace greenlab
