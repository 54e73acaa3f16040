#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "greenlab/error.hpp"
#include "greenlab/geometry.hpp"
#include "greenlab/kernels.hpp"
#include "greenlab/optimize.hpp"
#include "greenlab/sinkhorn.hpp"
#include "greenlab/transport.hpp"

namespace greenlab::cli {

/// Malformed or inconsistent experiment configuration (exit code 2).
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Everything an experiment needs, read from a flat INI file with the
/// sections [general], [transport], [optimizer], [verify] and [scaling].
/// Unknown sections or keys are rejected.
struct ExperimentConfig {
  // [general]
  std::string manifold = "torus";
  int dim = 1;
  std::string kernel = "auto";
  std::string normalization = "raw";
  int truncation = 0;
  double exponent = 1.0;
  std::string generator = "random";
  std::string points;  // CSV path, used when generator = csv
  std::vector<std::size_t> n_list{16};
  std::vector<std::uint64_t> seeds{0};
  double cluster_radius = 0.01;
  double alpha = 0.6180339887498949;
  int base = 2;
  std::optional<double> heat_time;  // empty means auto, n^{-2/d}
  std::string output;

  // [transport]
  std::size_t M = 4096;
  std::string solver = "network-flow";
  int p = 2;
  SinkhornOptions sinkhorn{};
  bool debias = false;
  std::string plan_csv;

  // [optimizer]
  OptimizerParams optimizer{};

  // [verify]
  std::optional<double> constant;
  // Empty selects random,grid,minimizer,cluster on the torus and
  // random,minimizer,cluster on the sphere.
  std::vector<std::string> generators;

  // [scaling]
  std::string mode = "corollary";
  std::vector<double> t_list{1e-4, 4e-4, 1.6e-3, 6.4e-3};

  Manifold resolved_manifold() const;
  KernelSpec kernel_spec() const;
  TransportOptions transport_options() const;
  /// Heat time for n points: the configured value or n^{-2/d}.
  double heat_time_for(std::size_t n) const;

  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Help text describing every key.
std::string config_reference();

nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace greenlab::cli
