#pragma once

// Experiment drivers shared by the command-line tool and the acceptance
// suite: corpus generation, bound verification tables, scaling studies.

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "greenlab/geometry.hpp"
#include "greenlab/kernels.hpp"
#include "greenlab/transport.hpp"

namespace greenlab::cli {

// Pass constants calibrated once on the reference corpora
// configs/verify_t1_torus{1,2,3}.ini and configs/verify_t2_sphere3.ini, then
// frozen. Indexed by torus dimension for the Green-energy bound.
inline constexpr double kGreenBoundConstant[4] = {0.0, 2.0, 0.6, 1.0};
inline constexpr double kCoulombBoundConstant = 3.0;

/// Ordinary least squares fit of log y = intercept + slope log x.
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

/// Requires at least 3 distinct x values and positive data.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Builds one corpus member. `kernel` drives the minimizer generator.
PointConfiguration make_configuration(const ExperimentConfig& config, const std::string& generator, std::size_t n,
                                      std::uint64_t seed, const KernelSpec& kernel);

/// Generators used by verify-t1/verify-t2 for the configured manifold.
std::vector<std::string> verification_generators(const ExperimentConfig& config);

struct VerificationRow {
  std::string generator;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  W2Estimate w2;
  double lhs = 0.0;          // W2 value plus its error bound
  double energy = 0.0;       // Σ G on the torus, renormalized Coulomb X on the sphere
  double rate_term = 0.0;    // n^{-1/d}, or sqrt(log n / n) on T^2
  double energy_term = 0.0;  // (1/n) |energy|^{1/2}
  double rhs = 0.0;
  double ratio = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string bound;  // "green" or "coulomb"
  double constant = 0.0;
  double max_ratio = 0.0;
  bool pass = true;
  std::vector<VerificationRow> rows;
};

/// Evaluates one configuration against the Green-energy bound on T^d.
VerificationRow green_bound_row(const PointConfiguration& config, const ExperimentConfig& settings);
/// Evaluates one configuration against the normalized Coulomb bound on S^d, d >= 3.
VerificationRow coulomb_bound_row(const PointConfiguration& config, const ExperimentConfig& settings);

VerificationReport verify_green_bound(const ExperimentConfig& config);
VerificationReport verify_coulomb_bound(const ExperimentConfig& config);

nlohmann::json to_json(const VerificationReport& report);

/// Per-row table plus fitted exponents for one scaling mode.
struct ScalingTable {
  std::string mode;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // (quantity, fit) pairs.
  std::vector<std::pair<std::string, LogLogFit>> fits;
};

ScalingTable run_scaling(const ExperimentConfig& config);

/// CSV with '#' header lines (tool version, resolved config) and trailing
/// '# fit' lines.
void write_scaling_csv(std::ostream& out, const ScalingTable& table, const nlohmann::json& header);

/// W2 between a configuration and its heat-smoothed version e^{tΔ}μ on T^d,
/// with the smoothed measure discretized on a grid of about M nodes.
W2Estimate heat_smoothing_w2(const PointConfiguration& config, double t, std::size_t M);

}  // namespace greenlab::cli
