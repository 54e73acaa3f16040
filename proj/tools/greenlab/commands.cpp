#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "config.hpp"
#include "greenlab/ewald.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/serialize.hpp"
#include "greenlab/spectral.hpp"
#include "harness.hpp"

namespace greenlab::cli {

namespace {

struct CommonOptions {
  std::string config;
  std::string out;
  std::string points;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

// Largest Fourier radius we are willing to enumerate for n points on T^d.
int budget_radius(int d, std::size_t n) {
  const double budget = 5e7 / static_cast<double>(std::max<std::size_t>(n, 1));
  return std::max(1, static_cast<int>((std::pow(budget, 1.0 / d) - 1.0) / 2.0));
}

// Truncation whose omitted heat-damped modes are negligible at time t.
int smoothing_truncation(const Manifold& m, double t, std::size_t n) {
  if (m.is_sphere()) {
    return std::clamp(static_cast<int>(std::ceil(std::sqrt(35.0 / (2.0 * t)))) + 2, 8, 500);
  }
  const int d = m.dim();
  if (d == 1) {
    const double k = std::sqrt(std::log(1e10) / (8.0 * std::numbers::pi * std::numbers::pi * t));
    return std::clamp(static_cast<int>(std::ceil(k)) + 16, 16, 1 << 20);
  }
  const int cap = budget_radius(d, n);
  int K = 1;
  while (K < cap && TorusGreen::fourier_tail(d, 8.0 * std::numbers::pi * std::numbers::pi * t, K) > 1e-10) ++K;
  return K;
}

void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot write output file '" + path + "'");
  file << text;
}

nlohmann::json header(const std::string& command, const ExperimentConfig& config) {
  return {{"tool", "greenlab"}, {"version", version()}, {"command", command}, {"config", to_json(config)}};
}

ExperimentConfig resolve(const CommonOptions& opts) {
  ExperimentConfig config = load_config(opts.config);
  if (!opts.points.empty()) {
    config.generator = "csv";
    config.points = opts.points;
  }
  if (opts.seed) config.seeds = {*opts.seed};
  if (!opts.out.empty()) config.output = opts.out;
  return config;
}

PointConfiguration single_configuration(const ExperimentConfig& config) {
  return make_configuration(config, config.generator, config.n_list.front(), config.seeds.front(),
                            config.kernel_spec());
}

int cmd_energy(const ExperimentConfig& config, std::ostream& out) {
  const KernelSpec kernel = config.kernel_spec();
  nlohmann::json reports = nlohmann::json::array();
  const bool single = config.generator == "csv";
  for (std::size_t n : config.n_list) {
    for (std::uint64_t seed : config.seeds) {
      const auto points = make_configuration(config, config.generator, n, seed, kernel);
      nlohmann::json entry = {{"seed", seed}, {"report", pair_energy(points, kernel)}};
      const double t = config.heat_time_for(points.size());
      if (!points.empty()) {
        const int trunc = smoothing_truncation(points.manifold(), t, points.size());
        const auto norm = hminus1_norm(spectral_measure(points, trunc, t));
        entry["smoothed_hminus1"] = {{"heat_time", t},
                                     {"truncation", trunc},
                                     {"value", norm.value},
                                     {"squared", norm.squared},
                                     {"tail_bound", std::isfinite(norm.tail_bound) ? nlohmann::json(norm.tail_bound)
                                                                                   : nlohmann::json(nullptr)}};
      }
      reports.push_back(std::move(entry));
      if (single) break;
    }
    if (single) break;
  }
  nlohmann::json doc = header("energy", config);
  doc["reports"] = std::move(reports);
  emit(config.output, out, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_minimize(const ExperimentConfig& config, std::ostream& out) {
  const KernelSpec kernel = config.kernel_spec();
  const auto start = single_configuration(config);
  OptimizerParams params = config.optimizer;
  params.seed += config.seeds.front();
  const MinimizationResult result = minimize(start, kernel, params);
  nlohmann::json doc = header("minimize", config);
  doc["result"] = result;
  doc["energy"] = pair_energy(result.config, kernel);
  emit(config.output, out, doc.dump(2) + "\n");
  if (!config.output.empty()) {
    std::ofstream csv(config.output + ".points.csv");
    if (!csv) throw ConfigError("cannot write '" + config.output + ".points.csv'");
    write_csv(csv, result.config);
  }
  return kExitOk;
}

int cmd_w2(const ExperimentConfig& config, std::ostream& out) {
  const auto points = single_configuration(config);
  const TransportOptions opt = config.transport_options();
  W2Estimate est;
  if (opt.method == TransportMethod::CircleExact) {
    est = w_p_circle_exact(points, config.p);
  } else {
    est = w2_semidiscrete(points, config.M, opt);
  }
  nlohmann::json doc = header("w2", config);
  doc["n"] = points.size();
  doc["estimate"] = est;
  emit(config.output, out, doc.dump(2) + "\n");
  if (!config.plan_csv.empty()) {
    std::ofstream plan(config.plan_csv);
    if (!plan) throw ConfigError("cannot write '" + config.plan_csv + "'");
    plan << "# row,col,mass\n" << std::setprecision(17);
    for (const auto& e : est.plan) plan << e.row << ',' << e.col << ',' << e.mass << '\n';
  }
  return kExitOk;
}

int cmd_diaphony(const ExperimentConfig& config, std::ostream& out) {
  const Manifold m = config.resolved_manifold();
  if (!m.is_torus() || m.dim() != 1) throw ConfigError("diaphony runs on T^1");
  const auto points = single_configuration(config);
  const double n = static_cast<double>(points.size());
  const auto f = diaphony_t1(points);
  const double green = (pair_energy(points, KernelSpec::green_t1()).total + n * green_t1(0.0)) / (n * n);
  const double dn = star_discrepancy_t1(points);
  const auto w1 = w_p_circle_exact(points, 1);
  const auto w2 = w_p_circle_exact(points, 2);
  nlohmann::json doc = header("diaphony", config);
  doc["n"] = points.size();
  doc["diaphony"] = f.value;
  doc["diaphony_squared"] = f.squared;
  doc["diaphony_tail_bound"] = f.tail_bound;
  doc["green_sum_normalized"] = green;
  doc["star_discrepancy"] = dn;
  doc["w1"] = w1;
  doc["w2"] = w2;
  doc["w1_over_discrepancy"] = w1.value / dn;
  doc["w2_over_diaphony"] = w2.value / f.value;
  emit(config.output, out, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_verify(const ExperimentConfig& config, std::ostream& out, bool coulomb) {
  const VerificationReport report = coulomb ? verify_coulomb_bound(config) : verify_green_bound(config);
  nlohmann::json doc = header(coulomb ? "verify-t2" : "verify-t1", config);
  doc["report"] = to_json(report);
  emit(config.output, out, doc.dump(2) + "\n");
  return report.pass ? kExitOk : kExitVerification;
}

int cmd_scaling(const ExperimentConfig& config, std::ostream& out) {
  const ScalingTable table = run_scaling(config);
  std::ostringstream text;
  write_scaling_csv(text, table, header("scaling", config));
  emit(config.output, out, text.str());
  return kExitOk;
}

unsigned thread_count(unsigned requested) {
  if (const char* env = std::getenv("GREENLAB_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw ConfigError(std::string("GREENLAB_THREADS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, requested);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete energies and Wasserstein distances on tori and spheres", "greenlab"};
  app.footer(config_reference());
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  CommonOptions opts;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"energy", "pair energy of a configuration"},
      {"minimize", "gradient-descent minimizer of a pair energy"},
      {"w2", "Wasserstein distance to the volume measure"},
      {"diaphony", "diaphony, discrepancy and exact transport on T^1"},
      {"verify-t1", "check W2 against the Green-energy bound on T^d"},
      {"verify-t2", "check W2 against the normalized Coulomb bound on S^d"},
      {"scaling", "log-log scaling study (corollary | wagner | lemma1 | rate)"}};
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", opts.config, "experiment config file")->required();
    sub->add_option("--out", opts.out, "output path (default: standard output)");
    sub->add_option("--points", opts.points, "CSV point file (overrides the generator)");
    sub->add_option("--seed", opts.seed, "seed (overrides general.seeds)");
    sub->add_option("--threads", opts.threads, "worker threads (GREENLAB_THREADS overrides)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    parallel::set_threads(thread_count(opts.threads));
    const ExperimentConfig config = resolve(opts);
    if (command == "energy") return cmd_energy(config, out);
    if (command == "minimize") return cmd_minimize(config, out);
    if (command == "w2") return cmd_w2(config, out);
    if (command == "diaphony") return cmd_diaphony(config, out);
    if (command == "verify-t1") return cmd_verify(config, out, false);
    if (command == "verify-t2") return cmd_verify(config, out, true);
    if (command == "scaling") return cmd_scaling(config, out);
    err << "error: unknown command " << command << '\n';
    return kExitConfig;
  } catch (const Singularity& e) {
    err << "error: " << e.what() << '\n';
    return kExitSingularity;
  } catch (const NumericalFailure& e) {
    err << "error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitNumerical;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnexpected;
  }
}

}  // namespace greenlab::cli
