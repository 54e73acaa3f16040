#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "greenlab/optimize.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/quadrature.hpp"
#include "greenlab/serialize.hpp"
#include "greenlab/spectral.hpp"

namespace greenlab::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Cell {
  std::string generator;
  std::size_t n;
  std::uint64_t seed;
};

// Cells ordered by (n, seed, generator); deterministic generators get one seed.
std::vector<Cell> corpus_cells(const ExperimentConfig& config, const std::vector<std::string>& generators) {
  static const std::set<std::string> deterministic{"grid", "kronecker", "vdc", "csv"};
  std::vector<Cell> cells;
  for (std::size_t n : config.n_list) {
    for (std::size_t s = 0; s < config.seeds.size(); ++s) {
      for (const auto& g : generators) {
        if (s > 0 && deterministic.count(g)) continue;
        cells.push_back({g, n, config.seeds[s]});
      }
    }
  }
  return cells;
}

std::size_t distinct_count(std::span<const double> x) {
  return std::set<double>(x.begin(), x.end()).size();
}

double rate_term(int d, std::size_t n) {
  const double nn = static_cast<double>(n);
  if (d == 2) return n >= 2 ? std::sqrt(std::log(nn) / nn) : 1.0;
  return std::pow(nn, -1.0 / d);
}

void finish_row(VerificationRow& row, int d, double constant) {
  row.lhs = row.w2.value + row.w2.error_bound;
  row.rate_term = rate_term(d, row.n);
  row.energy_term = std::sqrt(std::abs(row.energy)) / static_cast<double>(row.n);
  row.rhs = row.rate_term + row.energy_term;
  row.ratio = row.lhs / row.rhs;
  row.pass = row.ratio <= constant;
}

VerificationReport run_verification(const ExperimentConfig& config, const std::string& bound, double constant,
                                    const KernelSpec& minimizer_kernel,
                                    VerificationRow (*row_fn)(const PointConfiguration&, const ExperimentConfig&)) {
  const auto cells = corpus_cells(config, verification_generators(config));
  std::vector<VerificationRow> rows(cells.size());
  parallel::for_each_index(cells.size(), [&](std::size_t i) {
    const Cell& c = cells[i];
    const auto points = make_configuration(config, c.generator, c.n, c.seed, minimizer_kernel);
    rows[i] = row_fn(points, config);
    rows[i].generator = c.generator;
    rows[i].seed = c.seed;
    rows[i].pass = rows[i].ratio <= constant;
  });
  VerificationReport report;
  report.bound = bound;
  report.constant = constant;
  for (auto& r : rows) {
    report.max_ratio = std::max(report.max_ratio, r.ratio);
    report.pass = report.pass && r.pass;
  }
  report.rows = std::move(rows);
  return report;
}

}  // namespace

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("fit needs equally many x and y values");
  if (distinct_count(x) < 3) throw InvalidInput("a scaling fit needs at least 3 distinct abscissae");
  const std::size_t N = x.size();
  std::vector<double> lx(N), ly(N);
  for (std::size_t i = 0; i < N; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidInput("log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(N);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(N);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  LogLogFit fit;
  fit.points = N;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double r = ly[i] - fit.intercept - fit.slope * lx[i];
    sse += r * r;
  }
  fit.slope_stderr = std::sqrt(sse / static_cast<double>(N - 2) / sxx);
  return fit;
}

PointConfiguration make_configuration(const ExperimentConfig& config, const std::string& generator, std::size_t n,
                                      std::uint64_t seed, const KernelSpec& kernel) {
  const Manifold m = config.resolved_manifold();
  const int d = m.dim();
  if (generator == "random") return uniform_sample(m, n, seed);
  if (generator == "cluster") return cluster_sample(m, n, config.cluster_radius, seed);
  if (generator == "grid") {
    if (!m.is_torus()) throw ConfigError("generator 'grid' needs a torus");
    const int side = static_cast<int>(std::lround(std::pow(static_cast<double>(n), 1.0 / d)));
    if (std::pow(static_cast<double>(side), d) != static_cast<double>(n)) {
      throw ConfigError("generator 'grid' needs n = m^" + std::to_string(d) + ", got n = " + std::to_string(n));
    }
    return grid_torus(side, d);
  }
  if (generator == "kronecker" || generator == "vdc") {
    if (!m.is_torus() || d != 1) throw ConfigError("generator '" + generator + "' needs T^1");
    if (generator == "kronecker") return lowdisc_sequence(Kronecker{config.alpha}, n);
    return lowdisc_sequence(VanDerCorput{config.base}, n);
  }
  if (generator == "minimizer") {
    const auto start = uniform_sample(m, n, seed);
    if (n < 2) return start;
    OptimizerParams params = config.optimizer;
    params.seed += seed * 7919;
    try {
      return minimize(start, kernel, params).config;
    } catch (const StallError& e) {
      return e.result().config;
    }
  }
  if (generator == "csv") {
    std::ifstream in(config.points);
    if (!in) throw ConfigError("cannot open points file '" + config.points + "'");
    auto points = read_csv(in);
    if (!(points.manifold() == m)) throw ConfigError("points file lives on " + points.manifold().label());
    return points;
  }
  throw ConfigError("unknown generator '" + generator + "'");
}

std::vector<std::string> verification_generators(const ExperimentConfig& config) {
  if (!config.generators.empty()) return config.generators;
  if (config.manifold == "sphere") return {"random", "minimizer", "cluster"};
  return {"random", "grid", "minimizer", "cluster"};
}

VerificationRow green_bound_row(const PointConfiguration& config, const ExperimentConfig& settings) {
  const Manifold& m = config.manifold();
  if (!m.is_torus() || m.dim() > 3) throw ConfigError("verify-t1 runs on T^1, T^2 or T^3");
  const KernelSpec kernel = settings.kernel_spec();
  if (kernel.kind != KernelKind::GreenTorus1 && kernel.kind != KernelKind::GreenTorusSpectral) {
    throw ConfigError("verify-t1 needs a torus Green kernel");
  }
  VerificationRow row;
  row.n = config.size();
  if (row.n == 0) throw InvalidInput("verification needs at least one point");
  row.energy = pair_energy(config, kernel).total;
  if (m.dim() == 1) {
    row.w2 = w_p_circle_exact(config, 2);
  } else {
    TransportOptions opt = settings.transport_options();
    if (opt.method == TransportMethod::CircleExact) opt.method = TransportMethod::NetworkFlow;
    row.w2 = w2_semidiscrete(config, settings.M, opt);
  }
  const int d = m.dim();
  finish_row(row, d, settings.constant.value_or(kGreenBoundConstant[d]));
  return row;
}

VerificationRow coulomb_bound_row(const PointConfiguration& config, const ExperimentConfig& settings) {
  const Manifold& m = config.manifold();
  if (!m.is_sphere() || m.dim() < 3) throw ConfigError("verify-t2 runs on S^d with d >= 3");
  VerificationRow row;
  row.n = config.size();
  if (row.n == 0) throw InvalidInput("verification needs at least one point");
  row.energy = pair_energy(config, KernelSpec::coulomb(m.dim(), Normalization::MeanZero)).total;
  TransportOptions opt = settings.transport_options();
  if (opt.method == TransportMethod::CircleExact) opt.method = TransportMethod::NetworkFlow;
  row.w2 = w2_semidiscrete(config, settings.M, opt);
  finish_row(row, m.dim(), settings.constant.value_or(kCoulombBoundConstant));
  return row;
}

VerificationReport verify_green_bound(const ExperimentConfig& config) {
  const Manifold m = config.resolved_manifold();
  if (!m.is_torus() || m.dim() > 3) throw ConfigError("verify-t1 runs on T^1, T^2 or T^3");
  const double constant = config.constant.value_or(kGreenBoundConstant[m.dim()]);
  return run_verification(config, "green", constant, config.kernel_spec(), &green_bound_row);
}

VerificationReport verify_coulomb_bound(const ExperimentConfig& config) {
  const Manifold m = config.resolved_manifold();
  if (!m.is_sphere() || m.dim() < 3) throw ConfigError("verify-t2 runs on S^d with d >= 3");
  return run_verification(config, "coulomb", config.constant.value_or(kCoulombBoundConstant),
                          KernelSpec::coulomb(m.dim()), &coulomb_bound_row);
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"generator", r.generator},
                    {"n", r.n},
                    {"seed", r.seed},
                    {"w2", r.w2},
                    {"lhs", r.lhs},
                    {"energy", r.energy},
                    {"rate_term", r.rate_term},
                    {"energy_term", r.energy_term},
                    {"rhs", r.rhs},
                    {"ratio", r.ratio},
                    {"pass", r.pass}});
  }
  return {{"bound", report.bound},
          {"constant", report.constant},
          {"max_ratio", report.max_ratio},
          {"pass", report.pass},
          {"rows", std::move(rows)}};
}

W2Estimate heat_smoothing_w2(const PointConfiguration& config, double t, std::size_t M) {
  const Manifold& m = config.manifold();
  if (!m.is_torus()) throw InvalidInput("heat smoothing transport is implemented on the torus");
  if (!(t > 0.0)) throw InvalidInput("heat time must be positive");
  const QuadratureRule rule = uniform_quadrature(m, M);
  const auto d = static_cast<std::size_t>(m.dim());
  const auto side = static_cast<std::size_t>(std::lround(std::pow(static_cast<double>(rule.nodes.size()), 1.0 / d)));
  const double h = 1.0 / static_cast<double>(side);

  // Exact heat mass of every grid cell: the torus heat kernel factorizes over
  // axes, and each axis is a wrapped Gaussian of variance 2t.
  const double scale = 2.0 * std::sqrt(t);
  const int images = static_cast<int>(std::ceil(10.0 * std::sqrt(2.0 * t))) + 1;
  const std::size_t n = config.size();
  std::vector<double> axis_mass(n * d * side);
  parallel::for_each_index(n * d, [&](std::size_t ia) {
    const double x = config.point(ia / d)[ia % d];
    for (std::size_t c = 0; c < side; ++c) {
      const double lo = static_cast<double>(c) * h - x, hi = lo + h;
      double mass = 0.0;
      for (int k = -images; k <= images; ++k) mass += 0.5 * (std::erf((hi + k) / scale) - std::erf((lo + k) / scale));
      axis_mass[ia * side + c] = mass;
    }
  });
  const std::size_t nodes = rule.nodes.size();
  std::vector<double> w(nodes, 0.0);
  parallel::for_each_index(nodes, [&](std::size_t j) {
    const auto node = rule.nodes.point(j);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double p = 1.0;
      for (std::size_t a = 0; a < d; ++a) {
        const auto cell = static_cast<std::size_t>(node[a] * static_cast<double>(side)) % side;
        p *= axis_mass[(i * d + a) * side + cell];
      }
      s += p;
    }
    w[j] = s;
  });
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  W2Estimate est = w2_empirical_pair(config, rule.nodes, w);
  // Each cell's mass sits at its center, at most half a cell diagonal away.
  est.error_bound += rule.mesh_radius;
  return est;
}

ScalingTable run_scaling(const ExperimentConfig& config) {
  const Manifold m = config.resolved_manifold();
  const int d = m.dim();
  ScalingTable table;
  table.mode = config.mode;

  if (config.mode == "lemma1") {
    if (distinct_count(config.t_list) < 3) throw InvalidInput("lemma1 needs at least 3 distinct heat times");
    const auto points =
        make_configuration(config, config.generator, config.n_list.front(), config.seeds.front(), config.kernel_spec());
    table.columns = {"t", "w2", "error_bound"};
    std::vector<double> ts, ws;
    for (double t : config.t_list) {
      const auto est = heat_smoothing_w2(points, t, config.M);
      table.rows.push_back({t, est.value, est.error_bound});
      ts.push_back(t);
      ws.push_back(est.value);
    }
    table.fits.emplace_back("w2_vs_t", fit_loglog(ts, ws));
    return table;
  }

  std::vector<double> ns(config.n_list.begin(), config.n_list.end());
  for (double& v : ns) v = std::round(v);
  if (distinct_count(ns) < 3) throw InvalidInput("scaling needs at least 3 distinct n values");

  KernelSpec kernel = config.kernel_spec();
  if (config.mode == "wagner") {
    if (!m.is_sphere() || d < 3) throw ConfigError("wagner mode runs on S^d with d >= 3");
    kernel = KernelSpec::coulomb(d);
  }
  std::vector<Cell> cells;
  for (std::size_t n : config.n_list) {
    for (std::uint64_t s : config.seeds) {
      cells.push_back({config.generator, n, s});
      if (config.generator == "grid" || config.generator == "kronecker" || config.generator == "vdc") break;
    }
  }

  std::vector<std::vector<double>> rows(cells.size());
  const TransportOptions transport = config.transport_options();
  parallel::for_each_index(cells.size(), [&](std::size_t i) {
    const Cell& c = cells[i];
    const auto points = make_configuration(config, c.generator, c.n, c.seed, kernel);
    const double n = static_cast<double>(points.size());
    const double sep = points.size() >= 2 ? min_separation(points) : kNaN;
    if (config.mode == "corollary") {
      const double e = pair_energy(points, kernel).total;
      const double per = d == 2 ? e / (n * std::log(n)) : e / std::pow(n, 2.0 - 2.0 / d);
      rows[i] = {n, static_cast<double>(c.seed), e, e / (n * n), per, sep};
      if (d == 1) rows[i].push_back(diaphony_t1(points).value);
    } else if (config.mode == "wagner") {
      const double x = pair_energy(points, KernelSpec::coulomb(d, Normalization::MeanZero)).total;
      rows[i] = {n, static_cast<double>(c.seed), x, x / std::pow(n, 2.0 - 2.0 / d), sep};
    } else {
      const auto est = d == 1 ? w_p_circle_exact(points, 2) : w2_semidiscrete(points, config.M, transport);
      rows[i] = {n, static_cast<double>(c.seed), est.value, est.error_bound, est.value * std::pow(n, 1.0 / d), sep};
    }
  });
  table.rows = std::move(rows);

  std::vector<double> x, y;
  for (const auto& r : table.rows) {
    x.push_back(r[0]);
    y.push_back(std::abs(r[2]));
  }
  if (config.mode == "corollary") {
    table.columns = {"n", "seed", "energy", "normalized", d == 2 ? "energy_over_nlogn" : "energy_over_n_rate",
                     "min_separation"};
    if (d == 1) table.columns.push_back("diaphony");
    table.fits.emplace_back("abs_energy_vs_n", fit_loglog(x, y));
  } else if (config.mode == "wagner") {
    table.columns = {"n", "seed", "X", "X_over_n_rate", "min_separation"};
    table.fits.emplace_back("abs_X_vs_n", fit_loglog(x, y));
  } else {
    table.columns = {"n", "seed", "w2", "error_bound", "w2_times_n_1_over_d", "min_separation"};
    table.fits.emplace_back("w2_vs_n", fit_loglog(x, y));
  }
  return table;
}

void write_scaling_csv(std::ostream& out, const ScalingTable& table, const nlohmann::json& header) {
  out << "# greenlab " << version() << " scaling mode=" << table.mode << '\n';
  out << "# config " << header.dump() << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  std::ostringstream line;
  line << std::setprecision(17);
  for (const auto& row : table.rows) {
    line.str("");
    for (std::size_t c = 0; c < row.size(); ++c) line << (c ? "," : "") << row[c];
    out << line.str() << '\n';
  }
  for (const auto& [name, fit] : table.fits) {
    out << "# fit " << name << " slope=" << std::setprecision(6) << fit.slope << " stderr=" << fit.slope_stderr
        << " intercept=" << fit.intercept << " points=" << fit.points << '\n';
  }
}

}  // namespace greenlab::cli
