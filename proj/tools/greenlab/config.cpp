#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "greenlab/serialize.hpp"

namespace greenlab::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"general",
       {"manifold", "dim", "kernel", "normalization", "truncation", "exponent", "generator", "points", "n", "seeds",
        "cluster_radius", "alpha", "base", "heat_time", "output"}},
      {"transport", {"M", "solver", "p", "epsilon0", "halvings", "max_iter", "tolerance", "debias", "plan_csv"}},
      {"optimizer", {"max_iters", "grad_tol", "initial_step", "shrink", "c1", "seed", "restarts"}},
      {"verify", {"constant", "generators"}},
      {"scaling", {"mode", "t"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < 0) throw ConfigError("key '" + key + "' must be nonnegative");
  return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

void apply(ExperimentConfig& c, const std::string& section, const std::string& key, const std::string& v) {
  const std::string k = section + "." + key;
  if (section == "general") {
    if (key == "manifold") c.manifold = v;
    else if (key == "dim") c.dim = static_cast<int>(to_integer(k, v));
    else if (key == "kernel") c.kernel = v;
    else if (key == "normalization") c.normalization = v;
    else if (key == "truncation") c.truncation = static_cast<int>(to_integer(k, v));
    else if (key == "exponent") c.exponent = to_double(k, v);
    else if (key == "generator") c.generator = v;
    else if (key == "points") c.points = v;
    else if (key == "n") {
      c.n_list.clear();
      for (const auto& item : split_list(v)) c.n_list.push_back(to_count(k, item));
    } else if (key == "seeds") {
      c.seeds.clear();
      for (const auto& item : split_list(v)) c.seeds.push_back(to_count(k, item));
    } else if (key == "cluster_radius") c.cluster_radius = to_double(k, v);
    else if (key == "alpha") c.alpha = to_double(k, v);
    else if (key == "base") c.base = static_cast<int>(to_integer(k, v));
    else if (key == "heat_time") {
      if (v == "auto") c.heat_time.reset();
      else c.heat_time = to_double(k, v);
    } else if (key == "output") c.output = v;
  } else if (section == "transport") {
    if (key == "M") c.M = to_count(k, v);
    else if (key == "solver") c.solver = v;
    else if (key == "p") c.p = static_cast<int>(to_integer(k, v));
    else if (key == "epsilon0") c.sinkhorn.epsilon0 = to_double(k, v);
    else if (key == "halvings") c.sinkhorn.halvings = static_cast<int>(to_integer(k, v));
    else if (key == "max_iter") c.sinkhorn.max_iter = to_count(k, v);
    else if (key == "tolerance") c.sinkhorn.tolerance = to_double(k, v);
    else if (key == "debias") c.debias = to_bool(k, v);
    else if (key == "plan_csv") c.plan_csv = v;
  } else if (section == "optimizer") {
    if (key == "max_iters") c.optimizer.max_iters = to_count(k, v);
    else if (key == "grad_tol") c.optimizer.grad_tol = to_double(k, v);
    else if (key == "initial_step") c.optimizer.initial_step = to_double(k, v);
    else if (key == "shrink") c.optimizer.shrink = to_double(k, v);
    else if (key == "c1") c.optimizer.c1 = to_double(k, v);
    else if (key == "seed") c.optimizer.seed = to_count(k, v);
    else if (key == "restarts") c.optimizer.restarts = to_count(k, v);
  } else if (section == "verify") {
    if (key == "constant") c.constant = to_double(k, v);
    else if (key == "generators") c.generators = split_list(v);
  } else if (section == "scaling") {
    if (key == "mode") c.mode = v;
    else if (key == "t") {
      c.t_list.clear();
      for (const auto& item : split_list(v)) c.t_list.push_back(to_double(k, item));
    }
  }
}

}  // namespace

Manifold ExperimentConfig::resolved_manifold() const {
  if (dim < 1) throw ConfigError("general.dim must be at least 1");
  if (manifold == "torus") return Manifold::torus(dim);
  if (manifold == "sphere") return Manifold::sphere(dim);
  throw ConfigError("general.manifold must be 'torus' or 'sphere', got '" + manifold + "'");
}

KernelSpec ExperimentConfig::kernel_spec() const {
  const Manifold m = resolved_manifold();
  Normalization norm = Normalization::Raw;
  if (normalization == "mean-zero") norm = Normalization::MeanZero;
  else if (normalization != "raw") throw ConfigError("general.normalization must be 'raw' or 'mean-zero'");

  std::string kind = kernel;
  if (kind == "auto") {
    if (m.is_torus()) kind = dim == 1 ? "green_t1" : "green_torus";
    else kind = dim == 2 ? "green_sphere2" : "coulomb";
  }
  KernelSpec spec;
  try {
    switch (parse_kernel_kind(kind)) {
      case KernelKind::GreenTorus1:
        spec = KernelSpec::green_t1();
        break;
      case KernelKind::GreenTorusSpectral:
        spec = KernelSpec::green_torus(dim, truncation);
        break;
      case KernelKind::GreenSphere2:
        spec = KernelSpec::green_sphere2(truncation);
        break;
      case KernelKind::CoulombSphere:
        spec = KernelSpec::coulomb(dim, norm);
        break;
      case KernelKind::LogSphere2:
        spec = KernelSpec::log_sphere2(norm);
        break;
      case KernelKind::Riesz:
        spec = KernelSpec::riesz(dim, exponent, norm);
        break;
    }
    spec.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("kernel: ") + e.what());
  }
  if (!(spec.manifold() == m)) {
    throw ConfigError("kernel '" + kind + "' does not live on " + m.label());
  }
  return spec;
}

TransportOptions ExperimentConfig::transport_options() const {
  TransportOptions opt;
  try {
    opt.method = parse_method(solver);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("transport.solver: ") + e.what());
  }
  opt.sinkhorn = sinkhorn;
  opt.debias = debias;
  opt.keep_plan = !plan_csv.empty();
  return opt;
}

double ExperimentConfig::heat_time_for(std::size_t n) const {
  if (heat_time) return *heat_time;
  return std::pow(static_cast<double>(std::max<std::size_t>(n, 1)), -2.0 / dim);
}

void ExperimentConfig::validate() const {
  (void)resolved_manifold();
  (void)kernel_spec();
  (void)transport_options();
  static const std::set<std::string> generators_known{"random", "grid", "cluster", "kronecker", "vdc",
                                                      "minimizer", "csv"};
  if (!generators_known.count(generator)) throw ConfigError("general.generator '" + generator + "' is not known");
  for (const auto& g : generators) {
    if (!generators_known.count(g)) throw ConfigError("verify.generators: '" + g + "' is not known");
  }
  if (generator == "csv" && points.empty()) throw ConfigError("generator = csv needs general.points");
  if (n_list.empty()) throw ConfigError("general.n must list at least one count");
  if (seeds.empty()) throw ConfigError("general.seeds must list at least one seed");
  if (!(cluster_radius > 0.0)) throw ConfigError("general.cluster_radius must be positive");
  if (base < 2) throw ConfigError("general.base must be at least 2");
  if (heat_time && !(*heat_time > 0.0)) throw ConfigError("general.heat_time must be positive or 'auto'");
  if (p != 1 && p != 2) throw ConfigError("transport.p must be 1 or 2");
  if (M == 0) throw ConfigError("transport.M must be positive");
  if (!(sinkhorn.tolerance > 0.0)) throw ConfigError("transport.tolerance must be positive");
  if (sinkhorn.halvings < 0) throw ConfigError("transport.halvings must be nonnegative");
  if (constant && !(*constant > 0.0)) throw ConfigError("verify.constant must be positive");
  static const std::set<std::string> modes{"corollary", "wagner", "lemma1", "rate"};
  if (!modes.count(mode)) throw ConfigError("scaling.mode must be corollary, wagner, lemma1 or rate");
  for (double t : t_list) {
    if (!(t > 0.0)) throw ConfigError("scaling.t values must be positive");
  }
  try {
    optimizer.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("optimizer: ") + e.what());
  }
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  ExperimentConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' must live in a section such as [general]");
    const auto found = known_keys().find(section);
    if (found == known_keys().end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!found->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      apply(config, section, key, trim(value.data()));
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string config_reference() {
  return R"(Config file keys (INI; unknown keys are errors):
  [general]
    manifold        torus | sphere                                   (torus)
    dim             intrinsic dimension d                            (1)
    kernel          auto | green_t1 | green_torus | green_sphere2 |
                    coulomb | log_sphere2 | riesz                    (auto)
    normalization   raw | mean-zero                                  (raw)
    truncation      Fourier radius K or Legendre degree L; 0 = default
    exponent        Riesz exponent s                                 (1)
    generator       random | grid | cluster | kronecker | vdc |
                    minimizer | csv                                  (random)
    points          CSV file for generator = csv (or --points)
    n               comma-separated point counts                     (16)
    seeds           comma-separated seeds                            (0)
    cluster_radius  ball radius for generator = cluster              (0.01)
    alpha, base     Kronecker rotation / van der Corput base
    heat_time       smoothing time t, or auto = n^(-2/d)             (auto)
    output          output path (overridden by --out)
  [transport]
    M               quadrature size                                  (4096)
    solver          network-flow | sinkhorn | circle-exact           (network-flow)
    p               1 or 2 (circle-exact only)                       (2)
    epsilon0, halvings, max_iter, tolerance, debias   Sinkhorn settings
    plan_csv        write the sparse coupling (row,col,mass) here
  [optimizer]
    max_iters, grad_tol, initial_step (0 = auto), shrink, c1, seed, restarts
  [verify]
    constant        pass constant C (default: shipped calibration)
    generators      corpus for verify-t1/verify-t2
                    (torus: random,grid,minimizer,cluster; sphere: random,minimizer,cluster)
  [scaling]
    mode            corollary | wagner | lemma1 | rate               (corollary)
    t               heat times for lemma1            (1e-4,4e-4,1.6e-3,6.4e-3)
)";
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json general = {{"manifold", c.manifold},
                            {"dim", c.dim},
                            {"kernel", c.kernel_spec()},
                            {"generator", c.generator},
                            {"n", c.n_list},
                            {"seeds", c.seeds},
                            {"cluster_radius", c.cluster_radius},
                            {"alpha", c.alpha},
                            {"base", c.base},
                            {"heat_time", c.heat_time ? nlohmann::json(*c.heat_time) : nlohmann::json("auto")}};
  if (!c.points.empty()) general["points"] = c.points;
  if (!c.output.empty()) general["output"] = c.output;
  nlohmann::json transport = {{"M", c.M},
                              {"solver", c.solver},
                              {"p", c.p},
                              {"epsilon0", c.sinkhorn.epsilon0},
                              {"halvings", c.sinkhorn.halvings},
                              {"max_iter", c.sinkhorn.max_iter},
                              {"tolerance", c.sinkhorn.tolerance},
                              {"debias", c.debias}};
  nlohmann::json optimizer = {{"max_iters", c.optimizer.max_iters},   {"grad_tol", c.optimizer.grad_tol},
                              {"initial_step", c.optimizer.initial_step}, {"shrink", c.optimizer.shrink},
                              {"c1", c.optimizer.c1},                 {"seed", c.optimizer.seed},
                              {"restarts", c.optimizer.restarts}};
  nlohmann::json verify = {{"generators", c.generators}};
  if (c.constant) verify["constant"] = *c.constant;
  nlohmann::json scaling = {{"mode", c.mode}, {"t", c.t_list}};
  return {{"general", general}, {"transport", transport}, {"optimizer", optimizer}, {"verify", verify},
          {"scaling", scaling}};
}

}  // namespace greenlab::cli
