#include "greenlab/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "greenlab/error.hpp"

namespace greenlab {

namespace {

constexpr double kUnitTolerance = 1e-6;

double wrap_unit(double x) {
  double w = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  return w >= 1.0 ? 0.0 : w;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void require_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInput("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
  }
}

}  // namespace

double sphere_area(int d) {
  const double half = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

Manifold Manifold::torus(int dim) {
  if (dim < 1) throw InvalidInput("torus dimension must be >= 1");
  return Manifold(ManifoldKind::FlatTorus, dim, 1.0);
}

Manifold Manifold::sphere(int dim) {
  if (dim < 1) throw InvalidInput("sphere dimension must be >= 1");
  return Manifold(ManifoldKind::Sphere, dim, sphere_area(dim));
}

double Manifold::diameter() const noexcept {
  return is_torus() ? 0.5 * std::sqrt(static_cast<double>(dim_)) : std::numbers::pi;
}

std::string Manifold::kind_name() const { return is_torus() ? "torus" : "sphere"; }

std::string Manifold::label() const {
  return (is_torus() ? "T^" : "S^") + std::to_string(dim_);
}

PointConfiguration::PointConfiguration(Manifold manifold) : manifold_(manifold) {}

PointConfiguration::PointConfiguration(Manifold manifold, std::vector<double> coords)
    : manifold_(manifold), coords_(std::move(coords)) {
  const std::size_t s = stride();
  if (coords_.size() % s != 0) {
    throw InvalidInput("coordinate count " + std::to_string(coords_.size()) +
                       " is not a multiple of " + std::to_string(s));
  }
  for (double x : coords_) {
    if (!std::isfinite(x)) throw InvalidInput("non-finite coordinate");
  }
  if (manifold_.is_torus()) {
    for (double& x : coords_) x = wrap_unit(x);
    return;
  }
  for (std::size_t i = 0; i < coords_.size(); i += s) {
    std::span<double> p(coords_.data() + i, s);
    const double r = norm(p);
    if (std::abs(r - 1.0) > kUnitTolerance) {
      throw InvalidInput("sphere point " + std::to_string(i / s) + " has norm " + std::to_string(r));
    }
    for (double& x : p) x /= r;
  }
}

void torus_displacement(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    d -= std::nearbyint(d);
    out[i] = d;
  }
}

double torus_distance(std::span<const double> a, std::span<const double> b) {
  require_same_size(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(a[i] - b[i]);
    d -= std::floor(d);
    d = std::min(d, 1.0 - d);
    s += d * d;
  }
  return std::sqrt(s);
}

double sphere_distance(std::span<const double> a, std::span<const double> b, SphereMetric metric) {
  require_same_size(a, b);
  if (std::abs(norm(a) - 1.0) > kUnitTolerance || std::abs(norm(b) - 1.0) > kUnitTolerance) {
    throw InvalidInput("sphere_distance expects unit vectors");
  }
  if (metric == SphereMetric::Chordal) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

double geodesic_distance(const Manifold& m, std::span<const double> a, std::span<const double> b) {
  if (m.is_torus()) return torus_distance(a, b);
  // atan2 form keeps accuracy for nearly coincident and nearly antipodal pairs.
  double dot = 0.0, diff = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    sum += (a[i] + b[i]) * (a[i] + b[i]);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

PointConfiguration uniform_sample(const Manifold& m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t s = static_cast<std::size_t>(m.ambient_dim());
  std::vector<double> coords(n * s);
  if (m.is_torus()) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& x : coords) x = unit(rng);
    return PointConfiguration(m, std::move(coords));
  }
  std::normal_distribution<double> gauss;
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> p(coords.data() + i * s, s);
    double r = 0.0;
    do {
      for (double& x : p) x = gauss(rng);
      r = norm(p);
    } while (r < 1e-12);
    for (double& x : p) x /= r;
  }
  return PointConfiguration(m, std::move(coords));
}

PointConfiguration grid_torus(int m, int d) {
  if (m < 1 || d < 1) throw InvalidInput("grid_torus requires m >= 1 and d >= 1");
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(m);
  std::vector<double> coords(n * static_cast<std::size_t>(d));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t p = 0; p < n; ++p) {
    for (int a = 0; a < d; ++a) {
      coords[p * d + a] = (2.0 * idx[a] + 1.0) / (2.0 * m);
    }
    // Odometer increment, last axis fastest.
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < m) break;
      idx[a] = 0;
    }
  }
  return PointConfiguration(Manifold::torus(d), std::move(coords));
}

PointConfiguration cluster_sample(const Manifold& m, std::size_t n, double radius, std::uint64_t seed) {
  if (radius <= 0.0) throw InvalidInput("cluster radius must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int d = m.dim();
  const std::size_t s = static_cast<std::size_t>(m.ambient_dim());

  // Uniform point in the d-ball of the given radius.
  auto ball = [&](std::vector<double>& v) {
    v.assign(static_cast<std::size_t>(d), 0.0);
    double r = 0.0;
    do {
      for (double& x : v) x = gauss(rng);
      r = norm(v);
    } while (r < 1e-12);
    const double scale = radius * std::pow(unit(rng), 1.0 / d) / r;
    for (double& x : v) x *= scale;
  };

  std::vector<double> coords(n * s);
  std::vector<double> offset;
  if (m.is_torus()) {
    std::vector<double> center(s);
    for (double& x : center) x = unit(rng);
    for (std::size_t i = 0; i < n; ++i) {
      ball(offset);
      for (std::size_t a = 0; a < s; ++a) coords[i * s + a] = center[a] + offset[a];
    }
    return PointConfiguration(m, std::move(coords));
  }

  // Sphere: exponential map of a tangent ball at a random center.
  const auto c = uniform_sample(m, 1, rng());
  const auto center = c.point(0);
  // Orthonormal tangent basis by Gram-Schmidt against the center.
  std::vector<std::vector<double>> basis;
  for (std::size_t e = 0; e < s && basis.size() < static_cast<std::size_t>(d); ++e) {
    std::vector<double> v(s, 0.0);
    v[e] = 1.0;
    v = tangent_project(center, v);
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t a = 0; a < s; ++a) dot += v[a] * b[a];
      for (std::size_t a = 0; a < s; ++a) v[a] -= dot * b[a];
    }
    const double r = norm(v);
    if (r < 1e-8) continue;
    for (double& x : v) x /= r;
    basis.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < n; ++i) {
    ball(offset);
    std::vector<double> t(s, 0.0);
    for (int k = 0; k < d; ++k) {
      for (std::size_t a = 0; a < s; ++a) t[a] += offset[k] * basis[k][a];
    }
    const double theta = norm(t);
    for (std::size_t a = 0; a < s; ++a) {
      const double dir = theta > 0.0 ? t[a] / theta : 0.0;
      coords[i * s + a] = std::cos(theta) * center[a] + std::sin(theta) * dir;
    }
  }
  return PointConfiguration(m, std::move(coords));
}

double radical_inverse(std::uint64_t k, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % static_cast<std::uint64_t>(base));
    k /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

PointConfiguration lowdisc_sequence(const LowDiscrepancy& kind, std::size_t n) {
  std::vector<double> coords(n);
  if (const auto* kr = std::get_if<Kronecker>(&kind)) {
    for (std::size_t k = 1; k <= n; ++k) {
      // fma keeps frac(k*alpha) accurate for large k.
      const double x = static_cast<double>(k) * kr->alpha;
      coords[k - 1] = x - std::floor(x);
    }
  } else {
    const int base = std::get<VanDerCorput>(kind).base;
    if (base < 2) throw InvalidInput("van der Corput base must be >= 2");
    for (std::size_t k = 1; k <= n; ++k) coords[k - 1] = radical_inverse(k, base);
  }
  return PointConfiguration(Manifold::torus(1), std::move(coords));
}

std::vector<double> tangent_project(std::span<const double> x, std::span<const double> v) {
  require_same_size(x, v);
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * v[i];
  std::vector<double> out(v.begin(), v.end());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] -= dot * x[i];
  return out;
}

PointConfiguration rotate(const PointConfiguration& config, std::span<const double> rotation) {
  if (!config.manifold().is_sphere()) throw InvalidInput("rotate expects a sphere configuration");
  const std::size_t s = config.stride();
  if (rotation.size() != s * s) throw InvalidInput("rotation matrix has the wrong size");
  std::vector<double> out(config.coords().size());
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto p = config.point(i);
    for (std::size_t r = 0; r < s; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < s; ++c) acc += rotation[r * s + c] * p[c];
      out[i * s + r] = acc;
    }
  }
  return PointConfiguration(config.manifold(), std::move(out));
}

PointConfiguration translate(const PointConfiguration& config, std::span<const double> offset) {
  if (!config.manifold().is_torus()) throw InvalidInput("translate expects a torus configuration");
  const std::size_t s = config.stride();
  if (offset.size() != s) throw InvalidInput("offset has the wrong size");
  std::vector<double> out(config.coords().begin(), config.coords().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += offset[i % s];
  return PointConfiguration(config.manifold(), std::move(out));
}

std::vector<double> random_rotation(int dim, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> q(n * n);
  for (double& x : q) x = gauss(rng);
  // Modified Gram-Schmidt on rows.
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t p = 0; p < r; ++p) {
      double dot = 0.0;
      for (std::size_t c = 0; c < n; ++c) dot += q[r * n + c] * q[p * n + c];
      for (std::size_t c = 0; c < n; ++c) q[r * n + c] -= dot * q[p * n + c];
    }
    double len = 0.0;
    for (std::size_t c = 0; c < n; ++c) len += q[r * n + c] * q[r * n + c];
    len = std::sqrt(len);
    for (std::size_t c = 0; c < n; ++c) q[r * n + c] /= len;
  }
  return q;
}

void write_csv(std::ostream& out, const PointConfiguration& config) {
  const auto& m = config.manifold();
  out << "# manifold=" << m.kind_name() << " dim=" << m.dim() << " n=" << config.size() << '\n';
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto p = config.point(i);
    for (std::size_t a = 0; a < p.size(); ++a) {
      if (a) out << ',';
      out << p[a];
    }
    out << '\n';
  }
  out.precision(old_precision);
}

PointConfiguration read_csv(std::istream& in) {
  std::string line;
  std::string kind;
  int dim = -1;
  long long declared_n = -1;
  std::vector<double> coords;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!kind.empty()) continue;
      std::istringstream header(line.substr(1));
      std::string token;
      while (header >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
          if (key == "manifold") kind = value;
          else if (key == "dim") dim = std::stoi(value);
          else if (key == "n") declared_n = std::stoll(value);
        } catch (const std::exception&) {
          throw InvalidInput("malformed CSV header value: " + token);
        }
      }
      continue;
    }
    if (kind.empty() || dim < 1) throw InvalidInput("CSV is missing the '# manifold=... dim=...' header");
    std::size_t fields = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t comma = std::min(line.find(',', start), line.size());
      std::string field = line.substr(start, comma - start);
      field.erase(0, field.find_first_not_of(" \t"));
      field.erase(field.find_last_not_of(" \t") + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw InvalidInput("CSV row " + std::to_string(rows + 1) + ": cannot parse '" + field + "'");
      }
      coords.push_back(v);
      ++fields;
      start = comma + 1;
    }
    const int expected = kind == "sphere" ? dim + 1 : dim;
    if (fields != static_cast<std::size_t>(expected)) {
      throw InvalidInput("CSV row " + std::to_string(rows + 1) + " has " + std::to_string(fields) +
                         " columns, expected " + std::to_string(expected));
    }
    ++rows;
  }
  if (kind.empty() || dim < 1) throw InvalidInput("CSV is missing the '# manifold=... dim=...' header");
  if (declared_n >= 0 && static_cast<std::size_t>(declared_n) != rows) {
    throw InvalidInput("CSV header declares n=" + std::to_string(declared_n) + " but has " +
                       std::to_string(rows) + " rows");
  }
  Manifold m = kind == "torus"    ? Manifold::torus(dim)
               : kind == "sphere" ? Manifold::sphere(dim)
                                  : throw InvalidInput("unknown manifold kind '" + kind + "'");
  return PointConfiguration(m, std::move(coords));
}

}  // namespace greenlab
