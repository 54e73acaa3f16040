// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status if
// any criterion fails. Detail lines are indented below each verdict.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "greenlab/ewald.hpp"
#include "greenlab/kernels.hpp"
#include "greenlab/optimize.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/spectral.hpp"
#include "greenlab/transport.hpp"
#include "harness.hpp"

using namespace greenlab;
using cli::ExperimentConfig;
using cli::fit_loglog;
using cli::LogLogFit;

namespace {

// Constants fitted once on this corpus and frozen.
constexpr double kLowerBoundConstantT3 = 1.0;  // (1/n²) Σ G >= -C n^{-2/3} on T^3
constexpr double kLowerBoundConstantT2 = 1.0;  // Σ G >= -C n log n for minimizers on T^2
constexpr double kW2DiaphonyConstant = 1.01;  // W2 <= C F_N on T^1

const std::vector<std::size_t> kTorusCounts{8, 27, 64, 125, 216};
const std::vector<std::size_t> kSphereCounts{32, 64, 128, 256, 512};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

struct Verdict {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok    " : "FAILED ") + what);
  }
  void note(const std::string& what) { details.push_back("info  " + what); }
};

std::string describe(const LogLogFit& f) {
  return "slope " + fmt(f.slope, 5) + " +- " + fmt(f.slope_stderr, 2) + " (" + std::to_string(f.points) + " points)";
}

// Shared minimizers.
struct Corpus {
  std::map<std::size_t, PointConfiguration> torus3;
  std::map<std::size_t, PointConfiguration> torus2;
  std::map<std::size_t, PointConfiguration> sphere3;
  double torus3_seconds = 0.0;
};

PointConfiguration run_minimizer(const PointConfiguration& start, const KernelSpec& kernel, std::size_t iters) {
  OptimizerParams p;
  p.max_iters = iters;
  p.restarts = 1;
  p.grad_tol = 1e-8;
  try {
    return minimize(start, kernel, p).config;
  } catch (const StallError& e) {
    return e.result().config;
  }
}

Corpus build_corpus() {
  Corpus c;
  const auto t0 = Clock::now();
  for (std::size_t n : kTorusCounts) {
    c.torus3.emplace(n, run_minimizer(uniform_sample(Manifold::torus(3), n, 7000 + n), KernelSpec::green_torus(3), 300));
  }
  c.torus3_seconds = seconds_since(t0);
  for (std::size_t n : {16u, 36u, 64u, 100u, 144u}) {
    c.torus2.emplace(n, run_minimizer(uniform_sample(Manifold::torus(2), n, 8000 + n), KernelSpec::green_torus(2), 400));
  }
  for (std::size_t n : kSphereCounts) {
    c.sphere3.emplace(n, run_minimizer(uniform_sample(Manifold::sphere(3), n, 9000 + n), KernelSpec::coulomb(3), 1000));
  }
  return c;
}

// 1. Diaphony identity.
Verdict diaphony_identity() {
  Verdict v;
  const auto start = Clock::now();
  double worst = 0.0, worst_tail = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const std::size_t n = 2 + (k * 254) / 49;
    const auto c = uniform_sample(Manifold::torus(1), n, 100 + k);
    const double nn = static_cast<double>(n);
    const double green = (pair_energy(c, KernelSpec::green_t1()).total + nn * green_t1(0.0)) / (nn * nn);
    const auto f = diaphony_t1(c);
    worst = std::max(worst, std::abs(f.squared - green));
    worst_tail = std::max(worst_tail, f.tail_bound);
  }
  const double elapsed = seconds_since(start);
  v.require(worst <= 1e-8, "max |F_N^2 - (1/n^2) sum G| = " + fmt(worst) + " over 50 configs, n in [2, 256]");
  v.require(worst_tail <= 1e-8, "max tail bound " + fmt(worst_tail));
  v.require(elapsed < 10.0, "runtime " + fmt(elapsed, 3) + " s");
  return v;
}

// 2. Grid closed forms.
Verdict grid_closed_forms() {
  Verdict v;
  for (int n : {4, 16, 64}) {
    const auto g = grid_torus(n, 1);
    const double expected = 1.0 / (2.0 * std::sqrt(3.0) * n);
    const double w2 = w_p_circle_exact(g, 2).value;
    const auto h = hminus1_norm(spectral_measure(g, 1 << 18, 0.0));
    const auto f = diaphony_t1(g);
    v.require(std::abs(w2 - expected) <= 1e-8, "n=" + std::to_string(n) + " W2 error " + fmt(std::abs(w2 - expected)));
    v.require(std::abs(h.value - expected) + h.tail_bound <= 1e-8,
              "n=" + std::to_string(n) + " H^-1 error " + fmt(std::abs(h.value - expected)) + " (tail bound " +
                  fmt(h.tail_bound) + ")");
    const double sq = 1.0 / (12.0 * n * n);
    v.require(std::abs(f.squared - sq) <= 1e-8, "n=" + std::to_string(n) + " diaphony^2 error " + fmt(std::abs(f.squared - sq)));
  }
  return v;
}

struct TorusRows {
  std::vector<cli::VerificationRow> rows;
  std::vector<PointConfiguration> configs;
};

ExperimentConfig torus3_settings() {
  ExperimentConfig s;
  s.manifold = "torus";
  s.dim = 3;
  s.M = 4096;
  s.validate();
  return s;
}

// 3. Green-energy ratio bound on T^3 over the full corpus.
Verdict torus_ratio_bound(const Corpus& corpus, TorusRows& out) {
  Verdict v;
  const auto start = Clock::now();
  const ExperimentConfig s = torus3_settings();
  const KernelSpec kernel = KernelSpec::green_torus(3);
  for (std::size_t n : kTorusCounts) {
    std::vector<std::pair<std::string, PointConfiguration>> members;
    for (std::uint64_t seed : {0u, 1u, 2u}) members.emplace_back("random", uniform_sample(Manifold::torus(3), n, seed));
    members.emplace_back("grid", cli::make_configuration(s, "grid", n, 0, kernel));
    members.emplace_back("minimizer", corpus.torus3.at(n));
    for (std::uint64_t seed : {0u, 1u}) members.emplace_back("cluster", cli::make_configuration(s, "cluster", n, seed, kernel));
    for (auto& [gen, config] : members) {
      auto row = cli::green_bound_row(config, s);
      row.generator = gen;
      out.rows.push_back(row);
      out.configs.push_back(config);
    }
  }
  const double elapsed = seconds_since(start) + corpus.torus3_seconds;
  double max_ratio = 0.0;
  std::string argmax;
  bool finite = true;
  for (const auto& r : out.rows) {
    finite = finite && std::isfinite(r.ratio);
    if (r.ratio > max_ratio) {
      max_ratio = r.ratio;
      argmax = r.generator + " n=" + std::to_string(r.n);
    }
  }
  const double constant = cli::kGreenBoundConstant[3];
  v.require(finite, "all " + std::to_string(out.rows.size()) + " ratios finite");
  v.require(max_ratio <= constant, "max ratio " + fmt(max_ratio) + " at " + argmax + " <= frozen C = " + fmt(constant));
  for (const auto& r : out.rows) {
    if (r.generator == "cluster" && r.n == 64 && r.seed == 0) {
      v.note("cluster n=64: energy term " + fmt(r.energy_term) + " vs rate term " + fmt(r.rate_term) + ", ratio " +
             fmt(r.ratio));
    }
  }
  for (const auto& r : out.rows) {
    if (r.generator == "grid") v.note("grid n=" + std::to_string(r.n) + " ratio " + fmt(r.ratio));
  }
  v.require(elapsed < 300.0, "runtime " + fmt(elapsed, 3) + " s (including minimizers)");
  return v;
}

// 4. Energy lower-bound scaling.
Verdict energy_lower_bound(const Corpus& corpus, const TorusRows& rows) {
  Verdict v;
  std::vector<double> ns, mags;
  bool negative = true;
  for (const auto& r : rows.rows) {
    if (r.generator != "grid") continue;
    negative = negative && r.energy < 0.0;
    ns.push_back(static_cast<double>(r.n));
    mags.push_back(-r.energy);
  }
  v.require(negative, "grid Green energies are negative");
  if (negative) {
    const auto fit = fit_loglog(ns, mags);
    v.require(std::abs(fit.slope - 4.0 / 3.0) <= 0.1, "grid |sum G| vs n: " + describe(fit) + ", target 4/3 +- 0.1");
    // Two-term model |Σ G| = a n^{4/3} - b n.
    double saa = 0, sab = 0, sbb = 0, say = 0, sby = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double a = std::pow(ns[i], 4.0 / 3.0), b = -ns[i];
      saa += a * a;
      sab += a * b;
      sbb += b * b;
      say += a * mags[i];
      sby += b * mags[i];
    }
    const double det = saa * sbb - sab * sab;
    const double a = (say * sbb - sby * sab) / det, b = (saa * sby - sab * say) / det;
    double residual = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      residual = std::max(residual, std::abs(a * std::pow(ns[i], 4.0 / 3.0) - b * ns[i] - mags[i]) / mags[i]);
    }
    v.note("two-term fit |sum G| = a n^(4/3) - b n: a = " + fmt(a) + ", b = " + fmt(b) + ", max relative residual " +
           fmt(residual));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.rows.size(); ++i) {
    const auto& r = rows.rows[i];
    const double nn = static_cast<double>(r.n);
    worst = std::max(worst, -r.energy / (nn * nn) * std::pow(nn, 2.0 / 3.0));
  }
  v.require(worst <= kLowerBoundConstantT3,
            "T^3 corpus: max of -(1/n^2) sum G * n^(2/3) = " + fmt(worst) + " <= frozen C = " + fmt(kLowerBoundConstantT3));
  double worst2 = 0.0;
  bool negative2 = true;
  for (const auto& [n, config] : corpus.torus2) {
    const double e = EwaldSum(2).energy(config);
    const double nn = static_cast<double>(n);
    negative2 = negative2 && e < 0.0;
    worst2 = std::max(worst2, -e / (nn * std::log(nn)));
    v.note("T^2 minimizer n=" + std::to_string(n) + ": sum G / (n log n) = " + fmt(e / (nn * std::log(nn))));
  }
  v.require(negative2, "T^2 minimizer energies are negative");
  v.require(worst2 <= kLowerBoundConstantT2,
            "T^2 minimizers: max -sum G / (n log n) = " + fmt(worst2) + " <= frozen C = " + fmt(kLowerBoundConstantT2));
  return v;
}

// 5. Optimal W2 rate for minimizers.
Verdict optimal_rate(const Corpus& corpus, const TorusRows& rows) {
  Verdict v;
  std::vector<double> ns, w2;
  for (const auto& r : rows.rows) {
    if (r.generator != "minimizer") continue;
    ns.push_back(static_cast<double>(r.n));
    w2.push_back(r.w2.value);
  }
  const auto fit = fit_loglog(ns, w2);
  v.require(std::abs(fit.slope + 1.0 / 3.0) <= 0.08, "T^3 Green minimizers W2 vs n: " + describe(fit) + ", target -1/3 +- 0.08");

  ExperimentConfig s;
  s.manifold = "sphere";
  s.dim = 3;
  s.M = 16384;
  s.validate();
  std::vector<double> sn, sw, lhs_scaled;
  for (const auto& [n, config] : corpus.sphere3) {
    const auto row = cli::coulomb_bound_row(config, s);
    sn.push_back(static_cast<double>(n));
    sw.push_back(row.w2.value);
    lhs_scaled.push_back(row.lhs * std::cbrt(static_cast<double>(n)));
    v.note("S^3 Coulomb minimizer n=" + std::to_string(n) + ": W2 " + fmt(row.w2.value) + " (bound " +
           fmt(row.w2.error_bound) + "), ratio " + fmt(row.ratio));
  }
  const auto sfit = fit_loglog(sn, sw);
  v.require(std::abs(sfit.slope + 1.0 / 3.0) <= 0.08, "S^3 Coulomb minimizers W2 vs n: " + describe(sfit) + ", target -1/3 +- 0.08");
  const auto [lo, hi] = std::minmax_element(lhs_scaled.begin(), lhs_scaled.end());
  v.note("S^3 lhs * n^(1/3) ranges over [" + fmt(*lo) + ", " + fmt(*hi) + "]");
  return v;
}

// 6. Renormalized Coulomb energy of minimizers on S^3.
Verdict renormalized_coulomb(const Corpus& corpus) {
  Verdict v;
  std::vector<double> ns, mags;
  bool negative = true;
  const auto spec = KernelSpec::coulomb(3, Normalization::MeanZero);
  for (const auto& [n, config] : corpus.sphere3) {
    const double x = pair_energy(config, spec).total;
    negative = negative && x < 0.0;
    ns.push_back(static_cast<double>(n));
    mags.push_back(std::abs(x));
    v.note("n=" + std::to_string(n) + ": X = " + fmt(x, 8));
  }
  v.require(negative, "X < 0 for every minimizer");
  const auto fit = fit_loglog(ns, mags);
  v.require(std::abs(fit.slope - 4.0 / 3.0) <= 0.1, "|X| vs n: " + describe(fit) + ", target 4/3 +- 0.1");
  return v;
}

// 7. Heat smoothing of a point mass.
Verdict heat_smoothing() {
  Verdict v;
  ExperimentConfig s;
  s.manifold = "torus";
  s.dim = 1;
  s.mode = "lemma1";
  s.n_list = {1};
  s.M = 4096;
  s.t_list = {1e-4, 4e-4, 1.6e-3, 6.4e-3};
  s.validate();
  const auto table = cli::run_scaling(s);
  for (const auto& row : table.rows) v.note("t=" + fmt(row[0]) + ": W2 " + fmt(row[1], 8) + " (bound " + fmt(row[2]) + ")");
  const auto& fit = table.fits.front().second;
  v.require(std::abs(fit.slope - 0.5) <= 0.05, "W2(delta_0, heat) vs t: " + describe(fit) + ", target 0.5 +- 0.05");
  return v;
}

// 8. Coulomb eigenvalues on S^3.
Verdict funk_hecke_band() {
  Verdict v;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool positive = true;
  for (int l = 1; l <= 100; ++l) {
    const double a = funk_hecke_eigenvalue(3, l);
    positive = positive && a > 0.0;
    const double prod = a * sphere_laplace_eigenvalue(3, l);
    lo = std::min(lo, prod);
    hi = std::max(hi, prod);
  }
  v.require(positive, "a_l > 0 for l in [1, 100]");
  v.require(hi / lo <= 4.0, "a_l lambda_l in [" + fmt(lo) + ", " + fmt(hi) + "], ratio " + fmt(hi / lo));
  const double gap = std::abs(funk_hecke_eigenvalue(3, 0) - cd_constant(3));
  v.require(gap <= 1e-8, "|a_0 - c_3| = " + fmt(gap));
  return v;
}

// 9. Mechanical invariants.
Verdict mechanical() {
  Verdict v;
  const std::vector<std::pair<KernelSpec, std::size_t>> kernels{
      {KernelSpec::green_t1(), 9},
      {KernelSpec::green_torus(2), 9},
      {KernelSpec::green_torus(3), 12},
      {KernelSpec::green_sphere2(200), 7},
      {KernelSpec::coulomb(3), 12},
      {KernelSpec::coulomb(4, Normalization::MeanZero), 8},
      {KernelSpec::log_sphere2(), 8},
      {KernelSpec::riesz(2, 1.0), 8},
  };
  double worst_grad = 0.0;
  std::string worst_kernel;
  for (const auto& [spec, n] : kernels) {
    const auto check = check_gradient(uniform_sample(spec.manifold(), n, 31), spec, 1e-5);
    if (check.max_rel_error > worst_grad) {
      worst_grad = check.max_rel_error;
      worst_kernel = spec.name();
    }
  }
  v.require(worst_grad < 1e-6, "gradient vs central differences: worst relative error " + fmt(worst_grad) + " (" + worst_kernel + ")");

  const int m = 2048;
  const double t = 0.05;
  double mass1 = 0.0;
  const std::vector<double> c1{0.0};
  for (int i = 0; i < m; ++i) mass1 += heat_density_torus(std::vector<double>{(i + 0.5) / m}, c1, t) / m;
  double mass2 = 0.0;
  const std::vector<double> c2{0.25, 0.6};
  std::vector<double> x(2);
  for (int i = 0; i < m; ++i) {
    x[0] = static_cast<double>(i) / m;
    for (int j = 0; j < m; ++j) {
      x[1] = static_cast<double>(j) / m;
      mass2 += heat_density_torus(x, c2, t);
    }
  }
  mass2 /= static_cast<double>(m) * m;
  v.require(std::abs(mass1 - 1.0) <= 1e-10 && std::abs(mass2 - 1.0) <= 1e-10,
            "heat mass error d=1 " + fmt(std::abs(mass1 - 1.0)) + ", d=2 " + fmt(std::abs(mass2 - 1.0)));

  double dual = 0.0;
  const double t0 = 1.0 / (4.0 * std::numbers::pi);
  for (double tt : {0.5 * t0, t0, 2.0 * t0}) {
    for (double u = 0.0; u <= 0.5; u += 0.05) {
      dual = std::max(dual, std::abs(heat_density_1d(u, tt, HeatRepresentation::Images) -
                                     heat_density_1d(u, tt, HeatRepresentation::Fourier)));
    }
  }
  v.require(dual <= 1e-12, "image vs Fourier heat kernel: max difference " + fmt(dual));

  double odd = 0.0;
  for (int d : {2, 3}) {
    const auto pair = uniform_sample(Manifold::sphere(d), 1, 5);
    std::vector<double> coords(pair.coords().begin(), pair.coords().end());
    for (int a = 0; a <= d; ++a) coords.push_back(-coords[a]);
    const auto sm = spectral_measure(PointConfiguration(Manifold::sphere(d), coords), 99, 0.0);
    for (int l = 1; l <= 99; l += 2) odd = std::max(odd, std::abs(sm.degree_powers[l - 1]));
  }
  v.require(odd <= 1e-12, "antipodal pairs: max odd-degree power " + fmt(odd));

  struct Case {
    Manifold m;
    std::size_t n, M;
    bool grid;
  };
  TransportOptions sk;
  sk.method = TransportMethod::Sinkhorn;
  sk.sinkhorn.halvings = 6;
  sk.sinkhorn.tolerance = 1e-6;
  bool agree = true;
  for (const Case& cs : {Case{Manifold::torus(1), 8, 512, true}, Case{Manifold::torus(1), 8, 512, false},
                         Case{Manifold::torus(2), 16, 1024, false}, Case{Manifold::sphere(2), 16, 1000, false}}) {
    const auto config = cs.grid ? grid_torus(static_cast<int>(cs.n), 1) : uniform_sample(cs.m, cs.n, 23);
    const auto a = w2_semidiscrete(config, cs.M);
    const auto b = w2_semidiscrete(config, cs.M, sk);
    const double gap = std::abs(a.value - b.value);
    // The shared quadrature bound cancels; what remains is the Sinkhorn primal-dual gap.
    const double allowed = b.error_bound - a.error_bound + 1e-12;
    agree = agree && gap <= allowed;
    v.note(cs.m.label() + (cs.grid ? " grid" : " random") + ": network-flow " + fmt(a.value, 8) + ", sinkhorn " +
           fmt(b.value, 8) + ", |diff| " + fmt(gap) + " <= " + fmt(allowed));
  }
  v.require(agree, "network-flow value lies inside the Sinkhorn primal-dual gap");
  return v;
}

// 10. Discrepancy and diaphony chain on T^1.
Verdict inequality_chain() {
  Verdict v;
  bool w1_ok = true;
  double w1_worst = -1.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto c = uniform_sample(Manifold::torus(1), 1 + (k * 7) % 200, 5000 + k);
    const double w1 = w_p_circle_exact(c, 1).value;
    const double dn = star_discrepancy_t1(c);
    w1_ok = w1_ok && w1 <= dn;
    w1_worst = std::max(w1_worst, w1 - dn);
  }
  v.require(w1_ok, "W1 <= D_N on 100 random configs (max W1 - D_N = " + fmt(w1_worst) + ")");

  std::vector<std::pair<std::string, PointConfiguration>> inputs;
  for (std::size_t n : {8u, 32u, 128u, 512u}) {
    for (std::uint64_t seed : {0u, 1u, 2u}) inputs.emplace_back("random", uniform_sample(Manifold::torus(1), n, 60 + seed));
    inputs.emplace_back("kronecker", lowdisc_sequence(Kronecker{std::numbers::phi}, n));
    inputs.emplace_back("kronecker-sqrt2", lowdisc_sequence(Kronecker{std::numbers::sqrt2}, n));
    inputs.emplace_back("vdc", lowdisc_sequence(VanDerCorput{2}, n));
    inputs.emplace_back("vdc3", lowdisc_sequence(VanDerCorput{3}, n));
  }
  double worst = 0.0;
  std::string argmax;
  for (const auto& [name, c] : inputs) {
    const double ratio = w_p_circle_exact(c, 2).value / diaphony_t1(c).value;
    if (ratio > worst) {
      worst = ratio;
      argmax = name + " n=" + std::to_string(c.size());
    }
  }
  v.require(worst <= kW2DiaphonyConstant, "max W2 / F_N = " + fmt(worst, 10) + " at " + argmax + " <= frozen C = " +
                                              fmt(kW2DiaphonyConstant));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number; the default runs all of them.
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  const auto wanted = [&](std::initializer_list<int> ids) {
    if (selected.empty()) return true;
    for (int id : ids) {
      if (selected.count(id)) return true;
    }
    return false;
  };

  parallel::set_threads(1);
  std::cout.setf(std::ios::unitbuf);
  int failures = 0;
  auto report = [&](int id, const std::string& title, const Verdict& v) {
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << '\n';
    for (const auto& d : v.details) std::cout << "        " << d << '\n';
    if (!v.pass) ++failures;
  };
  auto guarded = [](const std::function<Verdict()>& body) {
    try {
      return body();
    } catch (const std::exception& e) {
      Verdict v;
      v.require(false, std::string("exception: ") + e.what());
      return v;
    }
  };

  if (wanted({1})) report(1, "diaphony equals the normalized Green sum", guarded(diaphony_identity));
  if (wanted({2})) report(2, "grid closed forms on T^1", guarded(grid_closed_forms));
  if (wanted({3, 4, 5, 6})) {
    const auto t0 = Clock::now();
    const Corpus corpus = build_corpus();
    std::cout << "        (minimizers built in " << fmt(seconds_since(t0), 3) << " s)\n";
    TorusRows rows;
    report(3, "W2 ratio bound against the Green energy on T^3", guarded([&] { return torus_ratio_bound(corpus, rows); }));
    report(4, "Green energy lower-bound scaling", guarded([&] { return energy_lower_bound(corpus, rows); }));
    report(5, "optimal W2 rate of energy minimizers", guarded([&] { return optimal_rate(corpus, rows); }));
    report(6, "renormalized Coulomb energy of minimizers on S^3", guarded([&] { return renormalized_coulomb(corpus); }));
  }
  if (wanted({7})) report(7, "W2 between a point mass and its heat smoothing", guarded(heat_smoothing));
  if (wanted({8})) report(8, "Coulomb eigenvalue band on S^3", guarded(funk_hecke_band));
  if (wanted({9})) report(9, "mechanical invariants", guarded(mechanical));
  if (wanted({10})) report(10, "W1 <= D_N and W2 <= C F_N on T^1", guarded(inequality_chain));

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << '\n';
  return failures == 0 ? 0 : 1;
}
