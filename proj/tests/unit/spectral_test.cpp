#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "greenlab/kernels.hpp"
#include "greenlab/error.hpp"
#include "greenlab/ewald.hpp"
#include "greenlab/special.hpp"
#include "greenlab/spectral.hpp"

using namespace greenlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Coulomb eigenvalues on S^3 in closed form: 8 / (π (2l+1)(2l+3)).
double s3_coulomb_eigenvalue(int l) { return 8.0 / (kPi * (2.0 * l + 1.0) * (2.0 * l + 3.0)); }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / x.size();
    my += std::log(y[i]) / y.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST(SpectralMeasure, PointMassAtOrigin) {
  const PointConfiguration one(Manifold::torus(1), {0.0});
  const auto sm = spectral_measure(one, 9, 0.0);
  ASSERT_EQ(sm.coefficients.size(), 18u);
  for (const auto& c : sm.coefficients) {
    EXPECT_NEAR(c.real(), 1.0, 1e-15);
    EXPECT_NEAR(c.imag(), 0.0, 1e-15);
  }
}

TEST(SpectralMeasure, GridCoefficientsAreLacunary) {
  const int n = 8;
  const auto sm = spectral_measure(grid_torus(n, 1), 3 * n, 0.0);
  for (std::size_t i = 0; i < sm.coefficients.size(); ++i) {
    const int k = sm.modes[i];
    if (k % n == 0) {
      EXPECT_NEAR(std::abs(sm.coefficients[i]), 1.0, 1e-13) << k;
    } else {
      EXPECT_NEAR(std::abs(sm.coefficients[i]), 0.0, 1e-13) << k;
    }
  }
}

TEST(SpectralMeasure, ConjugateSymmetryAndBound) {
  const auto c = uniform_sample(Manifold::torus(2), 40, 3);
  const int K = 5;
  const auto sm = spectral_measure(c, K, 0.0);
  const int side = 2 * K + 1;
  ASSERT_EQ(sm.coefficients.size(), static_cast<std::size_t>(side * side - 1));
  for (std::size_t i = 0; i < sm.coefficients.size(); ++i) {
    EXPECT_LE(std::abs(sm.coefficients[i]), 1.0 + 1e-14);
    const auto mirror = sm.coefficients.size() - 1 - i;
    EXPECT_EQ(sm.modes[2 * mirror], -sm.modes[2 * i]);
    EXPECT_EQ(sm.modes[2 * mirror + 1], -sm.modes[2 * i + 1]);
    EXPECT_NEAR(std::abs(sm.coefficients[mirror] - std::conj(sm.coefficients[i])), 0.0, 1e-13);
  }
}

TEST(SpectralMeasure, SinglePointDegreePowers) {
  const PointConfiguration s2(Manifold::sphere(2), {0.0, 0.6, 0.8});
  const auto sm2 = spectral_measure(s2, 5, 0.0);
  for (int l = 1; l <= 5; ++l) EXPECT_NEAR(sm2.degree_powers[l - 1], (2.0 * l + 1) / (4 * kPi), 1e-13);
  const PointConfiguration s3(Manifold::sphere(3), {0.5, 0.5, 0.5, 0.5});
  const auto sm3 = spectral_measure(s3, 6, 0.0);
  for (int l = 1; l <= 6; ++l) EXPECT_NEAR(sm3.degree_powers[l - 1], (l + 1.0) * (l + 1.0) / (2 * kPi * kPi), 1e-13);
}

TEST(SpectralMeasure, DegreePowersAreNonnegativeAndRotationInvariant) {
  const auto c = uniform_sample(Manifold::sphere(3), 50, 6);
  const auto a = spectral_measure(c, 20, 0.0);
  const auto b = spectral_measure(rotate(c, random_rotation(4, 8)), 20, 0.0);
  for (std::size_t l = 0; l < a.degree_powers.size(); ++l) {
    EXPECT_GE(a.degree_powers[l], 0.0);
    EXPECT_NEAR(a.degree_powers[l], b.degree_powers[l], 1e-10);
  }
}

TEST(SpectralMeasure, AntipodalOddDegreesVanish) {
  for (int d : {2, 3}) {
    std::vector<double> coords(2 * (d + 1), 0.0);
    coords[0] = 1.0;
    coords[d + 1] = -1.0;
    const auto sm = spectral_measure(PointConfiguration(Manifold::sphere(d), coords), 41, 0.0);
    for (int l = 1; l <= 41; l += 2) EXPECT_LE(std::abs(sm.degree_powers[l - 1]), 1e-12) << d << ' ' << l;
  }
}

TEST(SpectralMeasure, ParsevalIsTranslationInvariant) {
  const auto c = uniform_sample(Manifold::torus(2), 30, 1);
  const auto norm2 = [](const SpectralMeasure& sm) {
    double s = 0.0;
    for (const auto& z : sm.coefficients) s += std::norm(z);
    return s;
  };
  const double a = norm2(spectral_measure(c, 6, 0.0));
  const double b = norm2(spectral_measure(translate(c, std::vector<double>{0.41, 0.77}), 6, 0.0));
  EXPECT_NEAR(a, b, 1e-12);
}

TEST(SpectralMeasure, TailBoundsShrinkWithTruncation) {
  const auto t2 = uniform_sample(Manifold::torus(2), 10, 2);
  const auto s2 = uniform_sample(Manifold::sphere(2), 10, 2);
  double prev_t = spectral_measure(t2, 2, 1e-3).tail_bound;
  double prev_s = spectral_measure(s2, 2, 1e-3).tail_bound;
  for (int K = 3; K <= 8; ++K) {
    const double bt = spectral_measure(t2, K, 1e-3).tail_bound;
    const double bs = spectral_measure(s2, 4 * K, 1e-3).tail_bound;
    EXPECT_GE(bt, 0.0);
    EXPECT_LT(bt, prev_t);
    EXPECT_LT(bs, prev_s);
    prev_t = bt;
    prev_s = bs;
  }
  EXPECT_TRUE(std::isinf(spectral_measure(s2, 10, 0.0).tail_bound));
  EXPECT_TRUE(std::isinf(spectral_measure(t2, 10, 0.0).tail_bound));
}

TEST(Hminus1, GridClosedForm) {
  for (int n : {4, 16}) {
    const auto est = hminus1_norm(spectral_measure(grid_torus(n, 1), 1 << 16, 0.0));
    EXPECT_LT(est.tail_bound, 1e-10);
    EXPECT_NEAR(est.squared, 1.0 / (12.0 * n * n), 1e-10);
    EXPECT_NEAR(est.value, 1.0 / (2 * std::sqrt(3.0) * n), 1e-8);
  }
}

TEST(Hminus1, SinglePointAndLargeTime) {
  const PointConfiguration one(Manifold::torus(1), {0.0});
  EXPECT_NEAR(hminus1_norm(spectral_measure(one, 64, 0.0)).squared, 1.0 / 12, 1e-14);
  const auto c = uniform_sample(Manifold::torus(2), 20, 4);
  EXPECT_LT(hminus1_norm(spectral_measure(c, 4, 5.0)).value, 1e-30);
  const auto s = uniform_sample(Manifold::sphere(3), 20, 4);
  // Degree 1 dominates: the norm is about exp(-λ_1 t) with λ_1 = 3.
  const double decay = hminus1_norm(spectral_measure(s, 10, 20.0)).value;
  EXPECT_GT(decay, 0.0);
  EXPECT_LT(decay, std::exp(-3.0 * 20.0));
}

TEST(Hminus1, NonIncreasingInTime) {
  for (const Manifold& m : {Manifold::torus(1), Manifold::torus(3), Manifold::sphere(2)}) {
    const auto c = uniform_sample(m, 25, 5);
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {0.0, 1e-4, 1e-3, 1e-2, 0.1}) {
      const double v = hminus1_norm(spectral_measure(c, m.is_sphere() ? 30 : 6, t)).value;
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(Diaphony, ClosedForms) {
  const PointConfiguration one(Manifold::torus(1), {0.3});
  EXPECT_NEAR(diaphony_t1(one).squared, 1.0 / 12, 1e-12);
  for (int n : {4, 16, 64}) {
    const auto f = diaphony_t1(grid_torus(n, 1));
    EXPECT_NEAR(f.squared, 1.0 / (12.0 * n * n), 1e-10);
  }
  EXPECT_THROW(diaphony_t1(uniform_sample(Manifold::torus(2), 3, 1)), InvalidInput);
}

TEST(HeatDensity, UnitMassOnGrid) {
  const double t = 0.05;
  const int m = 2048;
  double mass1 = 0.0;
  std::vector<double> axis(m);
  const std::vector<double> origin{0.0};
  for (int i = 0; i < m; ++i) {
    axis[i] = heat_density_torus(std::vector<double>{static_cast<double>(i) / m}, origin, t);
    EXPECT_GT(axis[i], 0.0);
    mass1 += axis[i] / m;
  }
  EXPECT_NEAR(mass1, 1.0, 1e-10);

  const std::vector<double> center{0.3, 0.8};
  double mass2 = 0.0;
  std::vector<double> x(2);
  for (int i = 0; i < m; ++i) {
    x[0] = static_cast<double>(i) / m;
    double row = 0.0;
    for (int j = 0; j < m; ++j) {
      x[1] = static_cast<double>(j) / m;
      row += heat_density_torus(x, center, t);
    }
    mass2 += row / (static_cast<double>(m) * m);
  }
  EXPECT_NEAR(mass2, 1.0, 1e-10);
}

TEST(HeatDensity, DualRepresentationsAgree) {
  const double t0 = 1.0 / (4 * kPi);
  EXPECT_NEAR(heat_density_1d(0.3, t0, HeatRepresentation::Images), heat_density_1d(0.3, t0, HeatRepresentation::Fourier),
              1e-12);
  for (double t : {0.5 * t0, t0, 2.0 * t0}) {
    for (double u = 0.0; u < 1.0; u += 0.0625) {
      EXPECT_NEAR(heat_density_1d(u, t, HeatRepresentation::Images), heat_density_1d(u, t, HeatRepresentation::Fourier),
                  1e-12);
    }
  }
  EXPECT_THROW(heat_density_1d(0.1, 0.0), InvalidInput);
  EXPECT_THROW(heat_density_torus(std::vector<double>{0.1}, std::vector<double>{0.2}, -1.0), InvalidInput);
}

TEST(HeatDensity, GaussianEnvelope) {
  // Fitted envelope density <= c1 t^{-d/2} exp(-dist² / (c2 t)) with c2 = 5.
  const double c2 = 5.0;
  double c1 = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const std::vector<double> origin(d, 0.0);
    for (double t : {1e-4, 1e-3, 1e-2, 0.05, 0.2}) {
      for (double r = 0.0; r <= 0.5; r += 0.05) {
        for (int axes = 1; axes <= d; ++axes) {
          std::vector<double> x(d, 0.0);
          for (int a = 0; a < axes; ++a) x[a] = r;
          const double dist2 = axes * r * r;
          const double ratio = heat_density_torus(x, origin, t) * std::pow(t, 0.5 * d) * std::exp(dist2 / (c2 * t));
          c1 = std::max(c1, ratio);
        }
      }
    }
  }
  // Free-space peak (4π)^{-1/2} at d = 1 and the wrapped tail at t = 0.2 stay below 1.
  EXPECT_GE(c1, 1.0 / std::sqrt(4 * kPi) - 1e-12);
  EXPECT_LE(c1, 1.0);
}

TEST(HeatDensity, SphereUnitMass) {
  for (double t : {0.01, 0.1, 1.0}) {
    const double mass2 = 2 * kPi * special::integrate([t](double tau) { return heat_density_sphere(2, tau, t); }, -1, 1, 1e-12);
    EXPECT_NEAR(mass2, 1.0, 1e-9);
  }
}

TEST(FunkHecke, MatchesClosedFormOnS3) {
  EXPECT_NEAR(funk_hecke_eigenvalue(3, 0), cd_constant(3), 1e-8);
  for (int l = 0; l <= 100; ++l) {
    const double a = funk_hecke_eigenvalue(3, l);
    EXPECT_GT(a, 0.0);
    EXPECT_NEAR(a, s3_coulomb_eigenvalue(l), 1e-10);
  }
}

TEST(FunkHecke, BandOfEigenvalueProducts) {
  for (int d : {3, 4, 5}) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int l = 1; l <= 100; ++l) {
      const double a = funk_hecke_eigenvalue(d, l);
      EXPECT_GT(a, 0.0) << d << ' ' << l;
      const double prod = a * sphere_laplace_eigenvalue(d, l);
      lo = std::min(lo, prod);
      hi = std::max(hi, prod);
    }
    EXPECT_LE(hi / lo, 4.0) << d;
  }
}

TEST(RieszLaplacian, ConstantMatchesDimensionFormula) {
  for (int d : {3, 4, 5}) {
    const auto c = riesz_laplacian_constant(d);
    EXPECT_GT(c.c1, 0.0);
    EXPECT_LT(c.residual, 1e-6);
    EXPECT_NEAR(c.c1, d * (d - 2) / 4.0, 1e-6);
  }
}

TEST(RieszLaplacian, RatioConstantAtThreeAngles) {
  const auto f = [](double th) { return std::pow(2.0 - 2.0 * std::cos(th), -0.5); };
  const double h = 1e-3;
  std::vector<double> ratios;
  for (double th : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
    const double d1 = (f(th + h) - f(th - h)) / (2 * h);
    const double d2 = (f(th + h) - 2 * f(th) + f(th - h)) / (h * h);
    ratios.push_back((d2 + 2.0 * std::cos(th) / std::sin(th) * d1) / f(th));
  }
  const double c1 = riesz_laplacian_constant(3).c1;
  for (double r : ratios) EXPECT_NEAR(r, c1, 1e-6 * c1 + 1e-6);
}

TEST(RieszLaplacian, ExponentialGrowthBoundOnS3) {
  const double c1 = riesz_laplacian_constant(3).c1;
  const auto pts = uniform_sample(Manifold::sphere(3), 2, 77);
  double tau = 0.0, dist2 = 0.0;
  for (int a = 0; a < 4; ++a) {
    tau += pts.point(0)[a] * pts.point(1)[a];
    dist2 += (pts.point(0)[a] - pts.point(1)[a]) * (pts.point(0)[a] - pts.point(1)[a]);
  }
  for (double t : {0.01, 0.05}) {
    const double avg = coulomb_heat_average(3, tau, t);
    std::vector<double> p;
    special::normalized_gegenbauer(400, 3, tau, p);
    double oracle = 0.0;
    for (int l = 0; l <= 400; ++l) {
      oracle += std::exp(-2.0 * l * (l + 2.0) * t) * (l + 1.0) * (l + 1.0) * s3_coulomb_eigenvalue(l) * p[l];
    }
    EXPECT_NEAR(avg, oracle, 1e-10);
    // Smoothing both measures evolves the kernel for time 2t.
    EXPECT_LE(avg, std::exp(2.0 * c1 * t) / std::sqrt(dist2));
  }
}

TEST(SmoothedGreen, DiagonalScalesLikeInverseRootTime) {
  std::vector<double> ts{1e-5, 4e-5, 1.6e-4, 6.4e-4}, values;
  const std::vector<double> zero{0.0, 0.0, 0.0};
  for (double t : ts) values.push_back(heat_smoothed_green_torus(zero, 3, t));
  EXPECT_NEAR(slope(ts, values), -0.5, 0.05);
}
