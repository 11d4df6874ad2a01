#include <gtest/gtest.h>

#include <random>

#include "dbarcone/dbarcone.hpp"
#include "oracles.hpp"

using namespace dbarcone;

namespace {

Complex disk(Complex u) { return std::norm(u) < 1.0 ? Complex(1.0) : Complex(0.0); }

PlanarIntegrand unit_disk(std::function<Complex(Complex)> k, std::vector<Complex> singular = {}) {
  PlanarIntegrand in;
  in.evaluate = std::move(k);
  in.truncation_radius = 1.0;
  in.singular_points = std::move(singular);
  return in;
}

}  // namespace

TEST(Quadrature, DiskArea) {
  const auto r = integrate_area(unit_disk([](Complex) { return Complex(1.0); }), {});
  EXPECT_NEAR(r.value.real(), kPi, 1e-12);
  EXPECT_NEAR(r.value.imag(), 0.0, 1e-12);
}

TEST(Quadrature, PlaneOrientation) {
  const auto r = integrate_plane(unit_disk([](Complex) { return Complex(1.0); }), {});
  EXPECT_NEAR(std::abs(r.value - Complex(0.0, -2.0 * kPi)), 0.0, 1e-12);
}

TEST(Quadrature, OddSingularKernelVanishes) {
  const auto r = integrate_area(unit_disk([](Complex w) { return 1.0 / w; }, {0.0}), {});
  EXPECT_LE(std::abs(r.value), 1e-10);
}

TEST(Quadrature, InteriorBreakRadius) {
  PlanarIntegrand in = unit_disk([](Complex w) { return std::abs(w) < 0.5 ? Complex(1.0) : Complex(0.0); });
  in.break_radii = {0.5};
  EXPECT_NEAR(integrate_area(in, {}).value.real(), kPi / 4.0, 1e-12);
}

TEST(CauchyTransform, GridOracleAtHalf) {
  const Complex z(0.5, 0.0);
  const Complex grid = oracle::grid_cauchy_transform(disk, z, 1.5, 2000);
  EXPECT_NEAR(std::abs(grid - std::conj(z)), 0.0, 5e-3);
  const auto r = cauchy_transform(disk, 1.0, z, {});
  EXPECT_NEAR(std::abs(r.value - grid), 0.0, 5e-3);
  EXPECT_NEAR(std::abs(r.value - std::conj(z)), 0.0, 1e-10);
}

TEST(CauchyTransform, GridOracleOffAxis) {
  const Complex z(0.3, 0.4);
  const Complex grid = oracle::grid_cauchy_transform(disk, z, 1.5, 2000);
  const auto r = cauchy_transform(disk, 1.0, z, {});
  EXPECT_NEAR(std::abs(r.value - grid), 0.0, 5e-3);
  EXPECT_NEAR(std::abs(r.value - Complex(0.3, -0.4)), 0.0, 1e-10);
}

TEST(CauchyTransform, TrivialCases) {
  EXPECT_EQ(cauchy_transform([](Complex) { return Complex(0.0); }, 1.0, Complex(0.2, 0.1), {}).value, Complex(0.0));
  EXPECT_LE(std::abs(cauchy_transform(disk, 1.0, 0.0, {}).value), 1e-12);
}

TEST(CauchyTransform, OutsideTheSupportIsHolomorphic) {
  // For |z| > 1 the transform of the disk indicator is 1/z.
  const Complex z(1.5, 0.5);
  EXPECT_NEAR(std::abs(cauchy_transform(disk, 1.0, z, {}).value - 1.0 / z), 0.0, 1e-10);
}

TEST(CauchyTransform, MatchesConjugateAtRandomPoints) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Complex z = std::polar(0.95 * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
    const auto r = cauchy_transform(disk, 1.0, z, {});
    EXPECT_LE(std::abs(r.value - std::conj(z)), 1e-6 * std::max(std::abs(z), 1e-3)) << z;
  }
}

TEST(Quadrature, Linearity) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> n;
  for (int rep = 0; rep < 5; ++rep) {
    const Complex a(n(rng), n(rng)), b(n(rng), n(rng)), p(0.3 * n(rng), 0.3 * n(rng));
    const Complex s(0.2, -0.3);
    auto k1 = [=](Complex w) { return (1.0 + p * w * std::conj(w)) / (w - s); };
    auto k2 = [=](Complex w) { return std::exp(w) * std::conj(w); };
    const auto r1 = integrate_plane(unit_disk(k1, {s}), {});
    const auto r2 = integrate_plane(unit_disk(k2), {});
    const auto r = integrate_plane(unit_disk([&](Complex w) { return a * k1(w) + b * k2(w); }, {s}), {});
    const double tol = 10.0 * (std::abs(a) * r1.error_estimate + std::abs(b) * r2.error_estimate + r.error_estimate) + 1e-12;
    EXPECT_LE(std::abs(r.value - (a * r1.value + b * r2.value)), tol);
  }
}

TEST(Quadrature, ExclusionRadiusHalving) {
  for (const Complex a : {Complex(0.1, 0.2), Complex(-0.5, 0.3), Complex(0.0, -0.7)}) {
    auto k = [a](Complex w) { return std::exp(w) / (w - a); };
    QuadratureParams p;
    p.singular_exclusion = 1e-4;
    const auto coarse = integrate_plane(unit_disk(k, {a}), p);
    p.singular_exclusion = 0.5e-4;
    const auto fine = integrate_plane(unit_disk(k, {a}), p);
    EXPECT_LT(std::abs(coarse.value - fine.value), coarse.error_estimate);
    EXPECT_GT(coarse.excluded_estimate, 0.0);
  }
}

TEST(Quadrature, TwoSingularPoints) {
  // 1/(w-a) + 1/(w-b) over the disk: -π(conj(a) + conj(b)).
  const Complex a(0.3, 0.1), b(-0.4, -0.2);
  const auto r = integrate_area(unit_disk([=](Complex w) { return 1.0 / (w - a) + 1.0 / (w - b); }, {a, b}), {});
  EXPECT_NEAR(std::abs(r.value + kPi * (std::conj(a) + std::conj(b))), 0.0, 1e-9);
}

TEST(Quadrature, SingularOverlap) {
  QuadratureParams p;
  p.singular_exclusion = 1e-3;
  try {
    integrate_plane(unit_disk([](Complex w) { return 1.0 / w; }, {0.0, 2e-3}), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularOverlap);
  }
}

TEST(Quadrature, PanelBudgetExhaustedIsNoConvergence) {
  QuadratureParams p;
  p.max_panels = 20;
  p.rel_tol = 1e-14;
  try {
    integrate_plane(unit_disk([](Complex w) { return std::exp(20.0 * w.real()) * std::sin(30.0 * w.imag()); }), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
  }
}

TEST(QuadratureParams, Validation) {
  QuadratureParams p;
  p.rel_tol = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.max_refinement_depth = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.exclusion_radius(2.0), 2e-5);
}

TEST(PanelRule, NamesRoundTrip) {
  for (auto r : {PanelRule::GaussKronrod15, PanelRule::GaussKronrod21, PanelRule::GaussKronrod31})
    EXPECT_EQ(panel_rule_from_string(to_string(r)), r);
  EXPECT_THROW(panel_rule_from_string("simpson"), Error);
}

TEST(PanelRule, AllRulesAgree) {
  auto k = [](Complex w) { return std::exp(w) / (w - Complex(0.2, 0.2)); };
  Complex ref;
  for (auto r : {PanelRule::GaussKronrod15, PanelRule::GaussKronrod21, PanelRule::GaussKronrod31}) {
    QuadratureParams p;
    p.base_rule = r;
    const auto v = integrate_plane(unit_disk(k, {Complex(0.2, 0.2)}), p).value;
    if (r == PanelRule::GaussKronrod15) ref = v;
    EXPECT_NEAR(std::abs(v - ref), 0.0, 1e-8);
  }
}
