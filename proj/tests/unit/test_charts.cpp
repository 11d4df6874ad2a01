#include <gtest/gtest.h>

#include <random>

#include "dbarcone/dbarcone.hpp"
#include "oracles.hpp"

using namespace dbarcone;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

CVector vec(std::initializer_list<Complex> v) {
  CVector z(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto c : v) z[i++] = c;
  return z;
}

CVector random_x(const Chart& chart, std::mt19937_64& rng, double fraction) {
  CVector d = oracle::random_complex_vector(static_cast<int>(chart.slice_dim()), rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return chart.x_anchor() + d.normalized() * (fraction * chart.domain_radius() * u(rng));
}

}  // namespace

TEST(Chart, LineHasEmptySlice) {
  const auto line = fixture_variety("line2");
  const auto chart = build_chart(line, vec({1.0, 0.0}));
  EXPECT_EQ(chart.pivot(), 0u);
  EXPECT_EQ(chart.slice_dim(), 0u);
  const CVector x(0);
  EXPECT_EQ(chart_eval(chart, Complex(0.3, 0.2), x), vec({Complex(0.3, 0.2), 0.0}));
}

TEST(Chart, QuadricAnchorAndSamples) {
  const auto q = fixture_variety("quadric-cone");
  const CVector xi = vec({1.0, 1.0, 1.0});
  const auto chart = build_chart(q, xi);
  EXPECT_EQ(chart.slice_dim(), 1u);
  EXPECT_GT(chart.domain_radius(), 0.0);
  EXPECT_LE((chart_eval(chart, 1.0, chart.x_anchor()) - xi).norm(), 1e-12);

  std::mt19937_64 rng(41);
  for (int i = 0; i < 50; ++i) {
    const CVector x = random_x(chart, rng, 1.0);
    const Complex s = oracle::random_complex_vector(1, rng)[0];
    const CVector z = chart_eval(chart, s, x);
    EXPECT_TRUE(contains(q, z, 1e-10));
    EXPECT_TRUE(is_regular(q, z, 1e-8));
    EXPECT_LE((z - s * chart_eval(chart, 1.0, x)).norm(), 1e-14 * (1.0 + z.norm()));
  }
}

TEST(Chart, PivotMaximizesModulus) {
  const auto q = fixture_variety("quadric-cone");
  const auto chart = build_chart(q, oracle::quadric_point(Complex(0.6, 0.0), Complex(1.5, 0.0)));
  EXPECT_EQ(chart.pivot(), 1u);
}

TEST(Chart, ConstructionErrors) {
  const auto q = fixture_variety("quadric-cone");
  EXPECT_EQ(code_of([&] { build_chart(q, CVector::Zero(3)); }), ErrorCode::SingularAnchor);
  EXPECT_EQ(code_of([&] { build_chart(q, vec({0.5, 0.5, 0.5})); }), ErrorCode::PivotTooSmall);
  EXPECT_EQ(code_of([&] { build_chart(q, vec({1.0, 1.0, 0.0})); }), ErrorCode::NotOnVariety);
}

TEST(Chart, EvalEdgeCases) {
  const auto q = fixture_variety("quadric-cone");
  const auto chart = build_chart(q, vec({1.0, 1.0, 1.0}));
  EXPECT_EQ(chart_eval(chart, 0.0, chart.x_anchor()), CVector::Zero(3));
  const Complex s(0.7, -0.4);
  EXPECT_LE((chart_eval(chart, s, chart.x_anchor()) - act(s, q.weights(), chart.anchor())).norm(), 1e-14);
  const CVector far = chart.x_anchor() + CVector::Constant(1, 2.0 * chart.domain_radius() + 1.0);
  EXPECT_EQ(code_of([&] { chart_eval(chart, 1.0, far); }), ErrorCode::OutsideChartDomain);
}

TEST(Chart, InvertRoundTrip) {
  const auto q = fixture_variety("quadric-cone");
  const auto chart = build_chart(q, vec({1.0, 1.0, 1.0}));
  const auto c0 = chart_invert(chart, chart.anchor());
  EXPECT_NEAR(std::abs(c0.s - 1.0), 0.0, 1e-12);
  EXPECT_LE((c0.x - chart.x_anchor()).norm(), 1e-12);

  std::mt19937_64 rng(43);
  for (int i = 0; i < 20; ++i) {
    const CVector x = random_x(chart, rng, 0.8);
    const Complex s = std::polar(0.2 + 2.0 * i / 20.0, 0.3 * i);
    const auto c = chart_invert(chart, chart_eval(chart, s, x));
    EXPECT_NEAR(std::abs(c.s - s), 0.0, 1e-9);
    EXPECT_LE((c.x - x).norm(), 1e-9);
  }
  EXPECT_EQ(code_of([&] { chart_invert(chart, vec({1.0, 0.0, 0.0})); }), ErrorCode::NotInChart);
}

TEST(Chart, WeightedInvertPicksPrincipalBranch) {
  const auto cusp = fixture_variety("cusp");
  const auto link = sample_link(cusp, 1, 3);
  const auto chart = build_chart(cusp, link.points[0]);
  const Complex s(0.5, 0.4);
  const auto c = chart_invert(chart, chart_eval(chart, s, CVector(0)));
  EXPECT_LE((chart_eval(chart, c.s, CVector(0)) - chart_eval(chart, s, CVector(0))).norm(), 1e-12);
}

TEST(Chart, DifferentialMatchesDifferenceQuotients) {
  const auto q = fixture_variety("quadric-cone");
  const auto chart = build_chart(q, vec({1.0, 1.0, 1.0}));
  const Complex s(0.8, 0.3);
  const CVector x = chart.x_anchor() + CVector::Constant(1, Complex(0.05, -0.02));
  const CMatrix d = chart_differential(chart, s, x);
  ASSERT_EQ(d.cols(), 2);
  const CVector ds = oracle::holomorphic_derivative([&](Complex t) { return CVector(chart_eval(chart, t, x)); }, s, 1e-5);
  const CVector dx = oracle::holomorphic_derivative(
      [&](Complex t) { return CVector(chart_eval(chart, s, CVector::Constant(1, t))); }, x[0], 1e-5);
  EXPECT_LE((d.col(0) - ds).norm(), 1e-8);
  EXPECT_LE((d.col(1) - dx).norm(), 1e-8);
}

TEST(Pullback, ZeroAndLineCases) {
  const auto q = fixture_variety("quadric-cone");
  const auto chart = build_chart(q, vec({1.0, 1.0, 1.0}));
  const auto zero = pullback_form(chart, zero_form(3), 0.5, chart.x_anchor());
  EXPECT_EQ(zero.F0, Complex(0.0));
  EXPECT_EQ(zero.Fj.norm(), 0.0);

  const auto line = fixture_variety("line2");
  const auto lc = build_chart(line, vec({1.0, 0.0}));
  const auto form = bump_dbar_form(default_bump(2));
  const Complex s(0.5, 0.3);
  EXPECT_NEAR(std::abs(pullback_form(lc, form, s, CVector(0)).F0 - form.evaluate(vec({s, 0.0}))[0]), 0.0, 1e-15);
}

TEST(Pullback, MatchesConjugatedDifferenceQuotients) {
  const auto q = fixture_variety("quadric-cone");
  const auto chart = build_chart(q, vec({1.0, 1.0, 1.0}));
  const auto form = bump_dbar_form(default_bump(3));
  const Complex s(0.35, 0.1);
  const CVector x = chart.x_anchor() + CVector::Constant(1, Complex(0.03, 0.04));
  const CVector f = form.evaluate(chart_eval(chart, s, x));
  const CVector ds = oracle::holomorphic_derivative([&](Complex t) { return CVector(chart_eval(chart, t, x)); }, s, 1e-5);
  const CVector dx = oracle::holomorphic_derivative(
      [&](Complex t) { return CVector(chart_eval(chart, s, CVector::Constant(1, t))); }, x[0], 1e-5);
  const auto pb = pullback_form(chart, form, s, x);
  EXPECT_NEAR(std::abs(pb.F0 - (f.transpose() * ds.conjugate())(0)), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(pb.Fj[0] - (f.transpose() * dx.conjugate())(0)), 0.0, 1e-8);
}

TEST(Pullback, VanishesBeyondSupport) {
  const auto q = fixture_variety("quadric-cone");
  const auto chart = build_chart(q, vec({1.0, 1.0, 1.0}));
  const auto form = bump_dbar_form(default_bump(3));
  const auto pb = pullback_form(chart, form, 1.0, chart.x_anchor());
  EXPECT_EQ(pb.F0, Complex(0.0));
  EXPECT_EQ(pb.Fj.norm(), 0.0);
}
