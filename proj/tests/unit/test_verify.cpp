#include <gtest/gtest.h>

#include <cmath>

#include "dbarcone/dbarcone.hpp"

using namespace dbarcone;

namespace {

struct Quadric {
  Variety v = fixture_variety("quadric-cone");
  ZeroOneForm form = bump_dbar_form(default_bump(3));
  CVector anchor = sample_link(v, 1, 4).points[0];
};

ResidualOptions few(std::size_t n) {
  ResidualOptions o;
  o.n_samples = n;
  o.halving_probes = 1;
  return o;
}

}  // namespace

TEST(Residual, ZeroFormHasZeroResidual) {
  Quadric q;
  const auto zero = zero_form(3);
  const auto r = dbar_residual(q.v, zero, make_solver(q.v, zero, SolverKind::Direct, {}), q.anchor, few(4));
  EXPECT_EQ(r.max, 0.0);
}

TEST(Residual, BumpFormSolvesTheEquation) {
  Quadric q;
  for (auto kind : {SolverKind::Direct, SolverKind::L2}) {
    const auto r = dbar_residual(q.v, q.form, make_solver(q.v, q.form, kind, {}), q.anchor, few(6));
    ASSERT_EQ(r.samples.size(), 6u);
    EXPECT_LE(r.median, 1e-3);
    EXPECT_LE(r.max, 1e-2);
    EXPECT_DOUBLE_EQ(r.fd_step, 1e-4);
    for (const auto& s : r.samples) EXPECT_EQ(s.residual_x.size(), 1u);
  }
}

TEST(Residual, LineBump) {
  const auto line = fixture_variety("line2");
  const auto form = bump_dbar_form(default_bump(2));
  CVector anchor(2);
  anchor << 1.0, 0.0;
  const auto r = dbar_residual(line, form, make_solver(line, form, SolverKind::Direct, {}), anchor, few(8));
  EXPECT_LE(r.max, 1e-5);
}

TEST(Residual, NonClosedFormIsDetected) {
  Quadric q;
  const auto raw = raw_bump_form(default_bump(3));
  const auto r = dbar_residual(q.v, raw, make_solver(q.v, raw, SolverKind::Direct, {}), q.anchor, few(6));
  EXPECT_GT(r.max, 1e-2);
}

TEST(Residual, TinyStepIsRejected) {
  Quadric q;
  auto o = few(2);
  o.fd_step = 1e-15;
  try {
    dbar_residual(q.v, q.form, make_solver(q.v, q.form, SolverKind::Direct, {}), q.anchor, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepTooSmall);
  }
}

TEST(Holder, ReportStructure) {
  Quadric q;
  HolderOptions o;
  o.n_pairs = 24;
  const auto rep = holder_report(q.v, q.form, make_solver(q.v, q.form, SolverKind::Direct, {}), o);
  EXPECT_EQ(rep.pairs.size() + rep.excluded, 24u);
  EXPECT_EQ(rep.R, 1.0);
  double max_chord = 0.0;
  for (const auto& p : rep.pairs) {
    EXPECT_LE(p.ratio_upper, p.ratio_chord * (1.0 + 1e-12));
    EXPECT_GE(p.dist_upper, p.dist_chord - 1e-12);
    EXPECT_LE(p.z.norm(), rep.R + 1e-12);
    max_chord = std::max(max_chord, p.ratio_chord);
  }
  EXPECT_EQ(rep.empirical_constant, max_chord);
  EXPECT_EQ(rep.constant_by_scale.size(), 3u);
  EXPECT_EQ(rep.constant_by_kind.size(), 3u);

  const auto same = rescore(rep, rep.theta, q.form.sup_bound());
  EXPECT_NEAR(same.empirical_constant, rep.empirical_constant, 1e-12 * rep.empirical_constant);
  const auto iso = isotropic_report(rep);
  EXPECT_GT(iso.same_line_pairs, 0u);
  EXPECT_GT(iso.same_slice_pairs, 0u);
}

TEST(Holder, ThreadCountDoesNotChangeReport) {
  Quadric q;
  HolderOptions o;
  o.n_pairs = 12;
  const auto solver = make_solver(q.v, q.form, SolverKind::Direct, {});
  const auto a = holder_report(q.v, q.form, solver, o);
  o.threads = 3;
  const auto b = holder_report(q.v, q.form, solver, o);
  EXPECT_EQ(a.empirical_constant, b.empirical_constant);
}

TEST(L2, ZeroFormIsDegenerate) {
  Quadric q;
  SamplingOptions s;
  s.n_samples = 200;
  const auto r = l2_report(q.v, zero_form(3), {}, s);
  EXPECT_TRUE(r.degenerate);
  EXPECT_TRUE(std::isnan(r.ratio));
}

TEST(L2, RatioIsFiniteAndScaleInvariant) {
  Quadric q;
  SamplingOptions s;
  s.n_samples = 300;
  const auto r = l2_report(q.v, q.form, {}, s);
  EXPECT_FALSE(r.degenerate);
  EXPECT_TRUE(std::isfinite(r.ratio));
  EXPECT_GT(r.ratio, 0.0);
  const auto r3 = l2_report(q.v, scaled(q.form, 3.0), {}, s);
  EXPECT_NEAR(r3.ratio, r.ratio, r.ratio_std_error);
}

TEST(Scaling, PlainMeasureExponent) {
  SamplingOptions s;
  s.n_samples = 20000;
  const auto r = measure_scaling_check(fixture_variety("line2"), {0.5, 1.0, 2.0}, s, ScalingIntegrand::One);
  EXPECT_EQ(r.expected, 2.0);
  EXPECT_NEAR(r.exponent, 2.0, 0.05);
  EXPECT_EQ(r.rows.size(), 3u);
}
