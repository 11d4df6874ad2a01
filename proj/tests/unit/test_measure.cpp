#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "dbarcone/dbarcone.hpp"
#include "dbarcone/parallel.hpp"
#include "oracles.hpp"

using namespace dbarcone;

namespace {

CVector vec(std::initializer_list<Complex> v) {
  CVector z(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto c : v) z[i++] = c;
  return z;
}

SamplingOptions opts(std::size_t n, std::uint64_t seed = 1) {
  SamplingOptions o;
  o.n_samples = n;
  o.seed = seed;
  return o;
}

double norm2(const CVector& z) { return z.squaredNorm(); }

}  // namespace

TEST(Link, PointsAreRegularAndOnTheSphere) {
  for (const auto& f : fixtures()) {
    const auto v = fixture_variety(f.name);
    const auto link = sample_link(v, 25, 3);
    ASSERT_EQ(link.points.size(), 25u);
    for (const auto& z : link.points) {
      EXPECT_NEAR(z.norm(), std::sqrt(static_cast<double>(v.ambient_dim())), 1e-9) << f.name;
      EXPECT_TRUE(contains(v, z, 1e-9)) << f.name;
      EXPECT_TRUE(is_regular(v, z, 1e-8)) << f.name;
      EXPECT_GE(z.cwiseAbs().maxCoeff(), 1.0 - 1e-12);
    }
    EXPECT_EQ(sample_link(v, 5, 3).points[0], link.points[0]);
  }
}

TEST(Link, OrbitScaleToNorm) {
  const Weights b({3, 2});
  const CVector z = vec({0.3, Complex(0.1, 0.2)});
  const double t = orbit_scale_to_norm(b, z, 2.0);
  EXPECT_NEAR(act(t, b, z).norm(), 2.0, 1e-12);
}

TEST(SurfaceIntegral, FlatLine) {
  const auto line = fixture_variety("line2");
  const auto one = surface_integral(line, [](const CVector&) { return 1.0; }, 1.0, opts(20000));
  EXPECT_NEAR(one.value, kPi, 3.0 * one.std_error + 1e-12);
  const auto sq = surface_integral(line, norm2, 1.0, opts(20000));
  EXPECT_NEAR(sq.value, kPi / 2.0, 3.0 * sq.std_error);
}

TEST(SurfaceIntegral, QuadricScalingLaw) {
  const auto q = fixture_variety("quadric-cone");
  const auto r1 = surface_integral(q, norm2, 1.0, opts(40000, 1));
  const auto r2 = surface_integral(q, norm2, 2.0, opts(40000, 2));
  const double ratio = r2.value / r1.value;
  const double rel = std::hypot(r1.std_error / r1.value, r2.std_error / r2.value);
  EXPECT_NEAR(ratio, 64.0, 3.0 * rel * ratio);
}

TEST(SurfaceIntegral, ConeVolumeIsDegreeTimesBallVolume) {
  // A cone of degree D and dimension d has volume D·π^d/d! inside B_1.
  const auto q = fixture_variety("quadric-cone");
  const auto r = surface_integral(q, [](const CVector&) { return 1.0; }, 1.0, opts(40000));
  EXPECT_NEAR(r.value, kPi * kPi, 3.0 * r.std_error);
}

TEST(SurfaceIntegral, ThreadCountDoesNotChangeResult) {
  const auto q = fixture_variety("quadric-cone");
  auto o = opts(5000, 9);
  const auto a = surface_integral(q, norm2, 1.0, o);
  o.threads = 3;
  const auto b = surface_integral(q, norm2, 1.0, o);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(SurfaceIntegral, UnsupportedVarieties) {
  try {
    surface_integral(fixture_variety("cusp"), norm2, 1.0, opts(100));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedVariety);
  }
}

TEST(L2Norm, LineExamples) {
  const auto line = fixture_variety("line2");
  EXPECT_EQ(l2_norm_function(line, [](const CVector&) { return Complex(0.0); }, 1.0, opts(1000)).value, 0.0);
  const auto one = l2_norm_function(line, [](const CVector&) { return Complex(1.0); }, 1.0, opts(20000));
  EXPECT_NEAR(one.value, std::sqrt(kPi), 3.0 * one.std_error + 1e-12);
  const auto r = l2_norm_function(line, [](const CVector& z) { return Complex(z.norm()); }, 1.0, opts(20000));
  EXPECT_NEAR(r.value, std::sqrt(kPi / 2.0), 3.0 * r.std_error);
  EXPECT_EQ(l2_norm_form(line, zero_form(2), 1.0, opts(1000)).value, 0.0);
}

TEST(PointwiseFormNorm, TangentialPart) {
  const auto form = bump_dbar_form(default_bump(3));
  const auto line = fixture_variety("line2");
  const auto form2 = bump_dbar_form(default_bump(2));
  const CVector p = vec({Complex(0.5, 0.3), 0.0});
  EXPECT_NEAR(pointwise_form_norm(line, form2, p), std::abs(form2.evaluate(p)[0]), 1e-14);

  // On the quadric: the component of f orthogonal to conj(∇Q).
  const auto q = fixture_variety("quadric-cone");
  const CVector z = oracle::quadric_point(Complex(0.5, 0.2), Complex(-0.3, 0.4));
  const CVector f = form.evaluate(z);
  const CVector n = q.jacobian(z).row(0).transpose().conjugate().normalized();
  const double expected = (f - n * n.dot(f)).norm();
  EXPECT_NEAR(pointwise_form_norm(q, form, z), expected, 1e-12);
}

TEST(DistSigma, Properties) {
  const auto q = fixture_variety("quadric-cone");
  const auto link = sample_link(q, 12, 5);
  const int steps = 16;
  for (std::size_t i = 0; i + 2 < link.points.size(); i += 3) {
    const CVector z = 0.4 * link.points[i], w = 0.3 * link.points[i + 1], v = 0.5 * link.points[i + 2];
    EXPECT_EQ(dist_sigma(q, z, z, steps), 0.0);
    const double dzw = dist_sigma(q, z, w, steps);
    EXPECT_GE(dzw, (z - w).norm() - 1e-12);
    EXPECT_EQ(dzw, dist_sigma(q, w, z, steps));
    const double slack = 2.0 * ((z - v).norm() + (v - w).norm()) / steps;
    EXPECT_LE(dzw, dist_sigma(q, z, v, steps) + dist_sigma(q, v, w, steps) + slack);
  }
}

TEST(DistSigma, LineIsFlat) {
  const auto line = fixture_variety("line2");
  const CVector z = vec({Complex(0.3, 0.1), 0.0}), w = vec({Complex(-0.2, 0.4), 0.0});
  EXPECT_NEAR(dist_sigma(line, z, w, 8), (z - w).norm(), 1e-12);
  const auto through_origin = approximate_path(line, z, -z, 8);
  EXPECT_TRUE(through_origin.near_singular);
  EXPECT_NEAR(through_origin.length, 2.0 * z.norm(), 1e-12);
}

TEST(Parallel, WelfordMergeMatchesSequential) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(2.0, 3.0);
  Welford all, a, b;
  for (int i = 0; i < 1000; ++i) {
    const double x = n(rng);
    all.add(x);
    (i % 3 == 0 ? a : b).add(x);
  }
  a.merge(b);
  EXPECT_EQ(a.n, all.n);
  EXPECT_NEAR(a.mean, all.mean, 1e-12);
  EXPECT_NEAR(a.variance(), all.variance(), 1e-10);
}

TEST(Parallel, ForCoversEveryIndexAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("x");
                            }),
               std::runtime_error);
}
