#include <gtest/gtest.h>

#include <random>

#include "dbarcone/dbarcone.hpp"
#include "oracles.hpp"

using namespace dbarcone;

namespace {

SparsePolynomial poly(std::size_t n, std::vector<Term> terms) { return SparsePolynomial(n, std::move(terms)); }

SparsePolynomial cusp_poly() { return poly(2, {{{2, 0}, 1.0}, {{0, 3}, -1.0}}); }
SparsePolynomial quadric_poly() { return poly(3, {{{1, 1, 0}, 1.0}, {{0, 0, 2}, -1.0}}); }

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

}  // namespace

TEST(Polynomial, MergesDuplicateExponentsAndDropsZeros) {
  const auto p = poly(2, {{{1, 0}, 2.0}, {{1, 0}, -2.0}, {{0, 1}, 3.0}, {{0, 2}, 0.0}});
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_EQ(p.terms()[0].exponents, (std::vector<int>{0, 1}));
  EXPECT_EQ(p.terms()[0].coefficient, Complex(3.0));
}

TEST(Polynomial, EvaluateAndGradientAgreeWithFiniteDifferences) {
  const auto p = poly(3, {{{2, 1, 0}, Complex(1, 2)}, {{0, 0, 3}, -0.5}, {{1, 1, 1}, Complex(0, 1)}});
  std::mt19937_64 rng(3);
  const CVector z = oracle::random_complex_vector(3, rng);
  const Complex a = z[0], b = z[1], c = z[2];
  const Complex expected = Complex(1, 2) * a * a * b - 0.5 * c * c * c + Complex(0, 1) * a * b * c;
  EXPECT_NEAR(std::abs(p.evaluate(z) - expected), 0.0, 1e-12);

  CVector grad;
  EXPECT_NEAR(std::abs(p.evaluate_with_gradient(z, grad) - expected), 0.0, 1e-12);
  for (int k = 0; k < 3; ++k) {
    auto along = [&](Complex t) {
      CVector y = z;
      y[k] = t;
      return p.evaluate(y);
    };
    EXPECT_NEAR(std::abs(grad[k] - oracle::holomorphic_derivative(along, z[k], 1e-5)), 0.0, 1e-7);
  }
}

TEST(Polynomial, RestrictToLineMatchesDirectEvaluation) {
  const auto p = quadric_poly();
  std::mt19937_64 rng(5);
  const CVector a = oracle::random_complex_vector(3, rng), v = oracle::random_complex_vector(3, rng);
  const auto coeffs = p.restrict_to_line(a, v);
  const Complex t(0.3, -0.7);
  Complex horner(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) horner = horner * t + *it;
  EXPECT_NEAR(std::abs(horner - p.evaluate(CVector(a + t * v))), 0.0, 1e-12);
}

TEST(Polynomial, ComposePowers) {
  const auto composed = cusp_poly().compose_powers(Weights({3, 2}));
  EXPECT_EQ(composed, poly(2, {{{6, 0}, 1.0}, {{0, 6}, -1.0}}));
}

TEST(WeightedDegree, Examples) {
  EXPECT_EQ(weighted_degree(cusp_poly(), Weights({3, 2})), 6);
  EXPECT_EQ(weighted_degree(quadric_poly(), Weights::ones(3)), 2);
  EXPECT_EQ(code_of([] { weighted_degree(poly(2, {{{1, 0}, 1.0}, {{0, 2}, 1.0}}), Weights::ones(2)); }),
            ErrorCode::NonHomogeneous);
  EXPECT_EQ(code_of([] { weighted_degree(poly(2, {}), Weights::ones(2)); }), ErrorCode::ZeroPolynomial);
  EXPECT_EQ(code_of([] { weighted_degree(quadric_poly(), Weights::ones(2)); }), ErrorCode::DimensionMismatch);
}

TEST(WeightedDegree, NonHomogeneousMessageNamesMonomial) {
  try {
    weighted_degree(poly(2, {{{1, 0}, 1.0}, {{0, 2}, 1.0}}), Weights::ones(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("z2^2"), std::string::npos) << e.what();
  }
}

TEST(Weights, RejectsNonPositiveEntriesAndShortVectors) {
  EXPECT_THROW(Weights({1, 0}), Error);
  EXPECT_THROW(Weights({1}), Error);
  EXPECT_TRUE(Weights::ones(3).is_cone());
  EXPECT_FALSE(Weights({3, 2}).is_cone());
  EXPECT_EQ(Weights({3, 2}).min(), 2);
}

TEST(Act, Examples) {
  const Weights b({3, 2});
  CVector z(2);
  z << 1.0, 1.0;
  EXPECT_EQ(act(1.0, b, z), z);
  EXPECT_EQ(act(0.0, b, z), CVector::Zero(2));
  CVector expected(2);
  expected << 8.0, 4.0;
  EXPECT_EQ(act(2.0, b, z), expected);
}

TEST(Act, GroupLaw) {
  const Weights b({3, 2, 1});
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const CVector z = oracle::random_complex_vector(3, rng);
    const auto st = oracle::random_complex_vector(2, rng);
    const CVector lhs = act(st[0], b, act(st[1], b, z));
    const CVector rhs = act(st[0] * st[1], b, z);
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * (1.0 + rhs.norm()));
  }
}

TEST(Contains, Examples) {
  const auto q = fixture_variety("quadric-cone");
  CVector z(3);
  z << 1.0, 1.0, 1.0;
  EXPECT_TRUE(contains(q, z, 1e-9));
  z << 1.0, 1.0, 0.0;
  EXPECT_FALSE(contains(q, z, 1e-9));
  for (const auto& f : fixtures()) {
    const auto v = fixture_variety(f.name);
    EXPECT_TRUE(contains(v, CVector::Zero(v.ambient_dim()), 1e-12)) << f.name;
  }
}

TEST(IsRegular, Examples) {
  const auto q = fixture_variety("quadric-cone");
  CVector z(3);
  z << 1.0, 1.0, 1.0;
  EXPECT_TRUE(is_regular(q, z, 1e-9));
  // Independent SVD of the gradient (1, 1, -2).
  Eigen::MatrixXcd grad(1, 3);
  grad << 1.0, 1.0, -2.0;
  EXPECT_GT(Eigen::JacobiSVD<Eigen::MatrixXcd>(grad).singularValues()[0], 1.0);
  EXPECT_FALSE(is_regular(q, CVector::Zero(3), 1e-9));

  CVector p(2);
  p << 1.0, 0.0;
  EXPECT_TRUE(is_regular(fixture_variety("line2"), p, 1e-9));

  z << 1.0, 1.0, 0.0;
  EXPECT_EQ(code_of([&] { is_regular(q, z, 1e-9); }), ErrorCode::NotOnVariety);
}

TEST(IsRegular, ScaleInvariantOnCones) {
  const auto q = fixture_variety("quadric-cone");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const auto ab = oracle::random_complex_vector(3, rng);
    const CVector z = oracle::quadric_point(ab[0], ab[1]);
    EXPECT_EQ(is_regular(q, z, 1e-8), is_regular(q, act(ab[2], q.weights(), z), 1e-8));
  }
}

TEST(Variety, HomogeneityIdentityAndOrbitClosure) {
  std::mt19937_64 rng(13);
  for (const auto& f : fixtures()) {
    const auto v = fixture_variety(f.name);
    const auto link = sample_link(v, 20, 17);
    for (const auto& z : link.points) {
      for (int rep = 0; rep < 5; ++rep) {
        const Complex s = oracle::random_complex_vector(1, rng)[0];
        const CVector sz = act(s, v.weights(), z);
        const CVector qs = v.residuals(sz), q = v.residuals(z);
        for (std::size_t k = 0; k < v.polynomials().size(); ++k) {
          int max_exp = 0;
          for (int e : v.polynomials()[k].max_exponents()) max_exp = std::max(max_exp, e);
          const double sd = std::pow(std::abs(s), v.degrees()[k]);
          const double bound = 1e-10 * (1.0 + sd) * (1.0 + std::pow(z.norm(), max_exp));
          EXPECT_LE(std::abs(qs[k] - std::pow(s, v.degrees()[k]) * q[k]), bound) << f.name;
        }
        EXPECT_TRUE(contains(v, sz, 1e-8)) << f.name;
      }
    }
  }
}

TEST(Project, Examples) {
  const auto q = fixture_variety("quadric-cone");
  CVector z0(3);
  z0 << 1.0, 1.0, 1.0;
  EXPECT_EQ(project_to_variety(q, z0, 1e-12, 50), z0);
  EXPECT_EQ(project_to_variety(q, CVector::Zero(3), 1e-12, 50), CVector::Zero(3));

  const double eps = 1e-3;
  z0 << 1.0, 1.0, 1.0 + eps;
  const CVector z = project_to_variety(q, z0, 1e-12, 50);
  EXPECT_LE(std::abs(q.residuals(z)[0]), 1e-12);
  EXPECT_LE((z - z0).norm(), 2.0 * eps);
}

TEST(TangentBasis, SpansKernelOfJacobian) {
  const auto q = fixture_variety("quadric-cone");
  const CVector z = oracle::quadric_point(Complex(0.4, 0.1), Complex(-0.8, 0.5));
  const CMatrix t = tangent_basis(q, z);
  ASSERT_EQ(t.cols(), 2);
  EXPECT_LE((q.jacobian(z) * t).norm(), 1e-12);
  EXPECT_LE((t.adjoint() * t - CMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(Fixtures, Cone6IsThetaImageOfCusp) {
  EXPECT_EQ(theta_cone(fixture_variety("cusp")).polynomials(), fixture_variety("cone6").polynomials());
  EXPECT_EQ(code_of([] { fixture_variety("nope"); }), ErrorCode::InvalidArgument);
}
