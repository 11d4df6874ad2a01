#include "dbarcone/fixtures.hpp"

#include "dbarcone/error.hpp"

namespace dbarcone {

namespace {

Term term(std::vector<int> exps, double c) { return Term{std::move(exps), Complex(c, 0.0)}; }

}  // namespace

const std::vector<FixtureInfo>& fixtures() {
  static const std::vector<FixtureInfo> list = {
      {"line2", "{z2 = 0} in C^2, weights (1,1), d = 1"},
      {"quadric-cone", "{z1*z2 - z3^2 = 0} in C^3, weights (1,1,1), d = 2"},
      {"cusp", "{x1^2 - x2^3 = 0} in C^2, weights (3,2), d = 1"},
      {"cone6", "{z1^6 - z2^6 = 0} in C^2, weights (1,1), d = 1"},
  };
  return list;
}

Variety fixture_variety(const std::string& name) {
  if (name == "line2") return Variety(Weights::ones(2), {SparsePolynomial(2, {term({0, 1}, 1.0)})}, 1);
  if (name == "quadric-cone") {
    return Variety(Weights::ones(3), {SparsePolynomial(3, {term({1, 1, 0}, 1.0), term({0, 0, 2}, -1.0)})}, 2);
  }
  if (name == "cusp") {
    return Variety(Weights({3, 2}), {SparsePolynomial(2, {term({2, 0}, 1.0), term({0, 3}, -1.0)})}, 1);
  }
  if (name == "cone6") {
    return Variety(Weights::ones(2), {SparsePolynomial(2, {term({6, 0}, 1.0), term({0, 6}, -1.0)})}, 1);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + name + "'");
}

BumpSpec default_bump(std::size_t dim) {
  std::vector<int> zero(dim, 0);
  std::vector<int> first(dim, 0);
  first[0] = 1;
  return BumpSpec{SparsePolynomial(dim, {term(zero, 1.0), term(first, 1.0)}), 0.3, 1.0};
}

}  // namespace dbarcone
