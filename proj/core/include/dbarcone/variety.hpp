#pragma once

#include <optional>
#include <vector>

#include "dbarcone/polynomial.hpp"
#include "dbarcone/types.hpp"

namespace dbarcone {

/// Default relative threshold below which singular values count as zero.
inline constexpr double kDefaultRankTol = 1e-8;

/// Common zero locus of weighted homogeneous polynomials sharing one weight
/// vector. Immutable after construction; the constructor checks homogeneity
/// of every polynomial and records its weighted degree.
class Variety {
 public:
  Variety(Weights weights, std::vector<SparsePolynomial> polynomials, std::optional<int> pure_dim = std::nullopt);

  std::size_t ambient_dim() const noexcept { return weights_.size(); }
  const Weights& weights() const noexcept { return weights_; }
  const std::vector<SparsePolynomial>& polynomials() const noexcept { return polys_; }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  std::optional<int> pure_dim() const noexcept { return pure_dim_; }
  /// pure_dim or throws InvalidArgument naming `what`.
  int require_pure_dim(const char* what) const;
  bool is_cone() const noexcept { return weights_.is_cone(); }
  bool is_hypersurface() const noexcept;

  /// Q_k(z) for every defining polynomial.
  CVector residuals(const CVector& z) const;
  /// Rows ∂Q_k/∂z_j.
  CMatrix jacobian(const CVector& z) const;
  void residuals_and_jacobian(const CVector& z, CVector& q, CMatrix& jac) const;

  friend bool operator==(const Variety&, const Variety&) = default;

 private:
  Weights weights_;
  std::vector<SparsePolynomial> polys_;
  std::vector<int> degrees_;
  std::optional<int> pure_dim_;
};

/// s^β * z = (s^{β_1} z_1, …, s^{β_n} z_n).
CVector act(Complex s, const Weights& weights, const CVector& z);

/// max(1, ‖z‖^{d_k / min β}): magnitude normalization used by `contains`.
double membership_scale(const Variety& variety, std::size_t k, const CVector& z);

/// true iff |Q_k(z)| ≤ tol · membership_scale(k, z) for every k.
bool contains(const Variety& variety, const CVector& z, double tol);

/// Numerical rank of the defining Jacobian (singular values below
/// rank_tol · σ_max count as zero; an all-zero Jacobian has rank 0).
int jacobian_rank(const Variety& variety, const CVector& z, double rank_tol = kDefaultRankTol);

/// Jacobian rank equals n − d. Throws NotOnVariety when contains(z, tol) fails.
bool is_regular(const Variety& variety, const CVector& z, double tol, double rank_tol = kDefaultRankTol);

/// Orthonormal basis (columns) of the holomorphic tangent space ker dQ(z).
CMatrix tangent_basis(const Variety& variety, const CVector& z, double rank_tol = kDefaultRankTol);

/// Gauss–Newton projection onto Σ with Moore–Penrose steps and halving line
/// search on ‖Q(z)‖². A starting point already on Σ is returned unchanged.
/// Throws NoConvergence, or ConvergedToSingular when the iterate that was
/// reached is not a regular point (checked only when pure_dim is known).
CVector project_to_variety(const Variety& variety, const CVector& z0, double tol, int max_iter,
                           double rank_tol = kDefaultRankTol);

}  // namespace dbarcone
