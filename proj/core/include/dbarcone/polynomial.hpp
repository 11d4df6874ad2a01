#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dbarcone/types.hpp"

namespace dbarcone {

/// Positive integer weight vector of the scaling action s^β * z.
class Weights {
 public:
  explicit Weights(std::vector<int> entries);

  static Weights ones(std::size_t n) { return Weights(std::vector<int>(n, 1)); }

  std::size_t size() const noexcept { return entries_.size(); }
  int operator[](std::size_t k) const { return entries_[k]; }
  const std::vector<int>& entries() const noexcept { return entries_; }
  int min() const noexcept;
  bool is_cone() const noexcept;

  friend bool operator==(const Weights&, const Weights&) = default;

 private:
  std::vector<int> entries_;
};

struct Term {
  std::vector<int> exponents;
  Complex coefficient;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse polynomial in n complex variables. Terms sharing an exponent are
/// merged at construction and zero coefficients are dropped, so the stored
/// term list is canonical up to ordering (terms are kept sorted).
class SparsePolynomial {
 public:
  SparsePolynomial(std::size_t dim, std::vector<Term> terms);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  int total_degree() const noexcept;
  /// Largest exponent of each variable over all terms.
  const std::vector<int>& max_exponents() const noexcept { return max_exp_; }

  Complex evaluate(std::span<const Complex> z) const;
  Complex evaluate(const CVector& z) const { return evaluate(std::span<const Complex>(z.data(), z.size())); }

  /// Holomorphic gradient (∂Q/∂z_1, …, ∂Q/∂z_n).
  CVector gradient(const CVector& z) const;

  /// Value and gradient in one pass.
  Complex evaluate_with_gradient(const CVector& z, CVector& grad) const;

  /// Composition with z ↦ (z_1^{β_1}, …, z_n^{β_n}).
  SparsePolynomial compose_powers(const Weights& powers) const;

  /// Coefficients c_0..c_D (ascending) of t ↦ Q(p + t v).
  std::vector<Complex> restrict_to_line(const CVector& p, const CVector& v) const;

  /// Human-readable monomial such as "2*z1^2*z3".
  static std::string monomial_string(const std::vector<int>& exponents);

  friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

 private:
  std::size_t dim_;
  std::vector<Term> terms_;
  std::vector<int> max_exp_;
};

/// Weighted degree d with Q(s^β * z) = s^d Q(z).
/// Throws ZeroPolynomial, NonHomogeneous (message names the offending monomial)
/// or DimensionMismatch.
int weighted_degree(const SparsePolynomial& poly, const Weights& weights);

}  // namespace dbarcone
