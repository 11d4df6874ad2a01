#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dbarcone/polynomial.hpp"
#include "dbarcone/types.hpp"

namespace dbarcone {

/// Writes f_1(z), …, f_n(z) into `out`. Must be reentrant.
using CoefficientFn = std::function<void(std::span<const Complex> z, std::span<Complex> out)>;

/// Size function used for the support test. Must satisfy
/// gauge(act(e^{iφ}, z)) = gauge(z) and grow monotonically along orbits.
using GaugeFn = std::function<double(std::span<const Complex> z)>;

/// (0,1)-form λ = Σ f_k dz̄_k with compact support {gauge(z) < R}.
/// `evaluate` returns zero outside the support regardless of the raw
/// coefficient function. `kink_levels` lists gauge values across which the
/// coefficients are not smooth; quadrature splits there.
class ZeroOneForm {
 public:
  ZeroOneForm(std::size_t dim, CoefficientFn coefficients, double support_radius, double sup_bound, bool dbar_closed,
              GaugeFn gauge = {}, std::vector<double> kink_levels = {});

  std::size_t dim() const noexcept { return dim_; }
  double support_radius() const noexcept { return support_radius_; }
  double sup_bound() const noexcept { return sup_bound_; }
  bool dbar_closed() const noexcept { return dbar_closed_; }
  bool has_custom_gauge() const noexcept { return static_cast<bool>(gauge_); }
  const std::vector<double>& kink_levels() const noexcept { return kinks_; }
  /// True when every coefficient is identically zero by construction.
  bool is_zero() const noexcept { return !coefficients_; }

  double gauge(std::span<const Complex> z) const;
  void evaluate(std::span<const Complex> z, std::span<Complex> out) const;
  CVector evaluate(const CVector& z) const;

  const CoefficientFn& raw_coefficients() const noexcept { return coefficients_; }
  const GaugeFn& gauge_function() const noexcept { return gauge_; }

 private:
  std::size_t dim_;
  CoefficientFn coefficients_;
  double support_radius_;
  double sup_bound_;
  bool dbar_closed_;
  GaugeFn gauge_;
  std::vector<double> kinks_;
};

ZeroOneForm zero_form(std::size_t dim, double support_radius = 1.0);

/// c·λ.
ZeroOneForm scaled(const ZeroOneForm& form, Complex c);

/// λ₁ + λ₂. Both forms must use the default Euclidean gauge.
ZeroOneForm sum(const ZeroOneForm& a, const ZeroOneForm& b);

/// Radial cutoff χ(‖z‖²): 1 for ‖z‖ ≤ r0, 0 for ‖z‖ ≥ R, quintic
/// smootherstep in between.
struct BumpSpec {
  SparsePolynomial h;
  double r0;
  double R;
};

void validate(const BumpSpec& spec);

/// χ(t) and χ′(t) for t = ‖z‖².
double bump_cutoff(const BumpSpec& spec, double t);
double bump_cutoff_derivative(const BumpSpec& spec, double t);

/// ψ(z) = h(z)·χ(‖z‖²).
Complex bump_potential(const BumpSpec& spec, std::span<const Complex> z);

/// λ = ∂̄ψ, i.e. f_k = h(z)·χ′(‖z‖²)·z_k. ∂̄-closed.
ZeroOneForm bump_dbar_form(const BumpSpec& spec);

/// f_1 = h·χ, other coefficients zero. Not ∂̄-closed.
ZeroOneForm raw_bump_form(const BumpSpec& spec);

}  // namespace dbarcone
