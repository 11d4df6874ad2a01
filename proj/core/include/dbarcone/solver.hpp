#pragma once

#include <functional>

#include "dbarcone/form.hpp"
#include "dbarcone/quadrature.hpp"
#include "dbarcone/variety.hpp"

namespace dbarcone {

inline constexpr double kDefaultMembershipTol = 1e-8;

struct SolveResult {
  Complex value{0.0, 0.0};
  double quadrature_error = 0.0;
  /// Radius W of the disk in the w-plane (or u-plane) that was integrated.
  double truncation_radius_used = 0.0;
  std::size_t evaluations = 0;
};

/// Smallest W ≥ 0 with gauge(act(W, z)) ≥ level, by bisection. Returns ∞ when
/// the orbit never reaches the level (z = 0).
double orbit_radius(const ZeroOneForm& form, const Weights& weights, const CVector& z, double level);

/// g(z) = Σ_k (β_k/2πi) ∫ f_k(w^β*z)·conj(w)^{β_k−1}·conj(z_k)/(w−1) dw∧dw̄, g(0) = 0.
SolveResult solve(const Variety& variety, const ZeroOneForm& form, const CVector& z, const QuadratureParams& params,
                  double membership_tol = kDefaultMembershipTol);

/// g(s^β*z) through the u-plane integral with kernel conj(u)^{β_k−1}·conj(z_k)/(u−s).
SolveResult solve_scaled(const Variety& variety, const ZeroOneForm& form, const CVector& z, Complex s,
                         const QuadratureParams& params, double membership_tol = kDefaultMembershipTol);

/// Cones only: Σ_k (1/2πi) ∫ f_k(wz)·w^{d−1}·conj(z_k)/(w−1) dw∧dw̄ over |w| ≤ W(z).
/// Throws NotACone.
SolveResult solve_l2(const Variety& variety, const ZeroOneForm& form, const CVector& z, const QuadratureParams& params,
                     double membership_tol = kDefaultMembershipTol);

/// (1/2πi)·s^{−m} ∫ u^m F0(u)/(u−s) du∧dū for F0 supported in |u| ≤ support_radius.
/// Throws ZeroScaleWithWeight when s = 0 and m > 0.
PlaneIntegral weighted_cauchy_pompeiu(const std::function<Complex(Complex)>& F0, int m, Complex s, double support_radius,
                                      const QuadratureParams& params, const std::vector<double>& break_radii = {});

/// Θ(z) = (z_1^{β_1}, …, z_n^{β_n}).
CVector theta_map(const Weights& weights, const CVector& z);

/// Θ*ℵ on ℂⁿ: coefficient k is f_k(Θ(z))·β_k·conj(z_k)^{β_k−1}; support and
/// kinks are measured by the gauge of ℵ composed with Θ.
ZeroOneForm theta_pullback_form(const ZeroOneForm& form, const Weights& weights);

/// The cone {Q_k∘Θ = 0} with unit weights and the same pure dimension.
Variety theta_cone(const Variety& weighted);

struct ThetaCrossCheck {
  SolveResult direct;   // h(x) on X
  SolveResult via_cone; // g(z) on the cone with the pulled-back form
  CVector z;            // point with Θ(z) = x
};

/// h(x) on X and g(z) on the associated cone at z = (x_k^{1/β_k}) (principal roots).
ThetaCrossCheck solve_weighted_via_cone(const Variety& weighted, const ZeroOneForm& form, const CVector& x,
                                        const QuadratureParams& params, double membership_tol = kDefaultMembershipTol);

/// Same, at a caller-chosen cone point z (x = Θ(z)).
ThetaCrossCheck solve_weighted_via_cone_at(const Variety& weighted, const ZeroOneForm& form, const CVector& z,
                                           const QuadratureParams& params,
                                           double membership_tol = kDefaultMembershipTol);

}  // namespace dbarcone
