#pragma once

#include <cstdint>
#include <vector>

#include "dbarcone/form.hpp"
#include "dbarcone/variety.hpp"

namespace dbarcone {

struct ChartOptions {
  double tol = 1e-8;
  double rank_tol = kDefaultRankTol;
  /// Rays probed from the anchor when estimating domain_radius.
  int probe_rays = 8;
  double probe_step = 0.02;
  double probe_max = 1.0;
  double max_condition = 1e8;
  std::uint64_t probe_seed = 0x5eed;
};

/// Generalized cone Π(s,x) = s^β * (ξ_p in the pivot slot, π(x) elsewhere)
/// anchored at a regular point ξ. The slice coordinates other than the pivot
/// split into m = d − 1 free coordinates (the parameters x) and n − d
/// dependent ones, solved by Gauss–Newton. Immutable; evaluation is reentrant.
class Chart {
 public:
  const Variety& variety() const noexcept { return variety_; }
  const CVector& anchor() const noexcept { return anchor_; }
  std::size_t pivot() const noexcept { return pivot_; }
  std::size_t slice_dim() const noexcept { return free_.size(); }
  const std::vector<std::size_t>& free_indices() const noexcept { return free_; }
  const std::vector<std::size_t>& dependent_indices() const noexcept { return dependent_; }
  const CVector& x_anchor() const noexcept { return x_anchor_; }
  /// Radius of the ball around x_anchor on which π is trusted (∞ when m = 0).
  double domain_radius() const noexcept { return domain_radius_; }
  double tol() const noexcept { return tol_; }

  /// Slice point (all n coordinates, pivot entry ξ_p) for parameters x.
  CVector slice_point(const CVector& x) const;
  /// n × m matrix ∂π_k/∂x_j (zero pivot row).
  CMatrix slice_jacobian(const CVector& slice) const;

 private:
  friend Chart build_chart(const Variety&, const CVector&, const ChartOptions&);

  Chart(Variety variety, CVector anchor) : variety_(std::move(variety)), anchor_(std::move(anchor)) {}

  /// Newton solve for the dependent coordinates from a starting slice point.
  bool correct(CVector& slice) const;
  double dependent_condition(const CVector& slice) const;

  Variety variety_;
  CVector anchor_;
  std::size_t pivot_ = 0;
  std::vector<std::size_t> free_;
  std::vector<std::size_t> dependent_;
  CVector x_anchor_;
  CMatrix predictor_;  // (n−d) × m linearization of the dependent coordinates
  double domain_radius_ = 0.0;
  double tol_ = 1e-8;
  double rank_tol_ = kDefaultRankTol;
};

/// Errors: SingularAnchor (ξ not a regular point of Σ), PivotTooSmall (all
/// |ξ_k| < 1), ImplicitFunctionFailure (slice Jacobian rank-deficient).
Chart build_chart(const Variety& variety, const CVector& anchor, const ChartOptions& options = {});

/// Π(s, x). Throws OutsideChartDomain or NewtonDivergence.
CVector chart_eval(const Chart& chart, Complex s, const CVector& x);

struct ChartCoordinates {
  Complex s;
  CVector x;
};

/// Local inverse of Π for z ≠ 0. Throws NotInChart.
ChartCoordinates chart_invert(const Chart& chart, const CVector& z);

/// n × d matrix [∂Π/∂s, ∂Π/∂x_1, …, ∂Π/∂x_m] at (s, x).
CMatrix chart_differential(const Chart& chart, Complex s, const CVector& x);

struct PulledBack {
  Complex F0;
  CVector Fj;
};

/// Coefficients of Π*λ = F0 ds̄ + Σ_j F_j dx̄_j at (s, x).
PulledBack pullback_form(const Chart& chart, const ZeroOneForm& form, Complex s, const CVector& x);

}  // namespace dbarcone
