#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dbarcone/types.hpp"

namespace dbarcone {

enum class PanelRule { GaussKronrod15, GaussKronrod21, GaussKronrod31 };

std::string to_string(PanelRule rule);
PanelRule panel_rule_from_string(const std::string& name);

struct QuadratureParams {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  /// Bisection depth limit of every one-dimensional adaptive pass.
  int max_refinement_depth = 40;
  /// Radius ε of the disk left out around each singular point. When unset,
  /// ε = exclusion_fraction × truncation radius.
  std::optional<double> singular_exclusion;
  double exclusion_fraction = 1e-5;
  PanelRule base_rule = PanelRule::GaussKronrod21;
  /// Total panel budget (radial and angular) for one planar integral.
  std::size_t max_panels = 400000;

  void validate() const;
  double exclusion_radius(double truncation_radius) const;

  friend bool operator==(const QuadratureParams&, const QuadratureParams&) = default;
};

/// Integrand K on the disk |w| ≤ truncation_radius (K ≡ 0 outside). K may
/// blow up like 1/|w − a| at the listed singular points. `break_radii` lists
/// circles |w| = r across which K may fail to be smooth; the rule splits
/// there. `evaluate` is called from one thread per integral but must be
/// reentrant if several integrals run concurrently.
struct PlanarIntegrand {
  std::function<Complex(Complex)> evaluate;
  std::vector<Complex> singular_points;
  double truncation_radius = 0.0;
  std::vector<double> break_radii;
};

struct PlaneIntegral {
  Complex value{0.0, 0.0};
  /// Refinement discrepancy plus the bound on the excluded disks.
  double error_estimate = 0.0;
  /// Estimated magnitude of the left-out disks around singular points
  /// (already included in error_estimate).
  double excluded_estimate = 0.0;
  std::size_t evaluations = 0;
  std::size_t panels = 0;
};

/// ∫ K dA over the plane.
PlaneIntegral integrate_area(const PlanarIntegrand& integrand, const QuadratureParams& params);

/// ∫ K dw∧dw̄ with the orientation dw∧dw̄ = −2i dA. This is the only place
/// that convention is applied; every formula in the solver routes through it.
PlaneIntegral integrate_plane(const PlanarIntegrand& integrand, const QuadratureParams& params);

/// (1/2πi) ∫ f(u)/(u − z) du∧dū for f supported in |u| ≤ support_radius.
PlaneIntegral cauchy_transform(const std::function<Complex(Complex)>& f, double support_radius, Complex z,
                               const QuadratureParams& params, const std::vector<double>& break_radii = {});

}  // namespace dbarcone
