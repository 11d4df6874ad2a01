#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dbarcone/form.hpp"
#include "dbarcone/variety.hpp"

namespace dbarcone {

/// Points on the link K = Σ ∩ {‖z‖ = √n}.
struct LinkSample {
  std::vector<CVector> points;
  std::uint64_t seeds_used = 0;
  std::size_t failures = 0;
};

/// Projects random ambient directions onto Σ and slides each result along its
/// orbit to norm √n. Singular results count as failures. Throws
/// InsufficientSamples when more than 90% of attempts fail.
LinkSample sample_link(const Variety& variety, std::size_t count, std::uint64_t seed, double tol = 1e-11);

/// Positive t with ‖act(t, z)‖ = target (bisection; the norm grows with t).
double orbit_scale_to_norm(const Weights& weights, const CVector& z, double target);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

struct SamplingOptions {
  std::size_t n_samples = 100000;
  /// Lines used to estimate the volume of Σ ∩ B_1 and the link measure;
  /// 0 means n_samples.
  std::size_t n_lines = 0;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// ∫_{Σ∩B_ρ} φ dV for hypersurface cones. Link directions come from random
/// complex lines through B_1 (each intersection point weighs equally), the
/// radius from r = ρ·u^{1/(2d)} with stratified u. Throws UnsupportedVariety
/// for weighted varieties and for cones of higher codimension.
MonteCarloEstimate surface_integral(const Variety& variety, const std::function<double(const CVector&)>& phi, double rho,
                                    const SamplingOptions& options);

/// (∫ |h|² dV)^{1/2} with a delta-method standard error.
MonteCarloEstimate l2_norm_function(const Variety& variety, const std::function<Complex(const CVector&)>& h, double rho,
                                    const SamplingOptions& options);

/// |λ|_Σ(z): norm of the restriction of λ to the tangent space at a regular z.
double pointwise_form_norm(const Variety& variety, const ZeroOneForm& form, const CVector& z);

/// L² norm of λ over Σ ∩ B_ρ in the induced metric.
MonteCarloEstimate l2_norm_form(const Variety& variety, const ZeroOneForm& form, double rho,
                                const SamplingOptions& options);

struct PathApprox {
  std::vector<CVector> waypoints;
  double length = 0.0;
  /// Some waypoint came within 1e-3·max(‖z‖, ‖w‖) of the origin.
  bool near_singular = false;
};

/// Shortest of: the projected segment [z, w] with `steps` pieces, and the
/// two-leg routes (slide along the orbit to the other point's norm, then a
/// projected segment) started from either end. The candidate set is symmetric
/// in (z, w). Throws ProjectionFailure when every candidate fails.
PathApprox approximate_path(const Variety& variety, const CVector& z, const CVector& w, int steps);

/// Upper bound on the intrinsic distance: approximate_path(…).length.
double dist_sigma(const Variety& variety, const CVector& z, const CVector& w, int steps);

}  // namespace dbarcone
