#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dbarcone/charts.hpp"
#include "dbarcone/measure.hpp"
#include "dbarcone/solver.hpp"

namespace dbarcone {

/// g evaluated at a point of Σ. Must be reentrant when threads > 1.
using PointSolver = std::function<SolveResult(const CVector&)>;

enum class SolverKind { Direct, L2 };

PointSolver make_solver(const Variety& variety, const ZeroOneForm& form, SolverKind kind, const QuadratureParams& params);

struct ResidualSample {
  Complex s;
  CVector x;
  CVector z;
  /// |∂G/∂s̄ − F0| / (1 + sup_bound).
  double residual_s = 0.0;
  /// |∂G/∂x̄_j − F_j| / (1 + sup_bound).
  std::vector<double> residual_x;
  double residual = 0.0;
};

struct ResidualReport {
  std::vector<ResidualSample> samples;
  /// h = fd_step · max(1, |s|) (also applied to the x steps).
  double fd_step = 0.0;
  double max = 0.0;
  double median = 0.0;
  /// Median over the probed samples of the derivative change when h is halved.
  double step_halving_change = 0.0;
};

struct ResidualOptions {
  std::size_t n_samples = 20;
  double fd_step = 1e-4;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Samples probed with h/2 to detect finite-difference noise.
  std::size_t halving_probes = 3;
  double halving_limit = 1e-3;
};

/// Wirtinger finite-difference check of ∂̄(g∘Π) = Π*λ on the chart at `anchor`.
/// |s| is drawn from [0.1, 0.9]·W where W is the support radius along the
/// orbit of the slice point; x from the ball of radius domain_radius/2.
/// Throws StepTooSmall when halving h moves the derivatives by more than
/// halving_limit (normalized like the residuals).
ResidualReport dbar_residual(const Variety& variety, const ZeroOneForm& form, const PointSolver& solver,
                             const CVector& anchor, const ResidualOptions& options);

struct HolderPair {
  CVector z;
  CVector w;
  std::string kind;  // "same-line", "same-slice" or "general"
  double scale = 1.0;
  double dist_upper = 0.0;
  double dist_chord = 0.0;
  double diff = 0.0;
  double ratio_upper = 0.0;
  double ratio_chord = 0.0;
  bool near_singular = false;
};

struct HolderReport {
  double theta = 0.5;
  double R = 0.0;
  std::vector<HolderPair> pairs;
  /// Max ratio_chord over all pairs.
  double empirical_constant = 0.0;
  std::map<double, double> constant_by_scale;
  std::map<std::string, double> constant_by_kind;
  std::size_t excluded = 0;
};

struct HolderOptions {
  double theta = 0.5;
  std::size_t n_pairs = 60;
  std::vector<double> scales = {1.0, 0.1, 0.01};
  std::size_t anchors = 4;
  int path_steps = 16;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Pairs in Σ ∩ B_R: base pairs of the three kinds built on charts at link
/// anchors, each shrunk by the listed scales toward the origin (row i uses
/// base pair i / |scales| and scale i % |scales|). Pairs with z = w or with an
/// endpoint at the origin are excluded and counted.
HolderReport holder_report(const Variety& variety, const ZeroOneForm& form, const PointSolver& solver,
                           const HolderOptions& options);

/// Ratios recomputed for another exponent on the same pairs.
HolderReport rescore(const HolderReport& report, double theta, double sup_bound);

struct IsotropicReport {
  double same_line_constant = 0.0;
  double same_slice_constant = 0.0;
  std::size_t same_line_pairs = 0;
  std::size_t same_slice_pairs = 0;
};

IsotropicReport isotropic_report(const HolderReport& report);

struct L2Report {
  double R = 0.0;
  MonteCarloEstimate g_norm;
  MonteCarloEstimate form_norm;
  double ratio = 0.0;
  double ratio_std_error = 0.0;
  /// λ = 0: ratio is NaN.
  bool degenerate = false;
};

/// ‖g‖_{L²(Σ∩B_R)} / ‖λ‖_{L²} with g from solve_l2, R the support radius.
L2Report l2_report(const Variety& variety, const ZeroOneForm& form, const QuadratureParams& params,
                   const SamplingOptions& options);

struct ScalingRow {
  double rho = 0.0;
  MonteCarloEstimate estimate;
};

struct ScalingReport {
  double exponent = 0.0;
  double expected = 0.0;
  std::vector<ScalingRow> rows;
};

enum class ScalingIntegrand { NormSquared, One };

/// Least-squares slope of log ∫_{Σ∩B_ρ} φ against log ρ; radius i uses seed + i.
ScalingReport measure_scaling_check(const Variety& variety, const std::vector<double>& radii,
                                    const SamplingOptions& options,
                                    ScalingIntegrand integrand = ScalingIntegrand::NormSquared);

}  // namespace dbarcone
