#include "dbarcone/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dbarcone/error.hpp"
#include "dbarcone/parallel.hpp"

namespace dbarcone {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t stage) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stage)};
  return std::mt19937_64(seq);
}

CVector random_in_ball(Eigen::Index m, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  CVector v(m);
  for (Eigen::Index j = 0; j < m; ++j) v[j] = Complex(normal(rng), normal(rng));
  if (m == 0) return v;
  return v * (radius * std::pow(uniform(rng), 1.0 / (2.0 * static_cast<double>(m))) / v.norm());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  return 0.5 * (upper + *std::max_element(v.begin(), mid));
}

/// Wirtinger ∂/∂t̄ by central differences along t and i·t.
template <class G>
Complex wirtinger_dbar(G&& g, double h) {
  const Complex ih(0.0, h);
  return ((g(Complex(h, 0.0)) - g(Complex(-h, 0.0))) + kI * (g(ih) - g(-ih))) / (4.0 * h);
}

struct Derivatives {
  Complex ds;
  CVector dx;
};

Derivatives chart_dbar(const Chart& chart, const PointSolver& solver, Complex s, const CVector& x, double h) {
  Derivatives out;
  out.ds = wirtinger_dbar([&](Complex e) { return solver(chart_eval(chart, s + e, x)).value; }, h);
  out.dx.resize(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    out.dx[j] = wirtinger_dbar(
        [&](Complex e) {
          CVector xe = x;
          xe[j] += e;
          return solver(chart_eval(chart, s, xe)).value;
        },
        h);
  }
  return out;
}

double ratio(double diff, double dist, double theta, double sup) {
  if (diff == 0.0) return 0.0;
  if (sup == 0.0) return std::numeric_limits<double>::infinity();
  return diff / (std::pow(dist, theta) * sup);
}

void summarize(HolderReport& report) {
  report.empirical_constant = 0.0;
  report.constant_by_scale.clear();
  report.constant_by_kind.clear();
  for (const auto& p : report.pairs) {
    report.empirical_constant = std::max(report.empirical_constant, p.ratio_chord);
    auto& by_scale = report.constant_by_scale[p.scale];
    by_scale = std::max(by_scale, p.ratio_chord);
    auto& by_kind = report.constant_by_kind[p.kind];
    by_kind = std::max(by_kind, p.ratio_chord);
  }
}

}  // namespace

PointSolver make_solver(const Variety& variety, const ZeroOneForm& form, SolverKind kind, const QuadratureParams& params) {
  if (kind == SolverKind::L2) {
    return [&variety, &form, params](const CVector& z) { return solve_l2(variety, form, z, params); };
  }
  return [&variety, &form, params](const CVector& z) { return solve(variety, form, z, params); };
}

ResidualReport dbar_residual(const Variety& variety, const ZeroOneForm& form, const PointSolver& solver,
                             const CVector& anchor, const ResidualOptions& options) {
  if (!(options.fd_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "dbar_residual: fd_step must be > 0");
  const Chart chart = build_chart(variety, anchor);
  const auto m = static_cast<Eigen::Index>(chart.slice_dim());
  auto rng = stream(options.seed, 3);
  std::uniform_real_distribution<double> uniform;

  ResidualReport report;
  report.fd_step = options.fd_step;
  report.samples.resize(options.n_samples);
  for (auto& sample : report.samples) {
    sample.x = chart.x_anchor() + random_in_ball(m, 0.5 * chart.domain_radius(), rng);
    const CVector slice = chart.slice_point(sample.x);
    const double W = orbit_radius(form, variety.weights(), slice, form.support_radius());
    const double radius = W * (0.1 + 0.8 * uniform(rng));
    sample.s = std::polar(radius, 2.0 * kPi * uniform(rng));
  }

  const double norm = 1.0 + form.sup_bound();
  parallel_for(report.samples.size(), options.threads, [&](std::size_t i) {
    ResidualSample& sample = report.samples[i];
    sample.z = chart_eval(chart, sample.s, sample.x);
    const double h = options.fd_step * std::max(1.0, std::abs(sample.s));
    const Derivatives d = chart_dbar(chart, solver, sample.s, sample.x, h);
    const PulledBack F = pullback_form(chart, form, sample.s, sample.x);
    sample.residual_s = std::abs(d.ds - F.F0) / norm;
    sample.residual = sample.residual_s;
    sample.residual_x.resize(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
      sample.residual_x[static_cast<std::size_t>(j)] = std::abs(d.dx[j] - F.Fj[j]) / norm;
      sample.residual = std::max(sample.residual, sample.residual_x[static_cast<std::size_t>(j)]);
    }
  });

  const std::size_t probes = std::min(options.halving_probes, report.samples.size());
  std::vector<double> changes(probes);
  parallel_for(probes, options.threads, [&](std::size_t i) {
    const ResidualSample& sample = report.samples[i];
    const double h = options.fd_step * std::max(1.0, std::abs(sample.s));
    const Derivatives full = chart_dbar(chart, solver, sample.s, sample.x, h);
    const Derivatives half = chart_dbar(chart, solver, sample.s, sample.x, 0.5 * h);
    double change = std::abs(full.ds - half.ds);
    for (Eigen::Index j = 0; j < m; ++j) change = std::max(change, std::abs(full.dx[j] - half.dx[j]));
    changes[i] = change / norm;
  });
  report.step_halving_change = median(changes);
  if (report.step_halving_change > options.halving_limit) {
    throw Error(ErrorCode::StepTooSmall, "finite-difference derivatives change by " +
                                             std::to_string(report.step_halving_change) +
                                             " when the step is halved; quadrature noise dominates");
  }

  std::vector<double> residuals;
  for (const auto& s : report.samples) {
    residuals.push_back(s.residual);
    report.max = std::max(report.max, s.residual);
  }
  report.median = median(residuals);
  return report;
}

HolderReport holder_report(const Variety& variety, const ZeroOneForm& form, const PointSolver& solver,
                           const HolderOptions& options) {
  if (!(options.theta > 0.0 && options.theta < 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1)");
  if (options.scales.empty()) throw Error(ErrorCode::InvalidArgument, "holder_report: scales must be nonempty");
  if (options.anchors == 0) throw Error(ErrorCode::InvalidArgument, "holder_report: anchors must be >= 1");
  const double R = form.support_radius();
  const Weights& beta = variety.weights();

  const LinkSample link = sample_link(variety, options.anchors, options.seed);
  std::vector<Chart> charts;
  for (const auto& p : link.points) charts.push_back(build_chart(variety, p));

  auto rng = stream(options.seed, 4);
  std::uniform_real_distribution<double> uniform;
  std::uniform_int_distribution<std::size_t> pick(0, charts.size() - 1);
  auto point_in_ball = [&](const Chart& chart, const CVector& x, Complex* s_out) {
    const CVector slice = chart.slice_point(x);
    const double smax = orbit_scale_to_norm(beta, slice, R);
    const Complex s = std::polar(smax * std::sqrt(uniform(rng)), 2.0 * kPi * uniform(rng));
    if (s_out) *s_out = s;
    return act(s, beta, slice);
  };
  auto random_x = [&](const Chart& chart) {
    return CVector(chart.x_anchor() +
                   random_in_ball(static_cast<Eigen::Index>(chart.slice_dim()), 0.5 * chart.domain_radius(), rng));
  };

  static const char* kKinds[] = {"same-line", "same-slice", "general"};
  const std::size_t n_scales = options.scales.size();
  const std::size_t n_base = (options.n_pairs + n_scales - 1) / n_scales;
  struct Base {
    CVector z;
    CVector w;
    std::string kind;
  };
  std::vector<Base> bases;
  for (std::size_t b = 0; b < n_base; ++b) {
    const Chart& chart = charts[pick(rng)];
    std::string kind = kKinds[b % 3];
    if (kind == "same-slice" && chart.slice_dim() == 0) kind = "same-line";
    const CVector x = random_x(chart);
    Complex s;
    CVector z = point_in_ball(chart, x, &s);
    CVector w;
    if (kind == "same-line") {
      const double smax = orbit_scale_to_norm(beta, chart.slice_point(x), R);
      w = chart_eval(chart, std::polar(smax * std::sqrt(uniform(rng)), 2.0 * kPi * uniform(rng)), x);
    } else if (kind == "same-slice") {
      w = chart_eval(chart, s, random_x(chart));
    } else {
      const Chart& other = charts[pick(rng)];
      w = point_in_ball(other, random_x(other), nullptr);
    }
    bases.push_back(Base{std::move(z), std::move(w), std::move(kind)});
  }

  HolderReport report;
  report.theta = options.theta;
  report.R = R;
  std::vector<HolderPair> rows(options.n_pairs);
  std::vector<char> keep(options.n_pairs, 0);
  parallel_for(options.n_pairs, options.threads, [&](std::size_t i) {
    const Base& base = bases[i / n_scales];
    const double t = options.scales[i % n_scales];
    HolderPair& row = rows[i];
    row.z = act(Complex(t, 0.0), beta, base.z);
    row.w = act(Complex(t, 0.0), beta, base.w);
    row.kind = base.kind;
    row.scale = t;
    if (row.z == row.w || row.z.norm() == 0.0 || row.w.norm() == 0.0) return;
    row.diff = std::abs(solver(row.z).value - solver(row.w).value);
    row.dist_chord = (row.z - row.w).norm();
    const PathApprox path = approximate_path(variety, row.z, row.w, options.path_steps);
    row.dist_upper = std::max(path.length, row.dist_chord);
    row.near_singular = path.near_singular;
    row.ratio_upper = ratio(row.diff, row.dist_upper, options.theta, form.sup_bound());
    row.ratio_chord = ratio(row.diff, row.dist_chord, options.theta, form.sup_bound());
    keep[i] = 1;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (keep[i]) {
      report.pairs.push_back(std::move(rows[i]));
    } else {
      ++report.excluded;
    }
  }
  summarize(report);
  return report;
}

HolderReport rescore(const HolderReport& report, double theta, double sup_bound) {
  if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1)");
  HolderReport out = report;
  out.theta = theta;
  for (auto& p : out.pairs) {
    p.ratio_upper = ratio(p.diff, p.dist_upper, theta, sup_bound);
    p.ratio_chord = ratio(p.diff, p.dist_chord, theta, sup_bound);
  }
  summarize(out);
  return out;
}

IsotropicReport isotropic_report(const HolderReport& report) {
  IsotropicReport out;
  for (const auto& p : report.pairs) {
    if (p.kind == "same-line") {
      out.same_line_constant = std::max(out.same_line_constant, p.ratio_chord);
      ++out.same_line_pairs;
    } else if (p.kind == "same-slice") {
      out.same_slice_constant = std::max(out.same_slice_constant, p.ratio_chord);
      ++out.same_slice_pairs;
    }
  }
  return out;
}

L2Report l2_report(const Variety& variety, const ZeroOneForm& form, const QuadratureParams& params,
                   const SamplingOptions& options) {
  if (!variety.is_cone()) throw Error(ErrorCode::NotACone, "l2_report requires a cone");
  variety.require_pure_dim("l2_report");
  L2Report report;
  report.R = form.support_radius();
  report.form_norm = l2_norm_form(variety, form, report.R, options);
  report.g_norm = l2_norm_function(
      variety, [&](const CVector& z) { return solve_l2(variety, form, z, params).value; }, report.R, options);
  if (report.form_norm.value == 0.0) {
    report.degenerate = true;
    report.ratio = std::numeric_limits<double>::quiet_NaN();
    report.ratio_std_error = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  report.ratio = report.g_norm.value / report.form_norm.value;
  const double a = report.g_norm.value > 0.0 ? report.g_norm.std_error / report.g_norm.value : 0.0;
  const double b = report.form_norm.std_error / report.form_norm.value;
  report.ratio_std_error = report.ratio * std::sqrt(a * a + b * b);
  return report;
}

ScalingReport measure_scaling_check(const Variety& variety, const std::vector<double>& radii,
                                    const SamplingOptions& options, ScalingIntegrand integrand) {
  if (radii.size() < 2) throw Error(ErrorCode::InvalidArgument, "measure_scaling_check: need at least two radii");
  const int d = variety.require_pure_dim("measure_scaling_check");
  ScalingReport report;
  report.expected = integrand == ScalingIntegrand::NormSquared ? 2.0 * d + 2.0 : 2.0 * d;
  auto phi = [integrand](const CVector& z) { return integrand == ScalingIntegrand::NormSquared ? z.squaredNorm() : 1.0; };
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    SamplingOptions o = options;
    o.seed = options.seed + i;
    ScalingRow row{radii[i], surface_integral(variety, phi, radii[i], o)};
    if (!(row.estimate.value > 0.0)) {
      throw Error(ErrorCode::InsufficientSamples, "measure_scaling_check: nonpositive estimate");
    }
    const double x = std::log(row.rho);
    const double y = std::log(row.estimate.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    report.rows.push_back(row);
  }
  const double k = static_cast<double>(radii.size());
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0) throw Error(ErrorCode::InvalidArgument, "measure_scaling_check: radii must differ");
  report.exponent = (k * sxy - sx * sy) / denom;
  return report;
}

}  // namespace dbarcone
