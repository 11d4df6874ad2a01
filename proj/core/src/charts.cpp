#include "dbarcone/charts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dbarcone/error.hpp"

namespace dbarcone {

namespace {

constexpr int kNewtonIterations = 50;

Complex int_pow(Complex s, int e) {
  Complex p(1.0, 0.0);
  for (int i = 0; i < e; ++i) p *= s;
  return p;
}

CMatrix columns(const CMatrix& m, const std::vector<std::size_t>& idx) {
  CMatrix out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(idx[j]));
  return out;
}

CVector gather(const CVector& v, const std::vector<std::size_t>& idx) {
  CVector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out[static_cast<Eigen::Index>(j)] = v[static_cast<Eigen::Index>(idx[j])];
  return out;
}

void scatter(CVector& v, const std::vector<std::size_t>& idx, const CVector& values) {
  for (std::size_t j = 0; j < idx.size(); ++j) v[static_cast<Eigen::Index>(idx[j])] = values[static_cast<Eigen::Index>(j)];
}

}  // namespace

bool Chart::correct(CVector& slice) const {
  if (dependent_.empty()) return contains(variety_, slice, tol_);
  CVector q;
  CMatrix jac;
  for (int it = 0; it < kNewtonIterations; ++it) {
    variety_.residuals_and_jacobian(slice, q, jac);
    if (!q.allFinite()) return false;
    Eigen::JacobiSVD<CMatrix> svd(columns(jac, dependent_), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const CVector step = svd.solve(q);
    if (!step.allFinite()) return false;
    CVector dep = gather(slice, dependent_) - step;
    scatter(slice, dependent_, dep);
    if (step.norm() <= 1e-14 * (1.0 + slice.norm())) break;
  }
  return slice.allFinite() && contains(variety_, slice, tol_);
}

double Chart::dependent_condition(const CVector& slice) const {
  if (dependent_.empty()) return 1.0;
  const CMatrix jac = variety_.jacobian(slice);
  const double full = Eigen::JacobiSVD<CMatrix>(jac).singularValues()[0];
  const auto sv = Eigen::JacobiSVD<CMatrix>(columns(jac, dependent_)).singularValues();
  const double smallest = sv[sv.size() - 1];
  return smallest > 0.0 ? full / smallest : std::numeric_limits<double>::infinity();
}

CVector Chart::slice_point(const CVector& x) const {
  if (static_cast<std::size_t>(x.size()) != free_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "chart parameter has wrong dimension");
  }
  CVector slice = anchor_;
  if (free_.empty()) return slice;
  scatter(slice, free_, x);
  scatter(slice, dependent_, gather(anchor_, dependent_) + predictor_ * (x - x_anchor_));
  if (!correct(slice)) throw Error(ErrorCode::NewtonDivergence, "slice correction did not converge");
  return slice;
}

CMatrix Chart::slice_jacobian(const CVector& slice) const {
  const auto n = static_cast<Eigen::Index>(variety_.ambient_dim());
  const auto m = static_cast<Eigen::Index>(free_.size());
  CMatrix out = CMatrix::Zero(n, m);
  if (m == 0) return out;
  const CMatrix jac = variety_.jacobian(slice);
  const CMatrix dep = columns(jac, dependent_);
  const CMatrix d = -Eigen::JacobiSVD<CMatrix>(dep, Eigen::ComputeThinU | Eigen::ComputeThinV).solve(columns(jac, free_));
  for (Eigen::Index j = 0; j < m; ++j) {
    out(static_cast<Eigen::Index>(free_[static_cast<std::size_t>(j)]), j) = 1.0;
    for (std::size_t r = 0; r < dependent_.size(); ++r) {
      out(static_cast<Eigen::Index>(dependent_[r]), j) = d(static_cast<Eigen::Index>(r), j);
    }
  }
  return out;
}

Chart build_chart(const Variety& variety, const CVector& anchor, const ChartOptions& options) {
  const int d = variety.require_pure_dim("build_chart");
  const std::size_t n = variety.ambient_dim();
  if (static_cast<std::size_t>(anchor.size()) != n) throw Error(ErrorCode::DimensionMismatch, "anchor dimension mismatch");
  if (anchor.norm() <= 1e-12) throw Error(ErrorCode::SingularAnchor, "anchor is the origin");
  if (!is_regular(variety, anchor, options.tol, options.rank_tol)) {
    throw Error(ErrorCode::SingularAnchor, "anchor is not a regular point");
  }
  Eigen::Index p = 0;
  anchor.cwiseAbs().maxCoeff(&p);
  if (std::abs(anchor[p]) < 1.0 - 1e-9) {  // link points can sit on |ξ_k| = 1 up to rounding
    throw Error(ErrorCode::PivotTooSmall, "every anchor coordinate has modulus < 1; rescale the anchor to the link first");
  }

  Chart chart(variety, anchor);
  chart.pivot_ = static_cast<std::size_t>(p);
  chart.tol_ = options.tol;
  chart.rank_tol_ = options.rank_tol;

  std::vector<std::size_t> others;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != chart.pivot_) others.push_back(k);
  }
  const auto codim = static_cast<Eigen::Index>(n) - d;
  const CMatrix jac = variety.jacobian(anchor);
  Eigen::ColPivHouseholderQR<CMatrix> qr(columns(jac, others));
  qr.setThreshold(options.rank_tol);
  if (qr.rank() != codim) {
    throw Error(ErrorCode::ImplicitFunctionFailure,
                "slice Jacobian has rank " + std::to_string(qr.rank()) + ", expected " + std::to_string(codim));
  }
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index i = 0; i < perm.size(); ++i) {
    const std::size_t k = others[static_cast<std::size_t>(perm[i])];
    (i < codim ? chart.dependent_ : chart.free_).push_back(k);
  }
  std::sort(chart.dependent_.begin(), chart.dependent_.end());
  std::sort(chart.free_.begin(), chart.free_.end());
  chart.x_anchor_ = gather(anchor, chart.free_);

  if (chart.free_.empty()) {
    chart.domain_radius_ = std::numeric_limits<double>::infinity();
    return chart;
  }
  chart.predictor_ = -Eigen::JacobiSVD<CMatrix>(columns(jac, chart.dependent_), Eigen::ComputeThinU | Eigen::ComputeThinV)
                          .solve(columns(jac, chart.free_));

  // Probe rays: continuation along the ray must agree with a direct solve
  // from the anchor predictor, and the dependent block must stay well
  // conditioned.
  chart.domain_radius_ = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(options.probe_seed);
  std::normal_distribution<double> normal;
  const auto m = static_cast<Eigen::Index>(chart.free_.size());
  double first_failure = std::numeric_limits<double>::infinity();
  for (int ray = 0; ray < options.probe_rays; ++ray) {
    CVector v(m);
    for (Eigen::Index j = 0; j < m; ++j) v[j] = Complex(normal(rng), normal(rng));
    v /= v.norm();
    CVector cont = anchor;
    for (double t = options.probe_step; t <= options.probe_max + 1e-12 && t < first_failure; t += options.probe_step) {
      const CVector x = chart.x_anchor_ + t * v;
      CVector next = cont;
      scatter(next, chart.free_, x);
      const CVector prev_x = gather(cont, chart.free_);
      const CMatrix sj = chart.slice_jacobian(cont);
      CVector dep_pred(codim);
      for (std::size_t r = 0; r < chart.dependent_.size(); ++r) {
        const auto row = sj.row(static_cast<Eigen::Index>(chart.dependent_[r]));
        dep_pred[static_cast<Eigen::Index>(r)] = cont[static_cast<Eigen::Index>(chart.dependent_[r])] +
                                                 (row * (x - prev_x))(0);
      }
      scatter(next, chart.dependent_, dep_pred);
      bool ok = chart.correct(next);
      if (ok) {
        CVector direct = anchor;
        scatter(direct, chart.free_, x);
        scatter(direct, chart.dependent_, gather(anchor, chart.dependent_) + chart.predictor_ * (x - chart.x_anchor_));
        ok = chart.correct(direct) && (direct - next).norm() <= 1e-8 * (1.0 + next.norm()) &&
             chart.dependent_condition(next) <= options.max_condition;
      }
      if (!ok) {
        first_failure = std::min(first_failure, t);
        break;
      }
      cont = next;
    }
  }
  chart.domain_radius_ = std::isfinite(first_failure) ? 0.5 * first_failure : 0.5 * options.probe_max;
  return chart;
}

CVector chart_eval(const Chart& chart, Complex s, const CVector& x) {
  if (static_cast<std::size_t>(x.size()) != chart.slice_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "chart parameter has wrong dimension");
  }
  if (chart.slice_dim() > 0 && (x - chart.x_anchor()).norm() > chart.domain_radius() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutsideChartDomain, "slice parameter outside the chart domain");
  }
  const CVector slice = chart.slice_point(x);
  return act(s, chart.variety().weights(), slice);
}

ChartCoordinates chart_invert(const Chart& chart, const CVector& z) {
  const std::size_t n = chart.variety().ambient_dim();
  if (static_cast<std::size_t>(z.size()) != n) throw Error(ErrorCode::DimensionMismatch, "point dimension mismatch");
  const auto p = static_cast<Eigen::Index>(chart.pivot());
  const Complex ratio = z[p] / chart.anchor()[p];
  if (z.norm() == 0.0 || ratio == Complex(0.0, 0.0)) throw Error(ErrorCode::NotInChart, "point has zero pivot coordinate");
  const Weights& beta = chart.variety().weights();
  const int bp = beta[chart.pivot()];

  Complex best_s;
  CVector best_slice;
  double best = std::numeric_limits<double>::infinity();
  const double mod = std::pow(std::abs(ratio), 1.0 / bp);
  for (int j = 0; j < bp; ++j) {
    const Complex s = std::polar(mod, (std::arg(ratio) + 2.0 * kPi * j) / bp);
    CVector slice = act(1.0 / s, beta, z);
    if (bp == 1) slice[p] = chart.anchor()[p];
    const double dist = (slice - chart.anchor()).norm();
    if (dist < best) {
      best = dist;
      best_s = s;
      best_slice = std::move(slice);
    }
  }
  ChartCoordinates out{best_s, gather(best_slice, chart.free_indices())};
  if (chart.slice_dim() > 0 && (out.x - chart.x_anchor()).norm() > chart.domain_radius()) {
    throw Error(ErrorCode::NotInChart, "point lies outside the chart domain");
  }
  CVector back;
  try {
    back = chart_eval(chart, out.s, out.x);
  } catch (const Error&) {
    throw Error(ErrorCode::NotInChart, "slice correction failed while inverting");
  }
  if ((back - z).norm() > 1e-8 * std::max(1.0, z.norm())) {
    throw Error(ErrorCode::NotInChart, "point is not in the image of the chart");
  }
  return out;
}

CMatrix chart_differential(const Chart& chart, Complex s, const CVector& x) {
  if (chart.slice_dim() > 0 && (x - chart.x_anchor()).norm() > chart.domain_radius() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutsideChartDomain, "slice parameter outside the chart domain");
  }
  const CVector slice = chart.slice_point(x);
  const CMatrix sj = chart.slice_jacobian(slice);
  const Weights& beta = chart.variety().weights();
  const auto n = static_cast<Eigen::Index>(beta.size());
  const auto m = sj.cols();
  CMatrix out(n, m + 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    const int b = beta[static_cast<std::size_t>(k)];
    out(k, 0) = static_cast<double>(b) * int_pow(s, b - 1) * slice[k];
    const Complex sb = int_pow(s, b);
    for (Eigen::Index j = 0; j < m; ++j) out(k, j + 1) = sb * sj(k, j);
  }
  return out;
}

PulledBack pullback_form(const Chart& chart, const ZeroOneForm& form, Complex s, const CVector& x) {
  const CVector z = chart_eval(chart, s, x);
  const CVector f = form.evaluate(z);
  const CMatrix dpi = chart_differential(chart, s, x);
  // Π* dz̄_k = Σ_j conj(∂Π_k/∂t_j) dt̄_j, so the pulled-back coefficients are Dᴴ f.
  const CVector F = dpi.adjoint() * f;
  return PulledBack{F[0], F.tail(F.size() - 1)};
}

}  // namespace dbarcone
