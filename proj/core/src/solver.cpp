#include "dbarcone/solver.hpp"

#include <cmath>
#include <limits>

#include "dbarcone/error.hpp"

namespace dbarcone {

namespace {

const Complex kInvTwoPiI = 1.0 / (2.0 * kPi * kI);

Complex int_pow(Complex s, int e) {
  Complex p(1.0, 0.0);
  for (int i = 0; i < e; ++i) p *= s;
  return p;
}

void require_on_variety(const Variety& variety, const ZeroOneForm& form, const CVector& z, double tol) {
  if (static_cast<std::size_t>(z.size()) != variety.ambient_dim() || form.dim() != variety.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point, form and variety dimensions differ");
  }
  if (!contains(variety, z, tol)) throw Error(ErrorCode::NotOnVariety, "solve: point is not on the variety");
}

std::vector<double> break_radii(const ZeroOneForm& form, const Weights& weights, const CVector& z) {
  std::vector<double> out;
  for (double level : form.kink_levels()) {
    const double r = orbit_radius(form, weights, z, level);
    if (std::isfinite(r) && r > 0.0) out.push_back(r);
  }
  return out;
}

/// Integrand Σ_k c_k(w)·f_k(w^β*z)/(w − a) with c_k(w) supplied per call.
template <class Weight>
std::function<Complex(Complex)> kernel(const ZeroOneForm& form, const Weights& weights, const CVector& z, Complex a,
                                       Weight weight) {
  const std::size_t n = weights.size();
  return [&form, &weights, z, a, weight, n, point = CVector(static_cast<Eigen::Index>(n)),
          f = std::vector<Complex>(n)](Complex w) mutable -> Complex {
    for (std::size_t k = 0; k < n; ++k) {
      point[static_cast<Eigen::Index>(k)] = int_pow(w, weights[k]) * z[static_cast<Eigen::Index>(k)];
    }
    form.evaluate(std::span<const Complex>(point.data(), n), std::span<Complex>(f.data(), n));
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (f[k] != Complex(0.0, 0.0)) acc += weight(k, w) * f[k];
    }
    return acc / (w - a);
  };
}

SolveResult finish(const PlaneIntegral& r, double W) {
  SolveResult out;
  out.value = kInvTwoPiI * r.value;
  out.quadrature_error = r.error_estimate / (2.0 * kPi);
  out.truncation_radius_used = W;
  out.evaluations = r.evaluations;
  return out;
}

}  // namespace

double orbit_radius(const ZeroOneForm& form, const Weights& weights, const CVector& z, double level) {
  auto g = [&](double r) {
    const CVector p = act(Complex(r, 0.0), weights, z);
    return form.gauge(std::span<const Complex>(p.data(), static_cast<std::size_t>(p.size())));
  };
  if (g(1.0) == 0.0 && g(2.0) == 0.0) return std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (g(hi) < level) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 1100) return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) >= level ? hi : lo) = mid;
  }
  return hi;
}

SolveResult solve(const Variety& variety, const ZeroOneForm& form, const CVector& z, const QuadratureParams& params,
                  double membership_tol) {
  require_on_variety(variety, form, z, membership_tol);
  params.validate();
  if (form.is_zero() || z.norm() == 0.0) return {};
  const Weights& beta = variety.weights();
  const double W = orbit_radius(form, beta, z, form.support_radius());
  const CVector zbar = z.conjugate();
  PlanarIntegrand k;
  k.evaluate = kernel(form, beta, z, Complex(1.0, 0.0), [&beta, zbar](std::size_t j, Complex w) {
    return static_cast<double>(beta[j]) * int_pow(std::conj(w), beta[j] - 1) * zbar[static_cast<Eigen::Index>(j)];
  });
  k.singular_points = {Complex(1.0, 0.0)};
  k.truncation_radius = W;
  k.break_radii = break_radii(form, beta, z);
  return finish(integrate_plane(k, params), W);
}

SolveResult solve_scaled(const Variety& variety, const ZeroOneForm& form, const CVector& z, Complex s,
                         const QuadratureParams& params, double membership_tol) {
  require_on_variety(variety, form, z, membership_tol);
  params.validate();
  if (form.is_zero() || z.norm() == 0.0 || s == Complex(0.0, 0.0)) return {};
  const Weights& beta = variety.weights();
  const double W = orbit_radius(form, beta, z, form.support_radius());
  const CVector zbar = z.conjugate();
  PlanarIntegrand k;
  k.evaluate = kernel(form, beta, z, s, [&beta, zbar](std::size_t j, Complex u) {
    return static_cast<double>(beta[j]) * int_pow(std::conj(u), beta[j] - 1) * zbar[static_cast<Eigen::Index>(j)];
  });
  k.singular_points = {s};
  k.truncation_radius = W;
  k.break_radii = break_radii(form, beta, z);
  return finish(integrate_plane(k, params), W);
}

SolveResult solve_l2(const Variety& variety, const ZeroOneForm& form, const CVector& z, const QuadratureParams& params,
                     double membership_tol) {
  if (!variety.is_cone()) throw Error(ErrorCode::NotACone, "solve_l2 requires unit weights");
  const int d = variety.require_pure_dim("solve_l2");
  require_on_variety(variety, form, z, membership_tol);
  params.validate();
  if (form.is_zero() || z.norm() == 0.0) return {};
  const Weights& beta = variety.weights();
  const double W = orbit_radius(form, beta, z, form.support_radius());
  const CVector zbar = z.conjugate();
  PlanarIntegrand k;
  k.evaluate = kernel(form, beta, z, Complex(1.0, 0.0), [d, zbar](std::size_t j, Complex w) {
    return int_pow(w, d - 1) * zbar[static_cast<Eigen::Index>(j)];
  });
  k.singular_points = {Complex(1.0, 0.0)};
  k.truncation_radius = W;
  k.break_radii = break_radii(form, beta, z);
  return finish(integrate_plane(k, params), W);
}

PlaneIntegral weighted_cauchy_pompeiu(const std::function<Complex(Complex)>& F0, int m, Complex s,
                                      double support_radius, const QuadratureParams& params,
                                      const std::vector<double>& break_radii) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "weighted_cauchy_pompeiu: m must be >= 0");
  if (m > 0 && s == Complex(0.0, 0.0)) {
    throw Error(ErrorCode::ZeroScaleWithWeight, "weighted_cauchy_pompeiu: s = 0 with m > 0");
  }
  if (m == 0) return cauchy_transform(F0, support_radius, s, params, break_radii);
  PlanarIntegrand k;
  k.evaluate = [&F0, m, s](Complex u) { return int_pow(u, m) * F0(u) / (u - s); };
  k.singular_points = {s};
  k.truncation_radius = support_radius;
  k.break_radii = break_radii;
  PlaneIntegral r = integrate_plane(k, params);
  const Complex factor = kInvTwoPiI / int_pow(s, m);
  r.value *= factor;
  r.error_estimate *= std::abs(factor);
  r.excluded_estimate *= std::abs(factor);
  return r;
}

CVector theta_map(const Weights& weights, const CVector& z) {
  if (static_cast<std::size_t>(z.size()) != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "theta_map: point and weights differ in length");
  }
  CVector out(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) out[k] = int_pow(z[k], weights[static_cast<std::size_t>(k)]);
  return out;
}

ZeroOneForm theta_pullback_form(const ZeroOneForm& form, const Weights& weights) {
  if (form.dim() != weights.size()) throw Error(ErrorCode::DimensionMismatch, "theta_pullback_form: dimension mismatch");
  const std::size_t n = weights.size();
  auto to_x = [weights](std::span<const Complex> z) {
    CVector x(static_cast<Eigen::Index>(z.size()));
    for (std::size_t k = 0; k < z.size(); ++k) x[static_cast<Eigen::Index>(k)] = int_pow(z[k], weights[k]);
    return x;
  };
  GaugeFn gauge = [form, to_x](std::span<const Complex> z) {
    const CVector x = to_x(z);
    return form.gauge(std::span<const Complex>(x.data(), z.size()));
  };
  CoefficientFn coeffs;
  if (!form.is_zero()) {
    coeffs = [form, weights, to_x](std::span<const Complex> z, std::span<Complex> out) {
      const CVector x = to_x(z);
      form.evaluate(std::span<const Complex>(x.data(), z.size()), out);
      for (std::size_t k = 0; k < z.size(); ++k) {
        out[k] *= static_cast<double>(weights[k]) * int_pow(std::conj(z[k]), weights[k] - 1);
      }
    };
  }
  // |z_k|^{β_k−1} ≤ R^{(β_k−1)/β_k} on the support.
  const double R = form.support_radius();
  double factor = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double b = weights[k];
    factor += b * b * std::pow(R, 2.0 * (b - 1.0) / b);
  }
  return ZeroOneForm(n, std::move(coeffs), R, form.sup_bound() * std::sqrt(factor), form.dbar_closed(),
                     std::move(gauge), form.kink_levels());
}

Variety theta_cone(const Variety& weighted) {
  std::vector<SparsePolynomial> polys;
  for (const auto& q : weighted.polynomials()) polys.push_back(q.compose_powers(weighted.weights()));
  return Variety(Weights::ones(weighted.ambient_dim()), std::move(polys), weighted.pure_dim());
}

ThetaCrossCheck solve_weighted_via_cone(const Variety& weighted, const ZeroOneForm& form, const CVector& x,
                                        const QuadratureParams& params, double membership_tol) {
  if (static_cast<std::size_t>(x.size()) != weighted.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "solve_weighted_via_cone: point dimension mismatch");
  }
  CVector z(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const int b = weighted.weights()[static_cast<std::size_t>(k)];
    z[k] = x[k] == Complex(0.0, 0.0) ? Complex(0.0, 0.0) : std::polar(std::pow(std::abs(x[k]), 1.0 / b), std::arg(x[k]) / b);
  }
  ThetaCrossCheck out;
  out.z = z;
  out.direct = solve(weighted, form, x, params, membership_tol);
  out.via_cone = solve(theta_cone(weighted), theta_pullback_form(form, weighted.weights()), z, params, membership_tol);
  return out;
}

ThetaCrossCheck solve_weighted_via_cone_at(const Variety& weighted, const ZeroOneForm& form, const CVector& z,
                                           const QuadratureParams& params, double membership_tol) {
  ThetaCrossCheck out;
  out.z = z;
  const CVector x = theta_map(weighted.weights(), z);
  out.direct = solve(weighted, form, x, params, membership_tol);
  const Variety cone = theta_cone(weighted);
  const ZeroOneForm pulled = theta_pullback_form(form, weighted.weights());
  out.via_cone = solve(cone, pulled, z, params, membership_tol);
  return out;
}

}  // namespace dbarcone
