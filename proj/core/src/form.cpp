#include "dbarcone/form.hpp"

#include <algorithm>
#include <cmath>

#include "dbarcone/error.hpp"

namespace dbarcone {

namespace {

double euclidean(std::span<const Complex> z) {
  double s = 0.0;
  for (const Complex& c : z) s += std::norm(c);
  return std::sqrt(s);
}

// Σ |c_α| r^{|α|}: bound on |h| over the ball of radius r.
double coefficient_majorant(const SparsePolynomial& h, double r) {
  double s = 0.0;
  for (const auto& t : h.terms()) {
    int deg = 0;
    for (int e : t.exponents) deg += e;
    s += std::abs(t.coefficient) * std::pow(r, deg);
  }
  return s;
}

}  // namespace

ZeroOneForm::ZeroOneForm(std::size_t dim, CoefficientFn coefficients, double support_radius, double sup_bound,
                         bool dbar_closed, GaugeFn gauge, std::vector<double> kink_levels)
    : dim_(dim),
      coefficients_(std::move(coefficients)),
      support_radius_(support_radius),
      sup_bound_(sup_bound),
      dbar_closed_(dbar_closed),
      gauge_(std::move(gauge)),
      kinks_(std::move(kink_levels)) {
  if (dim_ < 2) throw Error(ErrorCode::InvalidArgument, "form dimension must be at least 2");
  if (!(support_radius_ > 0.0) || !std::isfinite(support_radius_)) {
    throw Error(ErrorCode::InvalidArgument, "form support radius must be finite and > 0");
  }
  if (!(sup_bound_ >= 0.0)) throw Error(ErrorCode::InvalidArgument, "form sup bound must be >= 0");
  std::erase_if(kinks_, [&](double k) { return !(k > 0.0 && k < support_radius_); });
  std::sort(kinks_.begin(), kinks_.end());
  kinks_.erase(std::unique(kinks_.begin(), kinks_.end()), kinks_.end());
}

double ZeroOneForm::gauge(std::span<const Complex> z) const { return gauge_ ? gauge_(z) : euclidean(z); }

void ZeroOneForm::evaluate(std::span<const Complex> z, std::span<Complex> out) const {
  if (z.size() != dim_ || out.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "form evaluated at point of wrong dimension");
  }
  if (!coefficients_ || gauge(z) >= support_radius_) {
    std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
    return;
  }
  coefficients_(z, out);
}

CVector ZeroOneForm::evaluate(const CVector& z) const {
  CVector out(z.size());
  evaluate(std::span<const Complex>(z.data(), static_cast<std::size_t>(z.size())),
           std::span<Complex>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

ZeroOneForm zero_form(std::size_t dim, double support_radius) {
  return ZeroOneForm(dim, {}, support_radius, 0.0, true);
}

ZeroOneForm scaled(const ZeroOneForm& form, Complex c) {
  if (form.is_zero() || c == Complex(0.0, 0.0)) {
    return ZeroOneForm(form.dim(), {}, form.support_radius(), 0.0, true, form.gauge_function(), form.kink_levels());
  }
  CoefficientFn f = [raw = form.raw_coefficients(), c](std::span<const Complex> z, std::span<Complex> out) {
    raw(z, out);
    for (Complex& v : out) v *= c;
  };
  return ZeroOneForm(form.dim(), std::move(f), form.support_radius(), std::abs(c) * form.sup_bound(),
                     form.dbar_closed(), form.gauge_function(), form.kink_levels());
}

ZeroOneForm sum(const ZeroOneForm& a, const ZeroOneForm& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "sum of forms of different dimension");
  if (a.has_custom_gauge() || b.has_custom_gauge()) {
    throw Error(ErrorCode::InvalidArgument, "sum requires forms with the Euclidean gauge");
  }
  std::vector<double> kinks = a.kink_levels();
  kinks.insert(kinks.end(), b.kink_levels().begin(), b.kink_levels().end());
  // The smaller support boundary becomes a kink of the sum.
  kinks.push_back(std::min(a.support_radius(), b.support_radius()));
  CoefficientFn f = [a, b](std::span<const Complex> z, std::span<Complex> out) {
    std::vector<Complex> tmp(out.size());
    a.evaluate(z, out);
    b.evaluate(z, tmp);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += tmp[k];
  };
  return ZeroOneForm(a.dim(), std::move(f), std::max(a.support_radius(), b.support_radius()),
                     a.sup_bound() + b.sup_bound(), a.dbar_closed() && b.dbar_closed(), {}, std::move(kinks));
}

void validate(const BumpSpec& spec) {
  if (!(spec.r0 >= 0.0) || !(spec.R > spec.r0) || !std::isfinite(spec.R)) {
    throw Error(ErrorCode::InvalidArgument, "bump radii must satisfy 0 <= r0 < R < inf");
  }
}

double bump_cutoff(const BumpSpec& spec, double t) {
  const double a = spec.r0 * spec.r0;
  const double b = spec.R * spec.R;
  if (t <= a) return 1.0;
  if (t >= b) return 0.0;
  const double x = (t - a) / (b - a);
  return 1.0 - x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

double bump_cutoff_derivative(const BumpSpec& spec, double t) {
  const double a = spec.r0 * spec.r0;
  const double b = spec.R * spec.R;
  if (t <= a || t >= b) return 0.0;
  const double x = (t - a) / (b - a);
  return -30.0 * x * x * (1.0 - x) * (1.0 - x) / (b - a);
}

Complex bump_potential(const BumpSpec& spec, std::span<const Complex> z) {
  const double t = std::norm(euclidean(z));
  if (t >= spec.R * spec.R) return Complex(0.0, 0.0);
  return spec.h.evaluate(z) * bump_cutoff(spec, t);
}

ZeroOneForm bump_dbar_form(const BumpSpec& spec) {
  validate(spec);
  const std::size_t n = spec.h.dim();
  CoefficientFn f = [spec](std::span<const Complex> z, std::span<Complex> out) {
    double t = 0.0;
    for (const Complex& c : z) t += std::norm(c);
    const double dchi = bump_cutoff_derivative(spec, t);
    if (dchi == 0.0) {
      std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
      return;
    }
    const Complex hv = spec.h.evaluate(z) * dchi;
    for (std::size_t k = 0; k < z.size(); ++k) out[k] = hv * z[k];
  };
  double sup = 0.0;
  constexpr int kGrid = 2000;
  for (int i = 0; i <= kGrid; ++i) {
    const double r = spec.r0 + (spec.R - spec.r0) * i / kGrid;
    sup = std::max(sup, coefficient_majorant(spec.h, r) * std::abs(bump_cutoff_derivative(spec, r * r)) * r);
  }
  std::vector<double> kinks;
  if (spec.r0 > 0.0) kinks.push_back(spec.r0);
  return ZeroOneForm(n, std::move(f), spec.R, 1.01 * sup, true, {}, std::move(kinks));
}

ZeroOneForm raw_bump_form(const BumpSpec& spec) {
  validate(spec);
  const std::size_t n = spec.h.dim();
  CoefficientFn f = [spec](std::span<const Complex> z, std::span<Complex> out) {
    std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
    out[0] = bump_potential(spec, z);
  };
  std::vector<double> kinks;
  if (spec.r0 > 0.0) kinks.push_back(spec.r0);
  return ZeroOneForm(n, std::move(f), spec.R, 1.01 * coefficient_majorant(spec.h, spec.R), false, {},
                     std::move(kinks));
}

}  // namespace dbarcone
