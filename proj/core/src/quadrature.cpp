#include "dbarcone/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dbarcone/error.hpp"

namespace dbarcone {

std::string to_string(PanelRule rule) {
  switch (rule) {
    case PanelRule::GaussKronrod15: return "gauss-kronrod-15";
    case PanelRule::GaussKronrod21: return "gauss-kronrod-21";
    case PanelRule::GaussKronrod31: return "gauss-kronrod-31";
  }
  return "unknown";
}

PanelRule panel_rule_from_string(const std::string& name) {
  if (name == "gauss-kronrod-15") return PanelRule::GaussKronrod15;
  if (name == "gauss-kronrod-21") return PanelRule::GaussKronrod21;
  if (name == "gauss-kronrod-31") return PanelRule::GaussKronrod31;
  throw Error(ErrorCode::InvalidArgument, "unknown base rule '" + name + "'");
}

void QuadratureParams::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "quadrature tolerances must be > 0");
  if (max_refinement_depth < 1) throw Error(ErrorCode::InvalidArgument, "max_refinement_depth must be >= 1");
  if (singular_exclusion && !(*singular_exclusion >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "singular_exclusion must be >= 0");
  }
  if (!(exclusion_fraction >= 0.0)) throw Error(ErrorCode::InvalidArgument, "exclusion_fraction must be >= 0");
  if (max_panels < 1) throw Error(ErrorCode::InvalidArgument, "max_panels must be >= 1");
}

double QuadratureParams::exclusion_radius(double truncation_radius) const {
  return singular_exclusion ? *singular_exclusion : exclusion_fraction * truncation_radius;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTwoPi = 2.0 * kPi;

struct PanelTable {
  std::vector<double> x;   // nodes on [-1, 1]
  std::vector<double> wk;  // Kronrod weights
  std::vector<double> wg;  // Gauss weights (0 at Kronrod-only nodes)
};

template <unsigned N>
PanelTable make_table() {
  using kronrod = boost::math::quadrature::gauss_kronrod<double, N>;
  using gauss = boost::math::quadrature::gauss<double, (N - 1) / 2>;
  const auto& ax = kronrod::abscissa();
  const auto& wk = kronrod::weights();
  const auto& wg = gauss::weights();
  const bool center_is_gauss = (((N - 1) / 2) & 1u) != 0;
  PanelTable t;
  t.x.push_back(0.0);
  t.wk.push_back(wk[0]);
  t.wg.push_back(center_is_gauss ? wg[0] : 0.0);
  for (std::size_t i = 1; i < ax.size(); ++i) {
    const bool is_gauss = center_is_gauss ? (i % 2 == 0) : (i % 2 == 1);
    const double g = is_gauss ? wg[i / 2] : 0.0;
    for (double sign : {-1.0, 1.0}) {
      t.x.push_back(sign * ax[i]);
      t.wk.push_back(wk[i]);
      t.wg.push_back(g);
    }
  }
  return t;
}

const PanelTable& table_for(PanelRule rule) {
  static const PanelTable t15 = make_table<15>();
  static const PanelTable t21 = make_table<21>();
  static const PanelTable t31 = make_table<31>();
  switch (rule) {
    case PanelRule::GaussKronrod15: return t15;
    case PanelRule::GaussKronrod31: return t31;
    default: return t21;
  }
}

struct Sample {
  Complex value;
  double error;  // error already carried by this sample (from a nested pass)
};

struct Panel {
  double a;
  double b;
  Complex value;
  double error;    // rule discrepancy, reducible by bisection
  double carried;  // error inherited from nested passes
  double l1;
  int depth;
};

struct PanelOrder {
  bool operator()(const Panel& p, const Panel& q) const { return p.error < q.error; }
};

struct Budget {
  std::size_t remaining;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

template <class F>
Panel apply_rule(const PanelTable& t, F& f, double a, double b, int depth, Budget& budget) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Complex k(0.0, 0.0);
  Complex g(0.0, 0.0);
  double l1 = 0.0;
  double carried = 0.0;
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const Sample s = f(mid + half * t.x[i]);
    k += t.wk[i] * s.value;
    g += t.wg[i] * s.value;
    l1 += t.wk[i] * std::abs(s.value);
    carried += t.wk[i] * s.error;
  }
  budget.panels += 1;
  budget.evaluations += t.x.size();
  if (budget.remaining > 0) budget.remaining -= 1;
  const double ah = std::abs(half);
  return Panel{a, b, k * half, std::abs(k - g) * ah, carried * ah, l1 * ah, depth};
}

struct Adaptive {
  Complex value{0.0, 0.0};
  double error = 0.0;
  double l1 = 0.0;
  bool converged = true;
};

/// Global adaptive bisection over the initial intervals between consecutive
/// `points`. `target(value, l1)` gives the absolute tolerance to reach.
template <class F, class Target>
Adaptive adaptive_integrate(F& f, const std::vector<double>& points, const PanelTable& table, Target target,
                            int max_depth, Budget& budget) {
  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
  Adaptive out;
  double carried = 0.0;
  auto resum = [&] {
    auto copy = heap;
    out = Adaptive{};
    carried = 0.0;
    while (!copy.empty()) {
      out.value += copy.top().value;
      out.error += copy.top().error;
      out.l1 += copy.top().l1;
      carried += copy.top().carried;
      copy.pop();
    }
  };
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    heap.push(apply_rule(table, f, points[i], points[i + 1], 0, budget));
  }
  resum();
  // Only the rule discrepancy is driven below the target; error carried in
  // from nested passes cannot shrink by bisecting this pass.
  int since_resum = 0;
  while (!heap.empty()) {
    const double tol = std::max(target(out.value, out.l1), 50.0 * kEps * out.l1);
    if (out.error <= tol) break;
    Panel worst = heap.top();
    if (worst.depth >= max_depth || budget.remaining == 0) {
      out.converged = false;
      break;
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = apply_rule(table, f, worst.a, mid, worst.depth + 1, budget);
    Panel right = apply_rule(table, f, mid, worst.b, worst.depth + 1, budget);
    out.value += left.value + right.value - worst.value;
    out.error += left.error + right.error - worst.error;
    out.l1 += left.l1 + right.l1 - worst.l1;
    carried += left.carried + right.carried - worst.carried;
    heap.push(left);
    heap.push(right);
    if (++since_resum == 64) {
      since_resum = 0;
      const bool ok = out.converged;
      resum();
      out.converged = ok;
    }
  }
  out.error += carried;
  return out;
}

/// Positive roots r of |c + r e^{iφ}| = radius along the ray; p = Re(conj(c) e^{iφ}).
/// Returns false when the ray's line misses the circle.
bool ray_circle(double p, double c_abs2, double radius, double& r_lo, double& r_hi) {
  const double disc = p * p - c_abs2 + radius * radius;
  if (disc < 0.0) return false;
  const double sq = std::sqrt(disc);
  r_lo = -p - sq;
  r_hi = -p + sq;
  return true;
}

/// Integral over the disk |w| ≤ W of `k` in polar coordinates around `center`,
/// leaving out r < r_min.
struct PolarProblem {
  std::function<Complex(Complex)> k;
  Complex center;
  double W;
  double r_min;
  std::vector<double> breaks;
};

Adaptive integrate_polar(const PolarProblem& prob, const QuadratureParams& params, Budget& budget) {
  const PanelTable& table = table_for(params.base_rule);
  const double c_abs = std::abs(prob.center);
  const double c_abs2 = c_abs * c_abs;
  const double gamma = std::arg(prob.center);

  // Angular range and breakpoints at tangent directions of every circle that
  // does not enclose the center.
  std::vector<double> angles;
  double phi_lo = 0.0;
  double phi_hi = kTwoPi;
  if (c_abs >= prob.W) {
    if (c_abs == 0.0) return {};
    const double half_width = std::asin(std::min(1.0, prob.W / c_abs));
    phi_lo = gamma + kPi - half_width;
    phi_hi = gamma + kPi + half_width;
  } else if (c_abs > 0.0) {
    phi_lo = gamma;
    phi_hi = gamma + kTwoPi;
  }
  angles.push_back(phi_lo);
  angles.push_back(phi_hi);
  if (c_abs > 0.0) {
    for (double b : prob.breaks) {
      if (!(b < c_abs) || !(b > 0.0)) continue;
      const double w = std::asin(std::min(1.0, b / c_abs));
      for (double a : {gamma + kPi - w, gamma + kPi + w}) {
        // Fold into [phi_lo, phi_hi).
        double folded = phi_lo + std::fmod(std::fmod(a - phi_lo, kTwoPi) + kTwoPi, kTwoPi);
        if (folded > phi_lo && folded < phi_hi) angles.push_back(folded);
      }
    }
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double x, double y) { return std::abs(x - y) <= 1e-15 * (1.0 + std::abs(x)); }),
               angles.end());

  const int max_depth = params.max_refinement_depth;
  const double inner_rel = 0.1 * params.rel_tol;
  const double inner_abs = 0.1 * params.abs_tol / kTwoPi;

  std::vector<double> radial;
  bool rays_converged = true;
  auto ray = [&](double phi) -> Sample {
    const Complex dir = std::polar(1.0, phi);
    const double p = std::real(std::conj(prob.center) * dir);
    double lo = 0.0;
    double hi = 0.0;
    if (!ray_circle(p, c_abs2, prob.W, lo, hi)) return {Complex(0.0, 0.0), 0.0};
    lo = std::max(lo, prob.r_min);
    if (!(hi > lo)) return {Complex(0.0, 0.0), 0.0};
    radial.clear();
    radial.push_back(lo);
    radial.push_back(hi);
    for (double b : prob.breaks) {
      double r1 = 0.0;
      double r2 = 0.0;
      if (!ray_circle(p, c_abs2, b, r1, r2)) continue;
      for (double r : {r1, r2}) {
        if (r > lo + 1e-14 * hi && r < hi - 1e-14 * hi) radial.push_back(r);
      }
    }
    std::sort(radial.begin(), radial.end());
    auto integrand = [&](double r) -> Sample { return {prob.k(prob.center + r * dir) * r, 0.0}; };
    auto target = [&](Complex v, double) { return std::max(inner_rel * std::abs(v), inner_abs); };
    const Adaptive a = adaptive_integrate(integrand, radial, table, target, max_depth, budget);
    rays_converged = rays_converged && a.converged;
    return {a.value, a.error};
  };

  // Each angular interval [angles[i], angles[i+1]] is mapped from t ∈ [i, i+1]
  // with the smoothstep substitution, which flattens square-root behavior at
  // tangent directions.
  const auto n_int = angles.size() - 1;
  auto outer = [&](double tau) -> Sample {
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(std::floor(tau)), n_int - 1);
    const double t = tau - static_cast<double>(i);
    const double delta = angles[i + 1] - angles[i];
    const double phi = angles[i] + delta * t * t * (3.0 - 2.0 * t);
    const double jac = 6.0 * delta * t * (1.0 - t);
    if (jac == 0.0) return {Complex(0.0, 0.0), 0.0};
    const Sample s = ray(phi);
    return {s.value * jac, s.error * jac};
  };
  std::vector<double> outer_points(n_int + 1);
  for (std::size_t i = 0; i <= n_int; ++i) outer_points[i] = static_cast<double>(i);
  auto target = [&](Complex v, double) { return std::max(params.abs_tol, params.rel_tol * std::abs(v)); };
  Adaptive result = adaptive_integrate(outer, outer_points, table, target, max_depth, budget);
  result.converged = result.converged && rays_converged;
  return result;
}

/// Bound on the left-out disk |w − a| < ε: ε · |∮ K(a + ε e^{iφ}) ε dφ|.
double excluded_disk_estimate(const std::function<Complex(Complex)>& k, Complex a, double eps, double W,
                              Budget& budget) {
  if (eps <= 0.0) return 0.0;
  constexpr int kRing = 64;
  Complex ring(0.0, 0.0);
  for (int j = 0; j < kRing; ++j) {
    const Complex w = a + std::polar(eps, kTwoPi * j / kRing);
    if (std::abs(w) <= W) ring += k(w);
  }
  budget.evaluations += kRing;
  const double ring_integral = std::abs(ring) * (kTwoPi / kRing) * eps;
  return eps * ring_integral;
}

}  // namespace

PlaneIntegral integrate_area(const PlanarIntegrand& integrand, const QuadratureParams& params) {
  params.validate();
  if (!integrand.evaluate) throw Error(ErrorCode::InvalidArgument, "integrand has no evaluate function");
  const double W = integrand.truncation_radius;
  if (!(W >= 0.0) || !std::isfinite(W)) throw Error(ErrorCode::InvalidArgument, "truncation radius must be finite");
  PlaneIntegral result;
  if (W == 0.0) return result;

  const double eps = params.exclusion_radius(W);
  std::vector<Complex> singular;
  for (const Complex& a : integrand.singular_points) {
    if (std::abs(a) < W + eps) singular.push_back(a);
  }
  for (std::size_t i = 0; i < singular.size(); ++i) {
    for (std::size_t j = i + 1; j < singular.size(); ++j) {
      if (std::abs(singular[i] - singular[j]) <= 4.0 * eps) {
        throw Error(ErrorCode::SingularOverlap, "singular points closer than 4 times the exclusion radius");
      }
    }
  }

  std::vector<double> breaks;
  for (double b : integrand.break_radii) {
    if (b > 0.0 && b < W) breaks.push_back(b);
  }

  Budget budget{params.max_panels};
  Adaptive total;
  bool converged = true;

  if (singular.empty()) {
    PolarProblem prob{integrand.evaluate, Complex(0.0, 0.0), W, 0.0, breaks};
    total = integrate_polar(prob, params, budget);
    converged = total.converged;
  } else {
    // Smooth partition of unity: piece i vanishes quadratically at every other
    // singular point, so each piece has a single singularity at its center.
    for (std::size_t i = 0; i < singular.size(); ++i) {
      std::function<Complex(Complex)> piece = integrand.evaluate;
      if (singular.size() > 1) {
        piece = [&, i](Complex w) -> Complex {
          double num = 0.0;
          double den = 0.0;
          for (std::size_t l = 0; l < singular.size(); ++l) {
            double prod = 1.0;
            for (std::size_t j = 0; j < singular.size(); ++j) {
              if (j != l) prod *= std::norm(w - singular[j]);
            }
            den += prod;
            if (l == i) num = prod;
          }
          if (num == 0.0) return Complex(0.0, 0.0);
          return integrand.evaluate(w) * (num / den);
        };
      }
      PolarProblem prob{piece, singular[i], W, eps, breaks};
      const Adaptive part = integrate_polar(prob, params, budget);
      total.value += part.value;
      total.error += part.error;
      total.l1 += part.l1;
      converged = converged && part.converged;
      result.excluded_estimate += excluded_disk_estimate(piece, singular[i], eps, W, budget);
    }
  }

  result.value = total.value;
  result.error_estimate = total.error + result.excluded_estimate;
  result.evaluations = budget.evaluations;
  result.panels = budget.panels;
  const double tol = std::max({params.abs_tol, params.rel_tol * std::abs(total.value), 50.0 * kEps * total.l1});
  if (!converged && total.error > tol) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "planar quadrature stopped at error %.3e > tolerance %.3e after %zu panels",
                  total.error, tol, budget.panels);
    throw Error(ErrorCode::NoConvergence, msg);
  }
  return result;
}

PlaneIntegral integrate_plane(const PlanarIntegrand& integrand, const QuadratureParams& params) {
  PlaneIntegral r = integrate_area(integrand, params);
  r.value *= Complex(0.0, -2.0);
  r.error_estimate *= 2.0;
  r.excluded_estimate *= 2.0;
  return r;
}

PlaneIntegral cauchy_transform(const std::function<Complex(Complex)>& f, double support_radius, Complex z,
                               const QuadratureParams& params, const std::vector<double>& break_radii) {
  PlanarIntegrand k;
  k.evaluate = [&f, z](Complex u) { return f(u) / (u - z); };
  k.singular_points = {z};
  k.truncation_radius = support_radius;
  k.break_radii = break_radii;
  PlaneIntegral r = integrate_plane(k, params);
  const Complex factor = 1.0 / (2.0 * kPi * kI);
  r.value *= factor;
  r.error_estimate *= std::abs(factor);
  r.excluded_estimate *= std::abs(factor);
  return r;
}

}  // namespace dbarcone
