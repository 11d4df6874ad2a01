#include "dbarcone/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dbarcone/error.hpp"
#include "dbarcone/parallel.hpp"

namespace dbarcone {

namespace {

constexpr std::size_t kChunks = 32;
constexpr int kStrata = 64;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t stage, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stage), static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

std::pair<std::size_t, std::size_t> chunk_range(std::size_t total, std::size_t c) {
  return {total * c / kChunks, total * (c + 1) / kChunks};
}

CVector gaussian_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = Complex(normal(rng), normal(rng));
  return v;
}

void require_hypersurface_cone(const Variety& variety, const char* what) {
  variety.require_pure_dim(what);
  if (!variety.is_cone() || !variety.is_hypersurface()) {
    throw Error(ErrorCode::UnsupportedVariety,
                std::string(what) + " supports hypersurface cones only; use the Theta reduction for weighted varieties");
  }
}

/// Roots of Σ c_i t^i (ascending) via the companion matrix, Newton-polished.
std::vector<Complex> polynomial_roots(std::vector<Complex> c) {
  double scale = 0.0;
  for (const Complex& a : c) scale = std::max(scale, std::abs(a));
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  const auto deg = static_cast<Eigen::Index>(c.size()) - 1;
  if (deg < 1) return {};
  CMatrix companion = CMatrix::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) companion(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<CMatrix> es(companion, false);
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  for (Complex& t : roots) {
    for (int it = 0; it < 3; ++it) {
      Complex p = c.back();
      Complex dp(0.0, 0.0);
      for (auto i = c.size() - 1; i-- > 0;) {
        dp = dp * t + p;
        p = p * t + c[i];
      }
      if (dp == Complex(0.0, 0.0)) break;
      const Complex step = p / dp;
      if (!std::isfinite(std::abs(step))) break;
      t -= step;
    }
  }
  return roots;
}

struct CroftonResult {
  std::vector<CVector> points;  // intersection points inside B_1
  Welford counts;
};

/// Random complex lines meeting B_1: direction uniform on the sphere, foot
/// point uniform in the unit ball of the orthogonal complement.
CroftonResult crofton(const Variety& variety, std::size_t lines, std::uint64_t seed, int threads) {
  const SparsePolynomial& q = variety.polynomials().front();
  const std::size_t n = variety.ambient_dim();
  std::vector<CroftonResult> parts(kChunks);
  parallel_for(kChunks, threads, [&](std::size_t c) {
    auto rng = stream(seed, 1, c);
    std::uniform_real_distribution<double> uniform;
    const auto [begin, end] = chunk_range(lines, c);
    for (std::size_t i = begin; i < end; ++i) {
      CVector v = gaussian_vector(n, rng);
      v /= v.norm();
      CVector p = gaussian_vector(n, rng);
      p -= v.dot(p) * v;
      p *= std::pow(uniform(rng), 1.0 / (2.0 * static_cast<double>(n) - 2.0)) / p.norm();
      std::size_t hits = 0;
      for (const Complex& t : polynomial_roots(q.restrict_to_line(p, v))) {
        const CVector z = p + t * v;
        if (z.norm() < 1.0) {
          parts[c].points.push_back(z);
          ++hits;
        }
      }
      parts[c].counts.add(static_cast<double>(hits));
    }
  });
  CroftonResult out;
  for (auto& part : parts) {
    out.points.insert(out.points.end(), part.points.begin(), part.points.end());
    out.counts.merge(part.counts);
  }
  return out;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

double orbit_scale_to_norm(const Weights& weights, const CVector& z, double target) {
  if (z.norm() == 0.0) throw Error(ErrorCode::InvalidArgument, "orbit_scale_to_norm: zero point");
  auto norm_at = [&](double t) { return act(Complex(t, 0.0), weights, z).norm(); };
  double lo = 0.0;
  double hi = 1.0;
  while (norm_at(hi) < target) {
    lo = hi;
    hi *= 2.0;
  }
  while (lo == 0.0 && norm_at(hi * 0.5) >= target) hi *= 0.5;
  if (lo == 0.0) lo = 0.5 * hi;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (norm_at(mid) >= target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

LinkSample sample_link(const Variety& variety, std::size_t count, std::uint64_t seed, double tol) {
  variety.require_pure_dim("sample_link");
  const std::size_t n = variety.ambient_dim();
  const double radius = std::sqrt(static_cast<double>(n));
  LinkSample out;
  out.seeds_used = seed;
  auto rng = stream(seed, 0, 0);
  const std::size_t max_attempts = 10 * count + 10;
  std::size_t attempts = 0;
  while (out.points.size() < count) {
    if (attempts >= max_attempts) {
      throw Error(ErrorCode::InsufficientSamples, "sample_link: " + std::to_string(out.failures) + " of " +
                                                      std::to_string(attempts) + " projections failed");
    }
    ++attempts;
    CVector z0 = gaussian_vector(n, rng);
    z0 *= radius / z0.norm();
    try {
      CVector z = project_to_variety(variety, z0, tol, 100);
      if (z.norm() < 1e-6) throw Error(ErrorCode::ConvergedToSingular, "projection reached the origin");
      z = act(Complex(orbit_scale_to_norm(variety.weights(), z, radius), 0.0), variety.weights(), z);
      if (!contains(variety, z, 10.0 * tol) || !is_regular(variety, z, 10.0 * tol)) {
        throw Error(ErrorCode::ConvergedToSingular, "link point rejected");
      }
      out.points.push_back(std::move(z));
    } catch (const Error&) {
      ++out.failures;
    }
  }
  return out;
}

MonteCarloEstimate surface_integral(const Variety& variety, const std::function<double(const CVector&)>& phi,
                                    double rho, const SamplingOptions& options) {
  require_hypersurface_cone(variety, "surface_integral");
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "surface_integral: rho must be > 0");
  if (options.n_samples < 2) throw Error(ErrorCode::InvalidArgument, "surface_integral: need at least 2 samples");
  const int n = static_cast<int>(variety.ambient_dim());
  const int d = *variety.pure_dim();
  const std::size_t lines = options.n_lines > 0 ? options.n_lines : options.n_samples;

  const CroftonResult cr = crofton(variety, lines, options.seed, options.threads);
  if (cr.points.empty()) throw Error(ErrorCode::InsufficientSamples, "surface_integral: no line met the variety");
  // vol(Σ ∩ B_1) = n · vol(B^{2n−2}_1) · E[#(line ∩ Σ ∩ B_1)].
  const double ball = std::pow(kPi, n - 1) / factorial(n - 1);
  const double volume = n * ball * cr.counts.mean;
  const double volume_se = n * ball * cr.counts.std_error();

  std::vector<Welford> parts(kChunks);
  parallel_for(kChunks, options.threads, [&](std::size_t c) {
    auto rng = stream(options.seed, 2, c);
    std::uniform_real_distribution<double> uniform;
    std::uniform_int_distribution<std::size_t> pick(0, cr.points.size() - 1);
    const auto [begin, end] = chunk_range(options.n_samples, c);
    for (std::size_t i = begin; i < end; ++i) {
      const CVector& p = cr.points[pick(rng)];
      const double u = (static_cast<double>(i % kStrata) + uniform(rng)) / kStrata;
      const double r = rho * std::pow(u, 1.0 / (2.0 * d));
      parts[c].add(phi((r / p.norm()) * p));
    }
  });
  Welford acc;
  for (const auto& part : parts) acc.merge(part);

  const double scale = volume * std::pow(rho, 2 * d);
  MonteCarloEstimate out;
  out.samples = acc.n;
  out.value = scale * acc.mean;
  const double a = volume_se * std::pow(rho, 2 * d) * acc.mean;
  const double b = scale * acc.std_error();
  out.std_error = std::sqrt(a * a + b * b);
  return out;
}

MonteCarloEstimate l2_norm_function(const Variety& variety, const std::function<Complex(const CVector&)>& h, double rho,
                                    const SamplingOptions& options) {
  const MonteCarloEstimate sq =
      surface_integral(variety, [&h](const CVector& z) { return std::norm(h(z)); }, rho, options);
  MonteCarloEstimate out;
  out.samples = sq.samples;
  out.value = std::sqrt(std::max(sq.value, 0.0));
  out.std_error = out.value > 0.0 ? sq.std_error / (2.0 * out.value) : std::sqrt(sq.std_error);
  return out;
}

double pointwise_form_norm(const Variety& variety, const ZeroOneForm& form, const CVector& z) {
  const CVector f = form.evaluate(z);
  if (f.squaredNorm() == 0.0) return 0.0;
  // λ(v̄) = vᴴ f for a tangent vector v, so the restriction has coefficients Tᴴ f.
  const CMatrix T = tangent_basis(variety, z);
  return (T.adjoint() * f).norm();
}

MonteCarloEstimate l2_norm_form(const Variety& variety, const ZeroOneForm& form, double rho,
                                const SamplingOptions& options) {
  return l2_norm_function(
      variety, [&](const CVector& z) { return Complex(pointwise_form_norm(variety, form, z), 0.0); }, rho, options);
}

namespace {

constexpr double kPathTol = 1e-12;

struct Candidate {
  PathApprox path;
  bool ok = false;
};

void finish_path(PathApprox& path, double scale) {
  path.length = 0.0;
  path.near_singular = false;
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    if (path.waypoints[i].norm() < 1e-3 * scale) path.near_singular = true;
    if (i > 0) path.length += (path.waypoints[i] - path.waypoints[i - 1]).norm();
  }
}

/// Waypoints of the projected segment [a, b], endpoints kept exactly.
bool projected_segment(const Variety& variety, const CVector& a, const CVector& b, int steps,
                       std::vector<CVector>& out) {
  out.push_back(a);
  for (int j = 1; j < steps; ++j) {
    const CVector node = a + (b - a) * (static_cast<double>(j) / steps);
    try {
      out.push_back(project_to_variety(variety, node, kPathTol, 100));
    } catch (const Error& e) {
      // Nodes through the singular point are still on Σ.
      if (e.code() != ErrorCode::ConvergedToSingular) return false;
      out.push_back(node);
    }
  }
  out.push_back(b);
  return true;
}

/// Slide a along its orbit to norm ‖b‖, then take the projected segment to b.
bool two_leg(const Variety& variety, const CVector& a, const CVector& b, int steps, std::vector<CVector>& out) {
  const Weights& beta = variety.weights();
  if (a.norm() == 0.0 || b.norm() == 0.0) return false;
  const double t_end = orbit_scale_to_norm(beta, a, b.norm());
  for (int j = 0; j < steps; ++j) {
    const double t = 1.0 + (t_end - 1.0) * static_cast<double>(j) / steps;
    out.push_back(act(Complex(t, 0.0), beta, a));
  }
  std::vector<CVector> rest;
  if (!projected_segment(variety, act(Complex(t_end, 0.0), beta, a), b, steps, rest)) return false;
  out.insert(out.end(), rest.begin(), rest.end());
  return true;
}

bool lexicographically_less(const CVector& a, const CVector& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a[k].real() != b[k].real()) return a[k].real() < b[k].real();
    if (a[k].imag() != b[k].imag()) return a[k].imag() < b[k].imag();
  }
  return false;
}

}  // namespace

PathApprox approximate_path(const Variety& variety, const CVector& z, const CVector& w, int steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "approximate_path: steps must be >= 1");
  if (z.size() != w.size() || static_cast<std::size_t>(z.size()) != variety.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "approximate_path: point dimension mismatch");
  }
  if (z == w) return PathApprox{{z}, 0.0, false};
  // Canonical order makes every candidate independent of argument order.
  const bool swapped = lexicographically_less(w, z);
  const CVector& a = swapped ? w : z;
  const CVector& b = swapped ? z : w;
  const double scale = std::max(a.norm(), b.norm());

  std::vector<Candidate> candidates(3);
  candidates[0].ok = projected_segment(variety, a, b, steps, candidates[0].path.waypoints);
  candidates[1].ok = two_leg(variety, a, b, steps, candidates[1].path.waypoints);
  candidates[2].ok = two_leg(variety, b, a, steps, candidates[2].path.waypoints);
  if (candidates[2].ok) std::reverse(candidates[2].path.waypoints.begin(), candidates[2].path.waypoints.end());

  const Candidate* best = nullptr;
  for (auto& c : candidates) {
    if (!c.ok) continue;
    finish_path(c.path, scale);
    if (!best || c.path.length < best->path.length) best = &c;
  }
  if (!best) throw Error(ErrorCode::ProjectionFailure, "approximate_path: every candidate path failed to project");
  PathApprox out = best->path;
  if (swapped) std::reverse(out.waypoints.begin(), out.waypoints.end());
  return out;
}

double dist_sigma(const Variety& variety, const CVector& z, const CVector& w, int steps) {
  return approximate_path(variety, z, w, steps).length;
}

}  // namespace dbarcone
