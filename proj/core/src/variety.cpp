#include "dbarcone/variety.hpp"

#include <algorithm>
#include <cmath>

#include "dbarcone/error.hpp"

namespace dbarcone {

Variety::Variety(Weights weights, std::vector<SparsePolynomial> polynomials, std::optional<int> pure_dim)
    : weights_(std::move(weights)), polys_(std::move(polynomials)), pure_dim_(pure_dim) {
  if (polys_.empty()) throw Error(ErrorCode::InvalidArgument, "variety needs at least one polynomial");
  degrees_.reserve(polys_.size());
  for (std::size_t k = 0; k < polys_.size(); ++k) {
    if (polys_[k].dim() != weights_.size()) {
      throw Error(ErrorCode::DimensionMismatch, "polynomial " + std::to_string(k + 1) + " has " +
                                                    std::to_string(polys_[k].dim()) + " variables, ambient dimension is " +
                                                    std::to_string(weights_.size()));
    }
    const int d = weighted_degree(polys_[k], weights_);
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "polynomial " + std::to_string(k + 1) + " is constant");
    degrees_.push_back(d);
  }
  if (pure_dim_ && (*pure_dim_ < 1 || *pure_dim_ >= static_cast<int>(weights_.size()))) {
    throw Error(ErrorCode::InvalidArgument, "pure_dim must lie in [1, n-1]");
  }
}

int Variety::require_pure_dim(const char* what) const {
  if (!pure_dim_) throw Error(ErrorCode::InvalidArgument, std::string(what) + " requires pure_dim");
  return *pure_dim_;
}

bool Variety::is_hypersurface() const noexcept {
  return polys_.size() == 1 && pure_dim_ && *pure_dim_ == static_cast<int>(ambient_dim()) - 1;
}

CVector Variety::residuals(const CVector& z) const {
  CVector q(static_cast<Eigen::Index>(polys_.size()));
  for (std::size_t k = 0; k < polys_.size(); ++k) q[static_cast<Eigen::Index>(k)] = polys_[k].evaluate(z);
  return q;
}

CMatrix Variety::jacobian(const CVector& z) const {
  CVector q;
  CMatrix jac;
  residuals_and_jacobian(z, q, jac);
  return jac;
}

void Variety::residuals_and_jacobian(const CVector& z, CVector& q, CMatrix& jac) const {
  const auto rows = static_cast<Eigen::Index>(polys_.size());
  q.resize(rows);
  jac.resize(rows, static_cast<Eigen::Index>(ambient_dim()));
  CVector grad;
  for (Eigen::Index k = 0; k < rows; ++k) {
    q[k] = polys_[static_cast<std::size_t>(k)].evaluate_with_gradient(z, grad);
    jac.row(k) = grad.transpose();
  }
}

CVector act(Complex s, const Weights& weights, const CVector& z) {
  if (static_cast<std::size_t>(z.size()) != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "act: point and weights differ in length");
  }
  CVector out(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const int b = weights[static_cast<std::size_t>(k)];
    Complex p = s;
    for (int e = 1; e < b; ++e) p *= s;
    out[k] = p * z[k];
  }
  return out;
}

double membership_scale(const Variety& variety, std::size_t k, const CVector& z) {
  const double exponent = static_cast<double>(variety.degrees()[k]) / variety.weights().min();
  return std::max(1.0, std::pow(z.norm(), exponent));
}

bool contains(const Variety& variety, const CVector& z, double tol) {
  if (static_cast<std::size_t>(z.size()) != variety.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "contains: point dimension mismatch");
  }
  const auto& polys = variety.polynomials();
  for (std::size_t k = 0; k < polys.size(); ++k) {
    if (std::abs(polys[k].evaluate(z)) > tol * membership_scale(variety, k, z)) return false;
  }
  return true;
}

int jacobian_rank(const Variety& variety, const CVector& z, double rank_tol) {
  const CMatrix jac = variety.jacobian(z);
  Eigen::JacobiSVD<CMatrix> svd(jac);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > rank_tol * sv[0]) ++rank;
  }
  return rank;
}

bool is_regular(const Variety& variety, const CVector& z, double tol, double rank_tol) {
  const int d = variety.require_pure_dim("is_regular");
  if (!contains(variety, z, tol)) throw Error(ErrorCode::NotOnVariety, "is_regular: point is not on the variety");
  return jacobian_rank(variety, z, rank_tol) == static_cast<int>(variety.ambient_dim()) - d;
}

CMatrix tangent_basis(const Variety& variety, const CVector& z, double rank_tol) {
  const int d = variety.require_pure_dim("tangent_basis");
  const CMatrix jac = variety.jacobian(z);
  Eigen::JacobiSVD<CMatrix> svd(jac, Eigen::ComputeFullV);
  const auto n = static_cast<Eigen::Index>(variety.ambient_dim());
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[0] > 0.0 && sv[i] > rank_tol * sv[0]) ++rank;
  }
  if (rank != n - d) {
    throw Error(ErrorCode::ConvergedToSingular, "tangent_basis: point is not regular (rank " + std::to_string(rank) + ")");
  }
  return svd.matrixV().rightCols(d);
}

CVector project_to_variety(const Variety& variety, const CVector& z0, double tol, int max_iter, double rank_tol) {
  if (static_cast<std::size_t>(z0.size()) != variety.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "project_to_variety: point dimension mismatch");
  }
  if (contains(variety, z0, tol)) return z0;

  CVector z = z0;
  CVector q;
  CMatrix jac;
  variety.residuals_and_jacobian(z, q, jac);
  double merit = q.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    Eigen::JacobiSVD<CMatrix> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(rank_tol);
    const CVector step = -svd.solve(q);
    if (!step.allFinite()) break;
    double alpha = 1.0;
    CVector trial;
    CVector q_trial;
    bool accepted = false;
    for (int h = 0; h < 40; ++h) {
      trial = z + alpha * step;
      q_trial = variety.residuals(trial);
      if (q_trial.squaredNorm() < merit) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    z = trial;
    variety.residuals_and_jacobian(z, q, jac);
    merit = q.squaredNorm();
    if (contains(variety, z, tol)) {
      if (variety.pure_dim() && !is_regular(variety, z, tol, rank_tol)) {
        throw Error(ErrorCode::ConvergedToSingular, "projection reached a singular point");
      }
      return z;
    }
  }
  throw Error(ErrorCode::NoConvergence, "projection did not reach the variety within " + std::to_string(max_iter) +
                                            " iterations (residual " + std::to_string(std::sqrt(merit)) + ")");
}

}  // namespace dbarcone
