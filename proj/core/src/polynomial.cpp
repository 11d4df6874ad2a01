#include "dbarcone/polynomial.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "dbarcone/error.hpp"

namespace dbarcone {

Weights::Weights(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "weights: ambient dimension must be at least 2");
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k] < 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "weights: entry " + std::to_string(k + 1) + " is " + std::to_string(entries_[k]) +
                      ", must be >= 1");
    }
  }
}

int Weights::min() const noexcept { return *std::min_element(entries_.begin(), entries_.end()); }

bool Weights::is_cone() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](int b) { return b == 1; });
}

SparsePolynomial::SparsePolynomial(std::size_t dim, std::vector<Term> terms) : dim_(dim), max_exp_(dim, 0) {
  std::map<std::vector<int>, Complex> merged;
  for (auto& t : terms) {
    if (t.exponents.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "polynomial term has " + std::to_string(t.exponents.size()) +
                                                    " exponents, expected " + std::to_string(dim));
    }
    for (int e : t.exponents) {
      if (e < 0) throw Error(ErrorCode::InvalidArgument, "polynomial exponents must be nonnegative");
    }
    merged[t.exponents] += t.coefficient;
  }
  for (auto& [exps, c] : merged) {
    if (c == Complex(0.0, 0.0)) continue;
    for (std::size_t k = 0; k < dim; ++k) max_exp_[k] = std::max(max_exp_[k], exps[k]);
    terms_.push_back(Term{exps, c});
  }
}

int SparsePolynomial::total_degree() const noexcept {
  int deg = 0;
  for (const auto& t : terms_) {
    int d = 0;
    for (int e : t.exponents) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

namespace {

// Power table laid out variable by variable: z_k^e at offset[k] + e.
struct PowerTable {
  std::vector<Complex> values;
  std::vector<std::size_t> offset;

  PowerTable(std::span<const Complex> z, const std::vector<int>& max_exp) : offset(z.size()) {
    std::size_t total = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      offset[k] = total;
      total += static_cast<std::size_t>(max_exp[k]) + 1;
    }
    values.resize(total);
    for (std::size_t k = 0; k < z.size(); ++k) {
      Complex p(1.0, 0.0);
      for (int e = 0; e <= max_exp[k]; ++e) {
        values[offset[k] + e] = p;
        p *= z[k];
      }
    }
  }

  Complex pow(std::size_t k, int e) const { return values[offset[k] + static_cast<std::size_t>(e)]; }
};

}  // namespace

Complex SparsePolynomial::evaluate(std::span<const Complex> z) const {
  if (z.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "polynomial evaluated at point of wrong dimension");
  const PowerTable table(z, max_exp_);
  Complex sum(0.0, 0.0);
  for (const auto& t : terms_) {
    Complex m = t.coefficient;
    for (std::size_t k = 0; k < dim_; ++k) {
      if (t.exponents[k] != 0) m *= table.pow(k, t.exponents[k]);
    }
    sum += m;
  }
  return sum;
}

Complex SparsePolynomial::evaluate_with_gradient(const CVector& z, CVector& grad) const {
  if (static_cast<std::size_t>(z.size()) != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "polynomial evaluated at point of wrong dimension");
  }
  const PowerTable table(std::span<const Complex>(z.data(), dim_), max_exp_);
  grad = CVector::Zero(static_cast<Eigen::Index>(dim_));
  Complex sum(0.0, 0.0);
  for (const auto& t : terms_) {
    Complex m = t.coefficient;
    for (std::size_t k = 0; k < dim_; ++k) {
      if (t.exponents[k] != 0) m *= table.pow(k, t.exponents[k]);
    }
    sum += m;
    for (std::size_t j = 0; j < dim_; ++j) {
      const int ej = t.exponents[j];
      if (ej == 0) continue;
      Complex d = t.coefficient * static_cast<double>(ej);
      for (std::size_t k = 0; k < dim_; ++k) {
        const int e = (k == j) ? ej - 1 : t.exponents[k];
        if (e != 0) d *= table.pow(k, e);
      }
      grad[static_cast<Eigen::Index>(j)] += d;
    }
  }
  return sum;
}

CVector SparsePolynomial::gradient(const CVector& z) const {
  CVector g;
  evaluate_with_gradient(z, g);
  return g;
}

SparsePolynomial SparsePolynomial::compose_powers(const Weights& powers) const {
  if (powers.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "compose_powers: weight length mismatch");
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term c{t.exponents, t.coefficient};
    for (std::size_t k = 0; k < dim_; ++k) c.exponents[k] *= powers[k];
    out.push_back(std::move(c));
  }
  return SparsePolynomial(dim_, std::move(out));
}

std::vector<Complex> SparsePolynomial::restrict_to_line(const CVector& p, const CVector& v) const {
  if (static_cast<std::size_t>(p.size()) != dim_ || static_cast<std::size_t>(v.size()) != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "restrict_to_line: point dimension mismatch");
  }
  const int deg = total_degree();
  // (p_k + t v_k)^e as ascending coefficient lists, built incrementally.
  std::vector<std::vector<std::vector<Complex>>> powers(dim_);
  for (std::size_t k = 0; k < dim_; ++k) {
    powers[k].push_back({Complex(1.0, 0.0)});
    for (int e = 1; e <= max_exp_[k]; ++e) {
      const auto& prev = powers[k].back();
      std::vector<Complex> next(prev.size() + 1, Complex(0.0, 0.0));
      for (std::size_t i = 0; i < prev.size(); ++i) {
        next[i] += prev[i] * p[static_cast<Eigen::Index>(k)];
        next[i + 1] += prev[i] * v[static_cast<Eigen::Index>(k)];
      }
      powers[k].push_back(std::move(next));
    }
  }
  std::vector<Complex> result(static_cast<std::size_t>(deg) + 1, Complex(0.0, 0.0));
  for (const auto& t : terms_) {
    std::vector<Complex> acc{t.coefficient};
    for (std::size_t k = 0; k < dim_; ++k) {
      if (t.exponents[k] == 0) continue;
      const auto& f = powers[k][static_cast<std::size_t>(t.exponents[k])];
      std::vector<Complex> prod(acc.size() + f.size() - 1, Complex(0.0, 0.0));
      for (std::size_t i = 0; i < acc.size(); ++i) {
        for (std::size_t j = 0; j < f.size(); ++j) prod[i + j] += acc[i] * f[j];
      }
      acc = std::move(prod);
    }
    for (std::size_t i = 0; i < acc.size(); ++i) result[i] += acc[i];
  }
  return result;
}

std::string SparsePolynomial::monomial_string(const std::vector<int>& exponents) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    if (exponents[k] == 0) continue;
    if (!first) os << '*';
    os << 'z' << (k + 1);
    if (exponents[k] > 1) os << '^' << exponents[k];
    first = false;
  }
  if (first) os << '1';
  return os.str();
}

int weighted_degree(const SparsePolynomial& poly, const Weights& weights) {
  if (poly.dim() != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "weighted_degree: polynomial has " + std::to_string(poly.dim()) +
                                                  " variables but " + std::to_string(weights.size()) + " weights");
  }
  if (poly.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "weighted_degree: polynomial is zero");
  int degree = -1;
  const std::vector<int>* first = nullptr;
  for (const auto& t : poly.terms()) {
    int d = 0;
    for (std::size_t k = 0; k < poly.dim(); ++k) d += weights[k] * t.exponents[k];
    if (degree < 0) {
      degree = d;
      first = &t.exponents;
    } else if (d != degree) {
      throw Error(ErrorCode::NonHomogeneous,
                  "monomial " + SparsePolynomial::monomial_string(t.exponents) + " has weighted degree " +
                      std::to_string(d) + " but " + SparsePolynomial::monomial_string(*first) + " has " +
                      std::to_string(degree));
    }
  }
  return degree;
}

}  // namespace dbarcone
