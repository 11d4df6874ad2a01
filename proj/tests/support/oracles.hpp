#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <type_traits>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;

/// (1/2πi) ∫ f(u)/(u − z) du∧dū = −(1/π) ∫ f(u)/(u − z) dA by a midpoint sum
/// on an n × n grid over the square of half-width L centred at z. The grid
/// has z at a cell corner, and f(z)·φ(|u − z|)/(u − z) is subtracted; the
/// subtracted term sums to zero on the symmetric grid and integrates to zero.
inline Complex grid_cauchy_transform(const std::function<Complex(Complex)>& f, Complex z, double L, int n) {
  const double h = 2.0 * L / n;
  const double delta = 0.25 * L;
  const Complex fz = f(z);
  Complex sum(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = -L + (i + 0.5) * h;
    for (int j = 0; j < n; ++j) {
      const double y = -L + (j + 0.5) * h;
      const Complex d(x, y);
      const double r = std::abs(d);
      const double phi = r < delta ? std::pow(1.0 - (r / delta) * (r / delta), 2) : 0.0;
      sum += (f(z + d) - fz * phi) / d;
    }
  }
  return -sum * h * h / kPi;
}

/// Central complex difference of a holomorphic map t ↦ F(t).
template <class F>
auto holomorphic_derivative(F&& f, Complex t, double h) {
  using R = std::decay_t<decltype(f(t))>;
  return R((f(t + h) - f(t - h)) / (2.0 * h));
}

inline Eigen::VectorXcd random_complex_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (int k = 0; k < n; ++k) v[k] = Complex(normal(rng), normal(rng));
  return v;
}

/// Points on the quadric cone z1 z2 = z3² from the parametrization (a², b², ab).
inline Eigen::VectorXcd quadric_point(Complex a, Complex b) {
  Eigen::VectorXcd z(3);
  z << a * a, b * b, a * b;
  return z;
}

}  // namespace oracle
