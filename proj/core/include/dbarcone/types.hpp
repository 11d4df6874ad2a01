#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace dbarcone {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

}  // namespace dbarcone
