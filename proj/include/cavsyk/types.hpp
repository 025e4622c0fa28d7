#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <type_traits>

namespace cavsyk {

using Index = Eigen::Index;
using cplx = std::complex<double>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::MatrixXd;
using Eigen::MatrixXcd;
using Eigen::VectorXd;
using Eigen::VectorXcd;

template <typename Scalar>
inline constexpr bool is_complex_v = Eigen::NumTraits<Scalar>::IsComplex;

// Real-valued field on the grid, stored column-major: value(ix, iy).
using ScalarField = MatrixXd;
using ComplexField = MatrixXcd;

}  // namespace cavsyk
