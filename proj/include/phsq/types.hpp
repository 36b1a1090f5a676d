#pragma once

#include <complex>

#include <Eigen/Dense>

namespace phsq {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Dense complex matrix over a real scalar type.
template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using cplx = std::complex<double>;
using MatrixXc = CMatrix<double>;
using VectorXc = Eigen::VectorXcd;

/// Density matrix of the collective spin in the Dicke basis |m>, m = -N..N.
/// Row/column index i corresponds to m = i - N.
using DickeMatrix = MatrixXc;

}  // namespace phsq
