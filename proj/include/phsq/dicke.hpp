#pragma once

// Collective spin in the symmetric (Dicke) subspace: ladder operators, the
// x-polarised coherent spin state, moments and the squeezing parameter.

#include <cmath>
#include <string>

#include "phsq/errors.hpp"
#include "phsq/types.hpp"

namespace phsq {

template <typename Scalar = double>
struct CollectiveOperators {
  CMatrix<Scalar> Jx;
  CMatrix<Scalar> Jy;
  CMatrix<Scalar> Jz;
};

/// Jx, Jy, Jz for total spin J = N in the |m> basis, index i <-> m = i - N.
template <typename Scalar = double>
CollectiveOperators<Scalar> collective_operators(int N) {
  if (N < 1) throw InvalidArgument("collective_operators: N must be >= 1");
  using C = std::complex<Scalar>;
  const int dim = 2 * N + 1;
  const Scalar J = Scalar(N);
  CMatrix<Scalar> Jp = CMatrix<Scalar>::Zero(dim, dim);
  CMatrix<Scalar> Jz = CMatrix<Scalar>::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Scalar m = Scalar(i - N);
    Jz(i, i) = C(m, 0);
    if (i + 1 < dim) Jp(i + 1, i) = C(std::sqrt(J * (J + 1) - m * (m + 1)), 0);
  }
  const CMatrix<Scalar> Jm = Jp.adjoint();
  CollectiveOperators<Scalar> ops;
  ops.Jx = (Jp + Jm) * C(Scalar(0.5), 0);
  ops.Jy = (Jp - Jm) * C(0, Scalar(-0.5));
  ops.Jz = std::move(Jz);
  return ops;
}

/// Amplitudes c_m = 2^-N sqrt(C(2N, N-m)) of the +x coherent spin state.
/// Computed through lgamma so that large N does not overflow.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> css_x_amplitudes(int N) {
  if (N < 1) throw InvalidArgument("css_x: N must be >= 1");
  const int dim = 2 * N + 1;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(dim);
  const Scalar two_n = Scalar(2 * N);
  const Scalar log_norm = std::lgamma(two_n + 1) - two_n * std::log(Scalar(2));
  for (int i = 0; i < dim; ++i) {
    const Scalar k = Scalar(i);  // N + m
    const Scalar log_p = log_norm - std::lgamma(k + 1) - std::lgamma(two_n - k + 1);
    c(i) = std::exp(Scalar(0.5) * log_p);
  }
  return c;
}

/// Pure coherent spin state along +x: rho = c c^T.
template <typename Scalar = double>
CMatrix<Scalar> css_x(int N) {
  const auto c = css_x_amplitudes<Scalar>(N);
  return (c * c.transpose()).template cast<std::complex<Scalar>>();
}

/// Mean spin and symmetrised covariance <(JiJj+JjJi)/2> - <Ji><Jj>.
template <typename Scalar = double>
struct SpinMoments {
  Eigen::Matrix<Scalar, 3, 1> mean;
  Eigen::Matrix<Scalar, 3, 3> cov;
};

/// Largest imaginary residue tolerated in a trace pairing before the input is
/// treated as corrupted (non-Hermitian) rather than rounded.
inline constexpr double kMomentImagTolerance = 1e-8;

template <typename Derived>
SpinMoments<typename Derived::RealScalar> spin_moments(const Eigen::MatrixBase<Derived>& rho) {
  using Scalar = typename Derived::RealScalar;
  using C = std::complex<Scalar>;
  if (rho.rows() != rho.cols() || rho.rows() < 3 || rho.rows() % 2 == 0)
    throw DimensionMismatch("spin_moments: expected a (2N+1)x(2N+1) matrix");
  const int N = int(rho.rows() - 1) / 2;
  const auto ops = collective_operators<Scalar>(N);
  const CMatrix<Scalar>* J[3] = {&ops.Jx, &ops.Jy, &ops.Jz};

  Scalar worst_imag = 0;
  auto expect = [&](const CMatrix<Scalar>& A) {
    const C v = rho.cwiseProduct(A.transpose()).sum();
    worst_imag = std::max(worst_imag, std::abs(v.imag()));
    return v.real();
  };

  SpinMoments<Scalar> out;
  for (int i = 0; i < 3; ++i) out.mean(i) = expect(*J[i]);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const CMatrix<Scalar> sym = (*J[i] * *J[j] + *J[j] * *J[i]) * C(Scalar(0.5), 0);
      const Scalar v = expect(sym) - out.mean(i) * out.mean(j);
      out.cov(i, j) = v;
      out.cov(j, i) = v;
    }
  }
  if (worst_imag > Scalar(kMomentImagTolerance)) {
    throw InvariantViolation("spin_moments: imaginary residue " + std::to_string(double(worst_imag)) +
                             " in a Hermitian expectation value");
  }
  return out;
}

/// Minimum variance in the plane perpendicular to the mean spin. The plane is
/// spanned by an internal orthonormal pair (n1, n2) rotated by frame_angle;
/// the result does not depend on that angle.
template <typename Scalar>
Scalar min_perpendicular_variance(const SpinMoments<Scalar>& mom, Scalar frame_angle = Scalar(0)) {
  using V3 = Eigen::Matrix<Scalar, 3, 1>;
  const Scalar len = mom.mean.norm();
  if (!(len > Scalar(1e-12))) {
    throw MeanSpinVanished("squeezing parameter undefined: |<J>| = " + std::to_string(double(len)));
  }
  const V3 n0 = mom.mean / len;
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(n0(i)) < std::abs(n0(axis))) axis = i;
  V3 e = V3::Zero();
  e(axis) = 1;
  V3 n1 = (e - e.dot(n0) * n0).normalized();
  V3 n2 = n0.cross(n1);
  const Scalar c = std::cos(frame_angle), s = std::sin(frame_angle);
  const V3 r1 = c * n1 + s * n2;
  const V3 r2 = -s * n1 + c * n2;

  const Scalar c11 = r1.dot(mom.cov * r1);
  const Scalar c22 = r2.dot(mom.cov * r2);
  const Scalar c12 = r1.dot(mom.cov * r2);
  const Scalar half_diff = (c11 - c22) / 2;
  return (c11 + c22) / 2 - std::sqrt(half_diff * half_diff + c12 * c12);
}

/// Kitagawa-Ueda squeezing parameter: min perpendicular variance / (N/2).
template <typename Derived>
typename Derived::RealScalar squeezing_parameter(const Eigen::MatrixBase<Derived>& rho) {
  using Scalar = typename Derived::RealScalar;
  const auto mom = spin_moments(rho);
  const Scalar N = Scalar(rho.rows() - 1) / 2;
  return min_perpendicular_variance(mom) / (N / 2);
}

/// exp(-i theta Jz^2) rho exp(+i theta Jz^2).
template <typename Derived>
CMatrix<typename Derived::RealScalar> one_axis_twist(const Eigen::MatrixBase<Derived>& rho,
                                                     typename Derived::RealScalar theta) {
  using Scalar = typename Derived::RealScalar;
  const int dim = int(rho.rows());
  const int N = (dim - 1) / 2;
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> u(dim);
  for (int i = 0; i < dim; ++i) {
    const Scalar m = Scalar(i - N);
    u(i) = std::polar(Scalar(1), -theta * m * m);
  }
  return u.asDiagonal() * rho * u.conjugate().asDiagonal();
}

struct DensityDiagnostics {
  double hermiticity_error = 0;  // max |rho - rho^dagger|
  double trace_error = 0;        // |Tr rho - 1|
  double min_eigenvalue = 0;
};

DensityDiagnostics density_diagnostics(const MatrixXc& rho);

struct DensityTolerance {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

/// Throws InvariantViolation naming `context` if rho is not a density matrix
/// within the given tolerances.
void require_density_matrix(const MatrixXc& rho, const char* context,
                            const DensityTolerance& tol = {});

}  // namespace phsq
