#include "phsq/dicke.hpp"

#include <cmath>
#include <sstream>

#include "phsq/ensemble.hpp"

namespace phsq {

EnsembleSpec::EnsembleSpec(int N, double omega_a, double Q, double n_th, double g)
    : N_(N), g_(g), omega_a_(omega_a), Q_(Q), n_th_(n_th) {
  if (N < 1) throw InvalidArgument("EnsembleSpec: N must be >= 1");
  if (!(omega_a > 0) || !std::isfinite(omega_a))
    throw InvalidArgument("EnsembleSpec: omega_a must be positive and finite");
  if (!(Q > 0)) throw InvalidArgument("EnsembleSpec: Q must be positive");
  if (!(n_th >= 0) || !std::isfinite(n_th))
    throw InvalidArgument("EnsembleSpec: n_th must be non-negative");
  if (!(g > 0) || !std::isfinite(g)) throw InvalidArgument("EnsembleSpec: g must be positive");
  gamma_ = std::isinf(Q) ? 0.0 : omega_a / Q;
}

DensityDiagnostics density_diagnostics(const MatrixXc& rho) {
  DensityDiagnostics d;
  d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
  const MatrixXc herm = (rho + rho.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

void require_density_matrix(const MatrixXc& rho, const char* context, const DensityTolerance& tol) {
  if (rho.rows() != rho.cols()) throw DimensionMismatch(std::string(context) + ": non-square matrix");
  const auto d = density_diagnostics(rho);
  if (d.hermiticity_error > tol.hermiticity || d.trace_error > tol.trace ||
      d.min_eigenvalue < tol.min_eigenvalue || !std::isfinite(d.min_eigenvalue)) {
    std::ostringstream os;
    os << context << ": not a density matrix (hermiticity " << d.hermiticity_error << ", trace error "
       << d.trace_error << ", min eigenvalue " << d.min_eigenvalue << ")";
    throw InvariantViolation(os.str());
  }
}

}  // namespace phsq
