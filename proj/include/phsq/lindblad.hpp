#pragma once

// Master-equation oracle: a single damped phonon mode coupled to the
// collective J_z, integrated on a truncated Fock space tensored with the
// Dicke space. Small sizes only.

#include <functional>
#include <vector>

#include "phsq/ensemble.hpp"
#include "phsq/phonon_geometry.hpp"
#include "phsq/types.hpp"

#include <Eigen/SparseCore>

namespace phsq {

struct FockTruncation {
  int n_max = 0;

  int dim() const { return n_max + 1; }
  /// 4 (N g/w_a)^2 + 10 (n_th + 1), rounded up.
  static int floor_for(const EnsembleSpec& spec);
  /// The floor, or `n_max` if larger. Throws InvalidArgument below the floor.
  static FockTruncation for_spec(const EnsembleSpec& spec, int n_max = 0);
};

inline constexpr int kMaxCompositeDim = 2000;

/// Density matrix on phonon (x) spin, index k (2N+1) + (m + N).
class CompositeState {
 public:
  CompositeState(int N, int n_max, MatrixXc rho);
  static CompositeState product(const MatrixXc& phonon, const DickeMatrix& spin);

  int N() const { return N_; }
  int n_max() const { return n_max_; }
  const MatrixXc& matrix() const { return rho_; }

  DickeMatrix spin_reduced() const;
  MatrixXc phonon_reduced() const;
  /// Phonon block <.|_spin m ... n|_spin>, a (n_max+1)^2 matrix.
  MatrixXc block(int m, int n) const;

 private:
  int N_, n_max_;
  MatrixXc rho_;
};

MatrixXc vacuum_state(int n_max);
/// Bose-Einstein populations n^k/(n+1)^{k+1}, truncated and renormalised.
MatrixXc thermal_state(int n_max, double n_th);

/// Full-state Lindblad generator built from sparse operators. Used as the
/// reference for the block-structured integrator and in tests.
class Liouvillian {
 public:
  Liouvillian(const EnsembleSpec& spec, FockTruncation trunc);
  MatrixXc apply(const MatrixXc& rho) const;
  int dim() const { return dim_; }

 private:
  int dim_;
  double c_down_, c_up_;
  Eigen::SparseMatrix<cplx> H_, a_, ad_, ada_, aad_;
};

Liouvillian build_generator(const EnsembleSpec& spec, FockTruncation trunc);

struct EvolveOptions {
  double step = 0.0;       // 0: largest step allowed by the accuracy rule
  long sample_every = 0;   // observer cadence in steps; 0 disables
  double trace_tolerance = 1e-8;
};

/// Allowed step min(0.01/w_a, 0.1/(gamma (n_th + 1))).
double max_step(const EnsembleSpec& spec);

/// Called with (t, state) every sample_every steps, and at the end.
using Observer = std::function<void(double, const CompositeState&)>;

/// Fixed-step RK4. Exploits [H, J_z] = 0: each spin block evolves on its own,
/// which is the same linear map as RK4 on the full state. Throws TraceDrift.
CompositeState evolve_master(const CompositeState& rho0, const EnsembleSpec& spec, FockTruncation trunc,
                             double t, const EvolveOptions& opt = {}, const Observer& observer = {});

/// log(rho_mn(t)/rho_mn(0)) after tracing out the phonon. If `previous` is
/// given, imaginary parts are unwrapped against it.
PhaseMatrix reduce_and_extract_phases(const CompositeState& rho, const DickeMatrix& rho0_spin, double t,
                                      const PhaseMatrix* previous = nullptr);

struct OracleConfig {
  EnsembleSpec spec{2, 50.0, 25.0, 0.0};
  std::vector<double> report_times{5.0, 10.0, 20.0};
  bool thermal_initial = false;  // else phonon vacuum
  int n_max = 0;                 // 0: floor
  double step = 0.0;             // 0: max_step
  double sample_dt = 0.1;        // unwrapping cadence
};

struct OracleRun {
  std::vector<PhaseMatrix> phases;  // at report_times
  FockTruncation trunc;
  double step = 0;
  double max_trace_error = 0;
  double max_hermiticity_error = 0;
  double max_jz_drift = 0;
  double min_spin_eigenvalue = 1;
};

OracleRun run_oracle(const OracleConfig& cfg);

struct ConvergedOracle {
  OracleRun base, doubled_fock, halved_step;
  double truncation_change = 0;  // max relative change of any reported phase
  double step_change = 0;
};

/// Runs the base configuration, then doubled n_max and halved step; throws
/// TruncationNotConverged if any reported phase moves by more than rel_tol.
ConvergedOracle run_oracle_converged(const OracleConfig& cfg, double rel_tol = 1e-6);

/// Max over m != n of |phi_a - phi_b| / |phi_b|.
double max_relative_phase_error(const PhaseMatrix& a, const PhaseMatrix& b);

}  // namespace phsq
