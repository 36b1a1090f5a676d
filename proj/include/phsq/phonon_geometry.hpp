#pragma once

// Coherent phonon trajectories driven by the spin-dependent force and the
// resulting geometric-phase exponents phi_{m,n}(t) of the spin density matrix.

#include <complex>
#include <span>
#include <vector>

#include "phsq/ensemble.hpp"
#include "phsq/types.hpp"

namespace phsq {

enum class SelfCheck { enabled, skip };

/// Phonon amplitude per unit J_z, alpha(t) = -i g/(gamma/2 + i w)(1 - e^{-(gamma/2 + i w) t}).
/// Starts from alpha(0) = 0; reduces continuously to -(g/w)(1 - e^{-i w t}) when gamma = 0.
cplx unit_amplitude(const EnsembleSpec& spec, double t);

struct AmplitudeSample {
  double t;
  cplx alpha;
};

/// Phase-space orbit m * alpha(t) of the phonon for Dicke state |m>.
std::vector<AmplitudeSample> trajectory(const EnsembleSpec& spec, int m, std::span<const double> times);

/// The scalar integrals entering the phase exponents at time t.
struct PhaseIntegrals {
  double amplitude_sq_integral = 0;  // int_0^t |alpha|^2
  double final_amplitude_sq = 0;     // |alpha(t)|^2
  double twist = 0;                  // g Re int_0^t alpha   (or eps * alpha under pulses)
};

/// Closed-form integrals for the free (unpulsed) resonator.
PhaseIntegrals phase_integrals(const EnsembleSpec& spec, double t);

/// The same integrals by adaptive Gauss-Kronrod over phonon periods, with alpha
/// evaluated directly. Slow; used as a construction-time cross-check.
PhaseIntegrals phase_integrals_quadrature(const EnsembleSpec& spec, double t, double rel_tol = 1e-10);

/// Throws QuadratureMismatch unless the two routes agree to rel_tol.
void compare_phase_integrals(const PhaseIntegrals& closed, const PhaseIntegrals& quadrature,
                             double amplitude_scale, double time, double rel_tol = 1e-8);

/// Exponents phi_{m,n}(t), row m, column n, index i <-> m = i - N.
struct PhaseMatrix {
  MatrixXc exponent;
  double time = 0.0;

  int N() const { return int(exponent.rows() - 1) / 2; }
};

/// phi_{m,n} = -(n_th + 1/2)(n-m)^2 {gamma I + |alpha(t)|^2} + i (n^2 - m^2) twist - kappa_{|n-m|}.
/// kappa_by_order[d] is the dephasing exponent for |n-m| = d (entry 0 is ignored).
PhaseMatrix assemble_phase_matrix(int N, double n_th, double gamma, const PhaseIntegrals& integrals,
                                  double t, std::span<const double> kappa_by_order = {});

/// Exact dissipative geometric-phase matrix. With SelfCheck::enabled the
/// closed-form integrals are verified against quadrature first.
PhaseMatrix phase_matrix(const EnsembleSpec& spec, double t, SelfCheck check = SelfCheck::enabled);

/// rho_{m,n}(0) e^{phi_{m,n}}; the output is verified to be a density matrix.
DickeMatrix apply_phase(const DickeMatrix& rho0, const PhaseMatrix& phi);

}  // namespace phsq
