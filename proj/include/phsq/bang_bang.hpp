#pragma once

// Bang-bang (instantaneous alternating pi pulse) control: switch function,
// pulsed phonon amplitude, filter function of the sequence, Ohmic bath
// spectrum and the resulting dephasing exponent.

#include <vector>

#include "phsq/ensemble.hpp"
#include "phsq/phonon_geometry.hpp"

namespace phsq {

/// M equal intervals over [0, t_total], first sign +1, alternating.
/// M = 0 and M = 1 both mean a single +1 interval.
struct BBSchedule {
  int M = 0;
  double t_total = 0.0;

  BBSchedule() = default;
  BBSchedule(int M, double t_total);

  int intervals() const { return M <= 1 ? 1 : M; }
  double interval_width() const { return t_total / intervals(); }
  /// Same pulse count spread over a different total time.
  BBSchedule rescaled(double t) const { return BBSchedule(M, t); }
};

struct BathSpec {
  double eta = 0.0;      // Ohmic coupling
  double omega_c = 1.0;  // cutoff, units of g
  double lambda = 4.0;   // inverse temperature, units of 1/g

  BathSpec() = default;
  BathSpec(double eta, double omega_c, double lambda);
};

int switch_function(const BBSchedule& sched, double tau);

/// alpha'(t) by exact propagation across the constant-sign intervals.
cplx amplitude_bb(const EnsembleSpec& spec, const BBSchedule& sched, double t);

/// alpha'(t) = -i g int_0^t eps(tau) e^{-kappa (t - tau)} dtau by adaptive quadrature.
cplx amplitude_bb_quadrature(const EnsembleSpec& spec, const BBSchedule& sched, double t);

/// Filter function tan^2(x)(1 + (-1)^M cos(w t))/w^2, x = w t/(2M+2), with the
/// removable singularities at cos x = 0 resolved.
double filter_modulation(int M, double omega, double t);

/// G(w) = eta w e^{-w/w_c} coth(lambda w/2); G(0) = 2 eta/lambda.
double bath_spectrum(const BathSpec& bath, double omega);

struct KappaOptions {
  double cutoff_multiple = 50.0;  // upper limit in units of omega_c
  double rel_tol = 1e-8;
};

/// int_0^Omega G(w) F_M(w, t) dw. Panels follow the filter's oscillation so
/// every removable singularity sits on a panel edge.
double kappa_integral(const BathSpec& bath, int M, double t, const KappaOptions& opt = {});

/// (|n-m| + 2) * kappa_integral for m != n, exactly 0 on the diagonal.
double kappa_bound(const BathSpec& bath, const BBSchedule& sched, int m, int n, double t);

/// Phase integrals with eps(tau) alpha'(tau) in the twist.
PhaseIntegrals phase_integrals_bb(const EnsembleSpec& spec, const BBSchedule& sched, double t);
PhaseIntegrals phase_integrals_bb_quadrature(const EnsembleSpec& spec, const BBSchedule& sched, double t,
                                             double rel_tol = 1e-10);

/// Phase matrix under pulses, including the bath dephasing term. The
/// interval sign pattern can be flipped globally for invariance tests.
PhaseMatrix phase_matrix_bb(const EnsembleSpec& spec, const BBSchedule& sched, const BathSpec& bath,
                            double t, SelfCheck check = SelfCheck::enabled);

namespace detail {
PhaseIntegrals phase_integrals_bb_signed(const EnsembleSpec& spec, const BBSchedule& sched, double t,
                                         int first_sign);
}

}  // namespace phsq
