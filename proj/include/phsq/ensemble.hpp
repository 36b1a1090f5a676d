#pragma once

#include <limits>

namespace phsq {

/// Physical parameters of the spin ensemble and its mechanical mode, in units
/// where the single-phonon coupling g sets the frequency scale.
///
/// N is half the number of spins (total spin J = N). Q may be +infinity for a
/// lossless resonator.
class EnsembleSpec {
 public:
  explicit EnsembleSpec(int N, double omega_a = 1000.0, double Q = 1000.0, double n_th = 0.0,
                        double g = 1.0);

  int N() const { return N_; }
  int dim() const { return 2 * N_ + 1; }
  double g() const { return g_; }
  double omega_a() const { return omega_a_; }
  double Q() const { return Q_; }
  double n_th() const { return n_th_; }
  /// Mechanical damping rate omega_a / Q.
  double gamma() const { return gamma_; }
  /// (n_th + 1/2) / Q.
  double mu() const { return (n_th_ + 0.5) / Q_; }

  EnsembleSpec with_N(int N) const { return EnsembleSpec(N, omega_a_, Q_, n_th_, g_); }
  EnsembleSpec with_Q(double Q) const { return EnsembleSpec(N_, omega_a_, Q, n_th_, g_); }
  EnsembleSpec with_n_th(double n_th) const { return EnsembleSpec(N_, omega_a_, Q_, n_th, g_); }
  EnsembleSpec with_omega_a(double w) const { return EnsembleSpec(N_, w, Q_, n_th_, g_); }

  static constexpr double lossless = std::numeric_limits<double>::infinity();

 private:
  int N_;
  double g_;
  double omega_a_;
  double Q_;
  double n_th_;
  double gamma_;
};

}  // namespace phsq
