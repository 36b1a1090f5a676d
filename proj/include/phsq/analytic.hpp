#pragma once

// Long-time analytic squeezing, its upper bound, and the squeezing-versus-time
// models (analytic surrogate, exact phase matrix, bang-bang) with an optimum
// search over time.

#include <optional>
#include <string_view>
#include <vector>

#include "phsq/bang_bang.hpp"
#include "phsq/ensemble.hpp"
#include "phsq/phonon_geometry.hpp"

namespace phsq {

/// Twisting angle Ct and damping factor mu of an ensemble at time t.
struct AnalyticParams {
  int N = 1;
  double Ct = 0.0;
  double mu = 0.0;

  static AnalyticParams at(const EnsembleSpec& spec, double t);
};

/// g^2 w_a / ((gamma/2)^2 + w_a^2): the effective one-axis twisting rate.
double twist_rate(const EnsembleSpec& spec);

/// Steady-state phase i C t [(m^2 - n^2) + i mu (m - n)^2].
cplx steady_phase(const EnsembleSpec& spec, int m, int n, double t);
PhaseMatrix steady_phase_matrix(const EnsembleSpec& spec, double t);

/// 1 + (2N-1)/4 (A - sqrt(A^2 + B^2)) with
/// A = 1 - cos^{2N-2}(2Ct) e^{-4 Ct mu},  B = -4 sin(Ct) cos^{2N-2}(Ct) e^{-4 Ct mu}.
double xi_analytic(const AnalyticParams& p);

/// 1 - e^{-1/2 - 4 mu/sqrt N} / (1 - e^{-1 - 2 mu/sqrt N}).
double xi_upper_bound(int N, double mu);

struct BoundCheck {
  double bound = 0;
  double xi_opt = 0;
  double relative_excess = 0;  // (xi_opt - bound)/bound, > 0 means violated
  bool flagged = false;        // excess beyond the allowed slack
};

BoundCheck check_upper_bound(int N, double mu, double xi_opt, double slack = 0.02);

enum class Backend { analytic, numeric, bb };

const char* backend_name(Backend b);
std::optional<Backend> parse_backend(std::string_view name);

/// xi^2 as a function of time for one parameter set. For the bb backend the
/// pulse count is fixed and the schedule is stretched to end at each t.
class SqueezingModel {
 public:
  explicit SqueezingModel(EnsembleSpec spec, Backend backend = Backend::numeric, int M = 0,
                          BathSpec bath = {});

  const EnsembleSpec& spec() const { return spec_; }
  Backend backend() const { return backend_; }
  int pulses() const { return M_; }
  const BathSpec& bath() const { return bath_; }

  /// Spin state at time t (numeric and bb backends; analytic uses steady phases).
  DickeMatrix state(double t, SelfCheck check = SelfCheck::skip) const;
  double xi(double t, SelfCheck check = SelfCheck::skip) const;
  /// Runs the closed-form vs quadrature comparison at t (no-op for analytic).
  void self_check(double t) const;

 private:
  EnsembleSpec spec_;
  Backend backend_;
  int M_;
  BathSpec bath_;
  DickeMatrix rho0_;
};

struct SearchOptions {
  double gt_max = 0.0;  // 0: 400 sqrt(10/N)
  double step = 0.5;
  double rel_tol = 1e-4;
  bool ripple_polish = true;
  bool self_check = true;
};

struct OptimalPoint {
  double t = 0;
  double xi = 0;
};

double default_gt_max(int N);

/// First global minimum of xi^2 over (0, gt_max]: uniform scan, golden-section
/// refinement, then a polish over one phonon period around the result.
OptimalPoint optimal_squeezing(const SqueezingModel& model, const SearchOptions& opt = {});

/// Golden-section minimum of f on [a, b] to absolute width tol.
template <typename F>
OptimalPoint golden_section(F&& f, double a, double b, double tol) {
  constexpr double r = 0.6180339887498949;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? OptimalPoint{c, fc} : OptimalPoint{d, fd};
}

/// Minimum over Ct of the one-axis twisting formula at mu = 0.
OptimalPoint oat_optimum(int N, double ct_max = 0.0);

}  // namespace phsq
