#include "phsq/bang_bang.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phsq/detail/phi_functions.hpp"
#include "phsq/errors.hpp"
#include "phsq/quadrature.hpp"

namespace phsq {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double pi = std::numbers::pi;

cplx decay_rate(const EnsembleSpec& spec) { return {spec.gamma() / 2, spec.omega_a()}; }

double sinc(double x) { return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// sin((M+1)u)/sin(u), bounded by M+1.
double dirichlet(int M, double u) {
  const double k = M + 1;
  if (std::abs(u) < 1e-7) return k * (1.0 - (k * k - 1.0) * u * u / 6.0);
  return std::sin(k * u) / std::sin(u);
}

void require_in_schedule(const BBSchedule& sched, double t, const char* who) {
  if (!(t >= 0) || t > sched.t_total * (1 + 1e-14))
    throw InvalidArgument(std::string(who) + ": t must lie in [0, t_total]");
}

}  // namespace

BBSchedule::BBSchedule(int M_, double t_total_) : M(M_), t_total(t_total_) {
  if (M < 0) throw InvalidArgument("BBSchedule: M must be >= 0");
  if (!(t_total >= 0) || !std::isfinite(t_total)) throw InvalidArgument("BBSchedule: t_total must be >= 0");
}

BathSpec::BathSpec(double eta_, double omega_c_, double lambda_) : eta(eta_), omega_c(omega_c_), lambda(lambda_) {
  if (!(eta >= 0) || !std::isfinite(eta)) throw InvalidArgument("BathSpec: eta must be >= 0");
  if (!(omega_c > 0) || !std::isfinite(omega_c)) throw InvalidArgument("BathSpec: omega_c must be > 0");
  if (!(lambda > 0) || !std::isfinite(lambda)) throw InvalidArgument("BathSpec: lambda must be > 0");
}

int switch_function(const BBSchedule& sched, double tau) {
  if (!(tau >= 0) || !(tau < sched.t_total)) throw InvalidArgument("switch_function: tau outside [0, t_total)");
  if (sched.M <= 1) return 1;
  const long p = long(std::floor(double(sched.M) * tau / sched.t_total));
  return (p % 2 == 0) ? 1 : -1;
}

namespace detail {

PhaseIntegrals phase_integrals_bb_signed(const EnsembleSpec& spec, const BBSchedule& sched, double t,
                                         int first_sign) {
  require_in_schedule(sched, t, "phase_integrals_bb");
  const double g = spec.g(), gamma = spec.gamma();
  const cplx kappa = decay_rate(spec);
  const cplx drive = -I * g;  // per unit sign
  const double n2 = std::norm(kappa);

  struct Step {
    double width;
    cplx propagator, kick, int_free, int_kick;  // e^{-kD}, D phi1, D phi1, D^2 phi2
    double decay_int, kick_sq_int;              // D phi1(-gamma D), int |beta|^2
    cplx cross;                                 // D^2 [-conj(k) phi2(-conj(k) D) + gamma phi2(-gamma D)]
  };
  auto make_step = [&](double D) {
    const auto pk = detail::phi_functions(-kappa * D);
    const auto pc = detail::phi_functions(-std::conj(kappa) * D);
    const auto pg = detail::phi_functions(cplx(-gamma * D, 0.0));
    Step s;
    s.width = D;
    s.propagator = std::exp(-kappa * D);
    s.kick = drive * D * pk.phi1;
    s.int_free = D * pk.phi1;
    s.int_kick = drive * D * D * pk.phi2;
    s.decay_int = D * pg.phi1.real();
    s.kick_sq_int = g * g / n2 * D * D * D *
                    (gamma * gamma * pg.phi3.real() - 2.0 * (kappa * kappa * pk.phi3).real());
    s.cross = D * D * (-std::conj(kappa) * pc.phi2 + gamma * pg.phi2);
    return s;
  };

  const double width = sched.interval_width();
  const Step whole = make_step(width);
  cplx alpha = 0.0, twist = 0.0;
  double sq_int = 0.0;
  auto advance = [&](const Step& st, int sign) {
    const double s = sign;
    twist += s * alpha * st.int_free + st.int_kick;  // eps * alpha', eps^2 = 1
    sq_int += std::norm(alpha) * st.decay_int + st.kick_sq_int +
              2.0 * s * ((drive / kappa) * std::conj(alpha) * st.cross).real();
    alpha = alpha * st.propagator + s * st.kick;
  };
  int sign = first_sign;
  for (int p = 0; p < sched.intervals(); ++p) {
    const double a = p * width;
    if (a >= t) break;
    const double D = t - a;
    if (D >= width * (1 - 1e-13)) advance(whole, sign);
    else advance(make_step(D), sign);
    if (sched.M > 1) sign = -sign;
  }

  PhaseIntegrals out;
  out.final_amplitude_sq = std::norm(alpha);
  out.amplitude_sq_integral = sq_int;
  out.twist = g * twist.real();
  return out;
}

}  // namespace detail

cplx amplitude_bb(const EnsembleSpec& spec, const BBSchedule& sched, double t) {
  require_in_schedule(sched, t, "amplitude_bb");
  const cplx kappa = decay_rate(spec);
  const double width = sched.interval_width();
  cplx alpha = 0.0;
  int sign = 1;
  for (int p = 0; p < sched.intervals(); ++p) {
    const double a = p * width;
    if (a >= t) break;
    const double D = std::min(width, t - a);
    alpha = alpha * std::exp(-kappa * D) + double(sign) * (-I * spec.g()) * D * detail::phi_functions(-kappa * D).phi1;
    if (sched.M > 1) sign = -sign;
  }
  return alpha;
}

namespace {

// alpha'(tau) from explicit sums over completed intervals (no recursion
// through the phi-function propagators), tabulated at interval starts.
class DirectAmplitude {
 public:
  DirectAmplitude(const EnsembleSpec& spec, const BBSchedule& sched)
      : sched_(sched), kappa_(decay_rate(spec)), scale_(-I * spec.g() / kappa_), width_(sched.interval_width()) {
    const int n = sched.intervals();
    starts_.resize(std::size_t(n), 0.0);
    for (int p = 1; p < n; ++p) {
      const double tau = p * width_;
      cplx sum = 0.0;
      for (int q = 0; q < p; ++q)
        sum += sign(q) * (std::exp(-kappa_ * (tau - (q + 1) * width_)) - std::exp(-kappa_ * (tau - q * width_)));
      starts_[std::size_t(p)] = scale_ * sum;
    }
  }

  cplx operator()(double tau) const {
    const int n = sched_.intervals();
    int p = width_ > 0 ? int(std::floor(tau / width_)) : 0;
    p = std::clamp(p, 0, n - 1);
    const double u = tau - p * width_;
    const cplx e = std::exp(-kappa_ * u);
    // 1 - e^{-kappa u} through expm1 to keep small u accurate.
    const double hg = kappa_.real(), w = kappa_.imag();
    const double sh = std::sin(0.5 * w * u);
    const cplx one_minus(-(std::expm1(-hg * u) * std::cos(w * u) - 2.0 * sh * sh), std::exp(-hg * u) * std::sin(w * u));
    return starts_[std::size_t(p)] * e + sign(p) * scale_ * one_minus;
  }

  double sign(int p) const { return (sched_.M > 1 && p % 2 == 1) ? -1.0 : 1.0; }

 private:
  const BBSchedule& sched_;
  cplx kappa_, scale_;
  double width_;
  std::vector<cplx> starts_;
};

std::vector<double> schedule_breakpoints(const EnsembleSpec& spec, const BBSchedule& sched, double t) {
  std::vector<double> bp{0.0};
  const double width = sched.interval_width();
  const double period = 2.0 * pi / spec.omega_a();
  const int n = sched.intervals();
  for (int p = 0; p < n; ++p) {
    const double a = p * width;
    if (a >= t) break;
    const double b = std::min((p + 1) * width, t);
    const auto inner = quad::periodic_breakpoints(a, b, period, 4096);
    bp.insert(bp.end(), inner.begin() + 1, inner.end());
  }
  return bp;
}

}  // namespace

cplx amplitude_bb_quadrature(const EnsembleSpec& spec, const BBSchedule& sched, double t) {
  require_in_schedule(sched, t, "amplitude_bb_quadrature");
  if (t == 0.0) return 0.0;
  const cplx kappa = decay_rate(spec);
  auto f = [&](double tau) {
    const double s = tau < sched.t_total ? switch_function(sched, tau) : 1;
    return cplx(s, 0.0) * std::exp(-kappa * (t - tau));
  };
  const auto bp = schedule_breakpoints(spec, sched, t);
  quad::Options opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-14 * t;
  auto r = quad::integrate<cplx>(f, bp, opt);
  if (!r.converged) throw QuadratureNotConverged("amplitude_bb_quadrature: did not converge");
  return -I * spec.g() * r.value;
}

PhaseIntegrals phase_integrals_bb(const EnsembleSpec& spec, const BBSchedule& sched, double t) {
  return detail::phase_integrals_bb_signed(spec, sched, t, 1);
}

PhaseIntegrals phase_integrals_bb_quadrature(const EnsembleSpec& spec, const BBSchedule& sched, double t,
                                             double rel_tol) {
  require_in_schedule(sched, t, "phase_integrals_bb_quadrature");
  const DirectAmplitude alpha(spec, sched);
  PhaseIntegrals out;
  out.final_amplitude_sq = std::norm(alpha(t));
  if (t == 0.0) return out;
  const auto bp = schedule_breakpoints(spec, sched, t);
  quad::Options opt;
  opt.rel_tol = rel_tol;
  const double scale = spec.g() / std::abs(decay_rate(spec));
  opt.abs_tol = 1e-14 * scale * scale * t;
  auto eps_alpha = [&](double tau) {
    const double s = tau < sched.t_total ? switch_function(sched, tau) : 1;
    return s * alpha(tau).real();
  };
  auto sq = [&](double tau) { return std::norm(alpha(tau)); };
  auto r1 = quad::integrate<double>(eps_alpha, bp, opt);
  auto r2 = quad::integrate<double>(sq, bp, opt);
  if (!r1.converged || !r2.converged)
    throw QuadratureNotConverged("phase_integrals_bb_quadrature: did not converge");
  out.twist = spec.g() * r1.value;
  out.amplitude_sq_integral = r2.value;
  return out;
}

double filter_modulation(int M, double omega, double t) {
  if (M < 0) throw InvalidArgument("filter_modulation: M must be >= 0");
  if (!(omega >= 0) || !(t >= 0)) throw InvalidArgument("filter_modulation: need omega >= 0, t >= 0");
  if (t == 0.0) return 0.0;
  // With x = w t/(2M+2) and u the offset of x from the nearest pole x_s in
  // pi/2 + pi Z, tan^2(x)(1 + (-1)^M cos((2M+2)x)) = 2 cos^2(u) D_M(u)^2 / ...,
  // which gives F = (t/(2M+2))^2 * 2 (sin x / x)^2 D_M(u)^2.
  const double k2 = 2.0 * M + 2.0;
  const double x = omega * t / k2;
  const double xs = pi / 2 + pi * std::round((x - pi / 2) / pi);
  const double u = x - xs;
  const double s = sinc(x), d = dirichlet(M, u);
  const double scale = t / k2;
  return scale * scale * 2.0 * s * s * d * d;
}

double bath_spectrum(const BathSpec& bath, double omega) {
  if (!(omega >= 0)) throw InvalidArgument("bath_spectrum: omega must be >= 0");
  if (bath.eta == 0.0) return 0.0;
  const double y = 0.5 * bath.lambda * omega;
  const double y_coth_y = y < 1e-4 ? 1.0 + y * y / 3.0 : y / std::tanh(y);
  return bath.eta * std::exp(-omega / bath.omega_c) * (2.0 / bath.lambda) * y_coth_y;
}

double kappa_integral(const BathSpec& bath, int M, double t, const KappaOptions& opt) {
  if (M < 0) throw InvalidArgument("kappa_integral: M must be >= 0");
  if (!(t >= 0)) throw InvalidArgument("kappa_integral: t must be >= 0");
  if (bath.eta == 0.0 || t == 0.0) return 0.0;
  const double upper = opt.cutoff_multiple * bath.omega_c;
  // Filter peaks at w = a (pi/2 + l pi) with a = (2M+2)/t; lobes of width a pi/(M+1).
  const double a = (2.0 * M + 2.0) / t;
  const double lobe = a * pi / (M + 1);
  const double first = a * pi / 2;
  constexpr long kMaxPanels = 400'000;
  long stride = 1;
  const double count = (upper - first) / lobe;
  if (count > double(kMaxPanels)) stride = long(std::ceil(count / double(kMaxPanels)));
  std::vector<double> bp{0.0};
  // Lobes below the first pole: align to the same lattice shifted down.
  for (long l = -long(std::floor(first / lobe)); ; l += stride) {
    const double w = first + double(l) * lobe;
    if (w >= upper) break;
    if (w > bp.back()) bp.push_back(w);
  }
  bp.push_back(upper);

  auto f = [&](double w) { return bath_spectrum(bath, w) * filter_modulation(M, w, t); };
  quad::Options qo;
  qo.rel_tol = opt.rel_tol;
  qo.abs_tol = 1e-300;
  auto r = quad::integrate<double>(f, bp, qo);
  if (!r.converged) {
    std::ostringstream os;
    os << "kappa_integral: quadrature did not reach rel_tol " << opt.rel_tol << " (M=" << M << ", t=" << t
       << ", estimated error " << r.error << ")";
    throw QuadratureNotConverged(os.str());
  }
  return r.value;
}

double kappa_bound(const BathSpec& bath, const BBSchedule& sched, int m, int n, double t) {
  if (m == n) return 0.0;
  return double(std::abs(n - m) + 2) * kappa_integral(bath, sched.M, t);
}

PhaseMatrix phase_matrix_bb(const EnsembleSpec& spec, const BBSchedule& sched, const BathSpec& bath, double t,
                            SelfCheck check) {
  const auto closed = phase_integrals_bb(spec, sched, t);
  if (check == SelfCheck::enabled) {
    const auto quadrature = phase_integrals_bb_quadrature(spec, sched, t);
    compare_phase_integrals(closed, quadrature, spec.g() / std::abs(decay_rate(spec)), t);
  }
  const int N = spec.N();
  std::vector<double> kappa(std::size_t(2 * N + 1), 0.0);
  const double base = kappa_integral(bath, sched.M, t);
  for (int d = 1; d <= 2 * N; ++d) kappa[std::size_t(d)] = double(d + 2) * base;
  return assemble_phase_matrix(N, spec.n_th(), spec.gamma(), closed, t, kappa);
}

}  // namespace phsq
