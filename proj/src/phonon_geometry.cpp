#include "phsq/phonon_geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "phsq/detail/phi_functions.hpp"
#include "phsq/dicke.hpp"
#include "phsq/errors.hpp"
#include "phsq/quadrature.hpp"

namespace phsq {

namespace {

constexpr cplx I{0.0, 1.0};

cplx decay_rate(const EnsembleSpec& spec) { return {spec.gamma() / 2, spec.omega_a()}; }

// e^{-kappa tau} - 1 without cancellation at small tau.
cplx expm1_rotating(double half_gamma, double omega, double tau) {
  const double damp = std::exp(-half_gamma * tau);
  const double s = std::sin(0.5 * omega * tau);
  return {std::expm1(-half_gamma * tau) * std::cos(omega * tau) - 2.0 * s * s,
          -damp * std::sin(omega * tau)};
}

void require_time(double t, const char* who) {
  if (!(t >= 0) || !std::isfinite(t)) throw InvalidArgument(std::string(who) + ": t must be >= 0");
}

}  // namespace

cplx unit_amplitude(const EnsembleSpec& spec, double t) {
  require_time(t, "unit_amplitude");
  const cplx kappa = decay_rate(spec);
  return -I * spec.g() * t * detail::phi_functions(-kappa * t).phi1;
}

std::vector<AmplitudeSample> trajectory(const EnsembleSpec& spec, int m, std::span<const double> times) {
  if (std::abs(m) > spec.N()) throw InvalidArgument("trajectory: |m| must not exceed N");
  std::vector<AmplitudeSample> out;
  out.reserve(times.size());
  for (double t : times) out.push_back({t, double(m) * unit_amplitude(spec, t)});
  return out;
}

PhaseIntegrals phase_integrals(const EnsembleSpec& spec, double t) {
  require_time(t, "phase_integrals");
  const double g = spec.g();
  const double gamma = spec.gamma();
  const cplx kappa = decay_rate(spec);
  const auto phk = detail::phi_functions(-kappa * t);
  const auto phg = detail::phi_functions(cplx(-gamma * t, 0.0));

  PhaseIntegrals out;
  const cplx alpha = -I * g * t * phk.phi1;
  out.final_amplitude_sq = std::norm(alpha);
  // int_0^t |1 - e^{-kappa tau}|^2 = t^3 [gamma^2 phi3(-gamma t) - 2 Re(kappa^2 phi3(-kappa t))]
  const double loop = t * t * t * (gamma * gamma * phg.phi3.real() - 2.0 * (kappa * kappa * phk.phi3).real());
  out.amplitude_sq_integral = g * g / std::norm(kappa) * loop;
  // Re int_0^t alpha = Re(-i g t^2 phi2(-kappa t)) = g t^2 Im phi2
  out.twist = g * g * t * t * phk.phi2.imag();
  return out;
}

PhaseIntegrals phase_integrals_quadrature(const EnsembleSpec& spec, double t, double rel_tol) {
  require_time(t, "phase_integrals_quadrature");
  const double g = spec.g(), w = spec.omega_a(), half_gamma = spec.gamma() / 2;
  const cplx kappa = decay_rate(spec);
  const cplx pre = -I * g / kappa;
  auto alpha = [&](double tau) { return -pre * expm1_rotating(half_gamma, w, tau); };

  PhaseIntegrals out;
  out.final_amplitude_sq = std::norm(alpha(t));
  if (t == 0.0) return out;
  const auto bp = quad::periodic_breakpoints(0.0, t, 2.0 * std::numbers::pi / w);
  quad::Options opt;
  opt.rel_tol = rel_tol;
  auto re = quad::integrate<double>([&](double tau) { return alpha(tau).real(); }, bp, opt);
  auto sq = quad::integrate<double>([&](double tau) { return std::norm(alpha(tau)); }, bp, opt);
  if (!re.converged || !sq.converged)
    throw QuadratureNotConverged("phase_integrals_quadrature: adaptive quadrature did not converge");
  out.twist = g * re.value;
  out.amplitude_sq_integral = sq.value;
  return out;
}

void compare_phase_integrals(const PhaseIntegrals& closed, const PhaseIntegrals& quadrature,
                             double amplitude_scale, double time, double rel_tol) {
  auto check = [&](double a, double b, double scale, const char* what) {
    const double floor = 1e-13 * scale;
    if (std::abs(a - b) > rel_tol * std::max(std::abs(a), std::abs(b)) + floor) {
      std::ostringstream os;
      os.precision(17);
      os << "closed form and quadrature disagree for " << what << " at t=" << time << ": " << a
         << " vs " << b;
      throw QuadratureMismatch(os.str());
    }
  };
  const double a2 = amplitude_scale * amplitude_scale;
  check(closed.amplitude_sq_integral, quadrature.amplitude_sq_integral, a2 * std::max(time, 1.0),
        "int |alpha|^2");
  check(closed.final_amplitude_sq, quadrature.final_amplitude_sq, a2, "|alpha(t)|^2");
  check(closed.twist, quadrature.twist, amplitude_scale * std::max(time, 1.0), "Re int alpha");
}

PhaseMatrix assemble_phase_matrix(int N, double n_th, double gamma, const PhaseIntegrals& in, double t,
                                  std::span<const double> kappa_by_order) {
  const int dim = 2 * N + 1;
  const double damping = gamma * in.amplitude_sq_integral + in.final_amplitude_sq;
  const double thermal = n_th + 0.5;
  PhaseMatrix phi;
  phi.time = t;
  phi.exponent = MatrixXc::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double m = i - N;
    for (int j = i + 1; j < dim; ++j) {
      const double n = j - N;
      const int order = j - i;
      double re = -thermal * double(order * order) * damping;
      if (std::size_t(order) < kappa_by_order.size()) re -= kappa_by_order[std::size_t(order)];
      const cplx v(re, (n * n - m * m) * in.twist);
      phi.exponent(i, j) = v;
      phi.exponent(j, i) = std::conj(v);
    }
  }
  return phi;
}

PhaseMatrix phase_matrix(const EnsembleSpec& spec, double t, SelfCheck check) {
  const auto closed = phase_integrals(spec, t);
  if (check == SelfCheck::enabled) {
    const auto quadrature = phase_integrals_quadrature(spec, t);
    compare_phase_integrals(closed, quadrature, spec.g() / std::abs(decay_rate(spec)), t);
  }
  return assemble_phase_matrix(spec.N(), spec.n_th(), spec.gamma(), closed, t);
}

DickeMatrix apply_phase(const DickeMatrix& rho0, const PhaseMatrix& phi) {
  if (rho0.rows() != phi.exponent.rows() || rho0.cols() != phi.exponent.cols())
    throw DimensionMismatch("apply_phase: density matrix and phase matrix differ in size");
  DickeMatrix out = rho0.cwiseProduct(phi.exponent.array().exp().matrix());
  require_density_matrix(out, "apply_phase");
  return out;
}

}  // namespace phsq
