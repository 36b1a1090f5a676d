#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phsq/dicke.hpp"
#include "phsq/errors.hpp"
#include "phsq/phonon_geometry.hpp"

using namespace phsq;
using std::numbers::pi;

TEST_CASE("unit amplitude: start, half period and loop closure") {
  const EnsembleSpec lossless(10, 1000.0, EnsembleSpec::lossless);
  CHECK(std::abs(unit_amplitude(lossless, 0.0)) == 0.0);
  const cplx half = unit_amplitude(lossless, pi / 1000.0);
  CHECK(half.real() == doctest::Approx(-2.0 / 1000.0).epsilon(1e-12));
  CHECK(std::abs(half.imag()) < 1e-17);
  for (int k = 1; k <= 5; ++k) CHECK(std::abs(unit_amplitude(lossless, 2 * pi * k / 1000.0)) < 1e-15);
}

TEST_CASE("unit amplitude stays inside the damped bound") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> t(0.0, 50.0), logq(0.0, 6.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double Q = std::pow(10.0, logq(rng));
    const EnsembleSpec s(10, 1000.0, Q);
    const double bound = 2.0 / 1000.0 / std::sqrt(1.0 + 1.0 / (4 * Q * Q));
    CHECK(std::abs(unit_amplitude(s, t(rng))) <= bound * (1 + 1e-12));
  }
}

TEST_CASE("trajectories: circles, symmetry, zero orbit") {
  const EnsembleSpec s(10, 1000.0, EnsembleSpec::lossless);
  std::vector<double> times;
  for (int k = 0; k <= 400; ++k) times.push_back(2 * pi / 1000.0 * k / 400.0);

  for (const auto& p : trajectory(s, 0, times)) CHECK(std::abs(p.alpha) == 0.0);

  double max_re = 0.0;
  for (const auto& p : trajectory(s, 3, times)) {
    // radius |m| g/w_a around -m g/w_a
    CHECK(std::abs(std::abs(p.alpha + 3.0 / 1000.0) - 3.0 / 1000.0) < 1e-12);
    max_re = std::max(max_re, std::abs(p.alpha.real()));
  }
  CHECK(max_re == doctest::Approx(6.0 / 1000.0).epsilon(1e-9));

  const auto plus = trajectory(s, 2, times), minus = trajectory(s, -2, times);
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(std::abs(plus[k].alpha + minus[k].alpha) == 0.0);
  CHECK_THROWS_AS(trajectory(s, 11, times), InvalidArgument);
}

TEST_CASE("phase matrix invariants") {
  const EnsembleSpec s(6, 1000.0, 300.0, 20.0);
  for (double t : {0.0, 0.37, 12.5, 160.0}) {
    const auto phi = phase_matrix(s, t);
    CHECK(phi.N() == 6);
    for (int i = 0; i < 13; ++i) {
      CHECK(phi.exponent(i, i) == cplx(0.0, 0.0));
      for (int j = 0; j < 13; ++j) {
        CHECK(phi.exponent(j, i) == std::conj(phi.exponent(i, j)));
        CHECK(phi.exponent(i, j).real() <= 0.0);
      }
    }
  }
}

TEST_CASE("lossless loop closure gives a pure twist") {
  const double w = 1000.0;
  for (double n_th : {0.0, 10.0}) {
    const EnsembleSpec s(4, w, EnsembleSpec::lossless, n_th);
    for (int k : {1, 7, 25000}) {
      const double t = 2 * pi * k / w;
      const auto phi = phase_matrix(s, t, k > 100 ? SelfCheck::skip : SelfCheck::enabled);
      for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
          const double m = i - 4, n = j - 4;
          const cplx want(0.0, -2 * pi * k / (w * w) * (n * n - m * m));
          CHECK(std::abs(phi.exponent(i, j) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
        }
      // Revival: coherences return to their initial magnitudes.
      const auto rho0 = css_x(4);
      const auto rho = apply_phase(rho0, phi);
      CHECK((rho.cwiseAbs() - rho0.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("long-time twist rate") {
  // Re int alpha -> -(g/w_a^2) w_a t/(1 + 1/(4Q^2)) once the transient has decayed.
  const EnsembleSpec s(10, 1000.0, 1000.0);
  const double t = 160.0;
  const double want = -(1.0 / (1000.0 * 1000.0)) * 1000.0 * t / (1.0 + 1.0 / (4e6));
  CHECK(phase_integrals(s, t).twist == doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("closed-form integrals against quadrature") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> t(0.0, 30.0), logq(0.0, 5.0), w(20.0, 2000.0);
  for (int trial = 0; trial < 100; ++trial) {
    const EnsembleSpec s(10, w(rng), std::pow(10.0, logq(rng)));
    const double tt = t(rng);
    const auto c = phase_integrals(s, tt);
    const auto q = phase_integrals_quadrature(s, tt);
    CHECK_NOTHROW(compare_phase_integrals(c, q, 1.0 / s.omega_a(), tt));
    // |alpha|^2 under the composite trapezoid rule, one Richardson step.
    auto trapezoid = [&](int n) {
      double sum = 0.0;
      for (int k = 0; k <= n; ++k) sum += (k == 0 || k == n ? 0.5 : 1.0) * std::norm(unit_amplitude(s, tt * k / n));
      return sum * tt / n;
    };
    const double trap = (4 * trapezoid(100000) - trapezoid(50000)) / 3;
    const double scale = 1.0 / (s.omega_a() * s.omega_a()) * std::max(tt, 1.0);
    CHECK(std::abs(trap - c.amplitude_sq_integral) <= 1e-8 * c.amplitude_sq_integral + 1e-14 * scale);
  }
}

TEST_CASE("mismatch between routes is reported") {
  PhaseIntegrals a{1.0, 0.5, 0.25}, b{1.0 + 1e-6, 0.5, 0.25};
  CHECK_THROWS_AS(compare_phase_integrals(a, b, 1.0, 1.0), QuadratureMismatch);
  CHECK_NOTHROW(compare_phase_integrals(a, a, 1.0, 1.0));
}

TEST_CASE("damping is monotone in n_th and 1/Q") {
  const double t = 40.0;
  double prev = 1.0;
  for (double n_th : {0.0, 1.0, 10.0, 100.0}) {
    const double re = phase_matrix(EnsembleSpec(3, 1000.0, 500.0, n_th), t, SelfCheck::skip).exponent(0, 6).real();
    CHECK(re <= prev);
    prev = re;
  }
  prev = 1.0;
  for (double Q : {1e6, 1e4, 1e3, 10.0}) {
    const double re = phase_matrix(EnsembleSpec(3, 1000.0, Q, 5.0), t, SelfCheck::skip).exponent(0, 6).real();
    CHECK(re <= prev);
    prev = re;
  }
}

TEST_CASE("apply_phase") {
  const auto rho0 = css_x(10);
  PhaseMatrix zero;
  zero.exponent = MatrixXc::Zero(21, 21);
  CHECK((apply_phase(rho0, zero) - rho0).cwiseAbs().maxCoeff() == 0.0);
  PhaseMatrix wrong;
  wrong.exponent = MatrixXc::Zero(5, 5);
  CHECK_THROWS_AS(apply_phase(rho0, wrong), DimensionMismatch);

  // Single interior minimum near gt = 160.
  const EnsembleSpec s(10, 1000.0, 1000.0);
  double best = 1.0, arg = 0.0;
  int turns = 0;
  double prev = 1.0, prev_slope = -1.0;
  for (double t = 0.5; t <= 300.0; t += 0.5) {
    const double xi = squeezing_parameter(apply_phase(rho0, phase_matrix(s, t, SelfCheck::skip)));
    if (xi < best) best = xi, arg = t;
    const double slope = xi - prev;
    if ((slope > 0) != (prev_slope > 0)) ++turns;
    prev = xi;
    prev_slope = slope;
  }
  CHECK(turns == 1);
  CHECK(arg == doctest::Approx(160.0).epsilon(0.1));
}
