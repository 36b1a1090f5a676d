#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phsq/bang_bang.hpp"
#include "phsq/dicke.hpp"
#include "phsq/errors.hpp"

using namespace phsq;
using std::numbers::pi;

TEST_CASE("schedule and bath validation") {
  CHECK_THROWS_AS(BBSchedule(-1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(BBSchedule(2, -1.0), InvalidArgument);
  CHECK_THROWS_AS(BathSpec(-1.0, 1.0, 4.0), InvalidArgument);
  CHECK_THROWS_AS(BathSpec(0.0, 0.0, 4.0), InvalidArgument);
  CHECK_THROWS_AS(BathSpec(0.0, 1.0, 0.0), InvalidArgument);
  CHECK(BBSchedule(0, 2.0).intervals() == 1);
  CHECK(BBSchedule(1, 2.0).intervals() == 1);
  CHECK(BBSchedule(8, 2.0).interval_width() == 0.25);
}

TEST_CASE("switch function") {
  for (double tau : {0.0, 0.3, 0.99}) {
    CHECK(switch_function(BBSchedule(0, 1.0), tau) == 1);
    CHECK(switch_function(BBSchedule(1, 1.0), tau) == 1);
  }
  const BBSchedule two(2, 1.0);
  CHECK(switch_function(two, 0.25) == 1);
  CHECK(switch_function(two, 0.75) == -1);
  CHECK_THROWS_AS(switch_function(two, 1.0), InvalidArgument);
  CHECK_THROWS_AS(switch_function(two, -0.1), InvalidArgument);

  const BBSchedule four(4, 1.0);
  const int n = 4000;
  int sum = 0;
  for (int k = 0; k < n; ++k) sum += switch_function(four, (k + 0.5) / n);
  CHECK(sum == 0);
}

TEST_CASE("pulsed amplitude: reductions and closed cases") {
  const EnsembleSpec s(10, 1000.0, 1000.0);
  for (double t : {0.0, 0.01, 1.7, 160.0}) CHECK(amplitude_bb(s, BBSchedule(0, t), t) == unit_amplitude(s, t));

  const EnsembleSpec lossless(10, 1000.0, EnsembleSpec::lossless);
  const double period = 2 * pi / 1000.0;
  CHECK(std::abs(amplitude_bb(lossless, BBSchedule(2, period), period)) == doctest::Approx(4.0 / 1000.0).epsilon(1e-12));
  for (int M : {1, 5, 40})
    CHECK(std::abs(amplitude_bb(lossless, BBSchedule(M, M * period), M * period)) < 1e-15);
}

TEST_CASE("pulsed amplitude against quadrature") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pulses(0, 60);
  std::uniform_real_distribution<double> total(0.01, 20.0), frac(0.0, 1.0), logq(0.5, 5.0);
  for (int trial = 0; trial < 60; ++trial) {
    const EnsembleSpec s(10, 200.0, std::pow(10.0, logq(rng)));
    const BBSchedule sched(pulses(rng), total(rng));
    const double t = sched.t_total * frac(rng);
    const cplx a = amplitude_bb(s, sched, t), q = amplitude_bb_quadrature(s, sched, t);
    CHECK(std::abs(a - q) <= 1e-10 * std::max(std::abs(q), 1.0 / s.omega_a()));
  }
}

TEST_CASE("filter modulation limits") {
  CHECK(filter_modulation(4, 3.0, 0.0) == 0.0);
  const double t = 2.0;
  for (int M : {0, 2, 6}) {
    const double want = 2 * t * t / ((2.0 * M + 2) * (2.0 * M + 2));
    CHECK(filter_modulation(M, 1e-6, t) == doctest::Approx(want).epsilon(1e-9));
  }
  for (int M : {1, 3, 7}) CHECK(filter_modulation(M, 1e-6, t) < 1e-12);
}

TEST_CASE("filter modulation matches the printed form away from singularities") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> w(0.01, 50.0), tt(0.1, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int M = trial % 12;
    const double omega = w(rng), t = tt(rng);
    const double x = omega * t / (2 * M + 2);
    if (std::abs(std::cos(x)) < 1e-2) continue;
    const double printed = std::pow(std::tan(x), 2) * (1 + (M % 2 ? -1.0 : 1.0) * std::cos(omega * t)) / (omega * omega);
    CHECK(std::abs(filter_modulation(M, omega, t) - printed) <= 1e-9 * std::max(printed, 1e-12 * t * t));
  }
}

TEST_CASE("filter modulation at the removable singularities") {
  const double t = 1.0;
  for (int M : {1, 2, 5, 500}) {
    for (int k : {0, 1, 3}) {
      const double w0 = (2 * M + 2) * (pi / 2 + k * pi) / t;
      auto sym = [&](double d) { return 0.5 * (filter_modulation(M, w0 * (1 + d), t) + filter_modulation(M, w0 * (1 - d), t)); };
      // Richardson on the symmetric mean, whose error is O(d^2).
      const double lim = (4 * sym(5e-6) - sym(1e-5)) / 3;
      const double at = filter_modulation(M, w0, t);
      CHECK(std::isfinite(at));
      CHECK(at > 0.0);
      CHECK(std::abs(at - lim) <= 1e-6 * lim);
    }
  }
}

TEST_CASE("bath spectrum") {
  const BathSpec bath(4e-4, 1.0, 4.0);
  CHECK(bath_spectrum(BathSpec(0.0, 1.0, 4.0), 2.0) == 0.0);
  CHECK(bath_spectrum(bath, 0.0) == doctest::Approx(2 * 4e-4 / 4.0).epsilon(1e-14));
  CHECK(bath_spectrum(bath, 1e-9) == doctest::Approx(2 * 4e-4 / 4.0).epsilon(1e-8));
  const double w = 0.7;
  CHECK(bath_spectrum(bath, w) == doctest::Approx(4e-4 * w * std::exp(-w) / std::tanh(2.0 * w)).epsilon(1e-14));
  CHECK(bath_spectrum(BathSpec(4e-4, 1.0, 1e6), w) == doctest::Approx(4e-4 * w * std::exp(-w)).epsilon(1e-14));
}

TEST_CASE("kappa bound") {
  const BathSpec bath(4e-4, 1.0, 4.0);
  const BBSchedule sched(500, 160.0);
  CHECK(kappa_bound(BathSpec(0.0, 1.0, 4.0), sched, 1, -1, 160.0) == 0.0);
  CHECK(kappa_bound(bath, sched, 1, -1, 0.0) == 0.0);
  CHECK(kappa_bound(bath, sched, 2, 2, 160.0) == 0.0);

  const double k = kappa_bound(bath, sched, 1, -1, 160.0);
  CHECK(k > 0.0);
  CHECK(k == doctest::Approx(4 * kappa_integral(bath, 500, 160.0)).epsilon(1e-15));
  CHECK(kappa_bound(bath, sched, -3, -1, 160.0) == k);
  CHECK(kappa_bound(bath, sched, 0, 2, 160.0) == k);

  KappaOptions twice;
  twice.cutoff_multiple = 100.0;
  const double a = kappa_integral(bath, 500, 160.0), b = kappa_integral(bath, 500, 160.0, twice);
  CHECK(std::abs(a - b) < 1e-6 * a);

  double prev = 0.0;
  for (double t : {10.0, 40.0, 80.0, 160.0}) {
    const double v = kappa_integral(bath, 0, t);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(kappa_integral(BathSpec(8e-4, 1.0, 4.0), 500, 160.0) == doctest::Approx(2 * a).epsilon(1e-8));
}

TEST_CASE("pulsed phase integrals") {
  const EnsembleSpec s(10, 1000.0, 1000.0, 10.0);
  for (int M : {0, 3, 50, 500}) {
    const double t = 37.3;
    const BBSchedule sched(M, t);
    const auto c = phase_integrals_bb(s, sched, t);
    const auto q = phase_integrals_bb_quadrature(s, sched, t);
    CHECK_NOTHROW(compare_phase_integrals(c, q, 1.0 / s.omega_a(), t));

    const auto plus = detail::phase_integrals_bb_signed(s, sched, t, +1);
    const auto minus = detail::phase_integrals_bb_signed(s, sched, t, -1);
    CHECK(std::abs(plus.amplitude_sq_integral - minus.amplitude_sq_integral) <= 1e-12 * plus.amplitude_sq_integral);
    CHECK(std::abs(plus.final_amplitude_sq - minus.final_amplitude_sq) <= 1e-12 * std::max(plus.final_amplitude_sq, 1e-12));
    CHECK(std::abs(plus.twist - minus.twist) <= 1e-12 * std::abs(plus.twist));
  }
}

TEST_CASE("pulsed phase matrix") {
  const EnsembleSpec s(10, 1000.0, 1000.0, 10.0);
  for (double t : {5.0, 160.0}) {
    const auto bb = phase_matrix_bb(s, BBSchedule(0, t), BathSpec(), t);
    const auto plain = phase_matrix(s, t);
    CHECK((bb.exponent - plain.exponent).cwiseAbs().maxCoeff() <= 1e-12 * plain.exponent.cwiseAbs().maxCoeff());
  }

  const BathSpec bath(4e-4, 1.0, 4.0);
  const auto rho0 = css_x(10);
  for (double t : {1.0, 48.7, 160.0}) {
    const auto phi = phase_matrix_bb(s, BBSchedule(500, t), bath, t);
    for (int i = 0; i < 21; ++i) CHECK(phi.exponent(i, i) == cplx(0.0, 0.0));
    CHECK_NOTHROW(apply_phase(rho0, phi));
  }
}
