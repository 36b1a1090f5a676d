#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phsq/dicke.hpp"
#include "phsq/errors.hpp"
#include "phsq/lindblad.hpp"

using namespace phsq;
using std::numbers::pi;

namespace {

MatrixXc random_density(int dim, std::mt19937& rng) {
  std::normal_distribution<double> n;
  MatrixXc a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cplx(n(rng), n(rng));
  MatrixXc rho = a * a.adjoint();
  return rho / rho.trace().real();
}

MatrixXc spin_projector(int N, int m) {
  MatrixXc p = MatrixXc::Zero(2 * N + 1, 2 * N + 1);
  p(m + N, m + N) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("Fock truncation floor") {
  const EnsembleSpec s(2, 50.0, 25.0, 1.0);
  CHECK(FockTruncation::floor_for(s) == 21);  // 4 (2/50)^2 + 20 -> 21
  CHECK(FockTruncation::for_spec(s).n_max == 21);
  CHECK(FockTruncation::for_spec(s, 30).n_max == 30);
  CHECK_THROWS_AS(FockTruncation::for_spec(s, 20), InvalidArgument);
  CHECK_THROWS_AS(Liouvillian(EnsembleSpec(10, 50.0), FockTruncation{100}), InvalidArgument);
}

TEST_CASE("phonon states") {
  const auto vac = vacuum_state(5);
  CHECK(vac(0, 0) == cplx(1.0, 0.0));
  CHECK(vac.trace() == cplx(1.0, 0.0));
  const auto th = thermal_state(60, 1.0);
  CHECK(std::abs(th.trace().real() - 1.0) < 1e-14);
  double mean = 0.0;
  for (int k = 0; k <= 60; ++k) mean += k * th(k, k).real();
  CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(th(3, 3).real() / th(2, 2).real() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("composite state reductions") {
  std::mt19937 rng(1);
  const auto ph = random_density(4, rng);
  const auto sp = random_density(5, rng);
  const auto c = CompositeState::product(ph, sp);
  CHECK((c.spin_reduced() - sp).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((c.phonon_reduced() - ph).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((c.block(1, -2) - ph * sp(3, 0)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(CompositeState(2, 3, MatrixXc::Zero(5, 5)), DimensionMismatch);
}

TEST_CASE("generator preserves trace") {
  std::mt19937 rng(2);
  const EnsembleSpec s(1, 50.0, 25.0, 1.0);
  const FockTruncation tr{20};
  const Liouvillian L(s, tr);
  for (int k = 0; k < 50; ++k) {
    const auto rho = random_density(L.dim(), rng);
    const auto d = L.apply(rho);
    CHECK(std::abs(d.trace()) < 1e-12 * d.cwiseAbs().maxCoeff() * L.dim());
    CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * d.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("uncoupled block evolves freely") {
  // The m = 0 spin block sees no coupling.
  std::mt19937 rng(3);
  const EnsembleSpec s(1, 50.0, EnsembleSpec::lossless);
  const FockTruncation tr{11};
  const auto ph = random_density(tr.dim(), rng);
  const auto rho = CompositeState::product(ph, spin_projector(1, 0));
  const auto d = CompositeState(1, tr.n_max, Liouvillian(s, tr).apply(rho.matrix())).block(0, 0);
  MatrixXc free = MatrixXc::Zero(tr.dim(), tr.dim());
  for (int i = 0; i < tr.dim(); ++i)
    for (int j = 0; j < tr.dim(); ++j) free(i, j) = cplx(0, -50.0 * (i - j)) * ph(i, j);
  CHECK((d - free).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < tr.dim(); ++i) CHECK(std::abs(d(i, i)) < 1e-14);
}

TEST_CASE("block integrator equals RK4 on the full generator") {
  std::mt19937 rng(4);
  const EnsembleSpec s(2, 50.0, 25.0, 1.0);
  const FockTruncation tr{21};
  const Liouvillian L(s, tr);
  const auto rho0 = CompositeState::product(thermal_state(tr.n_max, 1.0), random_density(5, rng));
  const double h = max_step(s);
  EvolveOptions opt;
  opt.step = h;
  const auto fast = evolve_master(rho0, s, tr, 20 * h, opt);

  MatrixXc r = rho0.matrix();
  for (int k = 0; k < 20; ++k) {
    const MatrixXc k1 = L.apply(r);
    const MatrixXc k2 = L.apply(r + 0.5 * h * k1);
    const MatrixXc k3 = L.apply(r + 0.5 * h * k2);
    const MatrixXc k4 = L.apply(r + h * k3);
    r += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  CHECK((fast.matrix() - r).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("step bound") {
  const EnsembleSpec s(2, 50.0, 25.0, 1.0);
  CHECK(max_step(s) == doctest::Approx(0.01 / 50.0));
  CHECK(max_step(EnsembleSpec(2, 50.0, 0.05, 1.0)) == doctest::Approx(0.1 / (1000.0 * 2.0)));
  EvolveOptions opt;
  opt.step = 2 * max_step(s);
  const auto rho0 = CompositeState::product(vacuum_state(21), css_x(2));
  CHECK_THROWS_AS(evolve_master(rho0, s, FockTruncation{21}, 1.0, opt), InvalidArgument);
}

TEST_CASE("lossless loop closure revives the spin coherences") {
  const EnsembleSpec s(1, 50.0, EnsembleSpec::lossless);
  const auto tr = FockTruncation::for_spec(s);
  const auto spin0 = css_x(1);
  const auto rho0 = CompositeState::product(vacuum_state(tr.n_max), spin0);
  const auto out = evolve_master(rho0, s, tr, 2 * pi / 50.0);
  CHECK((out.spin_reduced().cwiseAbs() - spin0.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("phonon relaxes to the thermal distribution") {
  const EnsembleSpec s(1, 1.0, 1.0, 1.0);
  const auto tr = FockTruncation::for_spec(s);
  const auto rho0 = CompositeState::product(vacuum_state(tr.n_max), spin_projector(1, 0));
  const auto out = evolve_master(rho0, s, tr, 20.0);
  const auto ph = out.phonon_reduced();
  double mean = 0.0;
  for (int k = 0; k <= tr.n_max; ++k) mean += k * ph(k, k).real();
  CHECK(std::abs(mean - 1.0) < 1e-3);
  CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-8);
}

TEST_CASE("phase extraction") {
  const auto spin0 = css_x(2);
  const auto rho0 = CompositeState::product(vacuum_state(3), spin0);
  CHECK(reduce_and_extract_phases(rho0, spin0, 0.0).exponent.cwiseAbs().maxCoeff() < 1e-15);

  // A coherence rotated by 0.7 rad against a reference that claims -2.6.
  MatrixXc spin = spin0;
  spin(4, 0) *= std::polar(1.0, 0.7);
  spin(0, 4) = std::conj(spin(4, 0));
  const auto rho = CompositeState::product(vacuum_state(3), spin);
  PhaseMatrix prev;
  prev.exponent = MatrixXc::Zero(5, 5);
  prev.exponent(4, 0) = cplx(0, -2.6);
  CHECK_THROWS_AS(reduce_and_extract_phases(rho, spin0, 1.0, &prev), PhaseUnwrapAmbiguity);
  prev.exponent(4, 0) = cplx(0, 0.7 + 2 * pi - 0.3);
  const auto got = reduce_and_extract_phases(rho, spin0, 1.0, &prev);
  CHECK(got.exponent(4, 0).imag() == doctest::Approx(0.7 + 2 * pi).epsilon(1e-12));
}

TEST_CASE("short oracle run against the closed form") {
  OracleConfig cfg;
  cfg.report_times = {1.0, 2.0};
  const auto run = run_oracle(cfg);
  CHECK(run.max_trace_error < 1e-8);
  CHECK(run.max_hermiticity_error < 1e-8);
  CHECK(run.max_jz_drift < 1e-10);
  CHECK(run.min_spin_eigenvalue > -1e-7);
  for (std::size_t k = 0; k < cfg.report_times.size(); ++k) {
    const auto ref = phase_matrix(cfg.spec, cfg.report_times[k]);
    CHECK(max_relative_phase_error(run.phases[k], ref) < 1e-6);
  }
  cfg.report_times = {0.15};
  CHECK_THROWS_AS(run_oracle(cfg), InvalidArgument);
}
