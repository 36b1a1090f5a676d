#include "phsq/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "phsq/dicke.hpp"
#include "phsq/errors.hpp"

namespace phsq {

namespace {

// |cos x|^k for even k without underflow trouble.
double cos_power(double x, int k) {
  const double c = std::abs(std::cos(x));
  if (c == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(double(k) * std::log(c));
}

}  // namespace

double twist_rate(const EnsembleSpec& spec) {
  const double hg = spec.gamma() / 2, w = spec.omega_a(), g = spec.g();
  return g * g * w / (hg * hg + w * w);
}

AnalyticParams AnalyticParams::at(const EnsembleSpec& spec, double t) {
  if (!(t >= 0)) throw InvalidArgument("AnalyticParams: t must be >= 0");
  return {spec.N(), twist_rate(spec) * t, spec.mu()};
}

cplx steady_phase(const EnsembleSpec& spec, int m, int n, double t) {
  const double ct = twist_rate(spec) * t;
  const double d = m - n;
  return cplx(0.0, ct) * cplx(double(m * m - n * n), spec.mu() * d * d);
}

PhaseMatrix steady_phase_matrix(const EnsembleSpec& spec, double t) {
  const int N = spec.N(), dim = 2 * N + 1;
  PhaseMatrix phi;
  phi.time = t;
  phi.exponent = MatrixXc::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (i != j) phi.exponent(i, j) = steady_phase(spec, i - N, j - N, t);
  return phi;
}

double xi_analytic(const AnalyticParams& p) {
  if (p.N < 1 || !(p.Ct >= 0) || !(p.mu >= 0)) throw InvalidArgument("xi_analytic: invalid parameters");
  const int k = 2 * p.N - 2;
  const double damp = std::exp(-4.0 * p.Ct * p.mu);
  const double A = 1.0 - cos_power(2.0 * p.Ct, k) * damp;
  const double B = -4.0 * std::sin(p.Ct) * cos_power(p.Ct, k) * damp;
  return 1.0 + (2.0 * p.N - 1.0) / 4.0 * (A - std::hypot(A, B));
}

double xi_upper_bound(int N, double mu) {
  if (N < 1 || !(mu >= 0)) throw InvalidArgument("xi_upper_bound: need N >= 1, mu >= 0");
  const double r = mu / std::sqrt(double(N));
  return 1.0 - std::exp(-0.5 - 4.0 * r) / (1.0 - std::exp(-1.0 - 2.0 * r));
}

BoundCheck check_upper_bound(int N, double mu, double xi_opt, double slack) {
  BoundCheck c;
  c.bound = xi_upper_bound(N, mu);
  c.xi_opt = xi_opt;
  c.relative_excess = (xi_opt - c.bound) / c.bound;
  c.flagged = c.relative_excess > slack;
  return c;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::analytic: return "analytic";
    case Backend::numeric: return "numeric";
    case Backend::bb: return "bb";
  }
  return "?";
}

std::optional<Backend> parse_backend(std::string_view name) {
  if (name == "analytic") return Backend::analytic;
  if (name == "numeric") return Backend::numeric;
  if (name == "bb") return Backend::bb;
  return std::nullopt;
}

SqueezingModel::SqueezingModel(EnsembleSpec spec, Backend backend, int M, BathSpec bath)
    : spec_(spec), backend_(backend), M_(M), bath_(bath), rho0_(css_x<double>(spec.N())) {
  if (M < 0) throw InvalidArgument("SqueezingModel: M must be >= 0");
}

DickeMatrix SqueezingModel::state(double t, SelfCheck check) const {
  switch (backend_) {
    case Backend::analytic: return apply_phase(rho0_, steady_phase_matrix(spec_, t));
    case Backend::numeric: return apply_phase(rho0_, phase_matrix(spec_, t, check));
    case Backend::bb: return apply_phase(rho0_, phase_matrix_bb(spec_, BBSchedule(M_, t), bath_, t, check));
  }
  throw InvalidArgument("SqueezingModel: unknown backend");
}

double SqueezingModel::xi(double t, SelfCheck check) const {
  if (backend_ == Backend::analytic) return xi_analytic(AnalyticParams::at(spec_, t));
  return squeezing_parameter(state(t, check));
}

void SqueezingModel::self_check(double t) const {
  if (backend_ == Backend::analytic) return;
  (void)state(t, SelfCheck::enabled);
}

double default_gt_max(int N) { return 400.0 * std::sqrt(10.0 / double(N)); }

OptimalPoint optimal_squeezing(const SqueezingModel& model, const SearchOptions& opt) {
  const double gt_max = opt.gt_max > 0 ? opt.gt_max : default_gt_max(model.spec().N());
  if (!(opt.step > 0) || opt.step > gt_max) throw InvalidArgument("optimal_squeezing: invalid scan step");
  const long K = long(std::floor(gt_max / opt.step + 1e-9));
  if (opt.self_check) model.self_check(opt.step * double((K + 1) / 2));

  auto f = [&](double t) { return model.xi(t); };
  long best = 0;
  double best_xi = 1.0;  // xi^2(0) = 1
  std::vector<double> xs(std::size_t(K) + 1, 1.0);
  for (long k = 1; k <= K; ++k) {
    xs[std::size_t(k)] = f(opt.step * double(k));
    if (xs[std::size_t(k)] < best_xi) {
      best_xi = xs[std::size_t(k)];
      best = k;
    }
  }
  if (best == 0 || best == K) {
    std::ostringstream os;
    os << "optimal_squeezing: xi^2 has no interior minimum on (0, " << gt_max << "] for N=" << model.spec().N()
       << ", Q=" << model.spec().Q() << ", n_th=" << model.spec().n_th() << " (" << backend_name(model.backend())
       << ")";
    throw NoInteriorMinimum(os.str());
  }
  const double lo = opt.step * double(best - 1), hi = opt.step * double(best + 1);
  OptimalPoint p = golden_section(f, lo, hi, opt.rel_tol * opt.step * double(best) * 0.5);
  if (opt.ripple_polish && model.backend() != Backend::analytic) {
    const double period = 2.0 * std::numbers::pi / model.spec().omega_a();
    constexpr int kPoints = 64;
    const double a = std::max(lo, p.t - period), b = std::min(hi, p.t + period);
    const double h = (b - a) / kPoints;
    int arg = -1;
    OptimalPoint scan = p;
    for (int i = 0; i <= kPoints; ++i) {
      const double t = a + h * i;
      const double v = f(t);
      if (v < scan.xi) {
        scan = {t, v};
        arg = i;
      }
    }
    if (arg >= 0) {
      const auto q = golden_section(f, std::max(a, scan.t - h), std::min(b, scan.t + h), 1e-3 * h);
      p = q.xi < scan.xi ? q : scan;
    }
  }
  if (best_xi < p.xi) p = {opt.step * double(best), best_xi};
  return p;
}

OptimalPoint oat_optimum(int N, double ct_max) {
  if (ct_max <= 0) ct_max = 2.0 / std::sqrt(double(N));
  auto f = [&](double ct) { return xi_analytic({N, ct, 0.0}); };
  const int K = 4000;
  double best = 1.0;
  int arg = 0;
  for (int k = 1; k <= K; ++k) {
    const double v = f(ct_max * k / K);
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  const double h = ct_max / K;
  return golden_section(f, std::max(0.0, h * (arg - 1)), h * (arg + 1), 1e-12);
}

}  // namespace phsq
