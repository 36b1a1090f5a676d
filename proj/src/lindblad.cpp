#include "phsq/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "phsq/dicke.hpp"
#include "phsq/errors.hpp"

namespace phsq {

namespace {

constexpr cplx I{0.0, 1.0};

void guard_dimension(int N, int n_max, const char* who) {
  const long D = long(n_max + 1) * long(2 * N + 1);
  if (D > kMaxCompositeDim) {
    std::ostringstream os;
    os << who << ": composite dimension " << D << " exceeds " << kMaxCompositeDim;
    throw InvalidArgument(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------- truncation

int FockTruncation::floor_for(const EnsembleSpec& spec) {
  const double r = spec.N() * spec.g() / spec.omega_a();
  return int(std::ceil(4.0 * r * r + 10.0 * (spec.n_th() + 1.0) - 1e-12));
}

FockTruncation FockTruncation::for_spec(const EnsembleSpec& spec, int n_max) {
  const int lo = floor_for(spec);
  if (n_max == 0) return {lo};
  if (n_max < lo) {
    std::ostringstream os;
    os << "FockTruncation: n_max=" << n_max << " is below the floor " << lo;
    throw InvalidArgument(os.str());
  }
  return {n_max};
}

// ---------------------------------------------------------------- states

CompositeState::CompositeState(int N, int n_max, MatrixXc rho) : N_(N), n_max_(n_max), rho_(std::move(rho)) {
  if (N < 1 || n_max < 0) throw InvalidArgument("CompositeState: need N >= 1, n_max >= 0");
  const long D = long(n_max + 1) * (2 * N + 1);
  if (rho_.rows() != D || rho_.cols() != D) throw DimensionMismatch("CompositeState: matrix size mismatch");
}

CompositeState CompositeState::product(const MatrixXc& phonon, const DickeMatrix& spin) {
  if (phonon.rows() != phonon.cols() || spin.rows() != spin.cols() || spin.rows() % 2 == 0)
    throw DimensionMismatch("CompositeState::product: bad factor shapes");
  const int N = int(spin.rows() - 1) / 2;
  const int n_max = int(phonon.rows()) - 1;
  guard_dimension(N, n_max, "CompositeState::product");
  const int S = 2 * N + 1, d = n_max + 1;
  MatrixXc rho(d * S, d * S);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) rho.block(k * S, l * S, S, S) = phonon(k, l) * spin;
  return CompositeState(N, n_max, std::move(rho));
}

DickeMatrix CompositeState::spin_reduced() const {
  const int S = 2 * N_ + 1, d = n_max_ + 1;
  DickeMatrix out = DickeMatrix::Zero(S, S);
  for (int k = 0; k < d; ++k) out += rho_.block(k * S, k * S, S, S);
  return out;
}

MatrixXc CompositeState::phonon_reduced() const {
  const int S = 2 * N_ + 1, d = n_max_ + 1;
  MatrixXc out(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) out(k, l) = rho_.block(k * S, l * S, S, S).trace();
  return out;
}

MatrixXc CompositeState::block(int m, int n) const {
  if (std::abs(m) > N_ || std::abs(n) > N_) throw InvalidArgument("CompositeState::block: |m|, |n| <= N");
  const int S = 2 * N_ + 1, d = n_max_ + 1;
  MatrixXc out(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) out(k, l) = rho_(k * S + m + N_, l * S + n + N_);
  return out;
}

MatrixXc vacuum_state(int n_max) {
  if (n_max < 0) throw InvalidArgument("vacuum_state: n_max must be >= 0");
  MatrixXc v = MatrixXc::Zero(n_max + 1, n_max + 1);
  v(0, 0) = 1.0;
  return v;
}

MatrixXc thermal_state(int n_max, double n_th) {
  if (n_max < 0 || !(n_th >= 0)) throw InvalidArgument("thermal_state: need n_max >= 0, n_th >= 0");
  if (n_th == 0.0) return vacuum_state(n_max);
  const double r = n_th / (n_th + 1.0);
  Eigen::VectorXd p(n_max + 1);
  for (int k = 0; k <= n_max; ++k) p(k) = std::pow(r, k) / (n_th + 1.0);
  p /= p.sum();
  return p.cast<cplx>().asDiagonal();
}

// ---------------------------------------------------------------- generator

Liouvillian::Liouvillian(const EnsembleSpec& spec, FockTruncation trunc) {
  const int N = spec.N(), S = 2 * N + 1, d = trunc.dim();
  guard_dimension(N, trunc.n_max, "build_generator");
  dim_ = d * S;
  c_down_ = 0.5 * spec.gamma() * (spec.n_th() + 1.0);
  c_up_ = 0.5 * spec.gamma() * spec.n_th();

  using Trip = Eigen::Triplet<cplx>;
  std::vector<Trip> ta, th;
  for (int k = 0; k + 1 < d; ++k)
    for (int s = 0; s < S; ++s) ta.emplace_back(k * S + s, (k + 1) * S + s, std::sqrt(double(k + 1)));
  a_.resize(dim_, dim_);
  a_.setFromTriplets(ta.begin(), ta.end());
  ad_ = a_.adjoint();
  ada_ = ad_ * a_;
  aad_ = a_ * ad_;  // truncated product, keeps the dissipator trace preserving
  Eigen::SparseMatrix<cplx> jz(dim_, dim_);
  for (int k = 0; k < d; ++k)
    for (int s = 0; s < S; ++s) th.emplace_back(k * S + s, k * S + s, double(s - N));
  jz.setFromTriplets(th.begin(), th.end());
  Eigen::SparseMatrix<cplx> x = a_ + ad_;
  H_ = spec.omega_a() * ada_ + spec.g() * (x * jz);
}

MatrixXc Liouvillian::apply(const MatrixXc& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionMismatch("Liouvillian::apply: size mismatch");
  MatrixXc out = -I * ((H_ * rho).eval() - (rho * H_).eval());
  if (c_down_ != 0.0) {
    MatrixXc ar = a_ * rho;
    out += c_down_ * (2.0 * (ar * ad_).eval() - (ada_ * rho).eval() - (rho * ada_).eval());
  }
  if (c_up_ != 0.0) {
    MatrixXc ar = ad_ * rho;
    out += c_up_ * (2.0 * (ar * a_).eval() - (aad_ * rho).eval() - (rho * aad_).eval());
  }
  return out;
}

Liouvillian build_generator(const EnsembleSpec& spec, FockTruncation trunc) { return Liouvillian(spec, trunc); }

double max_step(const EnsembleSpec& spec) {
  double h = 0.01 / spec.omega_a();
  if (spec.gamma() > 0) h = std::min(h, 0.1 / (spec.gamma() * (spec.n_th() + 1.0)));
  return h;
}

// ---------------------------------------------------------------- block integrator

namespace {

// Phonon blocks X_mn for m <= n, stored structure-of-arrays with the block
// index innermost. Fock indices run over a ghost ring -1..d that stays zero,
// so the stencil needs no boundary branches: value (i, j) of block b lives at
// ((i+1) (d+2) + (j+1)) B + b, real parts first, imaginary parts in the
// second half of the buffer.
class BlockKernel {
 public:
  BlockKernel(const EnsembleSpec& spec, FockTruncation trunc) : N_(spec.N()), d_(trunc.dim()), w_(d_ + 2) {
    const int S = 2 * N_ + 1;
    for (int mi = 0; mi < S; ++mi)
      for (int ni = mi; ni < S; ++ni) pairs_.push_back({mi - N_, ni - N_});
    nb_ = int(pairs_.size());
    B_ = (nb_ + 3) / 4 * 4;
    half_ = std::size_t(w_) * w_ * B_;
    gm_.assign(std::size_t(B_), 0.0);
    gn_.assign(std::size_t(B_), 0.0);
    for (int b = 0; b < nb_; ++b) {
      gm_[std::size_t(b)] = spec.g() * pairs_[std::size_t(b)].first;
      gn_[std::size_t(b)] = spec.g() * pairs_[std::size_t(b)].second;
    }
    const double c1 = 0.5 * spec.gamma() * (spec.n_th() + 1.0);
    const double c2 = 0.5 * spec.gamma() * spec.n_th();
    const int n_max = d_ - 1;
    coef_.resize(std::size_t(d_) * d_);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) {
        // Truncated a a^dagger has a zero in its last diagonal entry.
        const double aad_i = i < n_max ? i + 1.0 : 0.0, aad_j = j < n_max ? j + 1.0 : 0.0;
        Coef& c = coef_[std::size_t(i * d_ + j)];
        c.dr = -c1 * (i + j) - c2 * (aad_i + aad_j);
        c.di = -spec.omega_a() * (i - j);
        c.up = std::sqrt(double(i));
        c.down = std::sqrt(double(i + 1));
        c.left = std::sqrt(double(j));
        c.right = std::sqrt(double(j + 1));
        c.lower = 2.0 * c1 * std::sqrt(double(i + 1) * double(j + 1));
        c.raise = 2.0 * c2 * std::sqrt(double(i) * double(j));
      }
  }

  std::size_t size() const { return 2 * half_; }

  void load(const CompositeState& s, std::vector<double>& x) const {
    x.assign(size(), 0.0);
    const int S = 2 * N_ + 1;
    for (int b = 0; b < nb_; ++b) {
      const auto [m, n] = pairs_[std::size_t(b)];
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
          const cplx v = s.matrix()(i * S + m + N_, j * S + n + N_);
          x[at(i, j) + b] = v.real();
          x[half_ + at(i, j) + b] = v.imag();
        }
    }
  }

  CompositeState store(const std::vector<double>& x) const {
    const int S = 2 * N_ + 1;
    MatrixXc rho(d_ * S, d_ * S);
    for (int b = 0; b < nb_; ++b) {
      const auto [m, n] = pairs_[std::size_t(b)];
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
          const cplx v(x[at(i, j) + b], x[half_ + at(i, j) + b]);
          rho(i * S + m + N_, j * S + n + N_) = v;
          rho(j * S + n + N_, i * S + m + N_) = std::conj(v);
        }
    }
    return CompositeState(N_, d_ - 1, std::move(rho));
  }

  void rhs(const double* x, double* y) const {
    switch (B_) {
      case 4: return rhs_fixed<4>(x, y);
      case 8: return rhs_fixed<8>(x, y);
      case 12: return rhs_fixed<12>(x, y);
      case 16: return rhs_fixed<16>(x, y);
      default: return rhs_fixed<0>(x, y);
    }
  }

  // Bc > 0 fixes the block count at compile time so the lane loop unrolls.
  template <int Bc>
  void rhs_fixed(const double* __restrict x, double* __restrict y) const {
    const std::size_t B = Bc > 0 ? std::size_t(Bc) : std::size_t(B_);
    const std::size_t H = half_, row = std::size_t(w_) * B;
    const double* __restrict gm = gm_.data();
    const double* __restrict gn = gn_.data();
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        const Coef& c = coef_[std::size_t(i * d_ + j)];
        const std::size_t o = at(i, j);
        const double* __restrict xr = x + o;
        const double* __restrict xi = x + H + o;
        double* __restrict yr = y + o;
        double* __restrict yi = y + H + o;
#pragma GCC ivdep
        for (std::size_t b = 0; b < B; ++b) {
          // -i g m (a + a^dagger) X + i g n X (a + a^dagger)
          const double sr = c.up * xr[b - row] + c.down * xr[b + row];
          const double si = c.up * xi[b - row] + c.down * xi[b + row];
          const double tr = c.left * xr[b - B] + c.right * xr[b + B];
          const double ti = c.left * xi[b - B] + c.right * xi[b + B];
          // jumps: a X a^dagger and a^dagger X a
          const double jr = c.lower * xr[b + row + B] + c.raise * xr[b - row - B];
          const double ji = c.lower * xi[b + row + B] + c.raise * xi[b - row - B];
          yr[b] = c.dr * xr[b] - c.di * xi[b] + gm[b] * si - gn[b] * ti + jr;
          yi[b] = c.dr * xi[b] + c.di * xr[b] - gm[b] * sr + gn[b] * tr + ji;
        }
      }
    }
  }

  /// Forces the spin-diagonal blocks to be Hermitian; returns the largest
  /// asymmetry that was removed.
  double symmetrize(std::vector<double>& x) const {
    double worst = 0.0;
    for (int b = 0; b < nb_; ++b) {
      if (pairs_[std::size_t(b)].first != pairs_[std::size_t(b)].second) continue;
      for (int i = 0; i < d_; ++i) {
        x[half_ + at(i, i) + b] = 0.0;
        for (int j = i + 1; j < d_; ++j) {
          double& ar = x[at(i, j) + b];
          double& ai = x[half_ + at(i, j) + b];
          double& br = x[at(j, i) + b];
          double& bi = x[half_ + at(j, i) + b];
          worst = std::max(worst, std::max(std::abs(ar - br), std::abs(ai + bi)));
          const double re = 0.5 * (ar + br), im = 0.5 * (ai - bi);
          ar = re;
          br = re;
          ai = im;
          bi = -im;
        }
      }
    }
    return worst;
  }

  double trace(const std::vector<double>& x) const {
    double tr = 0.0;
    for (int b = 0; b < nb_; ++b)
      if (pairs_[std::size_t(b)].first == pairs_[std::size_t(b)].second)
        for (int i = 0; i < d_; ++i) tr += x[at(i, i) + b];
    return tr;
  }

 private:
  struct Coef {
    double dr, di, up, down, left, right, lower, raise;
  };

  std::size_t at(int i, int j) const { return (std::size_t(i + 1) * w_ + std::size_t(j + 1)) * B_; }

  int N_, d_, w_, nb_ = 0, B_ = 0;
  std::size_t half_ = 0;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<double> gm_, gn_;
  std::vector<Coef> coef_;
};

}  // namespace

CompositeState evolve_master(const CompositeState& rho0, const EnsembleSpec& spec, FockTruncation trunc, double t,
                             const EvolveOptions& opt, const Observer& observer) {
  if (rho0.N() != spec.N() || rho0.n_max() != trunc.n_max)
    throw DimensionMismatch("evolve_master: state does not match spec/truncation");
  guard_dimension(spec.N(), trunc.n_max, "evolve_master");
  if (!(t >= 0) || !std::isfinite(t)) throw InvalidArgument("evolve_master: t must be >= 0");
  const double h_max = max_step(spec);
  const double h_req = opt.step > 0 ? opt.step : h_max;
  if (h_req > h_max * (1 + 1e-12)) throw InvalidArgument("evolve_master: step exceeds the accuracy bound");
  const long steps = t > 0 ? long(std::ceil(t / h_req - 1e-9)) : 0;
  const double h = steps > 0 ? t / double(steps) : 0.0;

  BlockKernel kernel(spec, trunc);
  std::vector<double> x, tmp(kernel.size()), k(kernel.size()), acc(kernel.size());
  kernel.load(rho0, x);
  kernel.symmetrize(x);
  const std::size_t n = kernel.size();

  auto check_trace = [&](double now) {
    const double err = std::abs(kernel.trace(x) - 1.0);
    if (err > opt.trace_tolerance) {
      std::ostringstream os;
      os.precision(3);
      os << "evolve_master: |Tr rho - 1| = " << err << " at t=" << now;
      throw TraceDrift(os.str());
    }
  };

  for (long s = 1; s <= steps; ++s) {
    kernel.rhs(x.data(), k.data());
    for (std::size_t q = 0; q < n; ++q) {
      acc[q] = k[q];
      tmp[q] = x[q] + 0.5 * h * k[q];
    }
    kernel.rhs(tmp.data(), k.data());
    for (std::size_t q = 0; q < n; ++q) {
      acc[q] += 2.0 * k[q];
      tmp[q] = x[q] + 0.5 * h * k[q];
    }
    kernel.rhs(tmp.data(), k.data());
    for (std::size_t q = 0; q < n; ++q) {
      acc[q] += 2.0 * k[q];
      tmp[q] = x[q] + h * k[q];
    }
    kernel.rhs(tmp.data(), k.data());
    for (std::size_t q = 0; q < n; ++q) x[q] += h / 6.0 * (acc[q] + k[q]);
    kernel.symmetrize(x);
    if (opt.sample_every > 0 && s % opt.sample_every == 0) {
      check_trace(double(s) * h);
      if (observer && s != steps) observer(double(s) * h, kernel.store(x));
    }
  }
  check_trace(t);
  CompositeState out = kernel.store(x);
  if (observer) observer(t, out);
  return out;
}

// ---------------------------------------------------------------- phases

PhaseMatrix reduce_and_extract_phases(const CompositeState& rho, const DickeMatrix& rho0_spin, double t,
                                      const PhaseMatrix* previous) {
  const DickeMatrix spin = rho.spin_reduced();
  if (spin.rows() != rho0_spin.rows()) throw DimensionMismatch("reduce_and_extract_phases: spin dimension mismatch");
  const int dim = int(spin.rows());
  PhaseMatrix phi;
  phi.time = t;
  phi.exponent = MatrixXc::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (i == j) continue;
      const cplx r0 = rho0_spin(i, j);
      if (std::abs(r0) <= 1e-10) throw InvalidArgument("reduce_and_extract_phases: vanishing initial coherence");
      cplx v = std::log(spin(i, j) / r0);
      if (previous) {
        const double prev = previous->exponent(i, j).imag();
        const double two_pi = 2.0 * std::numbers::pi;
        const double im = v.imag() + two_pi * std::round((prev - v.imag()) / two_pi);
        if (std::abs(im - prev) > std::numbers::pi / 2) {
          std::ostringstream os;
          os << "reduce_and_extract_phases: phase step " << (im - prev) << " at t=" << t << " for (" << i << ","
             << j << ")";
          throw PhaseUnwrapAmbiguity(os.str());
        }
        v = cplx(v.real(), im);
      }
      phi.exponent(i, j) = v;
    }
  return phi;
}

double max_relative_phase_error(const PhaseMatrix& a, const PhaseMatrix& b) {
  if (a.exponent.rows() != b.exponent.rows()) throw DimensionMismatch("max_relative_phase_error: size mismatch");
  double worst = 0.0;
  for (int i = 0; i < a.exponent.rows(); ++i)
    for (int j = 0; j < a.exponent.cols(); ++j) {
      if (i == j) continue;
      const double ref = std::abs(b.exponent(i, j));
      const double diff = std::abs(a.exponent(i, j) - b.exponent(i, j));
      worst = std::max(worst, ref > 0 ? diff / ref : diff);
    }
  return worst;
}

OracleRun run_oracle(const OracleConfig& cfg) {
  const auto& spec = cfg.spec;
  OracleRun run;
  run.trunc = FockTruncation::for_spec(spec, cfg.n_max);
  if (cfg.report_times.empty()) throw InvalidArgument("run_oracle: no report times");
  if (!(cfg.sample_dt > 0)) throw InvalidArgument("run_oracle: sample_dt must be > 0");
  const double h_req = cfg.step > 0 ? cfg.step : max_step(spec);
  const long every = long(std::ceil(cfg.sample_dt / h_req - 1e-9));
  run.step = cfg.sample_dt / double(every);

  std::vector<long> report_index;
  for (double t : cfg.report_times) {
    const double q = t / cfg.sample_dt;
    if (!(t > 0) || std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q))
      throw InvalidArgument("run_oracle: report times must be positive multiples of sample_dt");
    report_index.push_back(long(std::llround(q)));
  }
  const long last = *std::max_element(report_index.begin(), report_index.end());

  const DickeMatrix spin0 = css_x<double>(spec.N());
  const MatrixXc phonon0 = cfg.thermal_initial ? thermal_state(run.trunc.n_max, spec.n_th()) : vacuum_state(run.trunc.n_max);
  const CompositeState rho0 = CompositeState::product(phonon0, spin0);
  const auto ops = collective_operators<double>(spec.N());
  const double jz0 = (spin0 * ops.Jz).trace().real();

  run.phases.resize(cfg.report_times.size());
  PhaseMatrix previous = reduce_and_extract_phases(rho0, spin0, 0.0);
  long sample = 0;
  auto observe = [&](double t, const CompositeState& s) {
    ++sample;
    const DickeMatrix spin = s.spin_reduced();
    const auto diag = density_diagnostics(spin);
    run.max_trace_error = std::max(run.max_trace_error, diag.trace_error);
    run.max_hermiticity_error = std::max(run.max_hermiticity_error, diag.hermiticity_error);
    run.min_spin_eigenvalue = std::min(run.min_spin_eigenvalue, diag.min_eigenvalue);
    run.max_jz_drift = std::max(run.max_jz_drift, std::abs((spin * ops.Jz).trace().real() - jz0));
    previous = reduce_and_extract_phases(s, spin0, t, &previous);
    for (std::size_t r = 0; r < report_index.size(); ++r)
      if (report_index[r] == sample) run.phases[r] = previous;
  };
  EvolveOptions eo;
  eo.step = run.step;
  eo.sample_every = every;
  evolve_master(rho0, spec, run.trunc, double(last) * cfg.sample_dt, eo, observe);
  if (run.min_spin_eigenvalue < -1e-7)
    throw InvariantViolation("run_oracle: reduced spin state lost positivity");
  return run;
}

namespace {

double max_change(const OracleRun& a, const OracleRun& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.phases.size(); ++r)
    worst = std::max(worst, max_relative_phase_error(b.phases[r], a.phases[r]));
  return worst;
}

}  // namespace

ConvergedOracle run_oracle_converged(const OracleConfig& cfg, double rel_tol) {
  ConvergedOracle out;
  out.base = run_oracle(cfg);
  OracleConfig fock = cfg;
  fock.n_max = 2 * out.base.trunc.n_max;
  fock.step = out.base.step;
  out.doubled_fock = run_oracle(fock);
  OracleConfig fine = cfg;
  fine.n_max = out.base.trunc.n_max;
  fine.step = out.base.step / 2;
  out.halved_step = run_oracle(fine);
  out.truncation_change = max_change(out.base, out.doubled_fock);
  out.step_change = max_change(out.base, out.halved_step);
  if (out.truncation_change > rel_tol || out.step_change > rel_tol) {
    std::ostringstream os;
    os << "oracle not converged: doubling n_max changes phases by " << out.truncation_change
       << ", halving the step by " << out.step_change << " (tolerance " << rel_tol << ")";
    throw TruncationNotConverged(os.str());
  }
  return out;
}

}  // namespace phsq
