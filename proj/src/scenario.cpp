#include "phsq/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include "phsq/analytic.hpp"
#include "phsq/bang_bang.hpp"
#include "phsq/errors.hpp"
#include "phsq/lindblad.hpp"
#include "phsq/phonon_geometry.hpp"

namespace phsq {

namespace {

const std::vector<std::string> kScenarios = {"fig1", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "sweep", "oracle-check"};
const std::vector<std::string> kSweepParams = {"Q", "n_th", "N", "M", "eta", "omega_a", "omega_c", "lambda"};

std::string_view trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(std::string_view v) {
  v = trim(v);
  double out = 0;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty() || std::isnan(out))
    throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
  return out;
}

long parse_long(std::string_view v) {
  v = trim(v);
  long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    throw std::invalid_argument("expected an integer, got '" + std::string(v) + "'");
  return out;
}

int parse_int(std::string_view v) {
  const long x = parse_long(v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw std::invalid_argument("integer out of range");
  return int(x);
}

std::vector<double> parse_list(std::string_view v) {
  std::vector<double> out;
  v = trim(v);
  if (v.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    out.push_back(parse_double(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Key {
  const char* name;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define PHSQ_NUM(field) \
  Key { #field, [](ScenarioConfig& c, std::string_view v) { c.field = parse_double(v); }, \
        [](const ScenarioConfig& c) { return format_number(c.field); } }
#define PHSQ_INT(field) \
  Key { #field, [](ScenarioConfig& c, std::string_view v) { c.field = parse_int(v); }, \
        [](const ScenarioConfig& c) { return std::to_string(c.field); } }
#define PHSQ_STR(field) \
  Key { #field, [](ScenarioConfig& c, std::string_view v) { c.field = std::string(trim(v)); }, \
        [](const ScenarioConfig& c) { return c.field; } }

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      PHSQ_INT(N),
      PHSQ_NUM(omega_a),
      PHSQ_NUM(Q),
      PHSQ_NUM(n_th),
      PHSQ_INT(M),
      PHSQ_NUM(eta),
      PHSQ_NUM(omega_c),
      PHSQ_NUM(lambda),
      PHSQ_NUM(gt_max),
      PHSQ_NUM(step),
      PHSQ_INT(samples),
      PHSQ_INT(m_max),
      Key{"curve_values", [](ScenarioConfig& c, std::string_view v) { c.curve_values = parse_list(v); },
          [](const ScenarioConfig& c) {
            std::string s;
            for (std::size_t i = 0; i < c.curve_values.size(); ++i)
              s += (i ? "," : "") + format_number(c.curve_values[i]);
            return s;
          }},
      PHSQ_STR(sweep_param),
      PHSQ_NUM(sweep_min),
      PHSQ_NUM(sweep_max),
      PHSQ_INT(sweep_points),
      PHSQ_STR(sweep_scale),
      PHSQ_STR(backend),
      Key{"seed", [](ScenarioConfig& c, std::string_view v) { c.seed = parse_long(v); },
          [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
      PHSQ_INT(threads),
  };
  return k;
}

#undef PHSQ_NUM
#undef PHSQ_INT
#undef PHSQ_STR

void assign(ScenarioConfig& cfg, std::string_view key, std::string_view value, int line) {
  for (const auto& k : keys()) {
    if (key != k.name) continue;
    try {
      k.set(cfg, value);
      cfg.source_lines[std::string(key)] = line;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(key), line, e.what());
    }
    return;
  }
  throw ConfigError(std::string(key), line, "unknown key");
}

void apply_line(ScenarioConfig& cfg, std::string_view raw, int line) {
  auto hash = raw.find('#');
  std::string_view s = trim(raw.substr(0, hash));
  if (s.empty()) return;
  const auto eq = s.find('=');
  if (eq == std::string_view::npos) throw ConfigError(std::string(s), line, "expected key=value");
  const auto key = trim(s.substr(0, eq));
  if (key.empty()) throw ConfigError("", line, "empty key");
  assign(cfg, key, s.substr(eq + 1), line);
}

double effective_gt_max(const ScenarioConfig& c) {
  if (c.gt_max > 0) return c.gt_max;
  if (c.scenario == "fig1") return 2.0 * std::numbers::pi / c.omega_a;
  return default_gt_max(c.N);
}

EnsembleSpec spec_of(const ScenarioConfig& c) { return EnsembleSpec(c.N, c.omega_a, c.Q, c.n_th); }
BathSpec bath_of(const ScenarioConfig& c) { return BathSpec(c.eta, c.omega_c, c.lambda); }

SearchOptions search_of(const ScenarioConfig& c) {
  SearchOptions o;
  o.gt_max = effective_gt_max(c);
  o.step = c.step;
  return o;
}

/// Evaluates f(i) for i in [0, n) on `threads` workers. Results are stored by
/// index; if any task throws, the exception of the lowest index is rethrown.
template <typename R, typename F>
std::vector<R> parallel_map(std::size_t n, int threads, F&& f) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int w = std::max(1, std::min<int>(threads, int(n)));
  if (w == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < w; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<double> time_grid(const ScenarioConfig& c) {
  const double gt_max = effective_gt_max(c);
  const long K = long(std::floor(gt_max / c.step + 1e-9));
  std::vector<double> t(std::size_t(K) + 1);
  for (long k = 0; k <= K; ++k) t[std::size_t(k)] = c.step * double(k);
  return t;
}

std::vector<double> sweep_values(const ScenarioConfig& c) {
  std::vector<double> v(std::size_t(c.sweep_points));
  for (int i = 0; i < c.sweep_points; ++i) {
    const double f = c.sweep_points == 1 ? 0.0 : double(i) / double(c.sweep_points - 1);
    v[std::size_t(i)] = c.sweep_scale == "log"
                            ? std::exp(std::log(c.sweep_min) + f * (std::log(c.sweep_max) - std::log(c.sweep_min)))
                            : c.sweep_min + f * (c.sweep_max - c.sweep_min);
    if (i == c.sweep_points - 1) v[std::size_t(i)] = c.sweep_max;
  }
  if (c.sweep_param == "N" || c.sweep_param == "M")
    for (auto& x : v) x = std::round(x);
  return v;
}

ScenarioConfig with_param(ScenarioConfig c, const std::string& name, double v) {
  if (name == "Q") c.Q = v;
  else if (name == "n_th") c.n_th = v;
  else if (name == "N") c.N = int(std::lround(v));
  else if (name == "M") c.M = int(std::lround(v));
  else if (name == "eta") c.eta = v;
  else if (name == "omega_a") c.omega_a = v;
  else if (name == "omega_c") c.omega_c = v;
  else if (name == "lambda") c.lambda = v;
  return c;
}

Backend backend_of(const ScenarioConfig& c) { return *parse_backend(c.backend); }

// ---------------------------------------------------------------- scenarios

ResultTable run_fig1(const ScenarioConfig& c) {
  ResultTable t;
  t.columns = {"m", "gt", "re_alpha", "im_alpha"};
  const auto spec = spec_of(c);
  const double T = effective_gt_max(c);
  std::vector<double> times(std::size_t(c.samples));
  for (int k = 0; k < c.samples; ++k) times[std::size_t(k)] = T * double(k) / double(c.samples - 1);
  for (int m = -c.m_max; m <= c.m_max; ++m)
    for (const auto& s : trajectory(spec, m, times)) t.rows.push_back({double(m), s.t, s.alpha.real(), s.alpha.imag()});
  return t;
}

// One xi^2(t) curve per value of `param`; rows (value, gt, xi).
ResultTable run_curves(const ScenarioConfig& c, const std::string& param) {
  ResultTable t;
  t.columns = {param, "gt", "xi"};
  const auto grid = time_grid(c);
  auto rows = parallel_map<std::vector<std::vector<double>>>(c.curve_values.size(), c.threads, [&](std::size_t i) {
    const double v = c.curve_values[i];
    const auto cc = with_param(c, param, v);
    const SqueezingModel model(spec_of(cc), backend_of(cc), cc.M, bath_of(cc));
    model.self_check(grid[grid.size() / 2]);
    std::vector<std::vector<double>> out;
    for (double gt : grid) out.push_back({v, gt, model.xi(gt)});
    return out;
  });
  for (auto& r : rows) t.rows.insert(t.rows.end(), r.begin(), r.end());
  return t;
}

ResultTable run_fig2c(const ScenarioConfig& c) {
  ResultTable t;
  t.columns = {"Q", "xi_opt", "gt_opt", "xi_oat_ref"};
  const double oat = oat_optimum(c.N).xi;
  const auto qs = sweep_values(c);
  auto rows = parallel_map<std::vector<double>>(qs.size(), c.threads, [&](std::size_t i) {
    const auto cc = with_param(c, "Q", qs[i]);
    const SqueezingModel model(spec_of(cc), backend_of(cc), cc.M, bath_of(cc));
    const auto p = optimal_squeezing(model, search_of(cc));
    return std::vector<double>{qs[i], p.xi, p.t, oat};
  });
  t.rows = std::move(rows);
  return t;
}

ResultTable run_fig3a(const ScenarioConfig& c) {
  ResultTable t;
  t.columns = {"eta", "M", "gt", "xi"};
  const auto grid = time_grid(c);
  const std::vector<std::pair<double, int>> curves = {{0.0, 0}, {c.eta, 0}, {c.eta, c.M}};
  // One task per (curve, time chunk) so that the slow bath integrals spread out.
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (grid.size() + kChunk - 1) / kChunk;
  std::vector<SqueezingModel> models;
  for (const auto& [eta, M] : curves) {
    auto cc = c;
    cc.eta = eta;
    models.emplace_back(spec_of(cc), Backend::bb, M, bath_of(cc));
  }
  for (const auto& m : models) m.self_check(grid[grid.size() / 2]);
  auto rows = parallel_map<std::vector<std::vector<double>>>(curves.size() * chunks, c.threads, [&](std::size_t task) {
    const std::size_t ci = task / chunks, k0 = (task % chunks) * kChunk;
    std::vector<std::vector<double>> out;
    for (std::size_t k = k0; k < std::min(grid.size(), k0 + kChunk); ++k)
      out.push_back({curves[ci].first, double(curves[ci].second), grid[k], models[ci].xi(grid[k])});
    return out;
  });
  for (auto& r : rows) t.rows.insert(t.rows.end(), r.begin(), r.end());
  return t;
}

ResultTable run_fig3b(const ScenarioConfig& c) {
  ResultTable t;
  t.columns = {"M", "xi_opt", "xi_nobath_ref"};
  auto cfg = c;
  cfg.sweep_param = "M";
  const auto Ms = sweep_values(cfg);
  // Tasks: 2 per M (with and without the bath).
  auto vals = parallel_map<double>(2 * Ms.size(), c.threads, [&](std::size_t task) {
    auto cc = with_param(c, "M", Ms[task / 2]);
    if (task % 2 == 1) cc.eta = 0.0;
    const SqueezingModel model(spec_of(cc), Backend::bb, cc.M, bath_of(cc));
    return optimal_squeezing(model, search_of(cc)).xi;
  });
  for (std::size_t i = 0; i < Ms.size(); ++i) t.rows.push_back({Ms[i], vals[2 * i], vals[2 * i + 1]});
  return t;
}

ResultTable run_sweep(const ScenarioConfig& c) {
  ResultTable t;
  t.columns = {c.sweep_param, "xi_opt", "gt_opt"};
  const auto vals = sweep_values(c);
  t.rows = parallel_map<std::vector<double>>(vals.size(), c.threads, [&](std::size_t i) {
    const auto cc = with_param(c, c.sweep_param, vals[i]);
    const SqueezingModel model(spec_of(cc), backend_of(cc), cc.M, bath_of(cc));
    const auto p = optimal_squeezing(model, search_of(cc));
    return std::vector<double>{vals[i], p.xi, p.t};
  });
  return t;
}

// Oracle configurations: (Q, n_th=0, vacuum), (Q=inf, n_th=0, vacuum) and
// (Q, n_th, thermal) when n_th > 0. Report times come from curve_values.
ResultTable run_oracle_check(const ScenarioConfig& c) {
  ResultTable t;
  t.columns = {"Q", "n_th", "gt", "max_rel_residual", "max_rel_re_residual", "truncation_change", "step_change"};
  struct Case {
    double Q, n_th;
    bool thermal;
  };
  std::vector<Case> cases = {{c.Q, 0.0, false}, {EnsembleSpec::lossless, 0.0, false}};
  if (c.n_th > 0) cases.push_back({c.Q, c.n_th, true});
  auto rows = parallel_map<std::vector<std::vector<double>>>(cases.size(), c.threads, [&](std::size_t i) {
    OracleConfig oc;
    oc.spec = EnsembleSpec(c.N, c.omega_a, cases[i].Q, cases[i].n_th);
    oc.report_times = c.curve_values;
    oc.thermal_initial = cases[i].thermal;
    const auto conv = run_oracle_converged(oc);
    std::vector<std::vector<double>> out;
    for (std::size_t r = 0; r < oc.report_times.size(); ++r) {
      const double gt = oc.report_times[r];
      const auto ref = phase_matrix(oc.spec, gt, SelfCheck::skip);
      const auto& got = conv.base.phases[r];
      double re_worst = 0.0;
      for (int a = 0; a < ref.exponent.rows(); ++a)
        for (int b = 0; b < ref.exponent.cols(); ++b) {
          const double want = ref.exponent(a, b).real();
          if (a == b || want == 0.0) continue;  // lossless: no real part to compare
          re_worst = std::max(re_worst, std::abs(got.exponent(a, b).real() - want) / std::abs(want));
        }
      out.push_back({cases[i].Q, cases[i].n_th, gt, max_relative_phase_error(got, ref), re_worst,
                     conv.truncation_change, conv.step_change});
    }
    return out;
  });
  for (auto& r : rows) t.rows.insert(t.rows.end(), r.begin(), r.end());
  return t;
}

}  // namespace

const std::vector<std::string>& scenario_names() { return kScenarios; }

ScenarioConfig preset(std::string_view scenario) {
  if (std::find(kScenarios.begin(), kScenarios.end(), scenario) == kScenarios.end())
    throw ConfigError("scenario", 0, "unknown scenario '" + std::string(scenario) + "'");
  ScenarioConfig c;
  c.scenario = std::string(scenario);
  if (scenario == "fig1") {
    c.Q = EnsembleSpec::lossless;
  } else if (scenario == "fig2a") {
    c.curve_values = {5.0, 10.0, 1000.0};
  } else if (scenario == "fig2b") {
    c.curve_values = {0.0, 50.0, 100.0};
  } else if (scenario == "fig2c") {
    c.n_th = 100.0;
  } else if (scenario == "fig3a" || scenario == "fig3b") {
    c.eta = 4e-4;
    c.M = 500;
    c.n_th = 10.0;
    c.lambda = 4.0;
    c.backend = "bb";
    if (scenario == "fig3a") {
      c.step = 0.1;
      c.gt_max = 200.0;
    } else {
      c.gt_max = 250.0;
      c.sweep_param = "M";
      c.sweep_min = 0;
      c.sweep_max = 600;
      c.sweep_points = 13;
      c.sweep_scale = "linear";
    }
  } else if (scenario == "oracle-check") {
    c.N = 2;
    c.omega_a = 50.0;
    c.Q = 25.0;
    c.n_th = 0.0;
    c.curve_values = {5.0, 10.0, 20.0};
  }
  return c;
}

void apply_config_text(ScenarioConfig& cfg, std::string_view text) {
  int line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    ++line;
    apply_line(cfg, text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos), line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

void apply_override(ScenarioConfig& cfg, std::string_view assignment) {
  if (trim(assignment).empty()) throw ConfigError("", 0, "empty --set value");
  apply_line(cfg, assignment, 0);
}

void validate(const ScenarioConfig& c) {
  auto fail = [&](const char* key, const std::string& what) {
    const auto it = c.source_lines.find(key);
    throw ConfigError(key, it == c.source_lines.end() ? 0 : it->second, what);
  };
  auto finite = [](double v) { return std::isfinite(v); };
  if (c.N < 1 || c.N > 1000) fail("N", "must be in [1, 1000]");
  if (!(c.omega_a > 0) || !finite(c.omega_a)) fail("omega_a", "must be > 0");
  if (!(c.Q > 0)) fail("Q", "must be > 0 (inf allowed)");
  if (!(c.n_th >= 0) || !finite(c.n_th)) fail("n_th", "must be >= 0");
  if (c.M < 0) fail("M", "must be >= 0");
  if (!(c.eta >= 0) || !finite(c.eta)) fail("eta", "must be >= 0");
  if (!(c.omega_c > 0) || !finite(c.omega_c)) fail("omega_c", "must be > 0");
  if (!(c.lambda > 0) || !finite(c.lambda)) fail("lambda", "must be > 0");
  if (!(c.gt_max >= 0) || !finite(c.gt_max)) fail("gt_max", "must be >= 0 (0 selects the default)");
  if (!(c.step > 0) || !finite(c.step)) fail("step", "must be > 0");
  if (c.scenario != "fig1" && c.step > effective_gt_max(c)) fail("step", "must not exceed gt_max");
  if (c.samples < 2) fail("samples", "must be >= 2");
  if (c.scenario == "fig1" && (c.m_max < 0 || c.m_max > c.N)) fail("m_max", "must be in [0, N]");
  for (double v : c.curve_values)  // Q = inf is a valid fig2a curve
    if (!finite(v) && !(c.scenario == "fig2a" && v > 0)) fail("curve_values", "entries must be finite");
  if (std::find(kSweepParams.begin(), kSweepParams.end(), c.sweep_param) == kSweepParams.end())
    fail("sweep_param", "must be one of Q, n_th, N, M, eta, omega_a, omega_c, lambda");
  if (c.sweep_points < 1) fail("sweep_points", "must be >= 1");
  if (c.sweep_scale != "log" && c.sweep_scale != "linear") fail("sweep_scale", "must be log or linear");
  if (!finite(c.sweep_min) || !finite(c.sweep_max)) fail("sweep_min", "sweep bounds must be finite");
  if (c.sweep_min > c.sweep_max) fail("sweep_min", "must not exceed sweep_max");
  if (c.sweep_scale == "log" && !(c.sweep_min > 0)) fail("sweep_min", "must be > 0 on a log scale");
  if (!parse_backend(c.backend)) fail("backend", "must be analytic, numeric or bb");
  if (c.threads < 1 || c.threads > 256) fail("threads", "must be in [1, 256]");

  const bool curves = c.scenario == "fig2a" || c.scenario == "fig2b" || c.scenario == "oracle-check";
  if (curves && c.curve_values.empty()) fail("curve_values", "must list at least one value");
  if (c.scenario == "fig2a")
    for (double v : c.curve_values)
      if (!(v > 0)) fail("curve_values", "Q values must be > 0");
  if (c.scenario == "fig2b")
    for (double v : c.curve_values)
      if (!(v >= 0)) fail("curve_values", "n_th values must be >= 0");
  if (c.scenario == "oracle-check") {
    for (double v : c.curve_values)
      if (!(v > 0)) fail("curve_values", "report times must be > 0");
    const int doubled = 2 * FockTruncation::floor_for(EnsembleSpec(c.N, c.omega_a, c.Q, c.n_th));
    if (long(doubled + 1) * (2 * c.N + 1) > kMaxCompositeDim) fail("N", "oracle composite dimension exceeds 2000");
  }
}

ScenarioConfig parse_config(std::string_view scenario, std::string_view text, const std::vector<std::string>& overrides) {
  ScenarioConfig c = preset(scenario);
  apply_config_text(c, text);
  for (const auto& o : overrides) apply_override(c, o);
  validate(c);
  return c;
}

std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("scenario", c.scenario);
  for (const auto& k : keys()) {
    if (std::string_view(k.name) == "threads") continue;  // scheduling only; keeps output thread-independent
    if (std::string_view(k.name) == "gt_max") {
      out.emplace_back("gt_max", format_number(effective_gt_max(c)));
      continue;
    }
    out.emplace_back(k.name, k.get(c));
  }
  return out;
}

void ResultTable::sort_rows() { std::stable_sort(rows.begin(), rows.end()); }

ResultTable run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  ResultTable t;
  try {
    if (cfg.scenario == "fig1") t = run_fig1(cfg);
    else if (cfg.scenario == "fig2a") t = run_curves(cfg, "Q");
    else if (cfg.scenario == "fig2b") t = run_curves(cfg, "n_th");
    else if (cfg.scenario == "fig2c") t = run_fig2c(cfg);
    else if (cfg.scenario == "fig3a") t = run_fig3a(cfg);
    else if (cfg.scenario == "fig3b") t = run_fig3b(cfg);
    else if (cfg.scenario == "sweep") t = run_sweep(cfg);
    else if (cfg.scenario == "oracle-check") t = run_oracle_check(cfg);
    else throw ConfigError("scenario", 0, "unknown scenario '" + cfg.scenario + "'");
  } catch (const NumericalError& e) {
    throw NumericalError(cfg.scenario + ": " + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(cfg.scenario + ": " + e.what());
  }
  t.metadata = describe(cfg);
  t.sort_rows();
  return t;
}

std::string format_number(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_number: to_chars failed");
  return std::string(buf, p);
}

std::string to_csv(const ResultTable& table) {
  std::string s;
  for (const auto& [k, v] : table.metadata) s += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) s += (i ? "," : "") + table.columns[i];
  s += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + format_number(row[i]);
    s += "\n";
  }
  return s;
}

void write_csv(const ResultTable& table, const std::string& path) {
  if (table.rows.empty()) throw InvalidArgument("write_csv: table is empty");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << to_csv(table);
  f.close();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace phsq
