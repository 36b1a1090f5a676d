#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature over a set of
// user-supplied panels. The panel edges are kept as breakpoints, so callers can
// align them with oscillation periods or removable singularities.

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <span>
#include <vector>

namespace phsq::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  long max_intervals = 2'000'000;
};

template <typename T>
struct Result {
  T value{};
  double error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename T, typename F>
Panel<T> kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const T fc = f(c);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const T sum = f(c - dx) + f(c + dx);
    kronrod += sum * kKronrodWeights[j];
    if (j % 2 == 1) gauss += sum * kGaussWeights[j / 2];
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over [breakpoints.front(), breakpoints.back()]. T is double or
/// std::complex<double>. Stops when the summed error estimate falls below
/// max(abs_tol, rel_tol * |value|) or the interval budget runs out.
template <typename T, typename F>
Result<T> integrate(F&& f, std::span<const double> breakpoints, const Options& opt = {}) {
  Result<T> res;
  if (breakpoints.size() < 2) return res;
  std::priority_queue<detail::Panel<T>> heap;
  double err = 0.0;
  T total{};
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    auto p = detail::kronrod15<T>(f, breakpoints[i], breakpoints[i + 1]);
    res.evaluations += 15;
    err += p.error;
    total += p.value;
    heap.push(p);
  }
  long intervals = long(heap.size());
  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  while (!heap.empty() && err > target() && intervals < opt.max_intervals) {
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    auto left = detail::kronrod15<T>(f, worst.a, mid);
    auto right = detail::kronrod15<T>(f, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // Re-sum from the panels to drop the drift of the incremental updates.
  std::vector<detail::Panel<T>> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  T sum{}, comp{};
  double esum = 0.0;
  for (const auto& p : panels) {
    const T y = p.value - comp;
    const T t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    esum += p.error;
  }
  res.value = sum;
  res.error = esum;
  res.converged = esum <= std::max(opt.abs_tol, opt.rel_tol * std::abs(sum));
  return res;
}

/// Evenly spaced breakpoints on [a, b] with at most max_panels panels and
/// spacing no smaller than `period`.
inline std::vector<double> periodic_breakpoints(double a, double b, double period,
                                                long max_panels = 200'000) {
  std::vector<double> bp;
  if (!(b > a)) return {a, b};
  long n = period > 0 ? long(std::ceil((b - a) / period)) : 1;
  n = std::clamp(n, 1L, max_panels);
  bp.reserve(std::size_t(n) + 1);
  for (long i = 0; i <= n; ++i) bp.push_back(a + (b - a) * double(i) / double(n));
  bp.back() = b;
  return bp;
}

}  // namespace phsq::quad
