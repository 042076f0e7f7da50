#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace dmsfi::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod nodes on [0, 1] (symmetric), with the embedded 7-point
// Gauss weights on the odd nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace detail

/// Globally adaptive 7/15 Gauss-Kronrod on a finite interval. The interval
/// with the largest local error estimate is bisected until the summed error
/// meets max(abs_tol, rel_tol*|I|) or max_segments is reached.
template <class F>
Result gauss_kronrod(F&& f, double a, double b, double rel_tol = 1e-10,
                     double abs_tol = 0.0, int max_segments = 4000) {
  Result out;
  if (a == b) return out;
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::kronrod15(f, a, b));
  out.evaluations = 15;
  double total = heap.top().value;
  double err = heap.top().error;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         static_cast<int>(heap.size()) < max_segments) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted
      heap.push(worst);
      break;
    }
    auto left = detail::kronrod15(f, worst.a, mid);
    auto right = detail::kronrod15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to remove drift from incremental updates.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = err;
  return out;
}

/// Integrates over consecutive panels [edges[k], edges[k+1]] and sums. Use
/// when the integrand has known sharp features (e.g. one per half-cycle).
template <class F>
Result gauss_kronrod_panels(F&& f, const std::vector<double>& edges,
                            double rel_tol = 1e-10, double abs_tol = 0.0) {
  Result out;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    auto r = gauss_kronrod(f, edges[k], edges[k + 1], rel_tol, abs_tol);
    out.value += r.value;
    out.error += r.error;
    out.evaluations += r.evaluations;
  }
  return out;
}

}  // namespace dmsfi::quad
