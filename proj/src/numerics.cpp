#include "tunnelkit/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "tunnelkit/errors.hpp"

namespace tunnelkit::numerics {
namespace {

// Kronrod abscissae; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const ScalarFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const ScalarFn& f, double a, double b, double rel_tol, double abs_tol,
                           int max_intervals) {
  if (a == b) return {0.0, 0.0, 0};
  std::priority_queue<Segment> heap;
  heap.push(gauss_kronrod(f, a, b));
  double total = heap.top().value;
  double error = heap.top().error;
  int evaluations = 15;

  while (error > std::max(abs_tol, rel_tol * std::fabs(total))) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      // The running sums can carry cancellation residue; re-sum before giving up.
      auto copy = heap;
      total = error = 0.0;
      for (; !copy.empty(); copy.pop()) total += copy.top().value, error += copy.top().error;
      if (error <= std::max(abs_tol, rel_tol * std::fabs(total))) break;
      throw ConvergenceError("adaptive quadrature: interval budget exhausted (error estimate " +
                             std::to_string(error) + ")");
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    // Error estimates below rounding level stop contributing usefully.
    if (std::fabs(mid - worst.a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(mid))
      break;
  }

  // Re-sum to shed the drift of the running totals.
  double value = 0.0, err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {value, err, evaluations};
}

double bisect(const ScalarFn& f, double lo, double hi, double x_tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw DomainError("bisect: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  for (int i = 0; i < max_iter && std::fabs(hi - lo) > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Extremum golden_section_max(const ScalarFn& f, double lo, double hi, double x_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > x_tol * std::max(1.0, std::fabs(lo) + std::fabs(hi))) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
    if (x1 >= x2) break;
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

}  // namespace tunnelkit::numerics
