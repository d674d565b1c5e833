#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qheat {

class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

struct Maximum {
  double x;
  double value;
  std::size_t iterations;
  double bracket_lo;  // final golden-section bracket
  double bracket_hi;
};

/// Maximizes a unimodal f on [lo, hi]: golden-section search down to `tol`,
/// then successive three-point parabolic steps with a fixed stencil. The
/// parabolic stage recovers the digits that golden section alone loses to
/// round-off in the flat neighbourhood of the peak.
template <class F>
Maximum maximize_unimodal(F&& f, double lo, double hi, double tol = 1e-10, std::size_t max_iter = 500) {
  if (!(lo < hi) || !(tol > 0.0)) throw OptimizationError("maximize_unimodal: invalid bracket", lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  std::size_t it = 0;
  while (b - a > tol) {
    if (++it > max_iter) {
      std::ostringstream msg;
      msg << "maximize_unimodal: no convergence after " << max_iter << " iterations, bracket [" << a << ", " << b
          << "]";
      throw OptimizationError(msg.str(), a, b);
    }
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);

  for (double h : {1e-3, 1e-4, 1e-5}) {
    if (x - h <= lo || x + h >= hi) continue;
    const double fm = f(x - h), f0 = f(x), fp = f(x + h);
    const double curvature = fp - 2.0 * f0 + fm;
    if (!(curvature < 0.0)) continue;
    const double shift = -h * (fp - fm) / (2.0 * curvature);
    if (std::abs(shift) < h) x += shift;
  }

  if (x - lo <= tol || hi - x <= tol) {
    std::ostringstream msg;
    msg << "maximize_unimodal: maximum at the bracket edge x=" << x << " of [" << lo << ", " << hi << "]";
    throw OptimizationError(msg.str(), a, b);
  }
  return {x, f(x), it, a, b};
}

}  // namespace qheat
