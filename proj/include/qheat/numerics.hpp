#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qheat {

/// 1/(1+e^x) without overflow for either sign of x.
inline double fermi(double x) noexcept {
  if (x > 0.0) {
    const double t = std::exp(-x);
    return t / (1.0 + t);
  }
  return 1.0 / (1.0 + std::exp(x));
}

/// ln(1+e^x).
inline double softplus(double x) noexcept {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

/// Integral of fermi(a/t) over a in [lo, hi], i.e.
///   (hi - lo) + t*ln((1+e^{lo/t}) / (1+e^{hi/t})),
/// evaluated as t*[ln(1+e^{-lo/t}) - ln(1+e^{-hi/t})] so that nothing cancels
/// when hi/t is large.
inline double fermi_integral(double lo, double hi, double t) noexcept {
  return t * (std::log1p(std::exp(-lo / t)) - std::log1p(std::exp(-hi / t)));
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw std::domain_error(what);
}

inline bool positive_finite(double x) noexcept {
  return std::isfinite(x) && x > 0.0;
}

/// ln(1-eps) + eps + eps^2/2 for 0 <= eps < 1, summed as -sum_{k>=3} eps^k/k
/// for small eps so that the leading terms never cancel.
inline double log1m_remainder(double eps) noexcept {
  if (eps >= 0.1) return std::log1p(-eps) + eps + 0.5 * eps * eps;
  double term = eps * eps * eps;
  double sum = 0.0;
  for (int k = 3; k < 40 && term > 1e-18 * std::abs(sum + term / k); ++k, term *= eps) sum -= term / k;
  return sum;
}

// Threshold on 1-theta below which removable singularities at theta -> 1
// are evaluated from their Taylor series.
inline constexpr double kSeriesThreshold = 1e-4;

}  // namespace qheat
