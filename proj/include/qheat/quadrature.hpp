#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) quadrature on a finite
// interval. The interval with the largest error estimate is bisected until the
// summed estimate meets max(abs_tol, rel_tol*|I|) or the subdivision budget is
// spent.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qheat/numerics.hpp"

namespace qheat {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_subdivisions = 2000;

  void validate() const {
    require(abs_tol > 0.0 && rel_tol > 0.0, "QuadratureSpec: tolerances must be positive");
    require(max_subdivisions >= 16, "QuadratureSpec: max_subdivisions must be at least 16");
  }

  QuadratureSpec tightened(double factor) const {
    return {abs_tol * factor, rel_tol * factor, max_subdivisions};
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t subdivisions = 0;
  bool converged = false;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadratureResult& best_estimate() const noexcept { return best_; }

 private:
  QuadratureResult best_;
};

namespace detail {

inline constexpr std::array<double, 11> kKronrodNodes{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kKronrodWeights{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208005443770, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double lo, hi, value, error, abs_value;
  bool operator<(const Segment& other) const noexcept { return error < other.error; }
};

template <class F>
Segment gauss_kronrod21(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[10];
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  std::array<double, 21> fv{};
  fv[20] = fc;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv[2 * j] = f1;
    fv[2 * j + 1] = f2;
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    asc += kKronrodWeights[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));

  const double value = kronrod * half;
  const double res_abs = abs_sum * std::abs(half);
  const double res_asc = asc * std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(err, 50.0 * eps * res_abs);
  return {lo, hi, value, err, res_abs};
}

}  // namespace detail

/// Integrates f over [lo, hi]; never throws on non-convergence, the flag in
/// the result says whether the tolerance was met.
template <class F>
QuadratureResult try_integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
  spec.validate();
  QuadratureResult result;
  if (lo == hi) {
    result.converged = true;
    return result;
  }
  std::vector<detail::Segment> heap{detail::gauss_kronrod21(f, lo, hi)};
  result.evaluations = 21;
  double total = heap.front().value;
  double error = heap.front().error;
  double abs_total = heap.front().abs_value;

  // Tolerances below the round-off floor of the integrand cannot be met; the
  // floor then counts as convergence.
  const double eps = std::numeric_limits<double>::epsilon();
  const auto target = [&] {
    return std::max({spec.abs_tol, spec.rel_tol * std::abs(total), 100.0 * eps * abs_total});
  };
  while (error > target() && heap.size() < spec.max_subdivisions) {
    const detail::Segment worst = heap.front();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) break;  // interval at machine resolution
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = detail::gauss_kronrod21(f, worst.lo, mid);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(detail::gauss_kronrod21(f, mid, worst.hi));
    std::push_heap(heap.begin(), heap.end());
    result.evaluations += 42;
    // Re-sum rather than update incrementally so round-off does not drift.
    total = 0.0;
    error = 0.0;
    abs_total = 0.0;
    for (const auto& seg : heap) {
      total += seg.value;
      error += seg.error;
      abs_total += seg.abs_value;
    }
  }
  result.value = total;
  result.error = error;
  result.subdivisions = heap.size();
  result.converged = error <= target();
  return result;
}

/// As try_integrate, but throws ConvergenceError (carrying the best estimate)
/// when the tolerance is not met.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
  QuadratureResult r = try_integrate(std::forward<F>(f), lo, hi, spec);
  if (!r.converged)
    throw ConvergenceError("quadrature did not converge within " + std::to_string(spec.max_subdivisions) +
                               " subdivisions (error estimate " + std::to_string(r.error) + ")",
                           r);
  return r;
}

}  // namespace qheat
