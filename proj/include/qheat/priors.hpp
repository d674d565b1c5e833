#pragma once

// Scale-invariant (1/a) priors over the level spacings.
//
// Each spacing has marginal density 1/(a ln(a_max/a_min)) on [a_min, a_max].
// Given one spacing, the other is confined to the engine band and carries the
// same 1/a form: observer A fixes a1 first (a2 in [a1*theta, a1]), observer B
// fixes a2 first (a1 in [a2, a2/theta]). Both factorizations give the joint
// density K/(a1 a2) with K = 1/(ln(1/theta) ln(a_max/a_min)), on different
// regions of the (a1, a2) plane.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string_view>

#include <Eigen/Dense>

#include "qheat/numerics.hpp"

namespace qheat {

class PriorSupport {
 public:
  PriorSupport(double a_min, double a_max) : a_min_(a_min), a_max_(a_max) {
    require(positive_finite(a_min), "PriorSupport: a_min must be positive and finite");
    require(std::isfinite(a_max) && a_max > a_min, "PriorSupport: a_max must exceed a_min");
    log_range_ = std::log(a_max_ / a_min_);
    require(positive_finite(log_range_), "PriorSupport: ln(a_max/a_min) must be positive and finite");
  }

  double a_min() const noexcept { return a_min_; }
  double a_max() const noexcept { return a_max_; }
  /// L = ln(a_max/a_min), the normalization of the marginal.
  double log_range() const noexcept { return log_range_; }

  bool contains(double a) const noexcept {
    const double slack = 1e-12;
    return a >= a_min_ * (1.0 - slack) && a <= a_max_ * (1.0 + slack);
  }

 private:
  double a_min_;
  double a_max_;
  double log_range_;
};

enum class Observer { A, B };

inline constexpr std::string_view to_string(Observer o) noexcept {
  return o == Observer::A ? "A" : "B";
}

namespace detail {
inline void check_theta(double theta) {
  require(std::isfinite(theta) && theta > 0.0 && theta < 1.0, "theta must lie in (0, 1)");
}
inline bool within(double x, double lo, double hi) noexcept {
  const double slack = 1e-12;
  return x >= lo * (1.0 - slack) && x <= hi * (1.0 + slack);
}
}  // namespace detail

struct JointPriorSpec {
  PriorSupport support;
  double theta;
  Observer observer;

  JointPriorSpec(PriorSupport s, double ratio, Observer o) : support(s), theta(ratio), observer(o) {
    detail::check_theta(theta);
  }

  /// K = [ln(1/theta) ln(a_max/a_min)]^{-1}.
  double normalization() const noexcept {
    return 1.0 / (-std::log(theta) * support.log_range());
  }

  /// Whether (a1, a2) lies in this observer's support region.
  bool contains(double a1, double a2) const noexcept {
    if (observer == Observer::A)
      return support.contains(a1) && detail::within(a2, a1 * theta, a1);
    return support.contains(a2) && detail::within(a1, a2, a2 / theta);
  }
};

inline double marginal_density(double a, const PriorSupport& support) {
  require(support.contains(a), "marginal_density: a outside [a_min, a_max]");
  return 1.0 / (a * support.log_range());
}

/// Density of `value` conditional on `given`: for observer A value = a2 and
/// given = a1, for observer B value = a1 and given = a2. The conditional
/// range is never clipped to the marginal support.
inline double conditional_density(double value, double given, Observer observer, double theta) {
  detail::check_theta(theta);
  require(positive_finite(given), "conditional_density: conditioning spacing must be positive");
  const bool inside = observer == Observer::A ? detail::within(value, given * theta, given)
                                              : detail::within(value, given, given / theta);
  require(inside, "conditional_density: value outside the conditional range");
  return 1.0 / (value * -std::log(theta));
}

inline double joint_density(double a1, double a2, const JointPriorSpec& spec) {
  require(spec.contains(a1, a2), "joint_density: point outside the observer's support region");
  return spec.normalization() / (a1 * a2);
}

/// Inverse-CDF draw from the marginal: a_min (a_max/a_min)^u.
inline double sample_marginal(const PriorSupport& support, double u) noexcept {
  const double a = support.a_min() * std::exp(u * support.log_range());
  return std::clamp(a, support.a_min(), support.a_max());
}

/// Inverse-CDF draw from the conditional: A gives a2 = given theta^{1-u},
/// B gives a1 = given theta^{-u}.
inline double sample_conditional(double given, Observer observer, double theta, double u) noexcept {
  if (observer == Observer::A) {
    const double a2 = given * std::pow(theta, 1.0 - u);
    return std::clamp(a2, given * theta, given);
  }
  const double a1 = given * std::pow(theta, -u);
  return std::clamp(a1, given, given / theta);
}

// --- Consistency functional equations -------------------------------------

/// |2 f(a) - f(a theta) - f(a/theta)|, the mismatch between the two
/// observers' conditional normalizations on the diagonal a1 = a2 = a.
template <class F>
double functional_equation_residual(F&& f, double a, double theta) {
  return std::abs(2.0 * f(a) - f(a * theta) - f(a / theta));
}

/// |pi(a1) - (1-eta) pi(a1 (1-eta))|, the fixed-efficiency reparameterization
/// condition on a prior density.
template <class P>
double scaling_equation_residual(P&& pi, double a1, double eta) {
  return std::abs(pi(a1) - (1.0 - eta) * pi(a1 * (1.0 - eta)));
}

struct FunctionalEquationReport {
  double log_residual_max;        // f = ln on a log-spaced grid
  std::size_t kernel_dimension;   // of the discretized equation
  double kernel_affine_deviation; // max deviation of kernel vectors from a + b ln x
};

/// Checks that f = ln solves 2f(a) = f(a theta) + f(a/theta), and that on a
/// log grid with step ln(1/theta) every discrete solution is affine in ln a.
inline FunctionalEquationReport verify_functional_equation(double theta, std::size_t grid_size) {
  detail::check_theta(theta);
  require(grid_size >= 8, "verify_functional_equation: grid_size must be at least 8");
  const auto n = static_cast<Eigen::Index>(grid_size);

  FunctionalEquationReport report{};
  const double lo = std::log(1e-2), hi = std::log(1e2);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double a = std::exp(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
    const double r = functional_equation_residual([](double x) { return std::log(x); }, a, theta);
    report.log_residual_max = std::max(report.log_residual_max, r);
  }

  // Nodes x_k = ln a_0 + k ln(1/theta); equation rows 2f_k - f_{k-1} - f_{k+1} = 0.
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n - 2, n);
  for (Eigen::Index k = 1; k + 1 < n; ++k) {
    op(k - 1, k - 1) = -1.0;
    op(k - 1, k) = 2.0;
    op(k - 1, k + 1) = -1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(op, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = 1e-10 * sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  const Eigen::Index kernel = n - rank;
  report.kernel_dimension = static_cast<std::size_t>(kernel);

  const double step = -std::log(theta);
  Eigen::MatrixXd affine(n, 2);
  for (Eigen::Index k = 0; k < n; ++k) {
    affine(k, 0) = 1.0;
    affine(k, 1) = static_cast<double>(k) * step;
  }
  const auto qr = affine.colPivHouseholderQr();
  for (Eigen::Index j = rank; j < n; ++j) {
    const Eigen::VectorXd v = svd.matrixV().col(j);
    const Eigen::VectorXd fit = affine * qr.solve(v);
    report.kernel_affine_deviation =
        std::max(report.kernel_affine_deviation, (v - fit).lpNorm<Eigen::Infinity>());
  }
  return report;
}

struct ScalingEquationReport {
  double inverse_residual_max;  // pi = 1/x, relative to pi(a1)
  double uniform_residual_min;  // pi = 1, relative to pi(a1)
};

inline ScalingEquationReport verify_scaling_equation(double eta) {
  require(std::isfinite(eta) && eta > 0.0 && eta < 1.0, "verify_scaling_equation: eta must lie in (0, 1)");
  ScalingEquationReport report{0.0, std::numeric_limits<double>::infinity()};
  const auto inverse = [](double x) { return 1.0 / x; };
  const auto uniform = [](double) { return 1.0; };
  constexpr int kPoints = 100;
  for (int k = 0; k < kPoints; ++k) {
    const double a = std::exp(std::log(1e-2) + std::log(1e4) * k / (kPoints - 1));
    report.inverse_residual_max =
        std::max(report.inverse_residual_max, scaling_equation_residual(inverse, a, eta) * a);
    report.uniform_residual_min =
        std::min(report.uniform_residual_min, scaling_equation_residual(uniform, a, eta));
  }
  return report;
}

}  // namespace qheat
