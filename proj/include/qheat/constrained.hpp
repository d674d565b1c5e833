#pragma once

// Expected work when the efficiency eta is fixed in advance, so that
// a2 = (1 - eta) a1 and only one spacing is uncertain. Observer A places the
// 1/x prior on a1, observer B on a2.

#include <cmath>
#include <numbers>
#include <utility>

#include "qheat/engine.hpp"
#include "qheat/expectations.hpp"
#include "qheat/numerics.hpp"
#include "qheat/optimize.hpp"
#include "qheat/priors.hpp"
#include "qheat/quadrature.hpp"

namespace qheat {

struct ConstrainedSpec {
  double eta;
  BathPair baths;
  PriorSupport support;

  ConstrainedSpec(double efficiency, BathPair b, PriorSupport s) : eta(efficiency), baths(b), support(s) {
    require(std::isfinite(eta) && eta > 0.0 && eta < 1.0, "ConstrainedSpec: eta must lie in (0, 1)");
    require(eta <= 1.0 - baths.theta() + 1e-12, "ConstrainedSpec: eta exceeds the Carnot efficiency");
  }
};

/// W(a1, eta) = a1 eta [1/(1+e^{a1/T1}) - 1/(1+e^{a1(1-eta)/T2})].
inline double work_at_efficiency(double a1, const ConstrainedSpec& spec) {
  require(positive_finite(a1), "work_at_efficiency: a1 must be positive");
  const double eta = spec.eta;
  return a1 * eta * (fermi(a1 / spec.baths.t_hot()) - fermi(a1 * (1.0 - eta) / spec.baths.t_cold()));
}

/// The same work written in terms of the cold-side spacing a2 = (1-eta) a1.
inline double work_at_efficiency_cold(double a2, const ConstrainedSpec& spec) {
  require(positive_finite(a2), "work_at_efficiency_cold: a2 must be positive");
  return work_at_efficiency(a2 / (1.0 - spec.eta), spec);
}

/// (ln2/L) eta (T1 - T2/(1-eta)).
inline double asymptotic_expected_work(double eta, const BathPair& baths, const PriorSupport& support) {
  require(std::isfinite(eta) && eta >= 0.0 && eta < 1.0, "asymptotic_expected_work: eta must lie in [0, 1)");
  return asymptotic_heat_capacity(support) * eta * (baths.t_hot() - baths.t_cold() / (1.0 - eta));
}

inline ExpectationResult expected_work_constrained(Observer observer, const ConstrainedSpec& spec,
                                                   Route route = Route::closed_form,
                                                   const QuadratureSpec& quad = {}) {
  const double eta = spec.eta;
  const double t1 = spec.baths.t_hot(), t2 = spec.baths.t_cold();
  const double a_min = spec.support.a_min(), a_max = spec.support.a_max();
  const double l = spec.support.log_range();
  switch (route) {
    case Route::closed_form: {
      // A: eta/L [G(T1) - G(T2/(1-eta))];  B: eta/((1-eta)L) [G((1-eta)T1) - G(T2)],
      // G(T) = integral of 1/(1+e^{a/T}) over the support.
      if (observer == Observer::A)
        return detail::exact(eta / l *
                             (fermi_integral(a_min, a_max, t1) - fermi_integral(a_min, a_max, t2 / (1.0 - eta))));
      return detail::exact(eta / ((1.0 - eta) * l) *
                           (fermi_integral(a_min, a_max, (1.0 - eta) * t1) - fermi_integral(a_min, a_max, t2)));
    }
    case Route::quadrature:
      if (observer == Observer::A)
        return expect_marginal([&](double a1) { return work_at_efficiency(a1, spec); }, spec.support, quad);
      return expect_marginal([&](double a2) { return work_at_efficiency_cold(a2, spec); }, spec.support, quad);
    case Route::asymptotic:
      return {asymptotic_expected_work(eta, spec.baths, spec.support), 0.0, Route::asymptotic, 0};
    default:
      throw UnsupportedRoute("expected_work_constrained", route);
  }
}

struct WorkOptimum {
  double eta_star;
  double w_star;
  std::size_t iterations;
};

/// Numerical maximizer of the asymptotic expected work over eta in (0, 1-theta).
/// Analytically the peak is at the Curzon-Ahlborn value 1 - sqrt(theta).
inline WorkOptimum maximize_expected_work(const BathPair& baths, const PriorSupport& support) {
  const double carnot = 1.0 - baths.theta();
  const Maximum m = maximize_unimodal(
      [&](double eta) { return asymptotic_expected_work(eta, baths, support); }, 1e-9, carnot - 1e-9, 1e-10);
  return {m.x, m.value, m.iterations};
}

inline double curzon_ahlborn_efficiency(double theta) {
  detail::check_theta(theta);
  return 1.0 - std::sqrt(theta);
}

/// Efficiency at optimal power of the Brownian engine of Zhang et al.:
///   2(1-theta)^2 / (3 - 2 theta (1 + ln theta) - theta^2).
inline double zhang_efficiency(double theta) {
  detail::check_theta(theta);
  const double eps = 1.0 - theta;
  if (eps < kSeriesThreshold) return eps / 3.0 + eps * eps / 9.0 + eps * eps * eps / 18.0;
  // Denominator rewritten as 6 eps - 3 eps^2 - 2 theta (ln theta + eps).
  const double d = log1m_remainder(eps) - 0.5 * eps * eps;
  return 2.0 * eps * eps / (6.0 * eps - 3.0 * eps * eps - 2.0 * theta * d);
}

enum class EfficiencyConvention { expected, curzon_ahlborn };

/// Asymptotic general-case work Q1 + Q2 divided by the fixed-efficiency work
/// at the same efficiency (by default the expected efficiency).
inline double work_ratio(const BathPair& baths, const PriorSupport& support,
                         EfficiencyConvention convention = EfficiencyConvention::expected) {
  const double theta = baths.theta();
  const double eps = 1.0 - theta;
  if (convention == EfficiencyConvention::expected && eps < kSeriesThreshold)
    return 0.75 + eps * eps / 240.0 + eps * eps * eps / 240.0;
  const HeatExpectations q = expect_heats(Observer::A, baths, support, {}, Route::asymptotic);
  const double eta =
      convention == EfficiencyConvention::expected ? expected_efficiency(theta) : curzon_ahlborn_efficiency(theta);
  return (q.heat_hot.value + q.heat_cold.value) / asymptotic_expected_work(eta, baths, support);
}

/// The ratio is independent of T1 and the support; this evaluates it at T1 = 1
/// on the default wide support.
inline double work_ratio(double theta, EfficiencyConvention convention = EfficiencyConvention::expected) {
  const BathPair baths = BathPair::from_ratio(1.0, theta);
  return work_ratio(baths, PriorSupport(1e-6 * baths.t_cold(), 1e6 * baths.t_hot()), convention);
}

}  // namespace qheat
