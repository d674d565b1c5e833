#pragma once

// Prior-ensemble expectations of the engine's energies, heats, final
// temperatures and heat capacity.
//
// Every quantity is available along several independent routes: the closed
// form where the integral closes, nested adaptive quadrature over the
// observer's support region, and the wide-support asymptote
// (a_min << T2, a_max >> T1). Quadrature runs in logarithmic coordinates, where
// the 1/a weights of the prior become flat.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qheat/engine.hpp"
#include "qheat/numerics.hpp"
#include "qheat/priors.hpp"
#include "qheat/quadrature.hpp"

namespace qheat {

enum class Route { closed_form, quadrature, monte_carlo, asymptotic };

inline constexpr std::string_view to_string(Route r) noexcept {
  switch (r) {
    case Route::closed_form: return "closed_form";
    case Route::quadrature: return "quadrature";
    case Route::monte_carlo: return "monte_carlo";
    case Route::asymptotic: return "asymptotic";
  }
  return "unknown";
}

struct ExpectationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  Route route = Route::closed_form;
  std::size_t evaluations = 0;
};

class UnsupportedRoute : public std::invalid_argument {
 public:
  UnsupportedRoute(std::string_view quantity, Route r)
      : std::invalid_argument(std::string(quantity) + ": route '" + std::string(to_string(r)) +
                              "' is not available") {}
};

namespace detail {

inline void check_system(int system) {
  require(system == 1 || system == 2, "system index must be 1 or 2");
}

inline ExpectationResult exact(double value) { return {value, 0.0, Route::closed_form, 0}; }

inline ExpectationResult from_quadrature(const QuadratureResult& q) {
  return {q.value, q.error, Route::quadrature, q.evaluations};
}

}  // namespace detail

/// ln 2 / ln(a_max/a_min): the wide-support expected heat capacity, and the
/// proportionality constant between expected energies and temperatures.
inline double asymptotic_heat_capacity(const PriorSupport& support) noexcept {
  return std::numbers::ln2 / support.log_range();
}

/// (1-theta)/ln(1/theta), with its series below kSeriesThreshold.
inline double common_temperature_factor(double theta) {
  detail::check_theta(theta);
  const double eps = 1.0 - theta;
  if (eps < kSeriesThreshold) return 1.0 - eps / 2.0 - eps * eps / 12.0 - eps * eps * eps / 24.0;
  return eps / -std::log(theta);
}

/// T1 (1-theta)/ln(1/theta), the common expected temperature of both systems
/// after the swap. Exact under the joint prior for any support.
inline double common_final_temperature(const BathPair& baths) {
  return baths.t_hot() * common_temperature_factor(baths.theta());
}

/// Expectation of f(a1, a2) over an observer's joint prior by nested adaptive
/// quadrature: outer over the marginal spacing, inner over its conditional range.
template <class F>
ExpectationResult expect_joint(F&& f, const JointPriorSpec& spec, const QuadratureSpec& quad = {}) {
  const double lo = std::log(spec.support.a_min());
  const double hi = std::log(spec.support.a_max());
  const double width = -std::log(spec.theta);
  const QuadratureSpec inner_spec = quad.tightened(0.01);
  std::size_t evaluations = 0;
  double inner_error = 0.0;

  auto outer = [&](double x_outer) {
    auto inner = [&](double x_inner) {
      return spec.observer == Observer::A ? f(std::exp(x_outer), std::exp(x_inner))
                                          : f(std::exp(x_inner), std::exp(x_outer));
    };
    const double a = spec.observer == Observer::A ? x_outer - width : x_outer;
    const QuadratureResult r = integrate(inner, a, a + width, inner_spec);
    evaluations += r.evaluations;
    inner_error = std::max(inner_error, r.error);
    return r.value;
  };
  const QuadratureResult r = integrate(outer, lo, hi, quad);
  const double k = spec.normalization();
  return {k * r.value, k * (r.error + inner_error * (hi - lo)), Route::quadrature, evaluations};
}

/// Expectation of g(a) over the marginal 1/(a L) prior.
template <class G>
ExpectationResult expect_marginal(G&& g, const PriorSupport& support, const QuadratureSpec& quad = {}) {
  const double lo = std::log(support.a_min());
  const double hi = std::log(support.a_max());
  const QuadratureResult r = integrate([&](double x) { return g(std::exp(x)); }, lo, hi, quad);
  ExpectationResult e = detail::from_quadrature(r);
  e.value /= support.log_range();
  e.error_estimate /= support.log_range();
  return e;
}

// --- Initial energy ---------------------------------------------------------

inline ExpectationResult expect_initial_energy(int system, const BathPair& baths, const PriorSupport& support,
                                               Route route = Route::closed_form,
                                               const QuadratureSpec& quad = {}) {
  detail::check_system(system);
  const double t = baths.temperature(system);
  switch (route) {
    case Route::closed_form:
      return detail::exact(fermi_integral(support.a_min(), support.a_max(), t) / support.log_range());
    case Route::quadrature:
      return expect_marginal([t](double a) { return initial_energy(a, t); }, support, quad);
    case Route::asymptotic:
      return {asymptotic_heat_capacity(support) * t, 0.0, Route::asymptotic, 0};
    default:
      throw UnsupportedRoute("expect_initial_energy", route);
  }
}

// --- Final energy -----------------------------------------------------------

/// Integration-by-parts evaluation of the nested final-energy integral that
/// has no closed form. `boundary_term` is K [a I(a)] between the support
/// ends, with I(a) the inner integral; `log_term` is the remainder
/// K [G(T1) - G(T2)], G(T) being the integral of 1/(1+e^{a/T}) over the support.
struct FinalEnergyByParts {
  double boundary_term;
  double log_term;
  double value;
  double error_estimate;
  std::size_t evaluations;
};

inline FinalEnergyByParts final_energy_by_parts(int system, Observer observer, const BathPair& baths,
                                                const PriorSupport& support, const QuadratureSpec& quad = {}) {
  detail::check_system(system);
  const bool nested = (system == 1 && observer == Observer::A) || (system == 2 && observer == Observer::B);
  require(nested, "final_energy_by_parts: only defined for (system 1, A) and (system 2, B)");
  const double theta = baths.theta();
  const double width = -std::log(theta);
  const double k = 1.0 / (width * support.log_range());

  // I(a) = int_a^{a/theta} da1 / ((1+e^{a1/T1}) a1) for B, or equivalently
  // J(a) = int_{a theta}^{a} da2 / ((1+e^{a2/T2}) a2) for A.
  const QuadratureSpec inner_spec = quad.tightened(0.01);
  std::size_t evaluations = 0;
  double error = 0.0;
  auto inner = [&](double a) {
    const double x = std::log(a);
    const double t = system == 2 ? baths.t_hot() : baths.t_cold();
    const double lo = system == 2 ? x : x - width;
    const QuadratureResult r =
        integrate([t](double u) { return fermi(std::exp(u) / t); }, lo, lo + width, inner_spec);
    evaluations += r.evaluations;
    error += a * r.error;
    return r.value;
  };
  const double a_min = support.a_min(), a_max = support.a_max();
  FinalEnergyByParts out{};
  out.boundary_term = k * (a_max * inner(a_max) - a_min * inner(a_min));
  out.log_term = k * (fermi_integral(a_min, a_max, baths.t_hot()) - fermi_integral(a_min, a_max, baths.t_cold()));
  out.value = out.boundary_term + out.log_term;
  out.error_estimate = k * error;
  out.evaluations = evaluations;
  return out;
}

/// Closed form exists for (system 2, A) and (system 1, B).
inline bool final_energy_has_closed_form(int system, Observer observer) noexcept {
  return (system == 2 && observer == Observer::A) || (system == 1 && observer == Observer::B);
}

inline ExpectationResult expect_final_energy(int system, Observer observer, const BathPair& baths,
                                             const PriorSupport& support, const QuadratureSpec& quad = {},
                                             Route route = Route::quadrature) {
  detail::check_system(system);
  quad.validate();
  const double theta = baths.theta();
  const double a_min = support.a_min(), a_max = support.a_max();
  const double k = 1.0 / (-std::log(theta) * support.log_range());

  switch (route) {
    case Route::closed_form: {
      if (system == 2 && observer == Observer::A)
        return detail::exact(k * (1.0 - theta) * fermi_integral(a_min, a_max, baths.t_hot()));
      if (system == 1 && observer == Observer::B)
        return detail::exact(k * (1.0 / theta - 1.0) * fermi_integral(a_min, a_max, baths.t_cold()));
      throw UnsupportedRoute("expect_final_energy (nested case)", route);
    }
    case Route::asymptotic:
      return {asymptotic_heat_capacity(support) * common_final_temperature(baths), 0.0, Route::asymptotic, 0};
    case Route::quadrature: {
      const JointPriorSpec spec(support, theta, observer);
      const double t1 = baths.t_hot(), t2 = baths.t_cold();
      ExpectationResult direct =
          system == 1 ? expect_joint([&](double a1, double a2) { return final_energy(a1, a2, t2); }, spec, quad)
                      : expect_joint([&](double a1, double a2) { return final_energy(a2, a1, t1); }, spec, quad);
      if (final_energy_has_closed_form(system, observer)) return direct;

      const FinalEnergyByParts parts = final_energy_by_parts(system, observer, baths, support, quad);
      const double tol = 10.0 * std::max(quad.abs_tol, quad.rel_tol * std::abs(direct.value));
      if (std::abs(parts.value - direct.value) > tol) {
        QuadratureResult best{direct.value, direct.error_estimate, direct.evaluations, 0, false};
        throw ConvergenceError("expect_final_energy: nested quadrature and integration-by-parts forms differ by " +
                                   std::to_string(std::abs(parts.value - direct.value)),
                               best);
      }
      direct.evaluations += parts.evaluations;
      return direct;
    }
    default:
      throw UnsupportedRoute("expect_final_energy", route);
  }
}

// --- Final temperatures -----------------------------------------------------

inline ExpectationResult expect_final_temperature(int side, Observer observer, const BathPair& baths,
                                                  const PriorSupport& support, const QuadratureSpec& quad = {},
                                                  Route route = Route::quadrature) {
  detail::check_system(side);
  switch (route) {
    case Route::closed_form:
      return detail::exact(common_final_temperature(baths));
    case Route::quadrature: {
      const JointPriorSpec spec(support, baths.theta(), observer);
      const double t1 = baths.t_hot(), t2 = baths.t_cold();
      if (side == 1) return expect_joint([t2](double a1, double a2) { return t2 * a1 / a2; }, spec, quad);
      return expect_joint([t1](double a1, double a2) { return t1 * a2 / a1; }, spec, quad);
    }
    default:
      throw UnsupportedRoute("expect_final_temperature", route);
  }
}

// --- Heats and efficiency -----------------------------------------------------

/// 1 + (1-theta)/ln(theta): asymptotic hot-side heat in units of C T1.
inline double hot_heat_factor(double theta) {
  detail::check_theta(theta);
  const double eps = 1.0 - theta;
  if (eps < kSeriesThreshold) return eps / 2.0 + eps * eps / 12.0 + eps * eps * eps / 24.0;
  // (ln theta + eps) / ln theta with the numerator free of cancellation.
  return (log1m_remainder(eps) - 0.5 * eps * eps) / std::log(theta);
}

/// 1 + (1-theta)/(theta ln(theta)): asymptotic cold-side heat in units of C T2.
inline double cold_heat_factor(double theta) {
  detail::check_theta(theta);
  const double eps = 1.0 - theta;
  if (eps < kSeriesThreshold) return -eps / 2.0 - 5.0 * eps * eps / 12.0 - 3.0 * eps * eps * eps / 8.0;
  const double r = log1m_remainder(eps);
  return (0.5 * eps * eps * (1.0 + eps) + theta * r) / (theta * std::log(theta));
}

struct HeatExpectations {
  ExpectationResult heat_hot;
  ExpectationResult heat_cold;
};

/// Q_i = E_ini^(i) - E_fin^(i) as seen by one observer. Positive values are
/// heat absorbed from the reservoir.
inline HeatExpectations expect_heats(Observer observer, const BathPair& baths, const PriorSupport& support,
                                     const QuadratureSpec& quad = {}, Route route = Route::quadrature) {
  if (route == Route::asymptotic) {
    const double c = asymptotic_heat_capacity(support);
    const double theta = baths.theta();
    return {{c * hot_heat_factor(theta) * baths.t_hot(), 0.0, Route::asymptotic, 0},
            {c * cold_heat_factor(theta) * baths.t_cold(), 0.0, Route::asymptotic, 0}};
  }
  if (route != Route::quadrature) throw UnsupportedRoute("expect_heats", route);

  HeatExpectations out;
  ExpectationResult* slots[2] = {&out.heat_hot, &out.heat_cold};
  for (int i = 1; i <= 2; ++i) {
    const ExpectationResult ini = expect_initial_energy(i, baths, support, Route::quadrature, quad);
    const ExpectationResult fin = expect_final_energy(i, observer, baths, support, quad, Route::quadrature);
    *slots[i - 1] = {ini.value - fin.value, ini.error_estimate + fin.error_estimate, Route::quadrature,
                     ini.evaluations + fin.evaluations};
  }
  return out;
}

/// Joint-prior average of the per-cycle work W(a1, a2). At finite support this
/// differs from Q1 + Q2 of expect_heats, whose initial energies are averaged
/// over the marginal prior; the two agree in the wide-support limit.
inline ExpectationResult expect_work(Observer observer, const BathPair& baths, const PriorSupport& support,
                                     const QuadratureSpec& quad = {}) {
  const JointPriorSpec spec(support, baths.theta(), observer);
  return expect_joint([&](double a1, double a2) { return cycle(EngineConfig(a1, a2), baths).work; }, spec, quad);
}

/// Joint-prior averages of the per-cycle heats. For observer A the hot-side
/// value equals expect_heats (a1 is marginally distributed), for B the
/// cold-side value does; the other side differs at finite support.
inline HeatExpectations expect_cycle_heats(Observer observer, const BathPair& baths, const PriorSupport& support,
                                           const QuadratureSpec& quad = {}) {
  const JointPriorSpec spec(support, baths.theta(), observer);
  return {expect_joint([&](double a1, double a2) { return cycle(EngineConfig(a1, a2), baths).heat_hot; }, spec, quad),
          expect_joint([&](double a1, double a2) { return cycle(EngineConfig(a1, a2), baths).heat_cold; }, spec, quad)};
}

/// 1 + Q2/Q1 evaluated with the asymptotic heats:
///   1 + (theta ln theta + 1 - theta) / (ln theta + 1 - theta).
/// Near equilibrium this is (1-theta)/3 + (1-theta)^2/9 + ...
inline double expected_efficiency(double theta) {
  detail::check_theta(theta);
  const double eps = 1.0 - theta;
  if (eps < kSeriesThreshold) return eps / 3.0 + eps * eps / 9.0 + 8.0 * eps * eps * eps / 135.0;
  // With d = ln theta + eps = r - eps^2/2 this is (eps^3/2 + (2-eps) r) / d.
  const double r = log1m_remainder(eps);
  return (0.5 * eps * eps * eps + (2.0 - eps) * r) / (r - 0.5 * eps * eps);
}

// --- Heat capacity ----------------------------------------------------------

inline ExpectationResult expect_heat_capacity(const BathPair& baths, const PriorSupport& support, int system,
                                              Route route = Route::closed_form, const QuadratureSpec& quad = {}) {
  detail::check_system(system);
  const double t = baths.temperature(system);
  switch (route) {
    case Route::closed_form: {
      // Antiderivative in x = a/T of x e^x/(1+e^x)^2 is -x/(1+e^x) - ln(1+e^{-x}).
      const auto antiderivative = [](double x) { return -x * fermi(x) - std::log1p(std::exp(-x)); };
      const double xmin = support.a_min() / t, xmax = support.a_max() / t;
      return detail::exact((antiderivative(xmax) - antiderivative(xmin)) / support.log_range());
    }
    case Route::quadrature:
      return expect_marginal([t](double a) { return heat_capacity(a, t); }, support, quad);
    case Route::asymptotic:
      return {asymptotic_heat_capacity(support), 0.0, Route::asymptotic, 0};
    default:
      throw UnsupportedRoute("expect_heat_capacity", route);
  }
}

}  // namespace qheat
