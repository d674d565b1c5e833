#pragma once

// Named invariant checks across all modules, driven by `qheat verify`.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qheat/constrained.hpp"
#include "qheat/engine.hpp"
#include "qheat/expectations.hpp"
#include "qheat/oracle.hpp"
#include "qheat/priors.hpp"
#include "qheat/quadrature.hpp"

namespace qheat {

enum class VerifyLevel { fast, full };

struct CheckResult {
  std::string name;
  double value;      // observed deviation
  double threshold;  // pass iff value <= threshold
  bool passed;
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::fast;
  double t_hot = 1.0;
  double theta = 0.5;
  std::uint64_t seed = 20240601;
  unsigned workers = 1;
  // Multiplies every threshold; values < 1 tighten the suite.
  double tolerance_scale = 1.0;
};

namespace detail {

inline double rel_gap(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-300); }

/// Integral of a density over a linear interval, for normalization checks.
template <class F>
double integrate_density(F&& f, double lo, double hi) {
  return integrate(std::forward<F>(f), lo, hi, {1e-14, 1e-13, 4000}).value;
}

}  // namespace detail

inline std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const double s = opt.tolerance_scale;
  auto check = [&](std::string name, double value, double threshold) {
    out.push_back({std::move(name), value, threshold * s, value <= threshold * s});
  };

  const BathPair baths = BathPair::from_ratio(opt.t_hot, opt.theta);
  const double theta = baths.theta();
  const PriorSupport narrow(0.1, 10.0);
  const PriorSupport wide(1e-6 * baths.t_cold(), 1e6 * baths.t_hot());
  const QuadratureSpec tight{1e-13, 1e-12, 2000};

  // Priors.
  check("prior.marginal_normalization",
        std::abs(detail::integrate_density([&](double a) { return marginal_density(a, narrow); }, 0.1, 10.0) - 1.0),
        1e-10);
  for (Observer o : {Observer::A, Observer::B}) {
    const double given = 2.0;
    const double lo = o == Observer::A ? given * theta : given;
    const double hi = o == Observer::A ? given : given / theta;
    const double mass =
        detail::integrate_density([&](double v) { return conditional_density(v, given, o, theta); }, lo, hi);
    check("prior.conditional_normalization." + std::string(to_string(o)), std::abs(mass - 1.0), 1e-10);

    const JointPriorSpec spec(narrow, theta, o);
    const double joint = detail::integrate_density(
        [&](double outer) {
          const double ilo = o == Observer::A ? outer * theta : outer;
          const double ihi = o == Observer::A ? outer : outer / theta;
          return detail::integrate_density(
              [&](double inner) {
                return o == Observer::A ? joint_density(outer, inner, spec) : joint_density(inner, outer, spec);
              },
              ilo, ihi);
        },
        narrow.a_min(), narrow.a_max());
    check("prior.joint_normalization." + std::string(to_string(o)), std::abs(joint - 1.0), 1e-10);
  }
  for (double th : {0.1, 0.5, 0.9}) {
    const FunctionalEquationReport r = verify_functional_equation(th, 100);
    check("prior.functional_equation.log_residual.theta=" + std::to_string(th).substr(0, 3), r.log_residual_max,
          1e-14);
    check("prior.functional_equation.kernel_affine.theta=" + std::to_string(th).substr(0, 3),
          r.kernel_affine_deviation + (r.kernel_dimension == 2 ? 0.0 : 1.0), 1e-10);
  }
  {
    const ScalingEquationReport r = verify_scaling_equation(0.5);
    check("prior.scaling_equation.inverse_residual", r.inverse_residual_max, 1e-14);
  }

  // Engine.
  {
    double worst = 0.0;
    for (int i = 1; i <= 40; ++i)
      for (int j = 1; j <= 40; ++j) {
        const CycleQuantities c = cycle(EngineConfig(0.25 * i, 0.25 * j), baths);
        worst = std::max(worst, std::abs(c.work - (c.heat_hot + c.heat_cold)) / std::max(1.0, std::abs(c.work)));
      }
    check("engine.energy_conservation", worst, 1e-12);
    int misses = 0;
    for (int i = 1; i <= 40; ++i)
      for (int j = 0; j < 40; ++j) {
        const double a1 = 0.25 * i;
        const double a2 = a1 * (theta + (1.0 - theta) * j / 39.0);
        if (!swap_is_optimal(EngineConfig(a1, a2), baths)) ++misses;
      }
    check("engine.swap_optimal_in_band", misses, 0.0);
  }

  // Expectations on the narrow support.
  {
    const ExpectationResult e1a = expect_final_energy(1, Observer::A, baths, narrow, tight);
    const ExpectationResult e2b = expect_final_energy(2, Observer::B, baths, narrow, tight);
    check("expectations.observer_identity", detail::rel_gap(e1a.value, e2b.value), 1e-9);
    const FinalEnergyByParts parts = final_energy_by_parts(2, Observer::B, baths, narrow, tight);
    check("expectations.by_parts_vs_nested", detail::rel_gap(parts.value, e2b.value), 1e-8);
    const double t_common = common_final_temperature(baths);
    double worst = 0.0;
    for (Observer o : {Observer::A, Observer::B})
      for (int side : {1, 2})
        worst = std::max(worst, detail::rel_gap(expect_final_temperature(side, o, baths, narrow, tight).value,
                                                t_common));
    check("expectations.common_final_temperature", worst, 1e-8);
    for (int i : {1, 2}) {
      const double closed = expect_initial_energy(i, baths, narrow).value;
      const double quad = expect_initial_energy(i, baths, narrow, Route::quadrature, tight).value;
      check("expectations.initial_energy_routes.system" + std::to_string(i), detail::rel_gap(quad, closed), 1e-9);
    }
  }

  // Asymptotic regime, at the default wide support and one decade wider.
  for (double widen : {1.0, 10.0}) {
    const PriorSupport sup(wide.a_min() / widen, wide.a_max() * widen);
    const std::string tag = widen == 1.0 ? "" : ".widened";
    const double target = asymptotic_heat_capacity(sup) * common_final_temperature(baths);
    double worst = 0.0;
    for (Observer o : {Observer::A, Observer::B})
      for (int i : {1, 2}) worst = std::max(worst, detail::rel_gap(expect_final_energy(i, o, baths, sup).value, target));
    check("asymptotic.final_energy" + tag, worst, 1e-2);
    const FinalEnergyByParts parts = final_energy_by_parts(2, Observer::B, baths, sup);
    check("asymptotic.boundary_term_small" + tag, std::abs(parts.boundary_term) / std::abs(parts.value), 1e-4);
    for (int i : {1, 2}) {
      const double c = expect_heat_capacity(baths, sup, i).value;
      check("asymptotic.energy_over_CT.system" + std::to_string(i) + tag,
            detail::rel_gap(expect_initial_energy(i, baths, sup).value / (c * baths.temperature(i)), 1.0), 1e-2);
    }
  }
  {
    const HeatExpectations q = expect_heats(Observer::A, baths, wide);
    check("asymptotic.efficiency_from_heats",
          detail::rel_gap(1.0 + q.heat_cold.value / q.heat_hot.value, expected_efficiency(theta)), 5e-3);
  }

  // Efficiency bounds and the fixed-efficiency optimum.
  {
    double worst = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double th = k / 100.0;
      const double e = expected_efficiency(th);
      if (!(e > 0.0 && e < 1.0 - th)) worst = std::max(worst, 1.0);
    }
    check("efficiency.below_carnot", worst, 0.0);
    const WorkOptimum opt_w = maximize_expected_work(baths, wide);
    check("constrained.curzon_ahlborn_optimum", std::abs(opt_w.eta_star - curzon_ahlborn_efficiency(theta)), 1e-8);
    check("constrained.work_ratio_near_equilibrium", std::abs(work_ratio(0.999) - 0.75), 1e-3);
  }

  // Monte Carlo against closed form / quadrature, in units of the standard error.
  {
    const std::size_t n = opt.level == VerifyLevel::fast ? 10'000 : 1'000'000;
    struct Ref {
      Quantity q;
      Observer o;
      double value;
    };
    const HeatExpectations heats_a = expect_heats(Observer::A, baths, narrow, tight);
    const std::vector<Ref> refs{
        {Quantity::E_ini_1, Observer::A, expect_initial_energy(1, baths, narrow).value},
        {Quantity::E_ini_2, Observer::A, expect_initial_energy(2, baths, narrow).value},
        {Quantity::E_fin_1, Observer::A, expect_final_energy(1, Observer::A, baths, narrow, tight).value},
        {Quantity::E_fin_2, Observer::A, expect_final_energy(2, Observer::A, baths, narrow, {}, Route::closed_form).value},
        {Quantity::E_fin_1, Observer::B, expect_final_energy(1, Observer::B, baths, narrow, {}, Route::closed_form).value},
        {Quantity::E_fin_2, Observer::B, expect_final_energy(2, Observer::B, baths, narrow, tight).value},
        {Quantity::Q1, Observer::A, heats_a.heat_hot.value},
        {Quantity::W, Observer::A, expect_work(Observer::A, baths, narrow, tight).value},
        {Quantity::W, Observer::B, expect_work(Observer::B, baths, narrow, tight).value},
        {Quantity::T1_final, Observer::A, common_final_temperature(baths)},
        {Quantity::T2_final, Observer::B, common_final_temperature(baths)},
        {Quantity::C_1, Observer::A, expect_heat_capacity(baths, narrow, 1).value},
    };
    std::uint64_t stream = 0;
    for (const Ref& r : refs) {
      const MCResult mc = mc_expectation(r.q, r.o, baths, narrow, n, opt.seed + stream++, opt.workers);
      check("oracle.mc_sigma." + std::string(to_string(r.q)) + "." + std::string(to_string(r.o)),
            std::abs(mc.mean - r.value) / mc.std_error, 3.0);
    }
    const ConstrainedSpec cs(0.25, baths, narrow);
    for (Observer o : {Observer::A, Observer::B}) {
      const MCResult mc = mc_constrained_work(o, cs, n, opt.seed + stream++, opt.workers);
      check("oracle.mc_sigma.constrained_work." + std::string(to_string(o)),
            std::abs(mc.mean - expected_work_constrained(o, cs).value) / mc.std_error, 3.0);
    }
  }
  return out;
}

}  // namespace qheat
