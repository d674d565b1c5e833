#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qheat/constrained.hpp"
#include "qheat/optimize.hpp"

using namespace qheat;

namespace {
const BathPair kBaths = BathPair::from_ratio(1.0, 0.5);
const PriorSupport kNarrow(0.1, 10.0);
double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }
}  // namespace

TEST(ConstrainedSpec, Validation) {
  EXPECT_THROW(ConstrainedSpec(0.6, kBaths, kNarrow), std::domain_error);
  EXPECT_THROW(ConstrainedSpec(0.0, kBaths, kNarrow), std::domain_error);
  EXPECT_NO_THROW(ConstrainedSpec(0.5, kBaths, kNarrow));
}

TEST(WorkAtEfficiency, SidesAgree) {
  const ConstrainedSpec spec(0.25, kBaths, kNarrow);
  for (double a1 : {0.2, 1.0, 4.0})
    EXPECT_NEAR(work_at_efficiency(a1, spec), work_at_efficiency_cold(0.75 * a1, spec), 1e-15);
  EXPECT_NEAR(work_at_efficiency(2.0, ConstrainedSpec(0.5, kBaths, kNarrow)), 0.0, 1e-16);
}

TEST(ExpectedWork, ClosedFormsMatchReference) {
  const ConstrainedSpec spec(0.25, kBaths, kNarrow);
  EXPECT_LT(rel(expected_work_constrained(Observer::A, spec).value, 0.012506600766739695), 1e-13);
  EXPECT_LT(rel(expected_work_constrained(Observer::B, spec).value, 0.012482721496217105), 1e-13);
}

TEST(ExpectedWork, ClosedFormsMatchBoost) {
  for (double eta : {0.05, 0.25, 0.45}) {
    const ConstrainedSpec spec(eta, kBaths, kNarrow);
    const double l = kNarrow.log_range();
    const double ref_a = oracle::tanh_sinh([&](double a) { return work_at_efficiency(a, spec) / (a * l); }, 0.1, 10.0);
    const double ref_b =
        oracle::tanh_sinh([&](double a) { return work_at_efficiency_cold(a, spec) / (a * l); }, 0.1, 10.0);
    EXPECT_LT(rel(expected_work_constrained(Observer::A, spec).value, ref_a), 1e-11);
    EXPECT_LT(rel(expected_work_constrained(Observer::B, spec).value, ref_b), 1e-11);
    EXPECT_LT(rel(expected_work_constrained(Observer::A, spec, Route::quadrature, {1e-14, 1e-12, 2000}).value, ref_a),
              1e-10);
  }
}

TEST(ExpectedWork, ReducesToAsymptoticWhenWide) {
  const PriorSupport wide(5e-7, 1e6);
  for (double eta : {0.1, 0.25, 0.4}) {
    const ConstrainedSpec spec(eta, kBaths, wide);
    const double asym = expected_work_constrained(Observer::A, spec, Route::asymptotic).value;
    EXPECT_LT(rel(expected_work_constrained(Observer::A, spec).value, asym), 1e-2);
    EXPECT_LT(rel(expected_work_constrained(Observer::B, spec).value, asym), 1e-2);
  }
  EXPECT_THROW(expected_work_constrained(Observer::A, ConstrainedSpec(0.2, kBaths, wide), Route::monte_carlo),
               UnsupportedRoute);
}

TEST(Optimum, CurzonAhlborn) {
  for (int k = 1; k <= 9; ++k) {
    const BathPair b = BathPair::from_ratio(1.0, k / 10.0);
    const WorkOptimum w = maximize_expected_work(b, PriorSupport(1e-6 * b.t_cold(), 1e6));
    EXPECT_LE(std::abs(w.eta_star - curzon_ahlborn_efficiency(b.theta())), 1e-8) << "theta=" << b.theta();
    EXPECT_GT(w.w_star, 0.0);
  }
}

TEST(Optimizer, FindsInteriorMaximum) {
  const Maximum m = maximize_unimodal([](double x) { return -(x - 0.3) * (x - 0.3) + 2.0; }, 0.0, 1.0);
  EXPECT_NEAR(m.x, 0.3, 1e-9);
  EXPECT_NEAR(m.value, 2.0, 1e-15);
}

TEST(Optimizer, ReportsFailure) {
  EXPECT_THROW(maximize_unimodal([](double x) { return x; }, 0.0, 1.0), OptimizationError);
  EXPECT_THROW(maximize_unimodal([](double x) { return -x * x; }, -1.0, 1.0, 1e-12, 5), OptimizationError);
  EXPECT_THROW(maximize_unimodal([](double x) { return x; }, 1.0, 0.0), OptimizationError);
}

TEST(WorkRatio, ValuesAndShape) {
  EXPECT_LT(rel(work_ratio(0.5), 0.7519882025000477), 1e-12);
  EXPECT_NEAR(work_ratio(0.999), 0.75, 1e-3);
  double prev = work_ratio(0.01);
  for (int k = 2; k < 100; ++k) {
    const double r = work_ratio(k / 100.0);
    EXPECT_LT(r, 1.0);
    EXPECT_LE(r, prev + 1e-12);  // decreasing towards 3/4 as theta -> 1
    prev = r;
  }
  EXPECT_LT(work_ratio(0.5, EfficiencyConvention::curzon_ahlborn), 1.0);
}

TEST(Zhang, ReferenceAndSecondOrderAgreement) {
  EXPECT_LT(rel(zhang_efficiency(0.5), 0.20465406422440948), 1e-14);
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double eps = std::pow(10.0, -3.0 + 2.0 * k / 100.0);
    worst = std::max(worst, std::abs(zhang_efficiency(1.0 - eps) - expected_efficiency(1.0 - eps)) / (eps * eps * eps));
  }
  EXPECT_LT(worst, 0.1);
}
