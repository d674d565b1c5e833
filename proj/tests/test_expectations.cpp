#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qheat/expectations.hpp"

using namespace qheat;

namespace {

// Reference values below were computed independently with mpmath at 30 digits.
const BathPair kBaths = BathPair::from_ratio(1.0, 0.5);
const PriorSupport kNarrow(0.1, 10.0);
const QuadratureSpec kTight{1e-13, 1e-12, 2000};

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST(InitialEnergy, ClosedFormMatchesReference) {
  EXPECT_LT(rel(expect_initial_energy(1, kBaths, kNarrow).value, 0.13991909856771149), 1e-13);
  const PriorSupport wide(1e-6, 1e6);
  EXPECT_LT(rel(expect_initial_energy(1, kBaths, wide).value, 0.025085814876399544), 1e-12);
  EXPECT_LT(rel(asymptotic_heat_capacity(wide), 0.025085832971998433), 1e-14);
}

TEST(InitialEnergy, RoutesAgree) {
  for (int i : {1, 2}) {
    const double closed = expect_initial_energy(i, kBaths, kNarrow).value;
    const ExpectationResult q = expect_initial_energy(i, kBaths, kNarrow, Route::quadrature, kTight);
    EXPECT_EQ(q.route, Route::quadrature);
    EXPECT_LT(rel(q.value, closed), 1e-11);
  }
  EXPECT_THROW(expect_initial_energy(1, kBaths, kNarrow, Route::monte_carlo), UnsupportedRoute);
  EXPECT_THROW(expect_initial_energy(3, kBaths, kNarrow), std::domain_error);
}

TEST(FinalEnergy, FourVariantsMatchReference) {
  EXPECT_LT(rel(expect_final_energy(1, Observer::A, kBaths, kNarrow, kTight).value, 0.09810627504412816), 1e-10);
  EXPECT_LT(rel(expect_final_energy(2, Observer::B, kBaths, kNarrow, kTight).value, 0.09810627504412816), 1e-10);
  EXPECT_LT(rel(expect_final_energy(2, Observer::A, kBaths, kNarrow, kTight).value, 0.10093029481464572), 1e-10);
  EXPECT_LT(rel(expect_final_energy(1, Observer::B, kBaths, kNarrow, kTight).value, 0.09369164903739448), 1e-10);
}

TEST(FinalEnergy, ClosedFormsOnlyWhereAvailable) {
  EXPECT_TRUE(final_energy_has_closed_form(2, Observer::A));
  EXPECT_TRUE(final_energy_has_closed_form(1, Observer::B));
  EXPECT_FALSE(final_energy_has_closed_form(1, Observer::A));
  EXPECT_THROW(expect_final_energy(1, Observer::A, kBaths, kNarrow, {}, Route::closed_form), UnsupportedRoute);
  const double closed = expect_final_energy(2, Observer::A, kBaths, kNarrow, {}, Route::closed_form).value;
  const double quad = expect_final_energy(2, Observer::A, kBaths, kNarrow, kTight).value;
  EXPECT_LT(rel(closed, quad), 1e-11);
}

TEST(FinalEnergy, NestedQuadratureMatchesBoost) {
  const JointPriorSpec spec(kNarrow, 0.5, Observer::A);
  const double ref = oracle::nested(
      [&](double a1, double a2) { return joint_density(a1, a2, spec) * final_energy(a1, a2, 0.5); }, 0.1, 10.0,
      [](double a1) { return 0.5 * a1; }, [](double a1) { return a1; });
  EXPECT_LT(rel(expect_final_energy(1, Observer::A, kBaths, kNarrow, kTight).value, ref), 1e-10);
}

TEST(FinalEnergy, ByPartsAgreesWithNested) {
  for (auto [i, o] : {std::pair{1, Observer::A}, std::pair{2, Observer::B}}) {
    const FinalEnergyByParts p = final_energy_by_parts(i, o, kBaths, kNarrow, kTight);
    EXPECT_LT(rel(p.value, expect_final_energy(i, o, kBaths, kNarrow, kTight).value), 1e-8);
    EXPECT_NEAR(p.boundary_term + p.log_term, p.value, 1e-15);
  }
  EXPECT_THROW(final_energy_by_parts(2, Observer::A, kBaths, kNarrow), std::domain_error);
}

TEST(FinalTemperature, CommonValueAtAnySupport) {
  for (int k = 1; k <= 9; ++k) {
    const BathPair b = BathPair::from_ratio(1.0, k / 10.0);
    const double target = common_final_temperature(b);
    EXPECT_NEAR(target, (1.0 - b.theta()) / std::log(1.0 / b.theta()), 1e-15);
    for (Observer o : {Observer::A, Observer::B})
      for (int side : {1, 2})
        EXPECT_LT(rel(expect_final_temperature(side, o, b, PriorSupport(0.5, 2.0), kTight).value, target), 1e-8);
  }
}

TEST(CommonTemperatureFactor, SeriesJoinsDirectForm) {
  for (double eps : {0.999e-4, 1.001e-4, 1e-6}) {
    const double direct = eps / -std::log1p(-eps);
    EXPECT_NEAR(common_temperature_factor(1.0 - eps), direct, 1e-13);
  }
}

TEST(Heats, QuadratureAndWork) {
  const HeatExpectations a = expect_heats(Observer::A, kBaths, kNarrow, kTight);
  EXPECT_LT(rel(a.heat_hot.value, 0.13991909856771149 - 0.09810627504412816), 1e-9);
  EXPECT_LT(rel(expect_work(Observer::A, kBaths, kNarrow, kTight).value, 0.008600837369197368), 1e-9);
  EXPECT_LT(rel(expect_work(Observer::B, kBaths, kNarrow, kTight).value, 0.00858079561127876), 1e-9);
  EXPECT_THROW(expect_heats(Observer::A, kBaths, kNarrow, {}, Route::closed_form), UnsupportedRoute);
}

TEST(Heats, CycleAveragesMatchMarginalFormWhereTheyShould) {
  const HeatExpectations ha = expect_cycle_heats(Observer::A, kBaths, kNarrow, kTight);
  const HeatExpectations hb = expect_cycle_heats(Observer::B, kBaths, kNarrow, kTight);
  EXPECT_LT(rel(ha.heat_hot.value, expect_heats(Observer::A, kBaths, kNarrow, kTight).heat_hot.value), 1e-9);
  EXPECT_LT(rel(hb.heat_cold.value, expect_heats(Observer::B, kBaths, kNarrow, kTight).heat_cold.value), 1e-9);
  // Energy conservation holds pointwise, so it survives the joint average.
  EXPECT_LT(rel(ha.heat_hot.value + ha.heat_cold.value, expect_work(Observer::A, kBaths, kNarrow, kTight).value),
            1e-8);
  // Marginal and joint averages of the hot-side initial energy differ for B.
  EXPECT_GT(rel(hb.heat_hot.value, expect_heats(Observer::B, kBaths, kNarrow, kTight).heat_hot.value), 0.05);
}

TEST(Efficiency, AccurateAcrossTheCancellationRegion) {
  // mpmath, 40 digits, at the double nearest each theta.
  EXPECT_LT(rel(expected_efficiency(0.99), 0.003344504089180396), 1e-13);
  EXPECT_LT(rel(expected_efficiency(0.9), 0.03450782754452058), 1e-13);
  EXPECT_LT(rel(hot_heat_factor(0.999), 0.0005000833750264081), 1e-12);
  EXPECT_LT(rel(cold_heat_factor(0.999), -0.0005004170420156084), 1e-12);
}

TEST(Heats, AsymptoticRoute) {
  const HeatExpectations q = expect_heats(Observer::B, kBaths, PriorSupport(1e-6, 1e6), {}, Route::asymptotic);
  EXPECT_LT(rel(q.heat_hot.value, 0.006990229559362940), 1e-13);
  EXPECT_LT(q.heat_cold.value, 0.0);
  EXPECT_LT(rel(1.0 + q.heat_cold.value / q.heat_hot.value, expected_efficiency(0.5)), 1e-13);
}

TEST(Heats, FactorsContinuousAcrossSeriesThreshold) {
  for (double eps : {0.999e-4, 1.001e-4}) {
    const double th = 1.0 - eps;
    EXPECT_NEAR(hot_heat_factor(th) / eps, 0.5, 1e-4);
    EXPECT_NEAR(cold_heat_factor(th) / eps, -0.5, 1e-3);
  }
}

TEST(Efficiency, ReferenceValues) {
  EXPECT_LT(rel(expected_efficiency(0.5), 0.20565027521895508), 1e-14);
  EXPECT_LT(rel(expected_efficiency(0.999), 3.334445037420030e-4), 1e-12);
  for (int k = 1; k < 100; ++k) {
    const double th = k / 100.0;
    EXPECT_GT(expected_efficiency(th), 0.0);
    EXPECT_LT(expected_efficiency(th), 1.0 - th);
  }
}

TEST(HeatCapacity, RoutesAndReference) {
  EXPECT_LT(rel(expect_heat_capacity(kBaths, kNarrow, 1).value, 0.15013546423172809), 1e-13);
  for (int i : {1, 2})
    EXPECT_LT(rel(expect_heat_capacity(kBaths, kNarrow, i, Route::quadrature, kTight).value,
                  expect_heat_capacity(kBaths, kNarrow, i).value),
              1e-11);
}

TEST(HeatCapacity, TemperatureIndependentWhenWide) {
  const PriorSupport wide(5e-7, 1e6);
  const double c1 = expect_heat_capacity(kBaths, wide, 1).value;
  const double c2 = expect_heat_capacity(kBaths, wide, 2).value;
  EXPECT_LT(rel(c1, c2), 1e-3);
  EXPECT_LT(rel(c1, asymptotic_heat_capacity(wide)), 1e-3);
}

TEST(Asymptotic, FinalEnergiesApproachCommonValue) {
  const PriorSupport wide(5e-7, 1e6);
  const double target = asymptotic_heat_capacity(wide) * common_final_temperature(kBaths);
  for (Observer o : {Observer::A, Observer::B})
    for (int i : {1, 2}) EXPECT_LT(rel(expect_final_energy(i, o, kBaths, wide).value, target), 1e-2);
}

TEST(Expectations, ScaleCovariance) {
  // Scaling temperatures and support by lambda scales energies by lambda.
  for (double lambda : {0.1, 10.0}) {
    const BathPair b(lambda * 1.0, lambda * 0.5);
    const PriorSupport s(lambda * 0.1, lambda * 10.0);
    EXPECT_LT(rel(expect_final_energy(1, Observer::A, b, s, kTight).value, lambda * 0.09810627504412816), 1e-9);
    EXPECT_LT(rel(expect_heat_capacity(b, s, 1).value, 0.15013546423172809), 1e-12);
  }
}
