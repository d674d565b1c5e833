#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "qheat/priors.hpp"

using namespace qheat;

TEST(PriorSupport, Validation) {
  EXPECT_THROW(PriorSupport(0.0, 1.0), std::domain_error);
  EXPECT_THROW(PriorSupport(2.0, 1.0), std::domain_error);
  EXPECT_THROW(PriorSupport(1.0, 1.0), std::domain_error);
  EXPECT_THROW(PriorSupport(1.0, INFINITY), std::domain_error);
  EXPECT_NEAR(PriorSupport(1.0, std::exp(2.0)).log_range(), 2.0, 1e-15);
}

TEST(Densities, Values) {
  EXPECT_NEAR(conditional_density(2.0, 1.0, Observer::B, 0.5), 0.7213475204444817, 1e-15);
  EXPECT_NEAR(marginal_density(1.0, PriorSupport(0.1, 10.0)), 1.0 / std::log(100.0), 1e-15);
  const JointPriorSpec spec(PriorSupport(1.0, std::exp(2.0)), 0.5, Observer::B);
  EXPECT_NEAR(joint_density(2.0, 1.5, spec), 0.2404491734814939, 1e-15);
}

TEST(Densities, OutsideSupportThrows) {
  const PriorSupport s(0.1, 10.0);
  EXPECT_THROW(marginal_density(20.0, s), std::domain_error);
  EXPECT_THROW(conditional_density(0.4, 1.0, Observer::A, 0.5), std::domain_error);
  EXPECT_THROW(conditional_density(2.5, 1.0, Observer::B, 0.5), std::domain_error);
  EXPECT_THROW(joint_density(1.0, 1.1, JointPriorSpec(s, 0.5, Observer::A)), std::domain_error);
  EXPECT_THROW(JointPriorSpec(s, 1.0, Observer::A), std::domain_error);
}

TEST(Densities, NormalizeAgainstTanhSinh) {
  const PriorSupport s(0.1, 10.0);
  EXPECT_NEAR(oracle::tanh_sinh([&](double a) { return marginal_density(a, s); }, 0.1, 10.0), 1.0, 1e-12);
  for (double theta : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(oracle::tanh_sinh([&](double v) { return conditional_density(v, 3.0, Observer::A, theta); },
                                  3.0 * theta, 3.0),
                1.0, 1e-12);
    EXPECT_NEAR(oracle::tanh_sinh([&](double v) { return conditional_density(v, 3.0, Observer::B, theta); }, 3.0,
                                  3.0 / theta),
                1.0, 1e-12);
  }
}

TEST(Densities, JointNormalizesForBothObservers) {
  const PriorSupport s(0.5, 2.0);
  const double theta = 0.5;
  const JointPriorSpec a(s, theta, Observer::A), b(s, theta, Observer::B);
  const double mass_a = oracle::nested([&](double a1, double a2) { return joint_density(a1, a2, a); }, 0.5, 2.0,
                                       [&](double a1) { return a1 * theta; }, [](double a1) { return a1; });
  const double mass_b = oracle::nested([&](double a2, double a1) { return joint_density(a1, a2, b); }, 0.5, 2.0,
                                       [](double a2) { return a2; }, [&](double a2) { return a2 / theta; });
  EXPECT_NEAR(mass_a, 1.0, 1e-12);
  EXPECT_NEAR(mass_b, 1.0, 1e-12);
}

TEST(Densities, ProductLaw) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const PriorSupport s(0.1, 10.0);
  for (Observer o : {Observer::A, Observer::B}) {
    const JointPriorSpec spec(s, 0.3, o);
    for (int i = 0; i < 1000; ++i) {
      const double first = sample_marginal(s, u(gen));
      const double second = sample_conditional(first, o, 0.3, u(gen));
      const double a1 = o == Observer::A ? first : second;
      const double a2 = o == Observer::A ? second : first;
      const double product = marginal_density(first, s) * conditional_density(second, first, o, 0.3);
      EXPECT_LE(std::abs(joint_density(a1, a2, spec) - product), 1e-14 * product);
    }
  }
}

TEST(Samplers, InverseCdfEndpoints) {
  const PriorSupport s(0.1, 10.0);
  EXPECT_DOUBLE_EQ(sample_marginal(s, 0.0), 0.1);
  EXPECT_NEAR(sample_marginal(s, 1.0), 10.0, 1e-14);
  EXPECT_NEAR(sample_marginal(s, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(sample_conditional(2.0, Observer::A, 0.5, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(sample_conditional(2.0, Observer::A, 0.5, 1.0), 2.0, 1e-15);
  EXPECT_NEAR(sample_conditional(2.0, Observer::B, 0.5, 1.0), 4.0, 1e-15);
}

TEST(Samplers, KolmogorovSmirnov) {
  // ln a is uniform on [ln a_min, ln a_max] under the marginal.
  const PriorSupport s(1e-3, 1e3);
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr int n = 200000;
  std::vector<double> cdf(n);
  for (double& c : cdf) c = (std::log(sample_marginal(s, u(gen))) - std::log(s.a_min())) / s.log_range();
  std::sort(cdf.begin(), cdf.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) d = std::max({d, std::abs(cdf[i] - double(i) / n), std::abs(cdf[i] - double(i + 1) / n)});
  EXPECT_LT(d, 0.01);
}

TEST(FunctionalEquation, LogarithmSolvesIt) {
  for (double theta : {0.1, 0.5, 0.9}) {
    const FunctionalEquationReport r = verify_functional_equation(theta, 100);
    EXPECT_LE(r.log_residual_max, 1e-14);
    EXPECT_EQ(r.kernel_dimension, 2u);
    EXPECT_LE(r.kernel_affine_deviation, 1e-10);
  }
}

TEST(FunctionalEquation, PolynomialsAreRejected) {
  double lin = 0.0, quad = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double a = std::exp(std::log(1e-2) + std::log(1e4) * k / 99.0);
    lin = std::max(lin, functional_equation_residual([](double x) { return x; }, a, 0.5));
    quad = std::max(quad, functional_equation_residual([](double x) { return x * x; }, a, 0.5));
  }
  EXPECT_GT(lin, 0.1);
  EXPECT_GT(quad, 0.1);
}

TEST(ScalingEquation, InverseSolvesUniformDoesNot) {
  for (double eta : {0.1, 0.5, 0.9}) {
    const ScalingEquationReport r = verify_scaling_equation(eta);
    EXPECT_LE(r.inverse_residual_max, 1e-14);
    EXPECT_GT(r.uniform_residual_min, 0.05);
  }
  EXPECT_GT(scaling_equation_residual([](double x) { return x; }, 1.0, 0.5), 0.1);
  EXPECT_GT(scaling_equation_residual([](double x) { return x * x; }, 1.0, 0.5), 0.1);
}
