// Final energies seen by the two observers on a narrow and a wide prior
// support, by quadrature and by Monte Carlo over the prior ensemble.

#include <cstdio>

#include "qheat/qheat.hpp"

int main() {
  using namespace qheat;
  const BathPair baths = BathPair::from_ratio(1.0, 0.5);
  const PriorSupport narrow(0.1, 10.0);
  const PriorSupport wide(1e-6 * baths.t_cold(), 1e6 * baths.t_hot());
  const QuadratureSpec tight{1e-13, 1e-12, 2000};

  for (const PriorSupport& s : {narrow, wide}) {
    std::printf("support [%g, %g], asymptote %.8e\n", s.a_min(), s.a_max(),
                asymptotic_heat_capacity(s) * common_final_temperature(baths));
    for (Observer o : {Observer::A, Observer::B})
      for (int i : {1, 2}) {
        const ExpectationResult q = expect_final_energy(i, o, baths, s, tight);
        const Quantity qty = i == 1 ? Quantity::E_fin_1 : Quantity::E_fin_2;
        const MCResult mc = mc_expectation(qty, o, baths, s, 1'000'000, 2024);
        std::printf("  E_fin_%d(%s)  quadrature %.8e   monte carlo %.8e +- %.1e\n", i,
                    std::string(to_string(o)).c_str(), q.value, mc.mean, mc.std_error);
      }
  }
}
