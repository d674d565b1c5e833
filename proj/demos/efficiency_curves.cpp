// Expected efficiency, Curzon-Ahlborn and Zhang efficiencies, and the work
// ratio across temperature ratios, followed by the numerical optimum of the
// fixed-efficiency expected work at one theta.

#include <cstdio>

#include "qheat/qheat.hpp"

int main() {
  using namespace qheat;
  std::printf("%6s %12s %12s %12s %12s %12s\n", "theta", "carnot", "expected", "curzon", "zhang", "ratio");
  for (int k = 1; k <= 9; ++k) {
    const double theta = k / 10.0;
    std::printf("%6.2f %12.8f %12.8f %12.8f %12.8f %12.8f\n", theta, 1.0 - theta, expected_efficiency(theta),
                curzon_ahlborn_efficiency(theta), zhang_efficiency(theta), work_ratio(theta));
  }

  const BathPair baths = BathPair::from_ratio(1.0, 0.25);
  const PriorSupport support(1e-6 * baths.t_cold(), 1e6 * baths.t_hot());
  const WorkOptimum opt = maximize_expected_work(baths, support);
  std::printf("\ntheta = 0.25: eta* = %.12f, 1 - sqrt(theta) = %.12f, W* = %.6e\n", opt.eta_star,
              curzon_ahlborn_efficiency(0.25), opt.w_star);
}
