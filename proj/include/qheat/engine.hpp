#pragma once

// Single-cycle thermodynamics of the two-qubit swap engine.
//
// Two two-level systems R (spacing a1, coupled to the hot bath T1) and S
// (spacing a2, cold bath T2) start in their Gibbs states. Work is extracted by
// swapping their occupation distributions, after which each system
// re-thermalizes with its own bath. Boltzmann's constant is 1; spacings and
// temperatures share one energy unit.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qheat/numerics.hpp"

namespace qheat {

class BathPair {
 public:
  BathPair(double t_hot, double t_cold) : t_hot_(t_hot), t_cold_(t_cold) {
    require(positive_finite(t_cold), "BathPair: cold temperature must be positive and finite");
    require(std::isfinite(t_hot) && t_hot > t_cold,
            "BathPair: hot temperature must exceed the cold temperature");
  }

  static BathPair from_ratio(double t_hot, double theta) {
    require(positive_finite(t_hot), "BathPair: hot temperature must be positive and finite");
    require(std::isfinite(theta) && theta > 0.0 && theta < 1.0,
            "BathPair: temperature ratio must lie in (0, 1)");
    return BathPair(t_hot, t_hot * theta);
  }

  double t_hot() const noexcept { return t_hot_; }
  double t_cold() const noexcept { return t_cold_; }
  double theta() const noexcept { return t_cold_ / t_hot_; }

  /// Temperature of bath 1 (hot) or 2 (cold).
  double temperature(int system) const {
    require(system == 1 || system == 2, "system index must be 1 or 2");
    return system == 1 ? t_hot_ : t_cold_;
  }

 private:
  double t_hot_;
  double t_cold_;
};

struct EngineConfig {
  double a1;
  double a2;

  EngineConfig(double spacing1, double spacing2) : a1(spacing1), a2(spacing2) {
    require(positive_finite(a1) && positive_finite(a2),
            "EngineConfig: level spacings must be positive and finite");
  }
};

struct CycleQuantities {
  double work;
  double heat_hot;
  double heat_cold;  // negative when the cold bath absorbs heat
  double efficiency;
  double temp_final_hot_side;
  double temp_final_cold_side;
};

namespace detail {
inline void check_level_args(double a, double t) {
  require(positive_finite(t), "temperature must be positive and finite");
  require(std::isfinite(a) && a >= 0.0, "level spacing must be non-negative and finite");
}
}  // namespace detail

/// Ground-state occupation 1/(1+e^{-a/t}) of a two-level system.
inline double occupation_ground(double a, double t) {
  detail::check_level_args(a, t);
  return fermi(-a / t);
}

/// Mean Gibbs energy a/(1+e^{a/t}).
inline double initial_energy(double a, double t) {
  detail::check_level_args(a, t);
  return a * fermi(a / t);
}

/// Energy of a system with spacing `a_own` after it receives the occupation
/// distribution of a system with spacing `a_other` at temperature `t_other`.
inline double final_energy(double a_own, double a_other, double t_other) {
  detail::check_level_args(a_other, t_other);
  require(std::isfinite(a_own) && a_own >= 0.0, "level spacing must be non-negative and finite");
  return a_own * fermi(a_other / t_other);
}

inline CycleQuantities cycle(const EngineConfig& config, const BathPair& baths) {
  const double t1 = baths.t_hot();
  const double t2 = baths.t_cold();
  // Difference of excited-state populations, hot minus cold.
  const double bracket = fermi(config.a1 / t1) - fermi(config.a2 / t2);
  CycleQuantities q{};
  q.heat_hot = config.a1 * bracket;
  q.heat_cold = -config.a2 * bracket;
  q.work = (config.a1 - config.a2) * bracket;
  q.efficiency = 1.0 - config.a2 / config.a1;
  q.temp_final_hot_side = t2 * config.a1 / config.a2;
  q.temp_final_cold_side = t1 * config.a2 / config.a1;
  return q;
}

/// Engine band a1*theta <= a2 <= a1, where W >= 0 and Q1 >= 0.
inline bool is_engine(const EngineConfig& config, const BathPair& baths) {
  return config.a1 * baths.theta() <= config.a2 && config.a2 <= config.a1;
}

/// (a/t)^2 e^{a/t} / (1+e^{a/t})^2. Symmetric in a/t, so evaluated with e^{-|x|}.
inline double heat_capacity(double a, double t) {
  detail::check_level_args(a, t);
  const double x = a / t;
  const double e = std::exp(-std::abs(x));
  const double d = 1.0 + e;
  return x * x * e / (d * d);
}

/// Result of the exhaustive search over reassignments of the four product-state
/// probabilities to the four composite energy levels.
struct SwapSearch {
  double swap_energy;
  double min_energy;
  bool swap_is_minimal;
};

inline SwapSearch swap_search(const EngineConfig& config, const BathPair& baths) {
  const double r1 = occupation_ground(config.a1, baths.t_hot());
  const double s1 = occupation_ground(config.a2, baths.t_cold());
  const double r2 = 1.0 - r1;
  const double s2 = 1.0 - s1;

  // Composite levels |R S>: gg, eg, ge, ee.
  const std::array<double, 4> energies{0.0, config.a1, config.a2, config.a1 + config.a2};
  const std::array<double, 4> probs{r1 * s1, r2 * s1, r1 * s2, r2 * s2};

  // After the swap R carries (s1, s2) and S carries (r1, r2).
  const double swap_energy = energies[0] * s1 * r1 + energies[1] * s2 * r1 +
                             energies[2] * s1 * r2 + energies[3] * s2 * r2;

  std::array<int, 4> perm{0, 1, 2, 3};
  double best = std::numeric_limits<double>::infinity();
  do {
    double e = 0.0;
    for (int k = 0; k < 4; ++k) e += energies[k] * probs[perm[k]];
    best = std::min(best, e);
  } while (std::next_permutation(perm.begin(), perm.end()));

  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  return {swap_energy, best, swap_energy <= best + tol};
}

/// True iff the swap attains the minimum final mean energy among all 24
/// unitary-reachable reassignments of the product-state eigenvalues.
inline bool swap_is_optimal(const EngineConfig& config, const BathPair& baths) {
  return swap_search(config, baths).swap_is_minimal;
}

}  // namespace qheat
