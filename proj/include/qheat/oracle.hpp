#pragma once

// Plain Monte Carlo over the prior ensemble, used to cross-check the
// closed-form and quadrature expectations.
//
// The sample index range is cut into fixed blocks of kBlockSize draws. Block b
// uses its own generator seeded from (seed, b), and block statistics are merged
// in block order, so a run is bit-reproducible for any worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qheat/constrained.hpp"
#include "qheat/engine.hpp"
#include "qheat/numerics.hpp"
#include "qheat/priors.hpp"

namespace qheat {

enum class Quantity { W, Q1, Q2, E_ini_1, E_ini_2, E_fin_1, E_fin_2, T1_final, T2_final, C_1, C_2 };

inline constexpr Quantity kAllQuantities[] = {Quantity::W,       Quantity::Q1,      Quantity::Q2,
                                              Quantity::E_ini_1, Quantity::E_ini_2, Quantity::E_fin_1,
                                              Quantity::E_fin_2, Quantity::T1_final, Quantity::T2_final,
                                              Quantity::C_1,     Quantity::C_2};

inline constexpr std::string_view to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::W: return "W";
    case Quantity::Q1: return "Q1";
    case Quantity::Q2: return "Q2";
    case Quantity::E_ini_1: return "E_ini_1";
    case Quantity::E_ini_2: return "E_ini_2";
    case Quantity::E_fin_1: return "E_fin_1";
    case Quantity::E_fin_2: return "E_fin_2";
    case Quantity::T1_final: return "T1_final";
    case Quantity::T2_final: return "T2_final";
    case Quantity::C_1: return "C_1";
    case Quantity::C_2: return "C_2";
  }
  return "?";
}

inline Quantity parse_quantity(std::string_view name) {
  for (Quantity q : kAllQuantities)
    if (to_string(q) == name) return q;
  throw std::invalid_argument("unknown quantity '" + std::string(name) + "'");
}

struct MCResult {
  double mean;
  double std_error;
  std::size_t n_samples;
  std::uint64_t seed;
};

/// Welford accumulator with the pairwise merge of Chan et al.
struct RunningStats {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& other) noexcept {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n1 = static_cast<double>(count), n2 = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    const double n = n1 + n2;
    mean += delta * n2 / n;
    m2 += other.m2 + delta * delta * n1 * n2 / n;
    count += other.count;
  }

  double std_error() const noexcept {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    return std::sqrt(m2 / (n - 1.0) / n);
  }
};

inline constexpr std::size_t kBlockSize = std::size_t{1} << 16;

namespace detail {

// SplitMix64 finalizer, used to derive well-separated per-block seeds.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) noexcept {
  return mix64(mix64(seed) ^ mix64(block + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& g) noexcept {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Runs `draw(generator)` n times across `workers` threads, block by block.
template <class Draw>
RunningStats run_blocks(Draw draw, std::size_t n, std::uint64_t seed, unsigned workers) {
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<RunningStats> partial(blocks);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) {
      std::mt19937_64 gen(block_seed(seed, b));
      const std::size_t count = std::min(kBlockSize, n - b * kBlockSize);
      RunningStats s;
      for (std::size_t i = 0; i < count; ++i) s.add(draw(gen));
      partial[b] = s;
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  RunningStats total;
  for (const RunningStats& s : partial) total.merge(s);
  return total;
}

inline void check_sample_count(std::size_t n) {
  require(n >= 1000, "Monte Carlo estimates need at least 1000 samples");
}

}  // namespace detail

/// Monte Carlo estimate of a per-cycle quantity over an observer's joint prior.
/// Initial-state quantities (E_ini_i, C_i) depend on a_i alone and are averaged
/// over the marginal prior of a_i, which is how their expectation is defined.
inline MCResult mc_expectation(Quantity quantity, Observer observer, const BathPair& baths,
                               const PriorSupport& support, std::size_t n, std::uint64_t seed,
                               unsigned workers = 1) {
  detail::check_sample_count(n);
  const double theta = baths.theta();
  const double t1 = baths.t_hot(), t2 = baths.t_cold();

  auto draw = [&](std::mt19937_64& gen) {
    const double u1 = detail::uniform01(gen);
    const double u2 = detail::uniform01(gen);
    switch (quantity) {
      case Quantity::E_ini_1: return initial_energy(sample_marginal(support, u1), t1);
      case Quantity::E_ini_2: return initial_energy(sample_marginal(support, u1), t2);
      case Quantity::C_1: return heat_capacity(sample_marginal(support, u1), t1);
      case Quantity::C_2: return heat_capacity(sample_marginal(support, u1), t2);
      default: break;
    }
    const double first = sample_marginal(support, u1);
    const double second = sample_conditional(first, observer, theta, u2);
    const double a1 = observer == Observer::A ? first : second;
    const double a2 = observer == Observer::A ? second : first;
    const CycleQuantities c = cycle(EngineConfig(a1, a2), baths);
    switch (quantity) {
      case Quantity::W: return c.work;
      case Quantity::Q1: return c.heat_hot;
      case Quantity::Q2: return c.heat_cold;
      case Quantity::E_fin_1: return final_energy(a1, a2, t2);
      case Quantity::E_fin_2: return final_energy(a2, a1, t1);
      case Quantity::T1_final: return c.temp_final_hot_side;
      case Quantity::T2_final: return c.temp_final_cold_side;
      default: return 0.0;
    }
  };
  const RunningStats s = detail::run_blocks(draw, n, seed, workers);
  return {s.mean, s.std_error(), s.count, seed};
}

/// Monte Carlo estimate of the fixed-efficiency expected work: the uncertain
/// spacing (a1 for A, a2 for B) is drawn log-uniformly on the support.
inline MCResult mc_constrained_work(Observer observer, const ConstrainedSpec& spec, std::size_t n,
                                    std::uint64_t seed, unsigned workers = 1) {
  detail::check_sample_count(n);
  auto draw = [&](std::mt19937_64& gen) {
    const double a = sample_marginal(spec.support, detail::uniform01(gen));
    return observer == Observer::A ? work_at_efficiency(a, spec) : work_at_efficiency_cold(a, spec);
  };
  const RunningStats s = detail::run_blocks(draw, n, seed, workers);
  return {s.mean, s.std_error(), s.count, seed};
}

}  // namespace qheat
