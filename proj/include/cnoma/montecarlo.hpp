#pragma once

// Seeded Monte Carlo over Rayleigh block fading.
//
// Draw i is generated from a counter-based stream keyed by (seed, i), and
// draws are reduced in fixed-size blocks merged in index order, so every
// estimate is bit-identical for any number of worker threads.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cnoma/analysis.hpp"
#include "cnoma/model.hpp"
#include "cnoma/optimizer.hpp"

namespace cnoma {

enum class Ordering {
  Unordered,    ///< g1, g2 independent exponentials as drawn
  SwapOrdered,  ///< g1 and g2 swapped when g1 <= g2
};

[[nodiscard]] std::string_view to_string(Ordering o);

struct SamplerConfig {
  std::uint64_t seed = 1;
  Ordering ordering = Ordering::Unordered;
  std::size_t sample_count = 100000;
  unsigned workers = 0;  ///< 0 = one per hardware thread; never affects results
};

void validate(const SamplerConfig& cfg);

/// Counter-based generator: a SplitMix64 sequence whose starting state is a
/// hash of (seed, stream). Satisfies UniformRandomBitGenerator.
class StreamRng {
public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

private:
  std::uint64_t state_;
};

[[nodiscard]] ChannelRealization sample_channel(const SamplerConfig& cfg, const SystemParams& p,
                                                std::uint64_t stream_index);

/// Running mean / variance (Welford) with an order-sensitive but
/// deterministic merge.
class Accumulator {
public:
  void add(double x);
  void merge(const Accumulator& other);

  [[nodiscard]] std::size_t count() const { return n_; }
  [[nodiscard]] double mean() const { return mean_; }
  [[nodiscard]] double variance() const;  ///< unbiased sample variance
  [[nodiscard]] double standard_error() const;

private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Fading average of the instantaneous rates at a fixed design point.
[[nodiscard]] ErgodicReport estimate_ergodic(const SamplerConfig& cfg, const SystemParams& p,
                                             const DesignPoint& d);

struct OptimizedEstimate {
  Estimate weighted_sum;  ///< E[w1 C1 + w2 C2] at the per-draw optimum
  Estimate alpha_star;
  Estimate rho_star;
  std::vector<Estimate> baseline_weighted_sum;  ///< one per fixed design point, same draws
  std::size_t samples = 0;                      ///< draws actually used
  std::size_t skipped = 0;                      ///< draws with g1 == g2
};

/// Per-draw optimization with solve_1d. Requires SwapOrdered sampling.
[[nodiscard]] OptimizedEstimate estimate_optimized(const SamplerConfig& cfg, const SystemParams& p,
                                                   const SolverOptions& solver,
                                                   const std::vector<DesignPoint>& baselines = {});

struct SweepMetadata {
  std::uint64_t seed = 0;
  Ordering ordering = Ordering::Unordered;
  std::size_t sample_count = 0;
  std::size_t alpha_points = 0;
  std::string timestamp;
};

/// Carrier for one experiment: axis values and per-point aggregates.
struct SweepResult {
  std::string axis_name;
  std::vector<double> axis;
  std::vector<ErgodicReport> ergodic;        ///< Monte Carlo reports, if any
  std::vector<OptimizedEstimate> optimized;  ///< optimizer aggregates, if any
  SweepMetadata metadata;
};

}  // namespace cnoma
