#include "cnoma/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <utility>

#include "cnoma/errors.hpp"

namespace cnoma {

namespace {

constexpr std::size_t kBlockSize = 4096;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

unsigned resolve_workers(unsigned requested, std::size_t blocks) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(blocks, 1)));
}

// Evaluates `fill(state, index)` for every index in [0, count), one State per
// block of kBlockSize consecutive indices. The returned vector is in block
// order regardless of how blocks were scheduled across threads.
template <class State, class Fill>
std::vector<State> run_blocks(std::size_t count, unsigned workers, const State& init, Fill fill) {
  const std::size_t blocks = (count + kBlockSize - 1) / kBlockSize;
  std::vector<State> states(blocks, init);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        const std::size_t end = std::min(count, (b + 1) * kBlockSize);
        for (std::size_t i = b * kBlockSize; i < end; ++i) fill(states[b], i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };

  const unsigned n = resolve_workers(workers, blocks);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return states;
}

Estimate to_estimate(const Accumulator& acc) { return {acc.mean(), acc.standard_error()}; }

}  // namespace

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::Unordered: return "unordered";
    case Ordering::SwapOrdered: return "swap";
  }
  return "unknown";
}

void validate(const SamplerConfig& cfg) {
  if (cfg.sample_count < 1) throw InvalidArgument("SamplerConfig: sample_count must be >= 1");
}

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream)
    : state_(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

StreamRng::result_type StreamRng::operator()() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ChannelRealization sample_channel(const SamplerConfig& cfg, const SystemParams& p,
                                  std::uint64_t stream_index) {
  StreamRng rng(cfg.seed, stream_index);
  std::exponential_distribution<double> unit(1.0);
  ChannelRealization ch;
  ch.g1 = p.var1 * unit(rng);
  ch.g2 = p.var2 * unit(rng);
  ch.g3 = p.var3 * unit(rng);
  if (cfg.ordering == Ordering::SwapOrdered && ch.g1 <= ch.g2) std::swap(ch.g1, ch.g2);
  return ch;
}

void Accumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Accumulator::merge(const Accumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double n = static_cast<double>(n_ + other.n_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.n_) / n;
  m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / n;
  n_ += other.n_;
}

double Accumulator::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double Accumulator::standard_error() const {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

ErgodicReport estimate_ergodic(const SamplerConfig& cfg, const SystemParams& p,
                               const DesignPoint& d) {
  validate(cfg);
  validate(p);
  validate(d);

  struct State {
    Accumulator c1, c2, sum;
  };
  const auto blocks = run_blocks(cfg.sample_count, cfg.workers, State{}, [&](State& s, std::size_t i) {
    const RateTriple r = rates(p, sample_channel(cfg, p, i), d);
    s.c1.add(r.c1);
    s.c2.add(r.c2);
    s.sum.add(r.weighted_sum);
  });
  State total;
  for (const State& b : blocks) {
    total.c1.merge(b.c1);
    total.c2.merge(b.c2);
    total.sum.merge(b.sum);
  }

  ErgodicReport report;
  report.source = RateSource::MonteCarlo;
  report.c1_e = total.c1.mean();
  report.c2_e = total.c2.mean();
  report.c_sum_e = p.w1 * report.c1_e + p.w2 * report.c2_e;
  report.sample_count = total.c1.count();
  report.standard_errors =
      RateErrors{total.c1.standard_error(), total.c2.standard_error(), total.sum.standard_error()};
  return report;
}

OptimizedEstimate estimate_optimized(const SamplerConfig& cfg, const SystemParams& p,
                                     const SolverOptions& solver,
                                     const std::vector<DesignPoint>& baselines) {
  validate(cfg);
  validate(p);
  for (const DesignPoint& d : baselines) validate(d);
  if (cfg.ordering != Ordering::SwapOrdered) {
    throw InvalidArgument("estimate_optimized requires swap-ordered sampling (g1 > g2 per draw)");
  }

  struct State {
    Accumulator wsr, alpha, rho;
    std::vector<Accumulator> fixed;
    std::size_t skipped = 0;
  };
  State init;
  init.fixed.resize(baselines.size());

  const auto blocks = run_blocks(cfg.sample_count, cfg.workers, init, [&](State& s, std::size_t i) {
    const ChannelRealization ch = sample_channel(cfg, p, i);
    if (!(ch.g1 > ch.g2)) {
      ++s.skipped;
      return;
    }
    const OptimizationOutcome best = solve_1d(p, ch, solver);
    s.wsr.add(best.rates.weighted_sum);
    s.alpha.add(best.design.alpha);
    s.rho.add(best.design.rho);
    for (std::size_t k = 0; k < baselines.size(); ++k) {
      s.fixed[k].add(rates(p, ch, baselines[k]).weighted_sum);
    }
  });

  State total = init;
  for (const State& b : blocks) {
    total.wsr.merge(b.wsr);
    total.alpha.merge(b.alpha);
    total.rho.merge(b.rho);
    for (std::size_t k = 0; k < baselines.size(); ++k) total.fixed[k].merge(b.fixed[k]);
    total.skipped += b.skipped;
  }

  OptimizedEstimate out;
  out.weighted_sum = to_estimate(total.wsr);
  out.alpha_star = to_estimate(total.alpha);
  out.rho_star = to_estimate(total.rho);
  for (const Accumulator& acc : total.fixed) out.baseline_weighted_sum.push_back(to_estimate(acc));
  out.samples = total.wsr.count();
  out.skipped = total.skipped;
  return out;
}

}  // namespace cnoma
