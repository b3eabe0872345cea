/**
 * @file monte_carlo.hpp
 * @brief Trajectory simulation of birth-death chains with killing.
 *
 * Trajectory t of a run with seed s draws its uniforms from a SplitMix64
 * stream started at mix(s, t), so every trajectory is reproducible on its
 * own and the result does not depend on how trajectories are split across
 * threads.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

#include "rwpoly/chain.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/spectral_measure.hpp"

namespace rwpoly {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Stream for trajectory `index` of a run seeded with `seed`.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed ^ mix(index + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

namespace detail {

/// Cumulative thresholds p, p+q, p+q+r per state, in double.
struct StepTable {
  std::vector<double> up, down, stay;
};

template <class Real>
StepTable step_table(const ChainSpec<Real>& chain, std::size_t states) {
  const auto t = chain.table(std::min(states, chain.horizon()));
  StepTable s;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double p = static_cast<double>(t.p[k]);
    const double q = static_cast<double>(t.q[k]);
    const double r = static_cast<double>(t.r[k]);
    s.up.push_back(p);
    s.down.push_back(p + q);
    s.stay.push_back(p + q + r);
  }
  return s;
}

constexpr std::size_t killed = static_cast<std::size_t>(-1);

/// One step from `state`; returns `killed` on absorption.
inline std::size_t step(const StepTable& s, std::size_t state, SplitMix64& rng) {
  const double u = rng.uniform();
  if (u < s.up[state]) return state + 1;
  if (u < s.down[state]) return state - 1;
  if (u < s.stay[state]) return state;
  return killed;
}

/// Counts trajectories t in [0, samples) with pred(t) true, over `threads`.
template <class F>
std::size_t parallel_count(std::size_t samples, unsigned threads, F&& trial) {
  threads = std::max(1u, threads);
  std::vector<std::size_t> hits(threads, 0);
  auto work = [&](unsigned w) {
    std::size_t h = 0;
    for (std::size_t t = w; t < samples; t += threads) h += trial(t) ? 1 : 0;
    hits[w] = h;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  std::size_t total = 0;
  for (auto h : hits) total += h;
  return total;
}

inline MonteCarloEstimate binomial_estimate(std::size_t hits, std::size_t samples) {
  MonteCarloEstimate e;
  e.samples = samples;
  e.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  e.std_error = std::sqrt(e.estimate * (1 - e.estimate) / static_cast<double>(samples));
  return e;
}

}  // namespace detail

/// Estimate of P_ij(n); killed trajectories count as "not at j".
template <class Real>
MonteCarloEstimate monte_carlo_transition(const ChainSpec<Real>& chain, std::size_t i, std::size_t j, std::size_t n,
                                          std::size_t samples, std::uint64_t seed, unsigned threads = 1) {
  if (samples < 1000) throw Error(ErrorCode::invalid_argument, "monte_carlo_transition needs at least 1000 samples");
  const std::size_t states = i + n + 2;
  if (states > chain.horizon()) throw Error(ErrorCode::truncation_too_small, "chain too short for the requested horizon");
  const auto table = detail::step_table(chain, states);
  const std::size_t hits = detail::parallel_count(samples, threads, [&](std::size_t t) {
    auto rng = SplitMix64::stream(seed, t);
    std::size_t state = i;
    for (std::size_t k = 0; k < n; ++k) {
      state = detail::step(table, state, rng);
      if (state == detail::killed) return false;
    }
    return state == j;
  });
  return detail::binomial_estimate(hits, samples);
}

/// Estimate of the probability of absorption starting from j, observed
/// within `max_steps`. Trajectories reaching `escape_level` (if nonzero) are
/// counted as never absorbed.
template <class Real>
MonteCarloEstimate monte_carlo_absorption(const ChainSpec<Real>& chain, std::size_t j, std::size_t samples,
                                          std::uint64_t seed, std::size_t max_steps, std::size_t escape_level = 0,
                                          unsigned threads = 1) {
  if (samples < 1000) throw Error(ErrorCode::invalid_argument, "monte_carlo_absorption needs at least 1000 samples");
  const std::size_t states = escape_level > 0 ? escape_level + 1 : j + max_steps + 2;
  const auto table = detail::step_table(chain, states);
  const std::size_t hits = detail::parallel_count(samples, threads, [&](std::size_t t) {
    auto rng = SplitMix64::stream(seed, t);
    std::size_t state = j;
    for (std::size_t k = 0; k < max_steps; ++k) {
      state = detail::step(table, state, rng);
      if (state == detail::killed) return true;
      if (escape_level > 0 && state >= escape_level) return false;
    }
    return false;
  });
  return detail::binomial_estimate(hits, samples);
}

}  // namespace rwpoly
