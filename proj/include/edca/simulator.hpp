#ifndef EDCA_SIMULATOR_HPP
#define EDCA_SIMULATOR_HPP

#include "edca/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace edca {

struct SimConfig
{
  std::uint64_t seed = 1;
  double duration_us = 100e6;
  /// Statistics before this instant are discarded; negative selects 5% of duration.
  double warmup_us = -1.0;
  /**
   * When set, a station whose counter is already zero when its AIFS
   * completes waits one more slot boundary before transmitting. Off by
   * default: it transmits at the first boundary after AIFS.
   */
  bool defer_zero_counter = false;
};

struct SimClassStats
{
  int index = 0;
  int population = 0;
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t collisions = 0;  ///< attempts that ended in a collision
  std::uint64_t drops = 0;
  std::uint64_t boundaries = 0;  ///< slot boundaries at which a station of the class was eligible
  double throughput = 0.0;
  double service_time_us = 0.0;
  double drop_prob = 0.0;
  double p_c = 0.0;
  double tau = 0.0;              ///< attempts per eligible boundary
  // per-station cycle (time between two successes of one station) split by airtime kind
  double t_suc_us = 0.0;
  double t_col_us = 0.0;
  double t_idle_us = 0.0;
  double t_cyc_us = 0.0;

  bool operator== (const SimClassStats &) const = default;
};

struct SimStats
{
  std::uint64_t seed = 0;
  double warmup_us = 0.0;
  std::int64_t measured_ns = 0;
  std::int64_t idle_ns = 0;
  std::int64_t success_ns = 0;
  std::int64_t collision_ns = 0;
  std::vector<SimClassStats> classes;

  double measured_us () const { return measured_ns / 1000.0; }

  bool operator== (const SimStats &) const = default;
};

/// Instrumentation hooks; all default to no-ops.
class SimObserver
{
public:
  virtual ~SimObserver () = default;
  virtual void on_backoff_draw (std::size_t /*station*/, std::size_t /*cls*/, int /*stage*/,
                                int /*window*/, int /*value*/)
  {
  }
  /// `slot` counts boundaries after the smallest AIFS of the preceding busy period.
  virtual void on_transmit (std::size_t /*station*/, std::size_t /*cls*/, int /*slot*/) {}
};

/**
 * Saturated single-AC-per-station EDCA on an error-free channel. A slot
 * boundary n after a busy period lies at AIFS_min + (n - 1) slots; a station
 * of class i is eligible at boundaries n >= d_i + 1. At each eligible
 * boundary a station transmits if its counter is zero and decrements it
 * otherwise. One transmitter is a success, two or more a collision.
 */
SimStats simulate (const Scenario &s, const SimConfig &cfg, SimObserver *observer = nullptr);

/// Fraction of transmission attempts per class that ended in a collision.
std::vector<double> measure_conditional_collision (const Scenario &s, std::uint64_t seed,
                                                   double duration_us);

/// Runs seeds first_seed .. first_seed + count - 1, concurrently, in seed order.
std::vector<SimStats> simulate_seeds (const Scenario &s, SimConfig cfg, int count,
                                      std::uint64_t first_seed = 1);

struct Estimate
{
  double mean = 0.0;
  std::optional<double> ci95;  ///< half-width, Student t; empty for one sample

  double lower () const { return mean - ci95.value_or (0.0); }
  double upper () const { return mean + ci95.value_or (0.0); }
};

Estimate estimate (std::span<const double> samples);

struct SimClassSummary
{
  int index = 0;
  int population = 0;
  Estimate throughput;
  Estimate service_time_us;
  Estimate drop_prob;
  Estimate p_c;
  Estimate tau;
  Estimate t_suc_us;
  Estimate t_col_us;
  Estimate t_idle_us;
};

struct SimSummary
{
  std::vector<std::uint64_t> seeds;
  std::vector<SimClassSummary> classes;
};

SimSummary summarize (std::span<const SimStats> runs);

} // namespace edca

#endif // EDCA_SIMULATOR_HPP
