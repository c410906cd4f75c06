#include "edca/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

namespace edca {

namespace {

std::int64_t
to_ns (double us)
{
  return static_cast<std::int64_t> (std::llround (us * 1000.0));
}

struct Station
{
  std::size_t cls;
  int offset;
  int counter = 0;
  int stage = 1;
  std::int64_t hol_ns = 0;
};

struct ClassTally
{
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t collisions = 0;
  std::uint64_t drops = 0;
  std::uint64_t boundaries = 0;
  std::int64_t service_ns = 0;
};

} // namespace

SimStats
simulate (const Scenario &s, const SimConfig &cfg, SimObserver *observer)
{
  if (!(cfg.duration_us > 0.0))
    {
      throw std::invalid_argument ("simulation duration must be positive");
    }
  double warmupUs = cfg.warmup_us < 0.0 ? 0.05 * cfg.duration_us : cfg.warmup_us;
  if (!(warmupUs < cfg.duration_us))
    {
      throw std::invalid_argument ("warm-up must be shorter than the simulation");
    }

  const auto dur = exchange_durations (s);
  const auto &phy = s.phy ();
  const std::int64_t slotNs = to_ns (phy.slot_us);
  const std::int64_t endNs = to_ns (cfg.duration_us);
  const std::int64_t warmupNs = to_ns (warmupUs);

  int minAifsn = std::numeric_limits<int>::max ();
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      if (s.populated (i))
        {
          minAifsn = std::min (minAifsn, s.cls (i).aifsn);
        }
    }
  const std::int64_t aifsMinNs = to_ns (aifs_duration (minAifsn, phy));

  // medium-busy part of each exchange, AIFS excluded
  std::vector<std::int64_t> successNs (s.size ());
  std::vector<std::int64_t> payloadNs (s.size ());
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      successNs[i] = to_ns (dur.t_success[i] - dur.aifs[i]);
      payloadNs[i] = to_ns (dur.t_payload[i]);
    }
  const std::int64_t ackTimeoutNs = to_ns (dur.ack_timeout);
  const std::int64_t rtsCollisionNs = to_ns (dur.t_rts + dur.cts_timeout);

  std::mt19937_64 rng (cfg.seed);
  auto draw = [&] (std::size_t station, const Station &st) {
    int w = s.cls (st.cls).window (st.stage);
    int v = std::uniform_int_distribution<int> (0, w) (rng);
    if (observer)
      {
        observer->on_backoff_draw (station, st.cls, st.stage, w, v);
      }
    return v;
  };

  std::vector<Station> stations;
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      for (int k = 0; k < s.cls (i).population; ++k)
        {
          stations.push_back (Station{i, s.aifs_offset (i)});
        }
    }
  for (std::size_t k = 0; k < stations.size (); ++k)
    {
      stations[k].counter = draw (k, stations[k]);
    }

  auto txBoundary = [&] (const Station &st) {
    int extra = (cfg.defer_zero_counter && st.counter == 0) ? 1 : 0;
    return st.offset + 1 + st.counter + extra;
  };

  std::vector<ClassTally> tally (s.size ());
  SimStats out;
  out.seed = cfg.seed;
  out.warmup_us = warmupUs;

  // Each period spans [boundary 1, next boundary 1): idle slots, the exchange,
  // then the AIFS_min deferral, which is charged to the exchange.
  std::int64_t firstBoundaryNs = 0;
  std::int64_t measuredFrom = -1;
  std::vector<std::size_t> tx;
  tx.reserve (stations.size ());

  while (true)
    {
      int next = std::numeric_limits<int>::max ();
      for (const auto &st : stations)
        {
          next = std::min (next, txBoundary (st));
        }
      const std::int64_t idleNs = (next - 1) * slotNs;
      const std::int64_t startNs = firstBoundaryNs + idleNs;
      if (startNs >= endNs)
        {
          break;
        }
      const bool measured = startNs >= warmupNs;
      if (measured && measuredFrom < 0)
        {
          measuredFrom = firstBoundaryNs;
        }

      tx.clear ();
      for (std::size_t k = 0; k < stations.size (); ++k)
        {
          auto &st = stations[k];
          int eligible = std::max (0, next - st.offset);
          if (measured)
            {
              tally[st.cls].boundaries += static_cast<std::uint64_t> (eligible);
            }
          if (txBoundary (st) == next)
            {
              tx.push_back (k);
            }
          else
            {
              st.counter -= std::min (st.counter, eligible);
            }
        }

      std::int64_t busyNs = 0;
      const bool success = tx.size () == 1;
      if (success)
        {
          busyNs = successNs[stations[tx[0]].cls];
        }
      else if (s.access_mode () == AccessMode::rts_cts)
        {
          busyNs = rtsCollisionNs;
        }
      else
        {
          std::int64_t longest = 0;
          for (std::size_t k : tx)
            {
              longest = std::max (longest, payloadNs[stations[k].cls]);
            }
          busyNs = longest + ackTimeoutNs;
        }
      const std::int64_t mediumFreeNs = startNs + busyNs;

      for (std::size_t k : tx)
        {
          auto &st = stations[k];
          auto &t = tally[st.cls];
          if (observer)
            {
              observer->on_transmit (k, st.cls, next);
            }
          if (measured)
            {
              ++t.attempts;
            }
          bool completed = false;
          if (success)
            {
              if (measured)
                {
                  ++t.successes;
                }
              completed = true;
            }
          else
            {
              if (measured)
                {
                  ++t.collisions;
                }
              if (st.stage >= s.cls (st.cls).retry_limit)
                {
                  if (measured)
                    {
                      ++t.drops;
                    }
                  completed = true;
                }
              else
                {
                  ++st.stage;
                }
            }
          if (completed)
            {
              if (measured)
                {
                  t.service_ns += mediumFreeNs - st.hol_ns;
                }
              st.hol_ns = mediumFreeNs;
              st.stage = 1;
            }
          st.counter = draw (k, st);
        }

      if (measured)
        {
          out.idle_ns += idleNs;
          (success ? out.success_ns : out.collision_ns) += busyNs + aifsMinNs;
        }
      firstBoundaryNs = mediumFreeNs + aifsMinNs;
      if (measured)
        {
          out.measured_ns = firstBoundaryNs - measuredFrom;
        }
    }

  for (std::size_t i = 0; i < s.size (); ++i)
    {
      const auto &t = tally[i];
      SimClassStats c;
      c.index = s.cls (i).index;
      c.population = s.cls (i).population;
      c.attempts = t.attempts;
      c.successes = t.successes;
      c.collisions = t.collisions;
      c.drops = t.drops;
      c.boundaries = t.boundaries;
      if (out.measured_ns > 0)
        {
          c.throughput = static_cast<double> (t.successes) * static_cast<double> (payloadNs[i])
                         / static_cast<double> (out.measured_ns);
        }
      std::uint64_t completions = t.successes + t.drops;
      if (completions > 0)
        {
          c.service_time_us = t.service_ns / 1000.0 / static_cast<double> (completions);
          c.drop_prob = static_cast<double> (t.drops) / static_cast<double> (completions);
        }
      if (t.attempts > 0)
        {
          c.p_c = static_cast<double> (t.collisions) / static_cast<double> (t.attempts);
        }
      if (t.boundaries > 0)
        {
          c.tau = static_cast<double> (t.attempts) / static_cast<double> (t.boundaries);
        }
      if (t.successes > 0)
        {
          double cycles = static_cast<double> (t.successes) / c.population;
          c.t_suc_us = out.success_ns / 1000.0 / cycles;
          c.t_col_us = out.collision_ns / 1000.0 / cycles;
          c.t_idle_us = out.idle_ns / 1000.0 / cycles;
          c.t_cyc_us = out.measured_ns / 1000.0 / cycles;
        }
      out.classes.push_back (c);
    }
  return out;
}

std::vector<double>
measure_conditional_collision (const Scenario &s, std::uint64_t seed, double duration_us)
{
  SimConfig cfg;
  cfg.seed = seed;
  cfg.duration_us = duration_us;
  auto stats = simulate (s, cfg);
  std::vector<double> out;
  for (const auto &c : stats.classes)
    {
      out.push_back (c.p_c);
    }
  return out;
}

std::vector<SimStats>
simulate_seeds (const Scenario &s, SimConfig cfg, int count, std::uint64_t first_seed)
{
  if (count < 1)
    {
      throw std::invalid_argument ("need at least one seed");
    }
  std::vector<SimStats> runs (static_cast<std::size_t> (count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] () {
    for (std::size_t k = next++; k < runs.size (); k = next++)
      {
        SimConfig c = cfg;
        c.seed = first_seed + k;
        runs[k] = simulate (s, c);
      }
  };
  unsigned n = std::max (1u, std::min (std::thread::hardware_concurrency (),
                                       static_cast<unsigned> (count)));
  std::vector<std::jthread> pool;
  for (unsigned k = 1; k < n; ++k)
    {
      pool.emplace_back (worker);
    }
  worker ();
  return runs;
}

Estimate
estimate (std::span<const double> samples)
{
  if (samples.empty ())
    {
      throw std::invalid_argument ("estimate of an empty sample");
    }
  Estimate e;
  double n = static_cast<double> (samples.size ());
  for (double x : samples)
    {
      e.mean += x;
    }
  e.mean /= n;
  if (samples.size () > 1)
    {
      double ss = 0.0;
      for (double x : samples)
        {
          ss += (x - e.mean) * (x - e.mean);
        }
      double sd = std::sqrt (ss / (n - 1.0));
      boost::math::students_t dist (n - 1.0);
      double t = boost::math::quantile (boost::math::complement (dist, 0.025));
      e.ci95 = t * sd / std::sqrt (n);
    }
  return e;
}

SimSummary
summarize (std::span<const SimStats> runs)
{
  if (runs.empty ())
    {
      throw std::invalid_argument ("summary of zero runs");
    }
  SimSummary out;
  for (const auto &r : runs)
    {
      out.seeds.push_back (r.seed);
    }
  const std::size_t k = runs.front ().classes.size ();
  for (std::size_t i = 0; i < k; ++i)
    {
      auto collect = [&] (double SimClassStats::*field) {
        std::vector<double> v;
        for (const auto &r : runs)
          {
            v.push_back (r.classes[i].*field);
          }
        return estimate (v);
      };
      SimClassSummary c;
      c.index = runs.front ().classes[i].index;
      c.population = runs.front ().classes[i].population;
      c.throughput = collect (&SimClassStats::throughput);
      c.service_time_us = collect (&SimClassStats::service_time_us);
      c.drop_prob = collect (&SimClassStats::drop_prob);
      c.p_c = collect (&SimClassStats::p_c);
      c.tau = collect (&SimClassStats::tau);
      c.t_suc_us = collect (&SimClassStats::t_suc_us);
      c.t_col_us = collect (&SimClassStats::t_col_us);
      c.t_idle_us = collect (&SimClassStats::t_idle_us);
      out.classes.push_back (c);
    }
  return out;
}

} // namespace edca
