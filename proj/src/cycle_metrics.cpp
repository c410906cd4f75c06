#include "edca/cycle_metrics.hpp"

#include <cmath>
#include <string>

namespace edca {

double
PerformanceReport::total_throughput () const
{
  double total = 0.0;
  for (const auto &c : classes)
    {
      total += c.throughput;
    }
  return total;
}

double
p_success_slot (const Scenario &s, std::size_t i, int n, std::span<const double> tau)
{
  if (!s.populated (i) || n < s.aifs_offset (i) + 1)
    {
      return 0.0;
    }
  double idle = p_idle_slot (s, n, tau);
  return s.cls (i).population * tau[i] / (1.0 - tau[i]) * idle;
}

std::vector<double>
success_share (const Scenario &s, const SlotOccupancy &occ, std::span<const double> tau)
{
  const std::size_t k = s.size ();
  std::vector<double> share (k, 0.0);
  std::vector<double> ps (k);
  for (int n = 1; n <= occ.w_min; ++n)
    {
      double total = 0.0;
      for (std::size_t i = 0; i < k; ++i)
        {
          ps[i] = p_success_slot (s, i, n, tau);
          total += ps[i];
        }
      if (!(total > 0.0))
        {
          continue;
        }
      for (std::size_t i = 0; i < k; ++i)
        {
          if (ps[i] > 0.0)
            {
              share[i] += occ.at (n) * (ps[i] / s.cls (i).population) / total;
            }
        }
    }
  return share;
}

Matrix
success_count_matrix (const Scenario &s, std::span<const double> share)
{
  const std::size_t k = s.size ();
  Matrix st (k, std::vector<double> (k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    {
      if (!s.populated (i))
        {
          continue;
        }
      if (!(share[i] > 0.0))
        {
          throw ModelError ("AC" + std::to_string (s.cls (i).index)
                            + " has zero probability of success");
        }
      for (std::size_t j = 0; j < k; ++j)
        {
          st[j][i] = s.cls (j).population * share[j] / share[i];
        }
    }
  return st;
}

CollisionSize
collision_size (const Scenario &s, const SlotOccupancy &occ, std::span<const double> tau)
{
  CollisionSize out;
  out.per_slot.resize (static_cast<std::size_t> (occ.w_min));
  double weighted = 0.0;
  double weight = 0.0;
  for (int n = 1; n <= occ.w_min; ++n)
    {
      auto who = contenders_at_slot (s, n);
      int stations = 0;
      double attempts = 0.0;
      double single = 0.0;
      for (std::size_t i : who)
        {
          stations += s.cls (i).population;
          double ps = p_success_slot (s, i, n, tau);
          attempts += s.cls (i).population * tau[i];
          single += ps;
        }
      if (stations < 2)
        {
          continue;
        }
      double atLeastTwo = 1.0 - p_idle_slot (s, n, tau) - single;
      if (!(atLeastTwo > 0.0))
        {
          continue;
        }
      double size = (attempts - single) / atLeastTwo;
      out.per_slot[n - 1] = size;
      weighted += occ.at (n) * size;
      weight += occ.at (n);
    }
  if (weight > 0.0)
    {
      out.mean = weighted / weight;
    }
  return out;
}

CycleBreakdown
cycle_components (const Scenario &s, const FixedPointSolution &sol, const ExchangeDurations &dur)
{
  const std::size_t k = s.size ();
  CycleBreakdown cb;
  cb.success_share = success_share (s, sol.occupancy, sol.tau);
  cb.successes = success_count_matrix (s, cb.success_share);
  auto size = collision_size (s, sol.occupancy, sol.tau);
  cb.collision_size_slot = size.per_slot;
  cb.collision_size = size.mean;

  cb.mean_intervening.assign (k, 0.0);
  cb.collisions.assign (k, std::vector<double> (k, 0.0));
  cb.t_suc.assign (k, 0.0);
  cb.t_col.assign (k, 0.0);
  cb.t_idle.assign (k, 0.0);
  cb.t_cyc.assign (k, 0.0);
  const double slot = s.phy ().slot_us;

  for (std::size_t i = 0; i < k; ++i)
    {
      if (!s.populated (i))
        {
          continue;
        }
      cb.mean_intervening[i] = (1.0 - cb.success_share[i]) / cb.success_share[i];
      double collisionAirtime = 0.0;
      for (std::size_t j = 0; j < k; ++j)
        {
          double pc = sol.p_c[j];
          cb.collisions[j][i] = pc / (1.0 - pc) * cb.successes[j][i];
          cb.t_suc[i] += cb.successes[j][i] * dur.t_success[j];
          collisionAirtime += cb.collisions[j][i] * dur.t_collision[j];
        }
      if (cb.collision_size)
        {
          cb.t_col[i] = collisionAirtime / *cb.collision_size;
        }
      else if (collisionAirtime > 0.0)
        {
          throw ModelError ("collision airtime without any slot admitting a collision");
        }
      double attempts = cb.collisions[i][i] / s.cls (i).population + 1.0;
      cb.t_idle[i] = sol.mean_backoff[i] * attempts * slot;
      cb.t_cyc[i] = cb.t_suc[i] + cb.t_col[i] + cb.t_idle[i];
    }
  return cb;
}

PerformanceReport
performance (const Scenario &s, const CycleBreakdown &cb, const FixedPointSolution &sol,
             const ExchangeDurations &dur)
{
  PerformanceReport rep;
  rep.residual = sol.residual;
  rep.iterations = sol.iterations;
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      const auto &c = s.cls (i);
      ClassPerformance p;
      p.index = c.index;
      p.population = c.population;
      if (c.population > 0)
        {
          p.drop_prob = std::pow (sol.p_c[i], c.retry_limit);
          p.throughput = c.population * dur.t_payload[i] / cb.t_cyc[i];
          p.service_time_us = (1.0 - p.drop_prob) * cb.t_cyc[i];
          p.p_c = sol.p_c[i];
          p.tau = sol.tau[i];
          p.t_suc_us = cb.t_suc[i];
          p.t_col_us = cb.t_col[i];
          p.t_idle_us = cb.t_idle[i];
          p.t_cyc_us = cb.t_cyc[i];
        }
      rep.classes.push_back (p);
    }
  return rep;
}

Analysis
analyze (const Scenario &s, const SolverConfig &cfg)
{
  Analysis a;
  a.solution = solve (s, cfg);
  a.durations = exchange_durations (s);
  a.breakdown = cycle_components (s, a.solution, a.durations);
  a.report = performance (s, a.breakdown, a.solution, a.durations);
  return a;
}

} // namespace edca
