#include "edca/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace edca {

double
collision_prob_in_zone (const Scenario &s, std::size_t cls, std::size_t zone,
                        std::span<const double> tau)
{
  if (tau.size () != s.size ())
    {
      throw std::invalid_argument ("tau vector size does not match class count");
    }
  if (!s.populated (cls))
    {
      throw std::invalid_argument ("collision probability of an empty class");
    }
  int dz = s.aifs_offset (zone);
  if (dz < s.aifs_offset (cls))
    {
      throw std::invalid_argument ("zone AIFS shorter than the class AIFS");
    }
  if (!(tau[cls] < 1.0))
    {
      throw std::domain_error ("tau of the tagged class must be < 1");
    }
  double idle = 1.0;
  for (std::size_t k = 0; k < s.size (); ++k)
    {
      if (s.populated (k) && s.aifs_offset (k) <= dz)
        {
          idle *= std::pow (1.0 - tau[k], s.cls (k).population);
        }
    }
  return 1.0 - idle / (1.0 - tau[cls]);
}

double
collision_prob_average (const Scenario &s, std::size_t cls, const SlotOccupancy &occ,
                        std::span<const double> tau)
{
  double num = 0.0;
  double den = 0.0;
  for (int n = s.aifs_offset (cls) + 1; n <= occ.w_min; ++n)
    {
      double w = occ.at (n);
      num += w * collision_prob_in_zone (s, cls, occ.zone_of[n - 1], tau);
      den += w;
    }
  if (!(den > 0.0))
    {
      throw std::domain_error ("class never reaches a backoff slot");
    }
  return num / den;
}

double
mean_backoff (const AccessCategoryClass &c, double p_c)
{
  if (!(p_c >= 0.0 && p_c < 1.0))
    {
      throw std::domain_error ("collision probability outside [0, 1)");
    }
  double sum = 0.0;
  double reach = 1.0;  // p_c^(k-1)
  for (int k = 1; k <= c.retry_limit; ++k)
    {
      sum += reach * (1.0 - p_c) * c.window (k) / 2.0;
      reach *= p_c;
    }
  // reach == p_c^r here
  return sum / (1.0 - reach);
}

namespace {

// Per-slot collision probability only depends on the zone, so cache it per zone.
std::vector<double>
collision_probs (const Scenario &s, const SlotOccupancy &occ, std::span<const double> tau)
{
  std::vector<double> pc (s.size (), 0.0);
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      if (!s.populated (i))
        {
          continue;
        }
      std::vector<double> perZone (s.size (), -1.0);
      double num = 0.0;
      double den = 0.0;
      for (int n = s.aifs_offset (i) + 1; n <= occ.w_min; ++n)
        {
          std::size_t z = occ.zone_of[n - 1];
          if (perZone[z] < 0.0)
            {
              perZone[z] = collision_prob_in_zone (s, i, z, tau);
            }
          num += occ.at (n) * perZone[z];
          den += occ.at (n);
        }
      pc[i] = num / den;
    }
  return pc;
}

} // namespace

FixedPointSolution
evaluate_at (const Scenario &s, std::span<const double> tau)
{
  FixedPointSolution sol;
  sol.tau.assign (tau.begin (), tau.end ());
  sol.occupancy = slot_occupancy (s, tau);
  sol.p_c = collision_probs (s, sol.occupancy, tau);
  sol.mean_backoff.assign (s.size (), 0.0);
  sol.residual = 0.0;
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      if (!s.populated (i))
        {
          continue;
        }
      sol.mean_backoff[i] = mean_backoff (s.cls (i), sol.p_c[i]);
      double mapped = 1.0 / (sol.mean_backoff[i] + 1.0);
      sol.residual = std::max (sol.residual, std::abs (mapped - tau[i]));
    }
  return sol;
}

FixedPointSolution
solve (const Scenario &s, const SolverConfig &cfg)
{
  if (!(cfg.tolerance > 0.0))
    {
      throw std::invalid_argument ("solver tolerance must be positive");
    }
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0))
    {
      throw std::invalid_argument ("solver damping must be in (0, 1]");
    }
  if (cfg.max_iterations < 1)
    {
      throw std::invalid_argument ("solver needs at least one iteration");
    }

  std::vector<double> tau (s.size (), 0.0);
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      if (s.populated (i))
        {
          tau[i] = 2.0 / (s.cls (i).cw_min + 2.0);
        }
    }

  for (int it = 1; it <= cfg.max_iterations; ++it)
    {
      FixedPointSolution sol = evaluate_at (s, tau);
      sol.iterations = it;
      if (sol.residual <= cfg.tolerance)
        {
          return sol;
        }
      for (std::size_t i = 0; i < s.size (); ++i)
        {
          if (s.populated (i))
            {
              double mapped = 1.0 / (sol.mean_backoff[i] + 1.0);
              tau[i] = cfg.damping * mapped + (1.0 - cfg.damping) * tau[i];
            }
        }
      if (it == cfg.max_iterations)
        {
          std::ostringstream msg;
          msg << "fixed point did not converge in " << it << " iterations (residual "
              << sol.residual << ")";
          throw ConvergenceError (msg.str (), sol.residual, it);
        }
    }
  throw std::logic_error ("unreachable");
}

} // namespace edca
