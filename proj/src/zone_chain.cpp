#include "edca/zone_chain.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace edca {

namespace {

void
check_slot (const Scenario &s, int n)
{
  if (n < 1 || n > s.w_min ())
    {
      throw std::out_of_range ("slot " + std::to_string (n) + " outside [1, "
                               + std::to_string (s.w_min ()) + "]");
    }
}

void
check_tau (const Scenario &s, std::span<const double> tau)
{
  if (tau.size () != s.size ())
    {
      throw std::invalid_argument ("tau vector size does not match class count");
    }
  for (double t : tau)
    {
      if (!(t >= 0.0 && t < 1.0))
        {
          throw std::domain_error ("transmission probability outside [0, 1)");
        }
    }
}

} // namespace

std::vector<std::size_t>
contenders_at_slot (const Scenario &s, int n)
{
  check_slot (s, n);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      if (s.populated (i) && s.aifs_offset (i) <= n - 1)
        {
          out.push_back (i);
        }
    }
  return out;
}

std::size_t
zone_of_slot (const Scenario &s, int n)
{
  auto who = contenders_at_slot (s, n);
  if (who.empty ())
    {
      throw std::logic_error ("slot " + std::to_string (n) + " has no contenders");
    }
  std::size_t zone = who.front ();
  for (std::size_t i : who)
    {
      // classes are sorted by index, so a later tie is the higher priority
      if (s.aifs_offset (i) >= s.aifs_offset (zone))
        {
          zone = i;
        }
    }
  return zone;
}

double
p_idle_slot (const Scenario &s, int n, std::span<const double> tau)
{
  check_tau (s, tau);
  double idle = 1.0;
  for (std::size_t i : contenders_at_slot (s, n))
    {
      idle *= std::pow (1.0 - tau[i], s.cls (i).population);
    }
  return idle;
}

double
p_transmit_slot (const Scenario &s, int n, std::span<const double> tau)
{
  return 1.0 - p_idle_slot (s, n, tau);
}

std::vector<double>
geometric_occupancy (std::span<const double> p_transmit)
{
  if (p_transmit.empty ())
    {
      throw std::invalid_argument ("occupancy of an empty chain");
    }
  std::vector<double> u (p_transmit.size ());
  u[0] = 1.0;
  for (std::size_t n = 1; n < u.size (); ++n)
    {
      u[n] = u[n - 1] * (1.0 - p_transmit[n - 1]);
    }
  double total = std::accumulate (u.begin (), u.end (), 0.0);
  for (double &x : u)
    {
      x /= total;
    }
  return u;
}

SlotOccupancy
slot_occupancy (const Scenario &s, std::span<const double> tau)
{
  check_tau (s, tau);
  SlotOccupancy occ;
  occ.w_min = s.w_min ();
  std::vector<double> ptr (static_cast<std::size_t> (occ.w_min));
  occ.zone_of.resize (ptr.size ());
  for (int n = 1; n <= occ.w_min; ++n)
    {
      ptr[n - 1] = p_transmit_slot (s, n, tau);
      occ.zone_of[n - 1] = zone_of_slot (s, n);
    }
  occ.b = geometric_occupancy (ptr);
  return occ;
}

} // namespace edca
