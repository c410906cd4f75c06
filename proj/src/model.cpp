#include "edca/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace edca {

int
AccessCategoryClass::cw_max () const
{
  return (cw_min + 1) * (1 << max_stage) - 1;
}

int
AccessCategoryClass::window (int stage) const
{
  if (stage < 1)
    {
      throw std::out_of_range ("backoff stage starts at 1");
    }
  int doublings = std::min (stage - 1, max_stage);
  return (cw_min + 1) * (1 << doublings) - 1;
}

PhyProfile
PhyProfile::ofdm_80211g ()
{
  return PhyProfile{};
}

int
Scenario::total_population () const
{
  int total = 0;
  for (const auto &c : classes ())
    {
      total += c.population;
    }
  return total;
}

std::size_t
Scenario::position_of (int index) const
{
  for (std::size_t i = 0; i < size (); ++i)
    {
      if (cls (i).index == index)
        {
          return i;
        }
    }
  throw std::out_of_range ("no access category with index " + std::to_string (index));
}

namespace {

bool
is_window_form (int w)
{
  // 2^k - 1
  return w >= 1 && ((w + 1) & w) == 0;
}

void
check_phy (const PhyProfile &phy)
{
  if (!(phy.data_rate > 0.0) || !(phy.basic_rate > 0.0))
    {
      throw ScenarioError ("PHY rates must be positive");
    }
  if (!(phy.symbol_us > 0.0))
    {
      throw ScenarioError ("OFDM symbol duration must be positive");
    }
  for (double d : {phy.slot_us, phy.sifs_us, phy.preamble_us, phy.delta_us})
    {
      if (!(d >= 0.0) || !std::isfinite (d))
        {
          throw ScenarioError ("PHY durations must be finite and non-negative");
        }
    }
  if (phy.service_bits < 0 || phy.tail_bits < 0 || phy.mac_header_bytes < 0
      || phy.ack_bytes < 0 || phy.rts_bytes < 0 || phy.cts_bytes < 0)
    {
      throw ScenarioError ("PHY/MAC frame sizes must be non-negative");
    }
}

} // namespace

Scenario
validate_scenario (const ScenarioSpec &raw)
{
  check_phy (raw.phy);
  if (raw.classes.empty ())
    {
      throw ScenarioError ("scenario has no access categories");
    }

  Scenario s;
  s.m_spec = raw;
  auto &classes = s.m_spec.classes;
  std::stable_sort (classes.begin (), classes.end (),
                    [] (const auto &a, const auto &b) { return a.index < b.index; });

  std::set<int> seen;
  for (const auto &c : classes)
    {
      std::string who = "AC" + std::to_string (c.index) + ": ";
      if (!seen.insert (c.index).second)
        {
          throw ScenarioError (who + "duplicate access category index");
        }
      if (c.aifsn < 2)
        {
          throw ScenarioError (who + "aifsn must be >= 2");
        }
      if (!is_window_form (c.cw_min))
        {
          throw ScenarioError (who + "cw_min must be of the form 2^k - 1");
        }
      if (c.max_stage < 0 || c.max_stage > 16)
        {
          throw ScenarioError (who + "max_stage must be in [0, 16]");
        }
      if (c.cw_max () > (1 << 20))
        {
          throw ScenarioError (who + "cw_max too large");
        }
      if (c.retry_limit < 1)
        {
          throw ScenarioError (who + "retry_limit must be >= 1");
        }
      if (c.population < 0)
        {
          throw ScenarioError (who + "population must be >= 0");
        }
      if (c.payload_bytes < 0)
        {
          throw ScenarioError (who + "payload_bytes must be >= 0");
        }
    }
  for (std::size_t i = 1; i < classes.size (); ++i)
    {
      if (classes[i].aifsn > classes[i - 1].aifsn)
        {
          throw ScenarioError ("AC" + std::to_string (classes[i].index)
                               + ": aifsn must be non-increasing in priority index");
        }
    }

  int minAifsn = std::numeric_limits<int>::max ();
  int wMin = std::numeric_limits<int>::max ();
  for (const auto &c : classes)
    {
      if (c.population > 0)
        {
          minAifsn = std::min (minAifsn, c.aifsn);
          wMin = std::min (wMin, c.cw_max ());
        }
    }
  if (wMin == std::numeric_limits<int>::max ())
    {
      throw ScenarioError ("no access category has population > 0");
    }
  s.m_wMin = wMin;

  s.m_offsets.clear ();
  for (const auto &c : classes)
    {
      int d = std::max (0, c.aifsn - minAifsn);
      if (c.population > 0 && d + 1 > wMin)
        {
          throw ScenarioError ("AC" + std::to_string (c.index) + ": AIFS offset "
                               + std::to_string (d) + " leaves no backoff slot within W_min = "
                               + std::to_string (wMin));
        }
      s.m_offsets.push_back (d);
    }
  return s;
}

double
frame_duration (int bytes, double rate, const PhyProfile &phy)
{
  if (bytes < 0)
    {
      throw std::invalid_argument ("frame_duration: negative byte count");
    }
  double bitsPerSymbol = rate * phy.symbol_us;
  double bits = phy.service_bits + 8.0 * bytes + phy.tail_bits;
  return phy.preamble_us + phy.symbol_us * std::ceil (bits / bitsPerSymbol);
}

double
aifs_duration (int aifsn, const PhyProfile &phy)
{
  return phy.sifs_us + aifsn * phy.slot_us;
}

ExchangeDurations
exchange_durations (const Scenario &s)
{
  const auto &phy = s.phy ();
  ExchangeDurations d;
  d.t_ack = frame_duration (phy.ack_bytes, phy.basic_rate, phy);
  d.t_rts = frame_duration (phy.rts_bytes, phy.basic_rate, phy);
  d.t_cts = frame_duration (phy.cts_bytes, phy.basic_rate, phy);
  d.ack_timeout = phy.sifs_us + d.t_ack;
  d.cts_timeout = phy.sifs_us + d.t_cts;

  double longestPayload = 0.0;
  for (const auto &c : s.classes ())
    {
      double tp = frame_duration (c.payload_bytes + phy.mac_header_bytes, phy.data_rate, phy);
      d.t_payload.push_back (tp);
      d.aifs.push_back (aifs_duration (c.aifsn, phy));
      if (c.population > 0)
        {
          longestPayload = std::max (longestPayload, tp);
        }
    }

  const double delta = phy.delta_us;
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      double tp = d.t_payload[i];
      double aifs = d.aifs[i];
      if (s.access_mode () == AccessMode::basic)
        {
          d.t_success.push_back (tp + delta + phy.sifs_us + d.t_ack + delta + aifs);
          d.t_collision.push_back (std::max (tp, longestPayload) + d.ack_timeout + aifs);
        }
      else
        {
          d.t_success.push_back (d.t_rts + phy.sifs_us + d.t_cts + phy.sifs_us + tp + phy.sifs_us
                                 + d.t_ack + aifs + 4.0 * delta);
          d.t_collision.push_back (d.t_rts + d.cts_timeout + aifs);
        }
    }
  return d;
}

} // namespace edca
