#ifndef EDCA_MODEL_HPP
#define EDCA_MODEL_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace edca {

/// Raised when a scenario candidate violates a parameter constraint.
class ScenarioError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

enum class AccessMode
{
  basic,
  rts_cts
};

/**
 * Contention parameters of one access category together with the number of
 * stations running it. Each station carries exactly one AC.
 *
 * Backoff stages are numbered from 1. The window at stage k is
 * min(2^(k-1) (cw_min + 1) - 1, cw_max) with cw_max = 2^max_stage (cw_min + 1) - 1.
 */
struct AccessCategoryClass
{
  int index = 0;         ///< larger index = higher priority
  int aifsn = 2;
  int cw_min = 15;
  int max_stage = 0;     ///< number of window doublings
  int retry_limit = 7;   ///< transmission attempts before a packet is dropped
  int population = 0;
  int payload_bytes = 1000;

  int cw_max () const;
  int window (int stage) const;

  bool operator== (const AccessCategoryClass &) const = default;
};

/**
 * PHY timing constants. Durations are in microseconds and rates in
 * bits/us (numerically equal to Mbps). Frame durations follow the OFDM
 * model: preamble + symbol * ceil((service + 8 * bytes + tail) / bits_per_symbol).
 */
struct PhyProfile
{
  double slot_us = 9.0;
  double sifs_us = 10.0;
  double data_rate = 54.0;
  double basic_rate = 6.0;
  double preamble_us = 20.0;
  double symbol_us = 4.0;
  int service_bits = 16;
  int tail_bits = 6;
  int mac_header_bytes = 28;
  int ack_bytes = 14;
  int rts_bytes = 20;
  int cts_bytes = 14;
  double delta_us = 0.0;  ///< propagation delay

  /// 802.11g ERP-OFDM at 54/6 Mbps.
  static PhyProfile ofdm_80211g ();

  bool operator== (const PhyProfile &) const = default;
};

/// Unvalidated scenario description, as read from a config file.
struct ScenarioSpec
{
  std::vector<AccessCategoryClass> classes;
  PhyProfile phy;
  AccessMode access_mode = AccessMode::basic;

  bool operator== (const ScenarioSpec &) const = default;
};

/**
 * A validated scenario. Classes are sorted by ascending index; all
 * per-class vectors returned by the analysis are in this order.
 */
class Scenario
{
public:
  const std::vector<AccessCategoryClass> &classes () const { return m_spec.classes; }
  const AccessCategoryClass &cls (std::size_t pos) const { return m_spec.classes.at (pos); }
  std::size_t size () const { return m_spec.classes.size (); }
  const PhyProfile &phy () const { return m_spec.phy; }
  AccessMode access_mode () const { return m_spec.access_mode; }
  const ScenarioSpec &spec () const { return m_spec; }

  /// Extra AIFS slots of class `pos` beyond the smallest populated AIFSN.
  int aifs_offset (std::size_t pos) const { return m_offsets.at (pos); }
  const std::vector<int> &aifs_offsets () const { return m_offsets; }

  /// Truncation depth of the idle-slot chain: min cw_max over populated classes.
  int w_min () const { return m_wMin; }

  bool populated (std::size_t pos) const { return cls (pos).population > 0; }
  int total_population () const;

  /// Position of the class carrying AC index `index`; throws std::out_of_range.
  std::size_t position_of (int index) const;

  bool operator== (const Scenario &) const = default;

private:
  friend Scenario validate_scenario (const ScenarioSpec &raw);
  Scenario () = default;

  ScenarioSpec m_spec;
  std::vector<int> m_offsets;
  int m_wMin = 0;
};

Scenario validate_scenario (const ScenarioSpec &raw);

/// Airtime of a frame carrying `bytes` octets at `rate` bits/us.
double frame_duration (int bytes, double rate, const PhyProfile &phy);

/// AIFS = SIFS + AIFSN * slot.
double aifs_duration (int aifsn, const PhyProfile &phy);

struct ExchangeDurations
{
  std::vector<double> t_payload;    ///< data frame incl. MAC/PHY headers
  std::vector<double> t_success;    ///< includes the transmitter's AIFS
  std::vector<double> t_collision;  ///< includes the transmitter's AIFS
  std::vector<double> aifs;
  double t_ack = 0.0;
  double t_rts = 0.0;
  double t_cts = 0.0;
  double ack_timeout = 0.0;  ///< EIFS - AIFS = SIFS + ACK at basic rate
  double cts_timeout = 0.0;  ///< SIFS + CTS at basic rate
};

ExchangeDurations exchange_durations (const Scenario &s);

} // namespace edca

#endif // EDCA_MODEL_HPP
