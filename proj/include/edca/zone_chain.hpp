#ifndef EDCA_ZONE_CHAIN_HPP
#define EDCA_ZONE_CHAIN_HPP

#include "edca/model.hpp"

#include <span>
#include <vector>

namespace edca {

/**
 * Long-run occupancy of the backoff slots following a busy period.
 * Slot n (1-based) is stored at b[n - 1]. Slot n is the n-th slot
 * boundary after the smallest AIFS has elapsed.
 */
struct SlotOccupancy
{
  std::vector<double> b;
  int w_min = 0;
  std::vector<std::size_t> zone_of;  ///< zone label (class position) per slot

  double at (int n) const { return b.at (static_cast<std::size_t> (n - 1)); }
};

/// Populated classes whose AIFS has elapsed by slot n: {i : d_i <= n - 1}.
std::vector<std::size_t> contenders_at_slot (const Scenario &s, int n);

/**
 * Zone label of slot n: the contender with the largest AIFS offset, ties
 * resolved toward the higher priority index.
 */
std::size_t zone_of_slot (const Scenario &s, int n);

/// Probability that no contender of slot n transmits.
double p_idle_slot (const Scenario &s, int n, std::span<const double> tau);

/// Probability that at least one station transmits in slot n.
double p_transmit_slot (const Scenario &s, int n, std::span<const double> tau);

/**
 * Stationary distribution of the truncated slot chain given per-slot
 * transmission probabilities: u_1 = 1, u_{n+1} = u_n (1 - p_tr[n-1]), normalized.
 */
std::vector<double> geometric_occupancy (std::span<const double> p_transmit);

SlotOccupancy slot_occupancy (const Scenario &s, std::span<const double> tau);

} // namespace edca

#endif // EDCA_ZONE_CHAIN_HPP
