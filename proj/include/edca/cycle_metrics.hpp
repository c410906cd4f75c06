#ifndef EDCA_CYCLE_METRICS_HPP
#define EDCA_CYCLE_METRICS_HPP

#include "edca/fixed_point.hpp"
#include "edca/model.hpp"
#include "edca/zone_chain.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace edca {

/// Raised when the cycle decomposition is undefined (e.g. a populated class never succeeds).
class ModelError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

using Matrix = std::vector<std::vector<double>>;

/**
 * Per-class decomposition of the mean time between two successful
 * transmissions of a tagged station. Matrices are indexed [j][i]: the
 * quantity for stations of class j during a cycle of class i.
 */
struct CycleBreakdown
{
  std::vector<double> success_share;      ///< P(success belongs to a given class-i station)
  std::vector<double> mean_intervening;   ///< mean successes between two class-i successes
  Matrix successes;                       ///< expected successes of class j per class-i cycle
  Matrix collisions;                      ///< expected collisions of class j per class-i cycle
  std::vector<double> t_suc;
  std::vector<double> t_col;
  std::vector<double> t_idle;
  std::vector<double> t_cyc;
  std::vector<std::optional<double>> collision_size_slot;
  std::optional<double> collision_size;   ///< empty when no slot admits a collision
};

struct ClassPerformance
{
  int index = 0;
  int population = 0;
  double throughput = 0.0;       ///< normalized, fraction of channel time
  double service_time_us = 0.0;
  double drop_prob = 0.0;
  double p_c = 0.0;
  double tau = 0.0;
  double t_suc_us = 0.0;
  double t_col_us = 0.0;
  double t_idle_us = 0.0;
  double t_cyc_us = 0.0;
};

struct PerformanceReport
{
  std::vector<ClassPerformance> classes;
  double residual = 0.0;
  int iterations = 0;

  double total_throughput () const;
};

/// Probability that exactly one station transmits in slot n and it belongs to class i.
double p_success_slot (const Scenario &s, std::size_t i, int n, std::span<const double> tau);

std::vector<double> success_share (const Scenario &s, const SlotOccupancy &occ,
                                   std::span<const double> tau);

/// successes[j][i] = N_j share_j / share_i.
Matrix success_count_matrix (const Scenario &s, std::span<const double> share);

struct CollisionSize
{
  std::vector<std::optional<double>> per_slot;  ///< E[Y_n | Y_n >= 2]
  std::optional<double> mean;                   ///< occupancy-weighted over defined slots
};

CollisionSize collision_size (const Scenario &s, const SlotOccupancy &occ,
                              std::span<const double> tau);

CycleBreakdown cycle_components (const Scenario &s, const FixedPointSolution &sol,
                                 const ExchangeDurations &dur);

PerformanceReport performance (const Scenario &s, const CycleBreakdown &cb,
                               const FixedPointSolution &sol, const ExchangeDurations &dur);

struct Analysis
{
  FixedPointSolution solution;
  ExchangeDurations durations;
  CycleBreakdown breakdown;
  PerformanceReport report;
};

/// Full pipeline: solve, decompose the cycle, derive the measures.
Analysis analyze (const Scenario &s, const SolverConfig &cfg = {});

} // namespace edca

#endif // EDCA_CYCLE_METRICS_HPP
