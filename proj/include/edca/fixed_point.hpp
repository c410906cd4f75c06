#ifndef EDCA_FIXED_POINT_HPP
#define EDCA_FIXED_POINT_HPP

#include "edca/model.hpp"
#include "edca/zone_chain.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace edca {

struct SolverConfig
{
  double tolerance = 1e-10;  ///< on max |map(tau) - tau|
  int max_iterations = 10000;
  double damping = 0.5;      ///< tau <- damping * map(tau) + (1 - damping) * tau
};

/**
 * Converged per-class transmission and collision probabilities.
 *
 * Every field is evaluated at the stored `tau`; `residual` is
 * max_i |1 / (mean_backoff_i + 1) - tau_i| at that point.
 */
struct FixedPointSolution
{
  std::vector<double> tau;
  std::vector<double> p_c;
  SlotOccupancy occupancy;
  std::vector<double> mean_backoff;  ///< backoff slots per attempt
  double residual = 0.0;
  int iterations = 0;
};

class ConvergenceError : public std::runtime_error
{
public:
  ConvergenceError (const std::string &what, double residual, int iterations)
    : std::runtime_error (what), m_residual (residual), m_iterations (iterations)
  {
  }
  double residual () const { return m_residual; }
  int iterations () const { return m_iterations; }

private:
  double m_residual;
  int m_iterations;
};

/**
 * Collision probability of class `cls` given it transmits after observing
 * the medium idle for the AIFS of class `zone`:
 * 1 - prod_{d_k <= d_zone} (1 - tau_k)^{N_k} / (1 - tau_cls).
 */
double collision_prob_in_zone (const Scenario &s, std::size_t cls, std::size_t zone,
                               std::span<const double> tau);

/// Occupancy-weighted collision probability over the slots where `cls` contends.
double collision_prob_average (const Scenario &s, std::size_t cls, const SlotOccupancy &occ,
                               std::span<const double> tau);

/// Mean number of backoff slots drawn per transmission attempt.
double mean_backoff (const AccessCategoryClass &c, double p_c);

FixedPointSolution solve (const Scenario &s, const SolverConfig &cfg = {});

/// Evaluates occupancy, collision probabilities and backoff at a fixed tau.
FixedPointSolution evaluate_at (const Scenario &s, std::span<const double> tau);

} // namespace edca

#endif // EDCA_FIXED_POINT_HPP
