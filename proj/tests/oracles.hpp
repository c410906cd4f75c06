// Brute-force reference computations used only by the tests.

#ifndef EDCA_TESTS_ORACLES_HPP
#define EDCA_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

/// E[Y | Y >= 2] where Y counts transmitters among independent stations.
inline std::optional<double>
collision_size (const std::vector<double> &station_tau)
{
  const std::size_t m = station_tau.size ();
  double num = 0.0, den = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
    {
      double pr = 1.0;
      int y = 0;
      for (std::size_t k = 0; k < m; ++k)
        {
          bool tx = mask & (1u << k);
          pr *= tx ? station_tau[k] : 1.0 - station_tau[k];
          y += tx;
        }
      if (y >= 2)
        {
          num += y * pr;
          den += pr;
        }
    }
  if (den <= 0.0)
    {
      return std::nullopt;
    }
  return num / den;
}

/**
 * Stationary distribution of the explicit slot chain: state n moves to n+1
 * with probability 1 - p_tr[n] and back to state 1 otherwise; the last state
 * always returns to 1. Power iteration on the lazy chain (P + I) / 2.
 */
inline std::vector<double>
power_iteration (const std::vector<double> &p_tr)
{
  const std::size_t w = p_tr.size ();
  std::vector<std::vector<double>> P (w, std::vector<double> (w, 0.0));
  for (std::size_t n = 0; n < w; ++n)
    {
      double stay = (n + 1 < w) ? 1.0 - p_tr[n] : 0.0;
      if (n + 1 < w)
        {
          P[n][n + 1] += stay;
        }
      P[n][0] += 1.0 - stay;
    }
  std::vector<double> pi (w, 1.0 / w);
  for (int it = 0; it < 200000; ++it)
    {
      std::vector<double> next (w, 0.0);
      for (std::size_t a = 0; a < w; ++a)
        {
          next[a] += 0.5 * pi[a];
          for (std::size_t b = 0; b < w; ++b)
            {
              next[b] += 0.5 * pi[a] * P[a][b];
            }
        }
      double diff = 0.0;
      for (std::size_t a = 0; a < w; ++a)
        {
          diff = std::max (diff, std::abs (next[a] - pi[a]));
        }
      pi = next;
      if (diff < 1e-15)
        {
          break;
        }
    }
  return pi;
}

} // namespace oracle

#endif // EDCA_TESTS_ORACLES_HPP
