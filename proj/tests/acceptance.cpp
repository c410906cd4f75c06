// Acceptance suite: prints one PASS/FAIL line per criterion, exits nonzero on any failure.

#include "edca/cycle_metrics.hpp"
#include "edca/runner.hpp"
#include "edca/simulator.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace edca;
using testing::make_class;

namespace {

struct Verdict
{
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void expect (bool ok, const std::string &what)
  {
    if (!ok)
      {
        pass = false;
        if (failures.size () < 8)
          {
            failures.push_back (what);
          }
      }
  }
};

std::string
fmt (const char *f, double x)
{
  char buf[64];
  std::snprintf (buf, sizeof buf, f, x);
  return buf;
}

struct GridPoint
{
  std::string label;
  ScenarioSpec spec;
  std::vector<int> point;
};

std::vector<GridPoint>
grid (const std::string &preset)
{
  auto pc = load_preset (preset);
  std::vector<GridPoint> out;
  for (const auto &p : sweep_points (pc.run.sweep))
    {
      std::string label = preset;
      for (int v : p)
        {
          label += ":" + std::to_string (v);
        }
      out.push_back ({label, apply_point (pc.spec, pc.run.sweep, p), p});
    }
  return out;
}

SimSummary
run_sim (const Scenario &s, int seeds, double seconds)
{
  SimConfig cfg;
  cfg.duration_us = seconds * 1e6;
  auto runs = simulate_seeds (s, cfg, seeds, 1);
  return summarize (runs);
}

// Directional check tolerant of sampling noise: `hi` may fall below `lo`
// only by less than the combined confidence half-widths.
bool
not_below (const Estimate &hi, const Estimate &lo)
{
  return hi.mean + hi.ci95.value_or (0.0) + lo.ci95.value_or (0.0) >= lo.mean;
}

double
rel (double model, double sim)
{
  return std::abs (model - sim) / std::abs (sim);
}

// C1 -------------------------------------------------------------------------

Verdict
convergence (const std::map<std::string, std::vector<GridPoint>> &grids)
{
  Verdict v;
  double worstResidual = 0.0, worstSeconds = 0.0;
  int worstIter = 0, points = 0;
  for (const auto &[name, g] : grids)
    {
      for (const auto &gp : g)
        {
          auto s = validate_scenario (gp.spec);
          auto t0 = std::chrono::steady_clock::now ();
          try
            {
              auto sol = solve (s);
              double secs = std::chrono::duration<double> (std::chrono::steady_clock::now () - t0)
                              .count ();
              worstResidual = std::max (worstResidual, sol.residual);
              worstIter = std::max (worstIter, sol.iterations);
              worstSeconds = std::max (worstSeconds, secs);
              v.expect (sol.residual <= 1e-10, gp.label + " residual");
              v.expect (sol.iterations < 10000, gp.label + " iterations");
              v.expect (secs < 1.0, gp.label + " time");
            }
          catch (const ConvergenceError &e)
            {
              v.expect (false, gp.label + ": " + e.what ());
            }
          ++points;
        }
    }
  v.detail = std::to_string (points) + " points, max residual " + fmt ("%.2e", worstResidual)
             + ", max iterations " + std::to_string (worstIter) + ", max time "
             + fmt ("%.2e", worstSeconds) + " s";
  return v;
}

// C2 -------------------------------------------------------------------------

struct Fig3Run
{
  int n = 0;
  Analysis analysis;
  SimSummary sim;
};

Verdict
agreement (const std::vector<Fig3Run> &runs)
{
  Verdict v;
  double worstS = 0.0, worstMu = 0.0, worstDrop = 0.0;
  for (const auto &r : runs)
    {
      for (std::size_t i = 0; i < r.sim.classes.size (); ++i)
        {
          const auto &a = r.analysis.report.classes[i];
          const auto &m = r.sim.classes[i];
          std::string tag = "N=" + std::to_string (r.n) + " AC" + std::to_string (a.index);
          double eS = rel (a.throughput, m.throughput.mean);
          double eMu = rel (a.service_time_us, m.service_time_us.mean);
          double absDrop = std::abs (a.drop_prob - m.drop_prob.mean);
          double relDrop = m.drop_prob.mean > 0.0 ? absDrop / m.drop_prob.mean : 0.0;
          worstS = std::max (worstS, eS);
          worstMu = std::max (worstMu, eMu);
          worstDrop = std::max (worstDrop, std::min (relDrop, absDrop));
          v.expect (eS <= 0.07, tag + " throughput error " + fmt ("%.4f", eS));
          v.expect (eMu <= 0.10, tag + " service time error " + fmt ("%.4f", eMu));
          v.expect (relDrop <= 0.20 || absDrop <= 0.01, tag + " drop error " + fmt ("%.4f", absDrop));
        }
    }
  v.detail = "fig3 grid, 10 seeds x 100 s: max throughput err " + fmt ("%.4f", worstS)
             + ", max service time err " + fmt ("%.4f", worstMu)
             + ", max drop err (looser form) " + fmt ("%.4f", worstDrop);
  return v;
}

// C3 -------------------------------------------------------------------------

Verdict
identities (const std::map<std::string, std::vector<GridPoint>> &grids)
{
  Verdict v;
  double worstShare = 0.0, worstDiag = 0.0, worstOcc = 0.0, maxTotal = 0.0;
  for (const auto &[name, g] : grids)
    {
      for (const auto &gp : g)
        {
          for (auto mode : {AccessMode::rts_cts, AccessMode::basic})
            {
              auto spec = gp.spec;
              spec.access_mode = mode;
              auto s = validate_scenario (spec);
              auto a = analyze (s);
              double share = 0.0;
              for (std::size_t i = 0; i < s.size (); ++i)
                {
                  share += s.cls (i).population * a.breakdown.success_share[i];
                  double diag = std::abs (a.breakdown.successes[i][i] - s.cls (i).population);
                  worstDiag = std::max (worstDiag, diag);
                  v.expect (a.report.classes[i].throughput > 0.0, gp.label + " S_i > 0");
                }
              double occ = 0.0;
              for (double b : a.solution.occupancy.b)
                {
                  occ += b;
                }
              worstShare = std::max (worstShare, std::abs (share - 1.0));
              worstOcc = std::max (worstOcc, std::abs (occ - 1.0));
              maxTotal = std::max (maxTotal, a.report.total_throughput ());
              v.expect (std::abs (share - 1.0) <= 1e-12, gp.label + " share sum");
              v.expect (worstDiag <= 1e-9, gp.label + " ST_ii");
              v.expect (std::abs (occ - 1.0) <= 1e-12, gp.label + " occupancy sum");
              v.expect (a.report.total_throughput () <= 1.0, gp.label + " total throughput");
            }
        }
    }
  v.detail = "max |sum N*gamma - 1| " + fmt ("%.1e", worstShare) + ", max |ST_ii - N_i| "
             + fmt ("%.1e", worstDiag) + ", max |sum b' - 1| " + fmt ("%.1e", worstOcc)
             + ", max sum S " + fmt ("%.4f", maxTotal);
  return v;
}

// C4 -------------------------------------------------------------------------

Verdict
oracles ()
{
  Verdict v;
  std::mt19937_64 rng (2024);
  std::uniform_real_distribution<double> u (0.005, 0.95);
  const int cws[] = {1, 3, 7, 15, 31};
  double worstNc = 0.0, worstB = 0.0;
  int ncCases = 0, bCases = 0;

  for (int trial = 0; trial < 400; ++trial)
    {
      // up to three classes, total population <= 12
      int k = 1 + static_cast<int> (rng () % 3);
      ScenarioSpec spec;
      int total = 0;
      int aifsn = 2 + static_cast<int> (rng () % 4);
      for (int c = 0; c < k; ++c)
        {
          int n = static_cast<int> (rng () % 5);
          if (total + n > 12)
            {
              n = 12 - total;
            }
          total += n;
          int cw = cws[rng () % 5];
          int m = static_cast<int> (rng () % 3);
          spec.classes.push_back (make_class (c, aifsn, cw, m, 4, n));
          aifsn = std::max (2, aifsn - static_cast<int> (rng () % 3));
        }
      if (total == 0)
        {
          spec.classes.back ().population = 1;
        }
      Scenario s = [&] () -> Scenario {
        try
          {
            return validate_scenario (spec);
          }
        catch (const ScenarioError &)
          {
            // offsets too deep for the truncation; flatten them
            for (auto &c : spec.classes)
              {
                c.aifsn = 2;
              }
            return validate_scenario (spec);
          }
      } ();

      std::vector<double> tau;
      for (std::size_t i = 0; i < s.size (); ++i)
        {
          tau.push_back (s.populated (i) ? u (rng) : 0.0);
        }
      auto occ = slot_occupancy (s, tau);

      auto cs = collision_size (s, occ, tau);
      for (int n = 1; n <= s.w_min (); ++n)
        {
          std::vector<double> stations;
          for (std::size_t i : contenders_at_slot (s, n))
            {
              stations.insert (stations.end (), static_cast<std::size_t> (s.cls (i).population),
                               tau[i]);
            }
          auto brute = oracle::collision_size (stations);
          const auto &mine = cs.per_slot[static_cast<std::size_t> (n - 1)];
          v.expect (brute.has_value () == mine.has_value (), "N_c definedness");
          if (brute && mine)
            {
              worstNc = std::max (worstNc, std::abs (*brute - *mine));
              ++ncCases;
            }
        }

      if (s.w_min () <= 31)
        {
          std::vector<double> ptr;
          for (int n = 1; n <= s.w_min (); ++n)
            {
              ptr.push_back (p_transmit_slot (s, n, tau));
            }
          auto pi = oracle::power_iteration (ptr);
          for (std::size_t n = 0; n < pi.size (); ++n)
            {
              worstB = std::max (worstB, std::abs (pi[n] - occ.b[n]));
            }
          ++bCases;
        }
    }
  v.expect (worstNc <= 1e-10, "N_c vs enumeration " + fmt ("%.2e", worstNc));
  v.expect (worstB <= 1e-10, "b' vs power iteration " + fmt ("%.2e", worstB));
  v.expect (ncCases > 1000 && bCases > 100, "too few oracle cases");
  v.detail = std::to_string (ncCases) + " N_c slots max diff " + fmt ("%.1e", worstNc) + ", "
             + std::to_string (bCases) + " chains max diff " + fmt ("%.1e", worstB);
  return v;
}

// C5 -------------------------------------------------------------------------

Verdict
single_station ()
{
  Verdict v;
  double worstExact = 0.0, worstSim = 0.0;
  for (auto mode : {AccessMode::basic, AccessMode::rts_cts})
    {
      for (int cw : {7, 15, 31, 127})
        {
          auto s = validate_scenario (testing::single_class_spec (1, cw, 3, 7, mode));
          auto a = analyze (s);
          const auto &d = a.durations;
          const auto &p = a.report.classes[0];
          double slot = s.phy ().slot_us;
          double closed = d.t_payload[0] / (d.t_success[0] + cw / 2.0 * slot);
          double e = std::abs (p.throughput - closed) / closed;
          worstExact = std::max (worstExact, e);
          v.expect (e <= 1e-14, "closed-form throughput cw=" + std::to_string (cw));
          v.expect (p.drop_prob == 0.0, "drop probability");
          v.expect (p.service_time_us == p.t_cyc_us, "service time equals cycle");

          SimConfig cfg;
          cfg.seed = 7;
          cfg.duration_us = 10e6;
          auto st = simulate (s, cfg);
          double es = rel (p.throughput, st.classes[0].throughput);
          double em = rel (p.service_time_us, st.classes[0].service_time_us);
          worstSim = std::max ({worstSim, es, em});
          v.expect (es <= 0.02 && em <= 0.02, "simulation cw=" + std::to_string (cw));
          v.expect (st.classes[0].collisions == 0 && st.classes[0].drops == 0, "sim collisions");
        }
    }
  v.detail = "analytic max rel diff " + fmt ("%.1e", worstExact) + ", sim (10 s) max rel err "
             + fmt ("%.4f", worstSim);
  return v;
}

// C6 -------------------------------------------------------------------------

Verdict
dcf_reduction ()
{
  Verdict v;
  double worst = 0.0;
  for (auto mode : {AccessMode::basic, AccessMode::rts_cts})
    {
      for (auto [aifsn, cw] : std::vector<std::pair<int, int>>{{2, 15}, {3, 31}, {7, 63}})
        {
          for (auto [n1, n2] : std::vector<std::pair<int, int>>{{1, 1}, {5, 5}, {3, 9}, {10, 20}})
            {
              ScenarioSpec two;
              two.access_mode = mode;
              two.classes = {make_class (1, aifsn, cw, 3, 7, n1),
                             make_class (3, aifsn, cw, 3, 7, n2)};
              ScenarioSpec one;
              one.access_mode = mode;
              one.classes = {make_class (0, aifsn, cw, 3, 7, n1 + n2)};
              auto a2 = analyze (validate_scenario (two)).report.classes;
              auto a1 = analyze (validate_scenario (one)).report.classes;
              double s1 = a2[0].throughput / n1;
              double s2 = a2[1].throughput / n2;
              double merged = a1[0].throughput / (n1 + n2);
              double d = std::max (std::abs (s1 - s2), std::abs (s1 - merged));
              worst = std::max (worst, d);
              v.expect (d <= 1e-9, "N=(" + std::to_string (n1) + "," + std::to_string (n2)
                                     + ") diff " + fmt ("%.2e", d));
            }
        }
    }
  v.detail = "24 cases, max per-station throughput diff " + fmt ("%.1e", worst);
  return v;
}

// C7 -------------------------------------------------------------------------

bool
favours_ac3 (const ScenarioSpec &spec)
{
  const auto &ac1 = spec.classes[0];
  const auto &ac3 = spec.classes[1];
  bool weak = ac3.aifsn <= ac1.aifsn && ac3.cw_min <= ac1.cw_min;
  bool strict = ac3.aifsn < ac1.aifsn || ac3.cw_min < ac1.cw_min;
  return weak && strict;
}

Verdict
trends (const std::vector<Fig3Run> &fig3, const std::map<std::string, std::vector<GridPoint>> &grids,
        int seeds, double seconds)
{
  Verdict v;
  int analyticChecks = 0, simChecks = 0;

  // fig3: total throughput non-increasing and p_c non-decreasing in N
  for (std::size_t k = 1; k < fig3.size (); ++k)
    {
      const auto &prev = fig3[k - 1];
      const auto &cur = fig3[k];
      std::string tag = "fig3 N=" + std::to_string (cur.n);
      v.expect (cur.analysis.report.total_throughput ()
                  <= prev.analysis.report.total_throughput () + 1e-12,
                tag + " analytic total throughput");
      ++analyticChecks;
      double simPrev = 0.0, simCur = 0.0, ciPrev = 0.0, ciCur = 0.0;
      for (std::size_t i = 0; i < cur.sim.classes.size (); ++i)
        {
          v.expect (cur.analysis.report.classes[i].p_c
                      >= prev.analysis.report.classes[i].p_c - 1e-12,
                    tag + " analytic p_c");
          v.expect (not_below (cur.sim.classes[i].p_c, prev.sim.classes[i].p_c),
                    tag + " simulated p_c");
          ++analyticChecks;
          ++simChecks;
          simPrev += prev.sim.classes[i].throughput.mean;
          simCur += cur.sim.classes[i].throughput.mean;
          ciPrev += prev.sim.classes[i].throughput.ci95.value_or (0.0);
          ciCur += cur.sim.classes[i].throughput.ci95.value_or (0.0);
        }
      v.expect (simCur <= simPrev + ciPrev + ciCur, tag + " simulated total throughput");
      ++simChecks;
    }

  // fig3 priority: AC3 per-station throughput above AC1
  for (const auto &r : fig3)
    {
      const auto &a = r.analysis.report.classes;
      v.expect (a[1].throughput / a[1].population >= a[0].throughput / a[0].population,
                "fig3 analytic priority");
      Estimate s1 = r.sim.classes[0].throughput, s3 = r.sim.classes[1].throughput;
      s1.mean /= r.n;
      s3.mean /= r.n;
      s1.ci95 = s1.ci95.value_or (0.0) / r.n;
      s3.ci95 = s3.ci95.value_or (0.0) / r.n;
      v.expect (not_below (s3, s1), "fig3 simulated priority");
      ++analyticChecks;
      ++simChecks;
    }

  // fig5 and fig6 grids: priority wherever AC3's parameters dominate;
  // on fig5 AC1 throughput non-increasing in AIFSN1 and CW1
  for (const std::string name : {"paper-fig5", "paper-fig6"})
    {
      const auto &g = grids.at (name);
      std::map<std::vector<int>, std::pair<double, Estimate>> ac1;
      for (const auto &gp : g)
        {
          auto s = validate_scenario (gp.spec);
          auto a = analyze (s).report.classes;
          auto sim = run_sim (s, seeds, seconds);
          if (favours_ac3 (gp.spec))
            {
              v.expect (a[1].throughput / a[1].population >= a[0].throughput / a[0].population,
                        gp.label + " analytic priority");
              Estimate s1 = sim.classes[0].throughput, s3 = sim.classes[1].throughput;
              double n1 = a[0].population, n3 = a[1].population;
              s1.mean /= n1;
              s1.ci95 = s1.ci95.value_or (0.0) / n1;
              s3.mean /= n3;
              s3.ci95 = s3.ci95.value_or (0.0) / n3;
              v.expect (not_below (s3, s1), gp.label + " simulated priority");
              ++analyticChecks;
              ++simChecks;
            }
          ac1[gp.point] = {a[0].throughput, sim.classes[0].throughput};
        }
      if (name != "paper-fig5")
        {
          continue;
        }
      for (const auto &[pt, val] : ac1)
        {
          for (int axis = 0; axis < 2; ++axis)
            {
              // neighbour one step up along the axis
              auto it = ac1.upper_bound (pt);
              for (; it != ac1.end (); ++it)
                {
                  const auto &q = it->first;
                  if (q[1 - axis] == pt[1 - axis] && q[axis] > pt[axis])
                    {
                      break;
                    }
                }
              if (it == ac1.end ())
                {
                  continue;
                }
              std::string tag = "fig5 " + std::to_string (pt[0]) + "/" + std::to_string (pt[1])
                                + (axis ? " cw step" : " aifsn step");
              v.expect (it->second.first <= val.first + 1e-12, tag + " analytic");
              v.expect (not_below (val.second, it->second.second), tag + " simulated");
              ++analyticChecks;
              ++simChecks;
            }
        }
    }
  v.detail = std::to_string (analyticChecks) + " analytic and " + std::to_string (simChecks)
             + " simulated directional checks (fig5/fig6 sims " + std::to_string (seeds)
             + " seeds x " + fmt ("%g", seconds) + " s)";
  return v;
}

// C8 -------------------------------------------------------------------------

Verdict
determinism ()
{
  Verdict v;
  int runs = 0;
  for (const std::string name : {"paper-fig3", "paper-fig5", "paper-fig6"})
    {
      auto pc = load_preset (name);
      SimConfig cfg;
      cfg.seed = 12345;
      cfg.duration_us = 5e6;
      auto a = simulate (pc.scenario, cfg);
      auto b = simulate (pc.scenario, cfg);
      v.expect (a == b, name + " simulate");
      auto par = simulate_seeds (pc.scenario, cfg, 3, 12345);
      v.expect (par[0] == a, name + " pooled simulate");

      RunSpec run = pc.run;
      run.mode = RunMode::sweep;
      std::ostringstream x, y;
      execute (run, pc.spec).table.write (x);
      execute (run, pc.spec).table.write (y);
      v.expect (x.str () == y.str () && !x.str ().empty (), name + " analyze CSV");
      runs += 2;
    }
  v.detail = std::to_string (runs) + " repeated simulate runs bit-identical; sweep CSVs identical";
  return v;
}

void
report (int id, const std::string &name, const Verdict &v, bool &all)
{
  std::printf ("[%s] C%d %s: %s\n", v.pass ? "PASS" : "FAIL", id, name.c_str (), v.detail.c_str ());
  for (const auto &f : v.failures)
    {
      std::printf ("       - %s\n", f.c_str ());
    }
  std::fflush (stdout);
  all = all && v.pass;
}

} // namespace

int
main ()
{
  std::map<std::string, std::vector<GridPoint>> grids;
  for (const auto &name : preset_names ())
    {
      grids[name] = grid (name);
    }

  bool all = true;
  report (1, "convergence", convergence (grids), all);

  std::vector<Fig3Run> fig3;
  for (const auto &gp : grids.at ("paper-fig3"))
    {
      auto s = validate_scenario (gp.spec);
      fig3.push_back ({gp.point[0], analyze (s), run_sim (s, 10, 100.0)});
    }
  report (2, "analyzer vs simulator", agreement (fig3), all);
  report (3, "identities", identities (grids), all);
  report (4, "oracle equivalence", oracles (), all);
  report (5, "single station", single_station (), all);
  report (6, "DCF reduction", dcf_reduction (), all);
  report (7, "trends", trends (fig3, grids, 5, 30.0), all);
  report (8, "determinism", determinism (), all);

  std::printf ("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
