#include "edca/runner.hpp"

#include "edca/cycle_metrics.hpp"
#include "edca/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

namespace edca {

const std::vector<std::string> &
base_columns ()
{
  static const std::vector<std::string> cols = {
    "scenario_id", "mode",     "class_index", "N",         "aifsn",     "cw_min",
    "throughput",  "service_time_us", "drop_prob", "p_c",  "tau",       "t_suc_us",
    "t_col_us",    "t_idle_us", "seed",       "residual",  "iterations"};
  return cols;
}

void
Table::write (std::ostream &os) const
{
  auto line = [&] (const std::vector<std::string> &cells) {
    for (std::size_t k = 0; k < cells.size (); ++k)
      {
        os << (k ? "," : "") << cells[k];
      }
    os << '\n';
  };
  line (header);
  for (const auto &r : rows)
    {
      line (r);
    }
  for (const auto &n : notes)
    {
      os << "# " << n << '\n';
    }
}

namespace {

class Formatter
{
public:
  explicit Formatter (int precision) : m_precision (precision) {}

  std::string operator() (double x) const
  {
    if (!std::isfinite (x))
      {
        return "";
      }
    char buf[64];
    std::snprintf (buf, sizeof buf, "%.*g", m_precision, x);
    return buf;
  }
  std::string operator() (const std::optional<double> &x) const
  {
    return x ? (*this) (*x) : std::string ();
  }

private:
  int m_precision;
};

std::string
seed_label (const SimControls &sim)
{
  if (sim.seeds == 1)
    {
      return std::to_string (sim.first_seed);
    }
  return std::to_string (sim.first_seed) + "-"
         + std::to_string (sim.first_seed + static_cast<std::uint64_t> (sim.seeds) - 1);
}

std::vector<std::string>
class_prefix (const std::string &id, const std::string &mode, const AccessCategoryClass &c)
{
  return {id, mode, std::to_string (c.index), std::to_string (c.population),
          std::to_string (c.aifsn), std::to_string (c.cw_min)};
}

std::vector<std::string>
analytic_cells (const std::string &id, const std::string &mode, const Scenario &s,
                const Analysis &a, std::size_t i, const std::string &seed, const Formatter &f)
{
  const auto &p = a.report.classes[i];
  auto row = class_prefix (id, mode, s.cls (i));
  for (double v : {p.throughput, p.service_time_us, p.drop_prob, p.p_c, p.tau, p.t_suc_us,
                   p.t_col_us, p.t_idle_us})
    {
      row.push_back (f (v));
    }
  row.push_back (seed);
  row.push_back (f (a.report.residual));
  row.push_back (std::to_string (a.report.iterations));
  return row;
}

std::vector<std::string>
simulate_header ()
{
  auto h = base_columns ();
  for (const char *c : {"throughput_ci95", "service_time_ci95", "drop_prob_ci95", "p_c_ci95"})
    {
      h.push_back (c);
    }
  return h;
}

std::vector<std::string>
compare_header ()
{
  auto h = base_columns ();
  for (const char *c :
       {"sim_throughput", "sim_throughput_ci95", "sim_service_time_us", "sim_service_time_ci95",
        "sim_drop_prob", "sim_drop_prob_ci95", "sim_p_c", "rel_err_throughput",
        "rel_err_service_time", "rel_err_drop_prob", "abs_err_drop_prob", "rel_err_p_c"})
    {
      h.push_back (c);
    }
  return h;
}

std::optional<double>
relative_error (double analytic, double simulated)
{
  if (simulated == 0.0)
    {
      return analytic == 0.0 ? std::optional<double> (0.0) : std::nullopt;
    }
  return (analytic - simulated) / simulated;
}

std::vector<SimStats>
run_seeds (const Scenario &s, const SimControls &sim)
{
  SimConfig cfg;
  cfg.duration_us = sim.duration_s * 1e6;
  cfg.warmup_us = sim.warmup_s * 1e6;
  return simulate_seeds (s, cfg, sim.seeds, sim.first_seed);
}

void
simulate_rows (Table &t, const std::string &id, const std::string &mode, const Scenario &s,
               const SimControls &sim, const Formatter &f)
{
  auto runs = run_seeds (s, sim);
  for (const auto &r : runs)
    {
      for (std::size_t i = 0; i < s.size (); ++i)
        {
          const auto &c = r.classes[i];
          auto row = class_prefix (id, mode, s.cls (i));
          for (double v : {c.throughput, c.service_time_us, c.drop_prob, c.p_c, c.tau, c.t_suc_us,
                           c.t_col_us, c.t_idle_us})
            {
              row.push_back (f (v));
            }
          row.push_back (std::to_string (r.seed));
          row.insert (row.end (), {"", "", "", "", "", ""});
          t.rows.push_back (std::move (row));
        }
    }
  auto sum = summarize (runs);
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      const auto &c = sum.classes[i];
      auto row = class_prefix (id, mode, s.cls (i));
      for (const auto *e : {&c.throughput, &c.service_time_us, &c.drop_prob, &c.p_c, &c.tau,
                            &c.t_suc_us, &c.t_col_us, &c.t_idle_us})
        {
          row.push_back (f (e->mean));
        }
      row.push_back (seed_label (sim));
      row.insert (row.end (), {"", ""});
      for (const auto *e : {&c.throughput, &c.service_time_us, &c.drop_prob, &c.p_c})
        {
          row.push_back (f (e->ci95));
        }
      t.rows.push_back (std::move (row));
    }
}

void
compare_rows (Table &t, const std::string &id, const std::string &mode, const Scenario &s,
              const SolverConfig &solver, const SimControls &sim, const Formatter &f)
{
  auto a = analyze (s, solver);
  auto runs = run_seeds (s, sim);
  auto sum = summarize (runs);
  for (std::size_t i = 0; i < s.size (); ++i)
    {
      const auto &p = a.report.classes[i];
      const auto &c = sum.classes[i];
      auto row = analytic_cells (id, mode, s, a, i, seed_label (sim), f);
      row.push_back (f (c.throughput.mean));
      row.push_back (f (c.throughput.ci95));
      row.push_back (f (c.service_time_us.mean));
      row.push_back (f (c.service_time_us.ci95));
      row.push_back (f (c.drop_prob.mean));
      row.push_back (f (c.drop_prob.ci95));
      row.push_back (f (c.p_c.mean));
      row.push_back (f (relative_error (p.throughput, c.throughput.mean)));
      row.push_back (f (relative_error (p.service_time_us, c.service_time_us.mean)));
      row.push_back (f (relative_error (p.drop_prob, c.drop_prob.mean)));
      row.push_back (f (std::abs (p.drop_prob - c.drop_prob.mean)));
      row.push_back (f (relative_error (p.p_c, c.p_c.mean)));
      t.rows.push_back (std::move (row));
    }
}

void
engine_rows (Table &t, RunMode engine, const std::string &id, const std::string &mode,
             const Scenario &s, const RunSpec &run, const Formatter &f)
{
  switch (engine)
    {
    case RunMode::analyze: {
      auto a = analyze (s, run.solver);
      for (std::size_t i = 0; i < s.size (); ++i)
        {
          t.rows.push_back (analytic_cells (id, mode, s, a, i, "analytic", f));
        }
      break;
    }
    case RunMode::simulate:
      simulate_rows (t, id, mode, s, run.sim, f);
      break;
    case RunMode::compare:
      compare_rows (t, id, mode, s, run.solver, run.sim, f);
      break;
    case RunMode::sweep:
      throw std::logic_error ("nested sweep");
    }
}

std::vector<std::string>
header_for (RunMode engine)
{
  switch (engine)
    {
    case RunMode::simulate:
      return simulate_header ();
    case RunMode::compare:
      return compare_header ();
    default:
      return base_columns ();
    }
}

std::string
point_label (const std::vector<SweepAxis> &axes, const std::vector<int> &point)
{
  std::string out;
  for (std::size_t k = 0; k < axes.size (); ++k)
    {
      if (k)
        {
          out += ';';
        }
      out += to_string (axes[k].param);
      for (int idx : axes[k].classes)
        {
          out += std::to_string (idx);
        }
      out += '=' + std::to_string (point[k]);
    }
  return out;
}

} // namespace

std::vector<std::vector<int>>
sweep_points (const std::vector<SweepAxis> &axes)
{
  std::vector<std::vector<int>> points{{}};
  for (const auto &axis : axes)
    {
      std::vector<std::vector<int>> next;
      for (const auto &p : points)
        {
          for (int v : axis.values)
            {
              auto q = p;
              q.push_back (v);
              next.push_back (std::move (q));
            }
        }
      points = std::move (next);
    }
  return points;
}

ScenarioSpec
apply_point (const ScenarioSpec &base, const std::vector<SweepAxis> &axes,
             const std::vector<int> &point)
{
  ScenarioSpec spec = base;
  for (std::size_t k = 0; k < axes.size (); ++k)
    {
      for (auto &c : spec.classes)
        {
          bool hit = false;
          for (int idx : axes[k].classes)
            {
              hit = hit || idx == c.index;
            }
          if (!hit)
            {
              continue;
            }
          switch (axes[k].param)
            {
            case SweepAxis::Param::population:
              c.population = point[k];
              break;
            case SweepAxis::Param::aifsn:
              c.aifsn = point[k];
              break;
            case SweepAxis::Param::cw_min:
              c.cw_min = point[k];
              break;
            }
        }
    }
  return spec;
}

RunOutcome
execute (const RunSpec &run, const ScenarioSpec &spec)
{
  RunOutcome out;
  const Formatter f (run.precision);
  const bool sweeping = run.mode == RunMode::sweep;
  const RunMode engine = sweeping ? run.sweep_engine : run.mode;
  const std::string mode = sweeping ? "sweep:" + to_string (engine) : to_string (engine);
  out.table.header = header_for (engine);

  std::vector<std::vector<int>> points = sweeping ? sweep_points (run.sweep)
                                                  : std::vector<std::vector<int>>{{}};
  try
    {
      check_run_spec (run);
    }
  catch (const ConfigError &e)
    {
      out.exit_code = exit_config_error;
      out.message = e.what ();
      return out;
    }

  for (const auto &point : points)
    {
      std::string id = run.scenario_id;
      ScenarioSpec pointSpec = spec;
      if (sweeping)
        {
          id += '@' + point_label (run.sweep, point);
          pointSpec = apply_point (spec, run.sweep, point);
        }
      try
        {
          Scenario s = validate_scenario (pointSpec);
          engine_rows (out.table, engine, id, mode, s, run, f);
        }
      catch (const ScenarioError &e)
        {
          out.exit_code = exit_config_error;
          out.message = id + ": " + e.what ();
        }
      catch (const ConvergenceError &e)
        {
          out.exit_code = exit_non_convergence;
          out.message = id + ": " + e.what ();
        }
      catch (const ModelError &e)
        {
          out.exit_code = exit_non_convergence;
          out.message = id + ": " + e.what ();
        }
      if (out.exit_code != exit_ok)
        {
          out.table.notes.push_back ("partial: " + out.message);
          break;
        }
    }
  return out;
}

int
run_to_output (const RunSpec &run, const ScenarioSpec &spec, std::ostream &fallback,
               std::ostream &log)
{
  std::ofstream file;
  if (!run.out_path.empty ())
    {
      file.open (run.out_path, std::ios::out | std::ios::trunc);
      if (!file)
        {
          log << "error: cannot write " << run.out_path << '\n';
          return exit_io_error;
        }
    }
  std::ostream &os = run.out_path.empty () ? fallback : file;

  RunOutcome out = execute (run, spec);
  out.table.write (os);
  os.flush ();
  if (!os)
    {
      log << "error: failed writing output\n";
      return exit_io_error;
    }
  if (!out.message.empty ())
    {
      log << "error: " << out.message << '\n';
    }
  return out.exit_code;
}

} // namespace edca
