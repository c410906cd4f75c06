#ifndef EDCA_RUNNER_HPP
#define EDCA_RUNNER_HPP

#include "edca/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace edca {

enum ExitCode : int
{
  exit_ok = 0,
  exit_config_error = 2,
  exit_non_convergence = 3,
  exit_io_error = 4
};

/// Columns shared by every output row.
const std::vector<std::string> &base_columns ();

struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;  ///< emitted as trailing "# ..." lines

  void write (std::ostream &os) const;
};

struct RunOutcome
{
  int exit_code = exit_ok;
  Table table;
  std::string message;  ///< empty on success
};

/**
 * Executes a run against `spec` and returns the rows it produced. Sweep
 * points are expanded as the cross product of the axes, last axis fastest.
 * Nothing is written; see run_to_output.
 */
RunOutcome execute (const RunSpec &run, const ScenarioSpec &spec);

/// Executes and writes the CSV to run.out_path (or `fallback` when empty).
int run_to_output (const RunSpec &run, const ScenarioSpec &spec, std::ostream &fallback,
                   std::ostream &log);

/// Scenario of one sweep point; throws ConfigError (validation) if invalid.
ScenarioSpec apply_point (const ScenarioSpec &base, const std::vector<SweepAxis> &axes,
                          const std::vector<int> &point);

std::vector<std::vector<int>> sweep_points (const std::vector<SweepAxis> &axes);

} // namespace edca

#endif // EDCA_RUNNER_HPP
