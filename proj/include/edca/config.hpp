#ifndef EDCA_CONFIG_HPP
#define EDCA_CONFIG_HPP

#include "edca/fixed_point.hpp"
#include "edca/model.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace edca {

enum class RunMode
{
  analyze,
  simulate,
  compare,
  sweep
};

std::string to_string (RunMode m);
std::optional<RunMode> run_mode_from_string (const std::string &s);

class ConfigError : public std::runtime_error
{
public:
  enum class Kind
  {
    syntax,
    schema,
    validation
  };
  ConfigError (Kind kind, const std::string &what) : std::runtime_error (what), m_kind (kind) {}
  Kind kind () const { return m_kind; }

private:
  Kind m_kind;
};

struct SweepAxis
{
  enum class Param
  {
    population,
    aifsn,
    cw_min
  };
  Param param = Param::population;
  std::vector<int> classes;  ///< AC indices the value is applied to
  std::vector<int> values;
};

std::string to_string (SweepAxis::Param p);

struct SimControls
{
  int seeds = 10;
  std::uint64_t first_seed = 1;
  double duration_s = 100.0;
  double warmup_s = 5.0;
};

struct RunSpec
{
  RunMode mode = RunMode::analyze;
  RunMode sweep_engine = RunMode::analyze;
  std::string scenario_id = "config";
  SolverConfig solver;
  SimControls sim;
  std::vector<SweepAxis> sweep;
  std::string out_path;  ///< empty: standard output
  int precision = 9;
};

/// Checks RunSpec invariants; throws ConfigError (schema).
void check_run_spec (const RunSpec &run);

struct ParsedConfig
{
  ScenarioSpec spec;
  Scenario scenario;
  RunSpec run;
};

/**
 * Parses a JSON scenario document. Unknown keys are rejected. Syntax
 * errors report line and column; schema errors name the offending key.
 */
ParsedConfig parse_config (const std::string &text, const std::string &default_id = "config");

std::vector<std::string> preset_names ();

/// JSON text of a shipped preset; std::nullopt if unknown.
std::optional<std::string> preset_text (const std::string &name);

ParsedConfig load_preset (const std::string &name);

} // namespace edca

#endif // EDCA_CONFIG_HPP
