// edca: analytical and simulated EDCA saturation performance.

#include "edca/config.hpp"
#include "edca/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int
main (int argc, char **argv)
{
  CLI::App app{"EDCA saturation throughput, service time and drop probability"};

  std::string mode;
  std::string configPath;
  std::string preset;
  std::string outPath;
  std::string sweepEngine;
  int seeds = 0;
  double durationS = 0.0;
  double warmupS = -1.0;
  double tolerance = 0.0;
  int maxIter = 0;
  bool listPresets = false;
  std::string showPreset;

  app.add_option ("--mode", mode, "analyze | simulate | compare | sweep")
      ->check (CLI::IsMember ({"analyze", "simulate", "compare", "sweep"}));
  auto *cfgOpt = app.add_option ("--config", configPath, "scenario JSON file");
  auto *preOpt = app.add_option ("--preset", preset, "shipped scenario preset");
  cfgOpt->excludes (preOpt);
  app.add_option ("--out", outPath, "CSV output path (default: stdout)");
  app.add_option ("--seeds", seeds, "number of simulation seeds")->check (CLI::PositiveNumber);
  app.add_option ("--duration-s", durationS, "simulated seconds per seed")
      ->check (CLI::PositiveNumber);
  app.add_option ("--warmup-s", warmupS, "discarded warm-up seconds")
      ->check (CLI::NonNegativeNumber);
  app.add_option ("--tolerance", tolerance, "fixed-point tolerance on max |dtau|")
      ->check (CLI::PositiveNumber);
  app.add_option ("--max-iter", maxIter, "fixed-point iteration cap")->check (CLI::PositiveNumber);
  app.add_option ("--sweep-engine", sweepEngine, "engine per sweep point")
      ->check (CLI::IsMember ({"analyze", "simulate", "compare"}));
  app.add_flag ("--list-presets", listPresets, "print preset names and exit");
  app.add_option ("--show-preset", showPreset, "print a preset's JSON and exit");

  try
    {
      app.parse (argc, argv);
    }
  catch (const CLI::ParseError &e)
    {
      int rc = app.exit (e);
      return rc == 0 ? edca::exit_ok : edca::exit_config_error;
    }

  if (listPresets)
    {
      for (const auto &name : edca::preset_names ())
        {
          std::cout << name << '\n';
        }
      return edca::exit_ok;
    }
  if (!showPreset.empty ())
    {
      auto text = edca::preset_text (showPreset);
      if (!text)
        {
          std::cerr << "error: unknown preset '" << showPreset << "'\n";
          return edca::exit_config_error;
        }
      std::cout << *text << '\n';
      return edca::exit_ok;
    }
  if (configPath.empty () && preset.empty ())
    {
      std::cerr << "error: one of --config or --preset is required\n";
      return edca::exit_config_error;
    }

  try
    {
      std::optional<edca::ParsedConfig> parsed;
      if (!preset.empty ())
        {
          parsed = edca::load_preset (preset);
        }
      else
        {
          std::ifstream in (configPath);
          if (!in)
            {
              std::cerr << "error: cannot read " << configPath << '\n';
              return edca::exit_io_error;
            }
          std::stringstream buf;
          buf << in.rdbuf ();
          parsed = edca::parse_config (buf.str (), configPath);
        }

      edca::RunSpec run = parsed->run;
      if (!mode.empty ())
        {
          run.mode = *edca::run_mode_from_string (mode);
        }
      if (!sweepEngine.empty ())
        {
          run.sweep_engine = *edca::run_mode_from_string (sweepEngine);
        }
      if (seeds > 0)
        {
          run.sim.seeds = seeds;
        }
      if (durationS > 0.0)
        {
          run.sim.duration_s = durationS;
          if (warmupS < 0.0)
            {
              run.sim.warmup_s = 0.05 * durationS;
            }
        }
      if (warmupS >= 0.0)
        {
          run.sim.warmup_s = warmupS;
        }
      if (tolerance > 0.0)
        {
          run.solver.tolerance = tolerance;
        }
      if (maxIter > 0)
        {
          run.solver.max_iterations = maxIter;
        }
      run.out_path = outPath;
      edca::check_run_spec (run);
      return edca::run_to_output (run, parsed->spec, std::cout, std::cerr);
    }
  catch (const edca::ConfigError &e)
    {
      std::cerr << "config error: " << e.what () << '\n';
      return edca::exit_config_error;
    }
}
