#include "edca/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace edca {

using json = nlohmann::json;

std::string
to_string (RunMode m)
{
  switch (m)
    {
    case RunMode::analyze:
      return "analyze";
    case RunMode::simulate:
      return "simulate";
    case RunMode::compare:
      return "compare";
    case RunMode::sweep:
      return "sweep";
    }
  return "?";
}

std::optional<RunMode>
run_mode_from_string (const std::string &s)
{
  for (auto m : {RunMode::analyze, RunMode::simulate, RunMode::compare, RunMode::sweep})
    {
      if (to_string (m) == s)
        {
          return m;
        }
    }
  return std::nullopt;
}

std::string
to_string (SweepAxis::Param p)
{
  switch (p)
    {
    case SweepAxis::Param::population:
      return "population";
    case SweepAxis::Param::aifsn:
      return "aifsn";
    case SweepAxis::Param::cw_min:
      return "cw_min";
    }
  return "?";
}

void
check_run_spec (const RunSpec &run)
{
  auto fail = [] (const std::string &m) { throw ConfigError (ConfigError::Kind::schema, m); };
  if (run.mode == RunMode::sweep)
    {
      if (run.sweep.empty ())
        {
          fail ("sweep mode needs at least one sweep axis");
        }
      if (run.sweep_engine == RunMode::sweep)
        {
          fail ("run.sweep_engine cannot be sweep");
        }
    }
  for (const auto &axis : run.sweep)
    {
      if (axis.values.empty ())
        {
          fail ("sweep axis '" + to_string (axis.param) + "' has no values");
        }
    }
  bool simulates = run.mode == RunMode::simulate || run.mode == RunMode::compare
                   || (run.mode == RunMode::sweep && run.sweep_engine != RunMode::analyze);
  if (simulates)
    {
      if (run.sim.seeds < 1)
        {
          fail ("run.seeds must be >= 1");
        }
      if (!(run.sim.duration_s > 0.0))
        {
          fail ("run.duration_s must be positive");
        }
      if (!(run.sim.warmup_s >= 0.0 && run.sim.warmup_s < run.sim.duration_s))
        {
          fail ("run.warmup_s must be in [0, duration_s)");
        }
    }
  if (!(run.solver.tolerance > 0.0))
    {
      fail ("run.tolerance must be positive");
    }
  if (run.solver.max_iterations < 1)
    {
      fail ("run.max_iter must be >= 1");
    }
  if (!(run.solver.damping > 0.0 && run.solver.damping <= 1.0))
    {
      fail ("run.damping must be in (0, 1]");
    }
  if (run.precision < 1 || run.precision > 17)
    {
      fail ("run.precision must be in [1, 17]");
    }
}

namespace {

[[noreturn]] void
schema_error (const std::string &path, const std::string &msg)
{
  throw ConfigError (ConfigError::Kind::schema, path + ": " + msg);
}

/// Reads the fields of one JSON object, rejecting keys that were never asked for.
class ObjectReader
{
public:
  ObjectReader (const json &j, std::string path) : m_j (j), m_path (std::move (path))
  {
    if (!j.is_object ())
      {
        schema_error (m_path.empty () ? "<root>" : m_path, "expected an object");
      }
  }

  std::string key_path (const std::string &key) const
  {
    return m_path.empty () ? key : m_path + "." + key;
  }

  const json *find (const std::string &key)
  {
    m_known.insert (key);
    auto it = m_j.find (key);
    return it == m_j.end () ? nullptr : &*it;
  }

  const json &require (const std::string &key)
  {
    const json *v = find (key);
    if (!v)
      {
        schema_error (key_path (key), "missing required key");
      }
    return *v;
  }

  void read_int (const std::string &key, int &out, bool required, int minimum)
  {
    const json *v = required ? &require (key) : find (key);
    if (!v)
      {
        return;
      }
    if (!v->is_number_integer ())
      {
        schema_error (key_path (key), "expected an integer");
      }
    auto x = v->get<long long> ();
    if (x < minimum)
      {
        schema_error (key_path (key), "must be >= " + std::to_string (minimum));
      }
    if (x > 1'000'000'000LL)
      {
        schema_error (key_path (key), "value too large");
      }
    out = static_cast<int> (x);
  }

  void read_double (const std::string &key, double &out, bool positive)
  {
    const json *v = find (key);
    if (!v)
      {
        return;
      }
    if (!v->is_number ())
      {
        schema_error (key_path (key), "expected a number");
      }
    double x = v->get<double> ();
    if (positive ? !(x > 0.0) : !(x >= 0.0))
      {
        schema_error (key_path (key), positive ? "must be > 0" : "must be >= 0");
      }
    out = x;
  }

  void read_string (const std::string &key, std::string &out)
  {
    const json *v = find (key);
    if (!v)
      {
        return;
      }
    if (!v->is_string ())
      {
        schema_error (key_path (key), "expected a string");
      }
    out = v->get<std::string> ();
  }

  void finish () const
  {
    for (auto it = m_j.begin (); it != m_j.end (); ++it)
      {
        if (!m_known.count (it.key ()))
          {
            schema_error (key_path (it.key ()), "unknown key");
          }
      }
  }

private:
  const json &m_j;
  std::string m_path;
  std::set<std::string> m_known;
};

PhyProfile
read_phy (const json &j)
{
  PhyProfile phy = PhyProfile::ofdm_80211g ();
  ObjectReader r (j, "phy");
  r.read_double ("slot_us", phy.slot_us, false);
  r.read_double ("sifs_us", phy.sifs_us, false);
  r.read_double ("data_rate_mbps", phy.data_rate, true);
  r.read_double ("basic_rate_mbps", phy.basic_rate, true);
  r.read_double ("preamble_us", phy.preamble_us, false);
  r.read_double ("symbol_us", phy.symbol_us, true);
  r.read_int ("service_bits", phy.service_bits, false, 0);
  r.read_int ("tail_bits", phy.tail_bits, false, 0);
  r.read_int ("mac_header_bytes", phy.mac_header_bytes, false, 0);
  r.read_int ("ack_bytes", phy.ack_bytes, false, 0);
  r.read_int ("rts_bytes", phy.rts_bytes, false, 0);
  r.read_int ("cts_bytes", phy.cts_bytes, false, 0);
  r.read_double ("delta_us", phy.delta_us, false);
  r.finish ();
  return phy;
}

AccessCategoryClass
read_class (const json &j, const std::string &path)
{
  AccessCategoryClass c;
  ObjectReader r (j, path);
  r.read_int ("index", c.index, true, 0);
  r.read_int ("aifsn", c.aifsn, true, 2);
  r.read_int ("cw_min", c.cw_min, true, 1);
  r.read_int ("max_stage", c.max_stage, true, 0);
  r.read_int ("retry_limit", c.retry_limit, true, 1);
  r.read_int ("population", c.population, true, 0);
  r.read_int ("payload_bytes", c.payload_bytes, true, 0);
  r.finish ();
  return c;
}

std::vector<int>
read_int_list (const json &j, const std::string &path)
{
  if (!j.is_array ())
    {
      schema_error (path, "expected an array of integers");
    }
  std::vector<int> out;
  for (const auto &v : j)
    {
      if (!v.is_number_integer ())
        {
          schema_error (path, "expected an array of integers");
        }
      out.push_back (v.get<int> ());
    }
  return out;
}

SweepAxis
read_axis (const json &j, const std::string &path)
{
  ObjectReader r (j, path);
  SweepAxis axis;
  std::string param;
  r.read_string ("param", param);
  if (param == "population")
    {
      axis.param = SweepAxis::Param::population;
    }
  else if (param == "aifsn")
    {
      axis.param = SweepAxis::Param::aifsn;
    }
  else if (param == "cw_min")
    {
      axis.param = SweepAxis::Param::cw_min;
    }
  else
    {
      schema_error (r.key_path ("param"), "expected population, aifsn or cw_min");
    }
  axis.classes = read_int_list (r.require ("classes"), r.key_path ("classes"));
  if (axis.classes.empty ())
    {
      schema_error (r.key_path ("classes"), "must name at least one class");
    }
  const json *values = r.find ("values");
  const json *range = r.find ("range");
  if ((values == nullptr) == (range == nullptr))
    {
      schema_error (path, "exactly one of 'values' or 'range' is required");
    }
  if (values)
    {
      axis.values = read_int_list (*values, r.key_path ("values"));
    }
  else
    {
      ObjectReader rr (*range, r.key_path ("range"));
      int from = 0, to = 0, step = 1;
      rr.read_int ("from", from, true, 0);
      rr.read_int ("to", to, true, 0);
      rr.read_int ("step", step, false, 1);
      rr.finish ();
      for (int v = from; v <= to; v += step)
        {
          axis.values.push_back (v);
        }
    }
  r.finish ();
  return axis;
}

void
read_run (const json &j, RunSpec &run)
{
  ObjectReader r (j, "run");
  std::string mode;
  r.read_string ("mode", mode);
  if (!mode.empty ())
    {
      auto m = run_mode_from_string (mode);
      if (!m)
        {
          schema_error ("run.mode", "expected analyze, simulate, compare or sweep");
        }
      run.mode = *m;
    }
  std::string engine;
  r.read_string ("sweep_engine", engine);
  if (!engine.empty ())
    {
      auto m = run_mode_from_string (engine);
      if (!m || *m == RunMode::sweep)
        {
          schema_error ("run.sweep_engine", "expected analyze, simulate or compare");
        }
      run.sweep_engine = *m;
    }
  r.read_int ("seeds", run.sim.seeds, false, 1);
  int firstSeed = static_cast<int> (run.sim.first_seed);
  r.read_int ("first_seed", firstSeed, false, 0);
  run.sim.first_seed = static_cast<std::uint64_t> (firstSeed);
  r.read_double ("duration_s", run.sim.duration_s, true);
  r.read_double ("warmup_s", run.sim.warmup_s, false);
  r.read_double ("tolerance", run.solver.tolerance, true);
  r.read_int ("max_iter", run.solver.max_iterations, false, 1);
  r.read_double ("damping", run.solver.damping, true);
  r.read_int ("precision", run.precision, false, 1);
  r.finish ();
}

std::string
position_of (const std::string &text, std::size_t byte)
{
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size (); ++k)
    {
      if (text[k] == '\n')
        {
          ++line;
          col = 1;
        }
      else
        {
          ++col;
        }
    }
  return "line " + std::to_string (line) + ", column " + std::to_string (col);
}

} // namespace

ParsedConfig
parse_config (const std::string &text, const std::string &default_id)
{
  json doc;
  try
    {
      doc = json::parse (text, nullptr, true, /*ignore_comments=*/true);
    }
  catch (const json::parse_error &e)
    {
      throw ConfigError (ConfigError::Kind::syntax,
                         "syntax error at " + position_of (text, e.byte) + ": " + e.what ());
    }

  ObjectReader root (doc, "");
  RunSpec run;
  run.scenario_id = default_id;
  root.read_string ("scenario_id", run.scenario_id);

  ScenarioSpec spec;
  std::string mode = "basic";
  root.read_string ("access_mode", mode);
  if (mode == "basic")
    {
      spec.access_mode = AccessMode::basic;
    }
  else if (mode == "rts_cts")
    {
      spec.access_mode = AccessMode::rts_cts;
    }
  else
    {
      schema_error ("access_mode", "expected basic or rts_cts");
    }

  if (const json *phy = root.find ("phy"))
    {
      spec.phy = read_phy (*phy);
    }

  const json &classes = root.require ("classes");
  if (!classes.is_array () || classes.empty ())
    {
      schema_error ("classes", "expected a non-empty array");
    }
  for (std::size_t k = 0; k < classes.size (); ++k)
    {
      spec.classes.push_back (read_class (classes[k], "classes[" + std::to_string (k) + "]"));
    }

  if (const json *r = root.find ("run"))
    {
      read_run (*r, run);
    }
  if (const json *sweep = root.find ("sweep"))
    {
      if (!sweep->is_array ())
        {
          schema_error ("sweep", "expected an array of axes");
        }
      for (std::size_t k = 0; k < sweep->size (); ++k)
        {
          run.sweep.push_back (read_axis ((*sweep)[k], "sweep[" + std::to_string (k) + "]"));
        }
    }
  root.finish ();

  for (const auto &axis : run.sweep)
    {
      for (int idx : axis.classes)
        {
          bool known = std::any_of (spec.classes.begin (), spec.classes.end (),
                                    [&] (const auto &c) { return c.index == idx; });
          if (!known)
            {
              schema_error ("sweep", "axis refers to unknown class index " + std::to_string (idx));
            }
        }
    }
  check_run_spec (run);

  try
    {
      Scenario s = validate_scenario (spec);
      return ParsedConfig{spec, s, run};
    }
  catch (const ScenarioError &e)
    {
      throw ConfigError (ConfigError::Kind::validation, e.what ());
    }
}

namespace {

const std::map<std::string, std::string> &
presets ()
{
  // Two ACs, one per station: AC1 (low priority) and AC3 (high priority),
  // 1000-byte payloads, RTS/CTS, 802.11g at 54/6 Mbps.
  static const std::map<std::string, std::string> table = {
    {"paper-fig3", R"({
  "scenario_id": "paper-fig3",
  "access_mode": "rts_cts",
  "phy": {"slot_us": 9, "sifs_us": 10, "data_rate_mbps": 54, "basic_rate_mbps": 6},
  "classes": [
    {"index": 1, "aifsn": 3, "cw_min": 31, "max_stage": 3, "retry_limit": 7, "population": 10, "payload_bytes": 1000},
    {"index": 3, "aifsn": 2, "cw_min": 15, "max_stage": 3, "retry_limit": 7, "population": 10, "payload_bytes": 1000}
  ],
  "run": {"seeds": 10, "duration_s": 100, "warmup_s": 5},
  "sweep": [
    {"param": "population", "classes": [1, 3], "range": {"from": 5, "to": 30, "step": 5}}
  ]
})"},
    {"paper-fig5", R"({
  "scenario_id": "paper-fig5",
  "access_mode": "rts_cts",
  "phy": {"slot_us": 9, "sifs_us": 10, "data_rate_mbps": 54, "basic_rate_mbps": 6},
  "classes": [
    {"index": 1, "aifsn": 3, "cw_min": 31, "max_stage": 3, "retry_limit": 7, "population": 10, "payload_bytes": 1000},
    {"index": 3, "aifsn": 2, "cw_min": 15, "max_stage": 3, "retry_limit": 7, "population": 10, "payload_bytes": 1000}
  ],
  "run": {"seeds": 10, "duration_s": 100, "warmup_s": 5},
  "sweep": [
    {"param": "aifsn", "classes": [1], "values": [2, 3, 4]},
    {"param": "cw_min", "classes": [1], "values": [15, 31, 63, 127, 255]}
  ]
})"},
    {"paper-fig6", R"({
  "scenario_id": "paper-fig6",
  "access_mode": "rts_cts",
  "phy": {"slot_us": 9, "sifs_us": 10, "data_rate_mbps": 54, "basic_rate_mbps": 6},
  "classes": [
    {"index": 1, "aifsn": 4, "cw_min": 127, "max_stage": 3, "retry_limit": 7, "population": 10, "payload_bytes": 1000},
    {"index": 3, "aifsn": 2, "cw_min": 15, "max_stage": 3, "retry_limit": 7, "population": 10, "payload_bytes": 1000}
  ],
  "run": {"seeds": 10, "duration_s": 100, "warmup_s": 5},
  "sweep": [
    {"param": "aifsn", "classes": [3], "values": [2, 3, 4]},
    {"param": "cw_min", "classes": [3], "values": [15, 31, 63, 127]}
  ]
})"},
  };
  return table;
}

} // namespace

std::vector<std::string>
preset_names ()
{
  std::vector<std::string> out;
  for (const auto &[name, text] : presets ())
    {
      out.push_back (name);
    }
  return out;
}

std::optional<std::string>
preset_text (const std::string &name)
{
  auto it = presets ().find (name);
  if (it == presets ().end ())
    {
      return std::nullopt;
    }
  return it->second;
}

ParsedConfig
load_preset (const std::string &name)
{
  auto text = preset_text (name);
  if (!text)
    {
      throw ConfigError (ConfigError::Kind::schema, "unknown preset '" + name + "'");
    }
  return parse_config (*text, name);
}

} // namespace edca
