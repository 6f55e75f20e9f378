#pragma once

// Experiment runner: JSON config validation, preset experiments, the
// admissibility -> families -> projections -> verdict -> analytic-checks
// pipeline, and report/CSV emission.

#include <iosfwd>
#include <map>

#include "json.hpp"

#include "denslab/verify.hpp"

namespace denslab {

using Json = nlohmann::json;

// config problems -> CLI exit 2
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// solver/quadrature failures inside a run -> CLI exit 3
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Returns the normalized config (defaults filled in); throws ConfigError on
// schema violations, unknown keys, or cross-field rule violations.
Json validate_config(const Json& raw);
Json load_config(const std::string& path);

std::vector<std::string> preset_names();
Json preset_config(const std::string& name, const std::map<std::string, double>& params = {});

struct NamedTable {
  std::string name;
  std::vector<DecayPoint> rows;
};

struct RunReport {
  Json report;  // deterministic for a fixed config + seed
  std::vector<NamedTable> tables;
  bool pass = false;
  Json timing;  // wall-clock per stage, kept out of report.json
};

RunReport run_experiment(const Json& config);

// report.json + timing.json + tables/*.csv under out_dir
void write_report(const RunReport& r, const std::string& out_dir);
// one CSV (columns size,error) per table; returns the number of files written,
// warns on *warn when the report has no tables
int emit_plotdata(const RunReport& r, const std::string& dir, std::ostream* warn = nullptr);

// DENSITY_LAB_THREADS clamped to [1, hardware_concurrency]
int max_threads();

}  // namespace denslab
