#pragma once

#include <string>
#include <vector>

#include "igalbm/benchmarks.hpp"
#include "igalbm/geometry.hpp"

namespace igalbm {

struct OutputConfig {
  std::string directory;  // empty: IGALBM_OUTPUT_DIR, else "output"
  long interval = 100;
  bool vtk = true;
  bool vtk_series = false;  // one file per interval besides the final one
  bool diagnostics = true;
  bool centerlines = true;
};

struct StudyConfig {
  std::vector<int> resolutions{16, 32, 64};
  double final_time = 0.0;  // 0 = one unit decay time
  bool exact_injection = false;
};

/// Validated configuration of one run (see README for the schema).
struct RunConfig {
  std::string case_name;
  int resolution = 32;
  int degree = 3;
  std::string geometry;  // builder name; only the "rest" case reads it
  GeometryParams geometry_params;
  TaylorGreenParams tgv;
  CavityParams cavity;
  bool equilibrium_walls = false;
  SolverConfig solver;
  OutputConfig output;
  StudyConfig study;
  std::vector<std::string> warnings;  // unknown keys and similar
};

std::vector<std::string> registered_cases();

/// Parses and validates a JSON configuration. Collects every problem and
/// throws one ConfigError listing them all.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");

/// Builds the case described by the configuration.
CaseSpec build_case(const RunConfig& cfg);

}  // namespace igalbm
