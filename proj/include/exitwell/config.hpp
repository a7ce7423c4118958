#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "exitwell/geometry.hpp"
#include "exitwell/potential.hpp"

namespace exitwell {

struct DomainConfig {
  CurveSpec spec;
  int grid_size = 256;
  double collar_cap = 1e30;
  bool set = false;
};

struct ExpansionConfig {
  int order = 4;
  std::vector<double> eps;  // canonical: sorted descending, deduplicated
  double delta_scale = 0.9;
};

struct McConfig {
  bool enabled = false;
  std::vector<double> dt;
  long long n_paths = 1000;
  std::uint64_t seed = 1;
  long long max_steps_per_path = 50'000'000;
  double min_eps = 0.3;  // refuse the sampler below this (cost guard)
  int threads = 0;
};

struct ValidateConfig {
  bool radial_bvp = true;
  bool radial_eigen = true;
  int bvp_grid = 4096;
  int eigen_cells = 4096;
};

struct OutputConfig {
  std::string json;        // path for the JSON report ("" = stdout only)
  std::string csv_prefix;  // prefix for CSV table dumps ("" = none)
};

struct RunConfig {
  DomainConfig domain;
  PotentialSpec potential;
  bool potential_set = false;
  ExpansionConfig expansion;
  std::vector<Vec2> probes;
  McConfig mc;
  ValidateConfig validate;
  OutputConfig output;
};

// INI-style config: [section] headers, key = value lines, # or ; comments.
// Unknown sections or keys are rejected (typo safety).  Errors carry
// origin:line positions.
RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

}  // namespace exitwell
