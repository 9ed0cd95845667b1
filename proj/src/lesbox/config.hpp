#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lesbox/filter.hpp"

namespace lesbox {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  int n = 0;
  double period = two_pi;
  double dealias_fraction = 2.0 / 3.0;
};

struct TimeConfig {
  double dt = 0.0;
  double t_end = 0.0;
};

// type: taylor-green | shear-mode | random-solenoidal | file (velocity-only
// models) and orszag-tang | random-solenoidal | file for the coupled model.
struct InitialConditionConfig {
  std::string type;
  double amplitude = 1.0;
  double velocity_amplitude = 1.0;
  double magnetic_amplitude = 1.0;
  double spectrum_slope = -2.0;
  std::string velocity_path;
  std::string magnetic_path;
};

struct ForcingConfig {
  std::string type = "none"; // none | abc
  double amplitude = 0.0;
};

struct OutputConfig {
  std::string directory;
  int budget_cadence = 1;   // steps between budget samples; 0 disables
  int norm_cadence = 1;     // steps between norm rows; 0 disables
  int snapshot_cadence = 0; // steps between snapshots; 0 disables
};

struct SweepConfig {
  std::vector<double> alphas; // strictly decreasing, positive
  std::vector<double> lp_exponents{2.0, 3.0};
};

struct RunConfig {
  std::string model; // nse | mhd
  GridConfig grid;
  FilterParams filter;
  double nu = 0.0;  // nse
  double nu1 = 0.0; // mhd
  double nu2 = 0.0;
  TimeConfig time;
  InitialConditionConfig initial_condition;
  // When true the configured field is the unfiltered datum and the state
  // starts from its filtered image; when false it is taken as the state
  // itself.
  bool filter_initial_condition = true;
  ForcingConfig forcing;
  OutputConfig output;
  std::uint64_t seed = 0;
  std::optional<SweepConfig> sweep;
};

// Strict parser: any unknown key is an error.  allow_sweep gates the
// "sweep" block (the run command rejects it, the sweep command requires it).
RunConfig parse_run_config(const std::string& json_text, bool allow_sweep);
RunConfig load_run_config(const std::filesystem::path& file, bool allow_sweep);

// Canonical JSON echo (fixed key order) used by manifests; parsing it back
// yields an equivalent configuration.
std::string run_config_to_json(const RunConfig& cfg);

} // namespace lesbox
