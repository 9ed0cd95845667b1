#pragma once

#include <filesystem>
#include <optional>
#include <utility>

#include "lesbox/config.hpp"
#include "lesbox/diagnostics.hpp"
#include "lesbox/mhd.hpp"
#include "lesbox/nse.hpp"

namespace lesbox {

struct TrajectoryStatus {
  bool completed = true;
  std::string failure; // set when the state left the finite range
  long steps_taken = 0;
  double end_time = 0.0;
};

struct NseRunResult {
  TrajectoryStatus status;
  FlowState final_state;
  std::vector<BudgetSample> budget_samples;
};

struct MhdRunResult {
  TrajectoryStatus status;
  MHDState final_state;
  std::vector<BudgetSample> budget_samples;
};

// In-memory trajectory drivers.  budget_cadence > 0 samples the budget terms
// every that many steps (starting at step 0).  On blow-up the last finite
// state is returned and status.failure is set.
NseRunResult run_nse_trajectory(const SpectralField& w0, const NSEConfig& cfg,
                                int budget_cadence = 0);
MhdRunResult run_mhd_trajectory(const SpectralField& w0,
                                const SpectralField& b0, const MHDConfig& cfg,
                                int budget_cadence = 0);

// Config -> model plumbing, shared by the commands and the test harness.
TorusGrid grid_from(const RunConfig& cfg);
std::optional<SpectralField> forcing_from(const RunConfig& cfg,
                                          const TorusGrid& g);
NSEConfig nse_config_from(const RunConfig& cfg, const TorusGrid& g);
MHDConfig mhd_config_from(const RunConfig& cfg, const TorusGrid& g);
// Initial state after the optional filtering step.
SpectralField initial_velocity(const RunConfig& cfg, const TorusGrid& g);
std::pair<SpectralField, SpectralField> initial_mhd(const RunConfig& cfg,
                                                    const TorusGrid& g);

// CLI commands.  An empty outdir override keeps the config's directory.
int command_run(const RunConfig& cfg, const std::filesystem::path& outdir);
int command_sweep(const RunConfig& cfg, const std::filesystem::path& outdir,
                  int workers);

} // namespace lesbox
