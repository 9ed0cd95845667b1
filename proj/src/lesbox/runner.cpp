#include "lesbox/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "lesbox/flows.hpp"
#include "lesbox/ops.hpp"
#include "lesbox/rng.hpp"
#include "lesbox/snapshot.hpp"
#include <lesbox/version.hpp>

namespace lesbox {

namespace {

constexpr double amplitude_ceiling = 1e100;

std::string fmt17(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

bool state_ok(const SpectralField& f) {
  return f.all_finite() && f.max_abs() < amplitude_ceiling;
}

} // namespace

NseRunResult run_nse_trajectory(const SpectralField& w0, const NSEConfig& cfg,
                                int budget_cadence) {
  NseRunResult r;
  const NseIntegrator integ(w0.grid, cfg);
  const BudgetWeights weights =
      make_budget_weights(w0.grid, cfg.filter.theta);
  FlowState s{w0, 0.0};
  const long nsteps = std::llround(cfg.t_end / cfg.dt);
  if (budget_cadence > 0)
    r.budget_samples.push_back(nse_budget_sample(s, cfg, weights));
  for (long i = 1; i <= nsteps; ++i) {
    FlowState next = integ.advance(s);
    if (!state_ok(next.w)) {
      r.status.completed = false;
      r.status.failure = "blow-up detected: non-finite state at t = " +
                         fmt17(next.time) + "; last finite state at t = " +
                         fmt17(s.time);
      break;
    }
    s = std::move(next);
    r.status.steps_taken = i;
    if (budget_cadence > 0 && i % budget_cadence == 0)
      r.budget_samples.push_back(nse_budget_sample(s, cfg, weights));
  }
  r.status.end_time = s.time;
  r.final_state = std::move(s);
  return r;
}

MhdRunResult run_mhd_trajectory(const SpectralField& w0,
                                const SpectralField& b0, const MHDConfig& cfg,
                                int budget_cadence) {
  MhdRunResult r;
  const MhdIntegrator integ(w0.grid, cfg);
  const BudgetWeights weights =
      make_budget_weights(w0.grid, cfg.filter.theta);
  MHDState s{w0, b0, 0.0};
  const long nsteps = std::llround(cfg.t_end / cfg.dt);
  if (budget_cadence > 0)
    r.budget_samples.push_back(mhd_budget_sample(s, cfg, weights));
  for (long i = 1; i <= nsteps; ++i) {
    MHDState next = integ.advance(s);
    if (!state_ok(next.w) || !state_ok(next.b)) {
      r.status.completed = false;
      r.status.failure = "blow-up detected: non-finite state at t = " +
                         fmt17(next.time) + "; last finite state at t = " +
                         fmt17(s.time);
      break;
    }
    s = std::move(next);
    r.status.steps_taken = i;
    if (budget_cadence > 0 && i % budget_cadence == 0)
      r.budget_samples.push_back(mhd_budget_sample(s, cfg, weights));
  }
  r.status.end_time = s.time;
  r.final_state = std::move(s);
  return r;
}

TorusGrid grid_from(const RunConfig& cfg) {
  return make_grid(cfg.grid.n, cfg.grid.period, cfg.grid.dealias_fraction);
}

std::optional<SpectralField> forcing_from(const RunConfig& cfg,
                                          const TorusGrid& g) {
  if (cfg.forcing.type == "none") return std::nullopt;
  SpectralField f = abc_forcing(g, cfg.forcing.amplitude);
  apply_dealias_mask(f);
  return f;
}

NSEConfig nse_config_from(const RunConfig& cfg, const TorusGrid& g) {
  NSEConfig m;
  m.nu = cfg.nu;
  m.filter = cfg.filter;
  m.dt = cfg.time.dt;
  m.t_end = cfg.time.t_end;
  m.forcing = forcing_from(cfg, g);
  return m;
}

MHDConfig mhd_config_from(const RunConfig& cfg, const TorusGrid& g) {
  MHDConfig m;
  m.nu1 = cfg.nu1;
  m.nu2 = cfg.nu2;
  m.filter = cfg.filter;
  m.dt = cfg.time.dt;
  m.t_end = cfg.time.t_end;
  m.forcing = forcing_from(cfg, g);
  return m;
}

namespace {

// File-based states are sanitized so every run starts from an admissible
// point of the model's phase space.
SpectralField sanitize_state(SpectralField f) {
  apply_dealias_mask(f);
  f = leray_project(f);
  enforce_zero_mean(f);
  symmetrize(f);
  return f;
}

SpectralField load_field(const std::string& path, const TorusGrid& g) {
  Snapshot s = read_snapshot(path);
  if (!same_grid(s.field.grid, g))
    throw ConfigError("config: snapshot grid does not match /grid: " + path);
  if (s.field.components != 3)
    throw ConfigError("config: snapshot is not a vector field: " + path);
  return sanitize_state(std::move(s.field));
}

std::uint64_t field_seed(std::uint64_t base, bool magnetic) {
  return CounterRng::mix(base ^ (magnetic ? 0x6d61676eull : 0x76656c6full));
}

SpectralField raw_velocity(const RunConfig& cfg, const TorusGrid& g) {
  const InitialConditionConfig& ic = cfg.initial_condition;
  if (ic.type == "taylor-green") return taylor_green(g, ic.amplitude);
  if (ic.type == "shear-mode") return shear_mode(g, ic.amplitude);
  if (ic.type == "random-solenoidal")
    return random_solenoidal(g, field_seed(cfg.seed, false),
                             ic.spectrum_slope, ic.amplitude);
  if (ic.type == "file") return load_field(ic.velocity_path, g);
  throw ConfigError("config: unsupported initial condition " + ic.type);
}

} // namespace

SpectralField initial_velocity(const RunConfig& cfg, const TorusGrid& g) {
  SpectralField v = raw_velocity(cfg, g);
  if (cfg.filter_initial_condition) v = apply_filter(v, cfg.filter);
  return v;
}

std::pair<SpectralField, SpectralField> initial_mhd(const RunConfig& cfg,
                                                    const TorusGrid& g) {
  const InitialConditionConfig& ic = cfg.initial_condition;
  SpectralField w = SpectralField::zeros(g, 3);
  SpectralField b = SpectralField::zeros(g, 3);
  if (ic.type == "orszag-tang") {
    std::tie(w, b) =
        orszag_tang(g, ic.velocity_amplitude, ic.magnetic_amplitude);
  } else if (ic.type == "random-solenoidal") {
    w = random_solenoidal(g, field_seed(cfg.seed, false), ic.spectrum_slope,
                          ic.amplitude);
    b = random_solenoidal(g, field_seed(cfg.seed, true), ic.spectrum_slope,
                          ic.magnetic_amplitude);
  } else if (ic.type == "file") {
    w = load_field(ic.velocity_path, g);
    b = load_field(ic.magnetic_path, g);
  } else {
    throw ConfigError("config: unsupported initial condition " + ic.type);
  }
  if (cfg.filter_initial_condition) {
    w = apply_filter(w, cfg.filter);
    b = apply_filter(b, cfg.filter);
  }
  return {std::move(w), std::move(b)};
}

namespace {

namespace fs = std::filesystem;

struct NormTables {
  std::vector<double> full16, hom1, hom76;
};

NormTables make_norm_tables(const TorusGrid& g) {
  const std::vector<double>& ksq = g.tables->ksq;
  NormTables t;
  t.full16.resize(ksq.size());
  t.hom1 = ksq;
  t.hom76.resize(ksq.size());
  for (std::size_t i = 0; i < ksq.size(); ++i) {
    t.full16[i] = std::pow(1.0 + ksq[i], 1.0 / 6.0);
    t.hom76[i] = std::pow(ksq[i], 7.0 / 6.0);
  }
  return t;
}

double table_norm(const SpectralField& f, const std::vector<double>& w,
                  double vol) {
  KahanSum<double> acc;
  const std::size_t total = f.site_count();
  for (int c = 0; c < f.components; ++c) {
    std::span<const cplx> fc = f.comp(c);
    for (std::size_t i = 0; i < total; ++i) acc.add(w[i] * std::norm(fc[i]));
  }
  return std::sqrt(vol * acc.value());
}

struct NormRow {
  double time;
  std::vector<double> values;
};

void write_budget_csv(const fs::path& file,
                      const std::vector<EnergyBudget>& rows) {
  std::ofstream out(file, std::ios::trunc);
  out << "time,model_energy,dissipation_rate,forcing_power,budget_residual\n";
  for (const EnergyBudget& r : rows)
    out << fmt17(r.time) << ',' << fmt17(r.model_energy) << ','
        << fmt17(r.dissipation_rate) << ',' << fmt17(r.forcing_power) << ','
        << fmt17(r.budget_residual) << '\n';
}

void write_norms_csv(const fs::path& file, bool mhd,
                     const std::vector<NormRow>& rows) {
  std::ofstream out(file, std::ios::trunc);
  out << "time,w_l2,w_h16,w_h1_hom,w_h76_hom";
  if (mhd) out << ",b_l2,b_h16,b_h1_hom,b_h76_hom";
  out << '\n';
  for (const NormRow& r : rows) {
    out << fmt17(r.time);
    for (double v : r.values) out << ',' << fmt17(v);
    out << '\n';
  }
}

std::string lp_tag(double p) {
  char b[32];
  if (p == std::floor(p) && std::abs(p) < 1e6)
    std::snprintf(b, sizeof b, "%d", static_cast<int>(p));
  else
    std::snprintf(b, sizeof b, "%g", p);
  return b;
}

// One full model run with disk outputs; also returns the pieces a sweep
// needs for cross-run comparison.
struct DiskRun {
  TrajectoryStatus status;
  SweepSample sample;
  double wall_seconds = 0.0;
};

DiskRun run_to_disk(const RunConfig& cfg, const std::optional<fs::path>& dir,
                    const char* command) {
  const auto t0 = std::chrono::steady_clock::now();
  const TorusGrid g = grid_from(cfg);
  const bool mhd = cfg.model == "mhd";
  const NormTables ntab = make_norm_tables(g);
  const double vol = g.period * g.period * g.period;

  if (dir) fs::create_directories(*dir);

  std::vector<BudgetSample> budget_samples;
  std::vector<NormRow> norm_rows;
  std::vector<std::string> outputs;
  TrajectoryStatus status;

  const int bc = cfg.output.budget_cadence;
  const int nc = cfg.output.norm_cadence;
  const int sc = cfg.output.snapshot_cadence;

  auto norm_values = [&](const SpectralField& f) {
    return std::vector<double>{
        sobolev_norm(f, {0.0, false}), table_norm(f, ntab.full16, vol),
        table_norm(f, ntab.hom1, vol), table_norm(f, ntab.hom76, vol)};
  };

  SweepSample sample;
  if (!mhd) {
    const NSEConfig mcfg = nse_config_from(cfg, g);
    const SpectralField w0 = initial_velocity(cfg, g);
    const NseIntegrator integ(g, mcfg);
    const BudgetWeights weights = make_budget_weights(g, mcfg.filter.theta);
    FlowState s{w0, 0.0};
    const long nsteps = std::llround(mcfg.t_end / mcfg.dt);

    auto observe = [&](long i, const FlowState& st) {
      if (bc > 0 && i % bc == 0)
        budget_samples.push_back(nse_budget_sample(st, mcfg, weights));
      if (nc > 0 && i % nc == 0) {
        NormRow row{st.time, {}};
        std::vector<double> v = norm_values(st.w);
        row.values = std::move(v);
        norm_rows.push_back(std::move(row));
      }
      if (dir && sc > 0 && (i % sc == 0 || i == nsteps) && i > 0) {
        char name[64];
        std::snprintf(name, sizeof name, "state_%06ld_w", i);
        write_snapshot(*dir / name, st.w, st.time);
        outputs.push_back(std::string(name) + ".bin");
      }
    };
    observe(0, s);
    for (long i = 1; i <= nsteps; ++i) {
      FlowState next = integ.advance(s);
      if (!state_ok(next.w)) {
        status.completed = false;
        status.failure = "blow-up detected: non-finite state at t = " +
                         fmt17(next.time) + "; last finite state at t = " +
                         fmt17(s.time);
        break;
      }
      s = std::move(next);
      status.steps_taken = i;
      observe(i, s);
    }
    status.end_time = s.time;
    if (dir && status.completed) {
      write_snapshot(*dir / "final_w", s.w, s.time);
      outputs.push_back("final_w.bin");
    }
    sample.pressure = pressure_solve(s.w, mcfg.filter);
    sample.velocity = std::move(s.w);
    sample.diverged = !status.completed;
  } else {
    const MHDConfig mcfg = mhd_config_from(cfg, g);
    auto [w0, b0] = initial_mhd(cfg, g);
    const MhdIntegrator integ(g, mcfg);
    const BudgetWeights weights = make_budget_weights(g, mcfg.filter.theta);
    MHDState s{std::move(w0), std::move(b0), 0.0};
    const long nsteps = std::llround(mcfg.t_end / mcfg.dt);

    auto observe = [&](long i, const MHDState& st) {
      if (bc > 0 && i % bc == 0)
        budget_samples.push_back(mhd_budget_sample(st, mcfg, weights));
      if (nc > 0 && i % nc == 0) {
        NormRow row{st.time, {}};
        std::vector<double> vw = norm_values(st.w);
        std::vector<double> vb = norm_values(st.b);
        row.values = std::move(vw);
        row.values.insert(row.values.end(), vb.begin(), vb.end());
        norm_rows.push_back(std::move(row));
      }
      if (dir && sc > 0 && (i % sc == 0 || i == nsteps) && i > 0) {
        char name[64];
        std::snprintf(name, sizeof name, "state_%06ld_w", i);
        write_snapshot(*dir / name, st.w, st.time);
        outputs.push_back(std::string(name) + ".bin");
        std::snprintf(name, sizeof name, "state_%06ld_b", i);
        write_snapshot(*dir / name, st.b, st.time);
        outputs.push_back(std::string(name) + ".bin");
      }
    };
    observe(0, s);
    for (long i = 1; i <= nsteps; ++i) {
      MHDState next = integ.advance(s);
      if (!state_ok(next.w) || !state_ok(next.b)) {
        status.completed = false;
        status.failure = "blow-up detected: non-finite state at t = " +
                         fmt17(next.time) + "; last finite state at t = " +
                         fmt17(s.time);
        break;
      }
      s = std::move(next);
      status.steps_taken = i;
      observe(i, s);
    }
    status.end_time = s.time;
    if (dir && status.completed) {
      write_snapshot(*dir / "final_w", s.w, s.time);
      write_snapshot(*dir / "final_b", s.b, s.time);
      outputs.push_back("final_w.bin");
      outputs.push_back("final_b.bin");
    }
    sample.magnetic = std::move(s.b);
    sample.velocity = std::move(s.w);
    sample.diverged = !status.completed;
  }

  DiskRun out;
  if (dir) {
    if (bc > 0) {
      write_budget_csv(*dir / "budget.csv", integrate_budget(budget_samples));
      outputs.push_back("budget.csv");
    }
    if (nc > 0) {
      write_norms_csv(*dir / "norms.csv", mhd, norm_rows);
      outputs.push_back("norms.csv");
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    nlohmann::ordered_json man;
    man["schema"] = "lesbox-manifest-v1";
    man["version"] = version_string;
    man["command"] = command;
    man["config"] = nlohmann::ordered_json::parse(run_config_to_json(cfg));
    man["completed"] = status.completed;
    man["failure"] = status.failure;
    man["steps"] = status.steps_taken;
    man["end_time"] = status.end_time;
    man["wall_seconds"] = wall;
    man["outputs"] = outputs;
    std::ofstream mf(*dir / "manifest.json", std::ios::trunc);
    mf << man.dump(2) << "\n";
    out.wall_seconds = wall;
  } else {
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  }
  sample.wall_seconds = out.wall_seconds;
  out.status = std::move(status);
  out.sample = std::move(sample);
  return out;
}

fs::path effective_dir(const RunConfig& cfg, const fs::path& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (!cfg.output.directory.empty()) return cfg.output.directory;
  return "out";
}

} // namespace

int command_run(const RunConfig& cfg, const std::filesystem::path& outdir) {
  const fs::path dir = effective_dir(cfg, outdir);
  const DiskRun r = run_to_disk(cfg, dir, "run");
  if (!r.status.completed) {
    std::fprintf(stderr, "%s\n", r.status.failure.c_str());
    return 2;
  }
  std::printf("run complete: %ld steps to t = %s, outputs in %s\n",
              r.status.steps_taken, fmt17(r.status.end_time).c_str(),
              dir.string().c_str());
  return 0;
}

int command_sweep(const RunConfig& cfg, const std::filesystem::path& outdir,
                  int workers) {
  if (!cfg.sweep) throw ConfigError("config: sweep command needs /sweep");
  const fs::path dir = effective_dir(cfg, outdir);
  fs::create_directories(dir);
  const std::vector<double>& alphas = cfg.sweep->alphas;
  const std::vector<double>& plist = cfg.sweep->lp_exponents;

  // Job 0 is the alpha = 0 reference; jobs 1..n are the sweep members.
  struct Job {
    double alpha;
    fs::path subdir;
    DiskRun result;
  };
  std::vector<Job> jobs;
  jobs.push_back({0.0, dir / "reference", {}});
  for (double a : alphas) {
    char name[48];
    std::snprintf(name, sizeof name, "alpha_%.6g", a);
    jobs.push_back({a, dir / name, {}});
  }

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      RunConfig mc = cfg;
      mc.sweep.reset();
      mc.filter.alpha = jobs[j].alpha;
      mc.output.directory.clear();
      jobs[j].result = run_to_disk(mc, jobs[j].subdir, "run");
    }
  };
  const int nw = std::max(1, workers);
  if (nw == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  const SweepResult res = alpha_sweep(
      alphas, jobs[0].result.sample,
      [&](double a) -> SweepSample {
        for (std::size_t j = 1; j < jobs.size(); ++j)
          if (jobs[j].alpha == a) return jobs[j].result.sample;
        throw std::logic_error("sweep: missing member run");
      },
      plist);

  const bool mhd = cfg.model == "mhd";
  std::ofstream csv(dir / "sweep.csv", std::ios::trunc);
  csv << "alpha,velocity_error_l2";
  for (double p : plist) csv << ",velocity_error_lp" << lp_tag(p);
  if (!mhd) csv << ",pressure_error_l2";
  if (mhd) {
    csv << ",magnetic_error_l2";
    for (double p : plist) csv << ",magnetic_error_lp" << lp_tag(p);
  }
  csv << ",diverged\n";
  for (const ConvergenceRecord& r : res.records) {
    csv << fmt17(r.alpha) << ',' << fmt17(r.velocity_error_l2);
    for (const auto& pv : r.velocity_error_lp) csv << ',' << fmt17(pv.second);
    if (!mhd) csv << ',' << fmt17(r.pressure_error_l2);
    if (mhd) {
      csv << ',' << fmt17(r.magnetic_error_l2);
      for (const auto& pv : r.magnetic_error_lp)
        csv << ',' << fmt17(pv.second);
    }
    csv << ',' << (r.diverged ? 1 : 0) << '\n';
  }
  csv.close();

  nlohmann::ordered_json man;
  man["schema"] = "lesbox-sweep-manifest-v1";
  man["version"] = version_string;
  man["command"] = "sweep";
  man["config"] = nlohmann::ordered_json::parse(run_config_to_json(cfg));
  man["velocity_strictly_decreasing"] = res.velocity_strictly_decreasing;
  man["pressure_strictly_decreasing"] = res.pressure_strictly_decreasing;
  man["magnetic_strictly_decreasing"] = res.magnetic_strictly_decreasing;
  man["velocity_slope"] = res.velocity_slope;
  std::ofstream mf(dir / "sweep_manifest.json", std::ios::trunc);
  mf << man.dump(2) << "\n";

  std::printf("sweep complete: %zu members, velocity slope %.4f, "
              "monotone %s, outputs in %s\n",
              alphas.size(), res.velocity_slope,
              res.velocity_strictly_decreasing ? "yes" : "no",
              dir.string().c_str());
  return 0;
}

} // namespace lesbox
