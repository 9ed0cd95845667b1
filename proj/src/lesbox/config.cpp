#include "lesbox/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include <nlohmann/json.hpp>

namespace lesbox {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigError("config: unknown key " + path + "/" + item.key());
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double need_number(const json& obj, const std::string& path, const char* key) {
  const json* v = find(obj, key);
  if (!v || !v->is_number())
    throw ConfigError("config: " + path + "/" + key + " must be a number");
  return v->get<double>();
}

double opt_number(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number())
    throw ConfigError("config: " + path + "/" + key + " must be a number");
  return v->get<double>();
}

int opt_int(const json& obj, const std::string& path, const char* key,
            int fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer())
    throw ConfigError("config: " + path + "/" + key + " must be an integer");
  return v->get<int>();
}

std::string need_string(const json& obj, const std::string& path,
                        const char* key) {
  const json* v = find(obj, key);
  if (!v || !v->is_string())
    throw ConfigError("config: " + path + "/" + key + " must be a string");
  return v->get<std::string>();
}

std::string opt_string(const json& obj, const std::string& path,
                       const char* key, const std::string& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string())
    throw ConfigError("config: " + path + "/" + key + " must be a string");
  return v->get<std::string>();
}

bool opt_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean())
    throw ConfigError("config: " + path + "/" + key + " must be a boolean");
  return v->get<bool>();
}

} // namespace

RunConfig parse_run_config(const std::string& json_text, bool allow_sweep) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: root must be an object");

  check_keys(root, "",
             {"model", "grid", "filter", "physics", "time",
              "initial_condition", "filter_initial_condition", "forcing",
              "output", "seed", "sweep"});

  RunConfig cfg;
  cfg.model = need_string(root, "", "model");
  if (cfg.model != "nse" && cfg.model != "mhd")
    throw ConfigError("config: /model must be \"nse\" or \"mhd\"");

  const json* grid = find(root, "grid");
  if (!grid || !grid->is_object())
    throw ConfigError("config: /grid must be an object");
  check_keys(*grid, "/grid", {"n", "period", "dealias_fraction"});
  cfg.grid.n = opt_int(*grid, "/grid", "n", 0);
  if (cfg.grid.n < 4 || cfg.grid.n % 2 != 0)
    throw ConfigError("config: /grid/n must be even and >= 4");
  cfg.grid.period = opt_number(*grid, "/grid", "period", two_pi);
  if (!(cfg.grid.period > 0.0))
    throw ConfigError("config: /grid/period must be positive");
  cfg.grid.dealias_fraction =
      opt_number(*grid, "/grid", "dealias_fraction", 2.0 / 3.0);
  if (!(cfg.grid.dealias_fraction > 0.0) || cfg.grid.dealias_fraction > 1.0)
    throw ConfigError("config: /grid/dealias_fraction must lie in (0, 1]");

  const json* filter = find(root, "filter");
  if (!filter || !filter->is_object())
    throw ConfigError("config: /filter must be an object");
  check_keys(*filter, "/filter", {"alpha", "theta"});
  cfg.filter.alpha = need_number(*filter, "/filter", "alpha");
  cfg.filter.theta = opt_number(*filter, "/filter", "theta", theta_critical);
  if (!(cfg.filter.alpha >= 0.0))
    throw ConfigError("config: /filter/alpha must be >= 0");
  if (!(cfg.filter.theta > 0.0) || cfg.filter.theta > 1.0)
    throw ConfigError("config: /filter/theta must lie in (0, 1]");

  const json* phys = find(root, "physics");
  if (!phys || !phys->is_object())
    throw ConfigError("config: /physics must be an object");
  if (cfg.model == "nse") {
    check_keys(*phys, "/physics", {"nu"});
    cfg.nu = need_number(*phys, "/physics", "nu");
    if (!(cfg.nu > 0.0)) throw ConfigError("config: /physics/nu must be > 0");
  } else {
    check_keys(*phys, "/physics", {"nu1", "nu2"});
    cfg.nu1 = need_number(*phys, "/physics", "nu1");
    cfg.nu2 = need_number(*phys, "/physics", "nu2");
    if (!(cfg.nu1 > 0.0) || !(cfg.nu2 > 0.0))
      throw ConfigError("config: /physics/nu1 and nu2 must be > 0");
  }

  const json* time = find(root, "time");
  if (!time || !time->is_object())
    throw ConfigError("config: /time must be an object");
  check_keys(*time, "/time", {"dt", "t_end"});
  cfg.time.dt = need_number(*time, "/time", "dt");
  cfg.time.t_end = need_number(*time, "/time", "t_end");
  if (!(cfg.time.dt > 0.0))
    throw ConfigError("config: /time/dt must be positive");
  if (cfg.time.t_end < 0.0)
    throw ConfigError("config: /time/t_end must be >= 0");
  const double steps = cfg.time.t_end / cfg.time.dt;
  if (std::abs(steps - std::llround(steps)) > 1e-9 * std::max(1.0, steps))
    throw ConfigError(
        "config: /time/t_end must be an integer multiple of dt");

  const json* ic = find(root, "initial_condition");
  if (!ic || !ic->is_object())
    throw ConfigError("config: /initial_condition must be an object");
  check_keys(*ic, "/initial_condition",
             {"type", "amplitude", "velocity_amplitude", "magnetic_amplitude",
              "spectrum_slope", "velocity_path", "magnetic_path"});
  cfg.initial_condition.type = need_string(*ic, "/initial_condition", "type");
  cfg.initial_condition.amplitude =
      opt_number(*ic, "/initial_condition", "amplitude", 1.0);
  cfg.initial_condition.velocity_amplitude =
      opt_number(*ic, "/initial_condition", "velocity_amplitude", 1.0);
  cfg.initial_condition.magnetic_amplitude =
      opt_number(*ic, "/initial_condition", "magnetic_amplitude", 1.0);
  cfg.initial_condition.spectrum_slope =
      opt_number(*ic, "/initial_condition", "spectrum_slope", -2.0);
  cfg.initial_condition.velocity_path =
      opt_string(*ic, "/initial_condition", "velocity_path", "");
  cfg.initial_condition.magnetic_path =
      opt_string(*ic, "/initial_condition", "magnetic_path", "");
  {
    const std::string& t = cfg.initial_condition.type;
    const bool nse_ok = t == "taylor-green" || t == "shear-mode" ||
                        t == "random-solenoidal" || t == "file";
    const bool mhd_ok =
        t == "orszag-tang" || t == "random-solenoidal" || t == "file";
    if ((cfg.model == "nse" && !nse_ok) || (cfg.model == "mhd" && !mhd_ok))
      throw ConfigError("config: /initial_condition/type \"" + t +
                        "\" is not valid for model " + cfg.model);
    if (t == "file") {
      if (cfg.initial_condition.velocity_path.empty())
        throw ConfigError(
            "config: /initial_condition/velocity_path is required");
      if (cfg.model == "mhd" && cfg.initial_condition.magnetic_path.empty())
        throw ConfigError(
            "config: /initial_condition/magnetic_path is required");
    }
  }

  cfg.filter_initial_condition =
      opt_bool(root, "", "filter_initial_condition", true);

  if (const json* forcing = find(root, "forcing")) {
    if (!forcing->is_object())
      throw ConfigError("config: /forcing must be an object");
    check_keys(*forcing, "/forcing", {"type", "amplitude"});
    cfg.forcing.type = opt_string(*forcing, "/forcing", "type", "none");
    cfg.forcing.amplitude = opt_number(*forcing, "/forcing", "amplitude", 0.0);
    if (cfg.forcing.type != "none" && cfg.forcing.type != "abc")
      throw ConfigError("config: /forcing/type must be \"none\" or \"abc\"");
  }

  if (const json* output = find(root, "output")) {
    if (!output->is_object())
      throw ConfigError("config: /output must be an object");
    check_keys(*output, "/output",
               {"directory", "budget_cadence", "norm_cadence",
                "snapshot_cadence"});
    cfg.output.directory = opt_string(*output, "/output", "directory", "");
    cfg.output.budget_cadence =
        opt_int(*output, "/output", "budget_cadence", 1);
    cfg.output.norm_cadence = opt_int(*output, "/output", "norm_cadence", 1);
    cfg.output.snapshot_cadence =
        opt_int(*output, "/output", "snapshot_cadence", 0);
    if (cfg.output.budget_cadence < 0 || cfg.output.norm_cadence < 0 ||
        cfg.output.snapshot_cadence < 0)
      throw ConfigError("config: /output cadences must be >= 0");
  }

  if (const json* seed = find(root, "seed")) {
    if (!seed->is_number_unsigned())
      throw ConfigError("config: /seed must be a non-negative integer");
    cfg.seed = seed->get<std::uint64_t>();
  }

  if (const json* sweep = find(root, "sweep")) {
    if (!allow_sweep)
      throw ConfigError("config: /sweep is only valid for the sweep command");
    if (!sweep->is_object())
      throw ConfigError("config: /sweep must be an object");
    check_keys(*sweep, "/sweep", {"alphas", "lp_exponents"});
    SweepConfig sc;
    const json* alphas = find(*sweep, "alphas");
    if (!alphas || !alphas->is_array() || alphas->empty())
      throw ConfigError("config: /sweep/alphas must be a non-empty array");
    for (const json& a : *alphas) {
      if (!a.is_number() || !(a.get<double>() > 0.0))
        throw ConfigError("config: /sweep/alphas must be positive numbers");
      sc.alphas.push_back(a.get<double>());
    }
    for (std::size_t i = 1; i < sc.alphas.size(); ++i)
      if (!(sc.alphas[i] < sc.alphas[i - 1]))
        throw ConfigError(
            "config: /sweep/alphas must be strictly decreasing");
    if (const json* lp = find(*sweep, "lp_exponents")) {
      if (!lp->is_array())
        throw ConfigError("config: /sweep/lp_exponents must be an array");
      sc.lp_exponents.clear();
      for (const json& p : *lp) {
        if (!p.is_number() || !(p.get<double>() >= 1.0))
          throw ConfigError("config: /sweep/lp_exponents must be >= 1");
        sc.lp_exponents.push_back(p.get<double>());
      }
    }
    cfg.sweep = std::move(sc);
  } else if (allow_sweep) {
    throw ConfigError("config: sweep command needs a /sweep block");
  }

  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& file,
                          bool allow_sweep) {
  std::ifstream in(file);
  if (!in)
    throw ConfigError("config: cannot open " + file.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_run_config(text, allow_sweep);
}

std::string run_config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["model"] = cfg.model;
  j["grid"] = {{"n", cfg.grid.n},
               {"period", cfg.grid.period},
               {"dealias_fraction", cfg.grid.dealias_fraction}};
  j["filter"] = {{"alpha", cfg.filter.alpha}, {"theta", cfg.filter.theta}};
  if (cfg.model == "nse")
    j["physics"] = {{"nu", cfg.nu}};
  else
    j["physics"] = {{"nu1", cfg.nu1}, {"nu2", cfg.nu2}};
  j["time"] = {{"dt", cfg.time.dt}, {"t_end", cfg.time.t_end}};
  nlohmann::ordered_json ic;
  ic["type"] = cfg.initial_condition.type;
  if (cfg.initial_condition.type == "taylor-green" ||
      cfg.initial_condition.type == "shear-mode")
    ic["amplitude"] = cfg.initial_condition.amplitude;
  if (cfg.initial_condition.type == "orszag-tang") {
    ic["velocity_amplitude"] = cfg.initial_condition.velocity_amplitude;
    ic["magnetic_amplitude"] = cfg.initial_condition.magnetic_amplitude;
  }
  if (cfg.initial_condition.type == "random-solenoidal") {
    ic["amplitude"] = cfg.initial_condition.amplitude;
    if (cfg.model == "mhd")
      ic["magnetic_amplitude"] = cfg.initial_condition.magnetic_amplitude;
    ic["spectrum_slope"] = cfg.initial_condition.spectrum_slope;
  }
  if (cfg.initial_condition.type == "file") {
    ic["velocity_path"] = cfg.initial_condition.velocity_path;
    if (cfg.model == "mhd")
      ic["magnetic_path"] = cfg.initial_condition.magnetic_path;
  }
  j["initial_condition"] = std::move(ic);
  j["filter_initial_condition"] = cfg.filter_initial_condition;
  j["forcing"] = {{"type", cfg.forcing.type},
                  {"amplitude", cfg.forcing.amplitude}};
  j["output"] = {{"directory", cfg.output.directory},
                 {"budget_cadence", cfg.output.budget_cadence},
                 {"norm_cadence", cfg.output.norm_cadence},
                 {"snapshot_cadence", cfg.output.snapshot_cadence}};
  j["seed"] = cfg.seed;
  if (cfg.sweep) {
    j["sweep"] = {{"alphas", cfg.sweep->alphas},
                  {"lp_exponents", cfg.sweep->lp_exponents}};
  }
  return j.dump(2);
}

} // namespace lesbox
