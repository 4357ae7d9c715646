#include "loopeq/config.hpp"

#include <cmath>
#include <fstream>

#include "loopeq/error.hpp"

namespace loopeq {

namespace {

template <class T>
T read(const nlohmann::ordered_json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    usage_error("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig config_from_json(const nlohmann::ordered_json& j, RunConfig c) {
  if (!j.is_object()) usage_error("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "command") c.command = read<std::string>(j, key);
    else if (key == "upsilon") c.upsilon = read<int>(j, key);
    else if (key == "t") c.t = read<std::vector<double>>(j, key);
    else if (key == "probe_m") c.probe_m = read<int>(j, key);
    else if (key == "jet_order") c.jet_order = read<int>(j, key);
    else if (key == "g_max") c.g_max = read<int>(j, key);
    else if (key == "laurent_depth") c.laurent_depth = read<int>(j, key);
    else if (key == "taylor_order") c.taylor_order = read<int>(j, key);
    else if (key == "delta") c.delta = read<double>(j, key);
    else if (key == "probe_tol") c.probe_tol = read<double>(j, key);
    else if (key == "T_bound") c.T_bound = read<double>(j, key);
    else if (key == "gamma") c.gamma = read<double>(j, key);
    else if (key == "suite") c.suite = read<std::string>(j, key);
    else if (key == "seed") c.seed = read<std::uint64_t>(j, key);
    else if (key == "out") c.out = read<std::string>(j, key);
    else if (key == "format") c.format = read<std::string>(j, key);
    else usage_error("unknown config key '" + key + "'");
  }
  return c;
}

RunConfig config_from_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) usage_error("cannot read config file " + path);
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    usage_error("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j, base);
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["upsilon"] = c.upsilon;
  j["t"] = c.t;
  j["probe_m"] = c.probe_m;
  j["jet_order"] = c.jet_order;
  j["g_max"] = c.g_max;
  j["laurent_depth"] = c.laurent_depth;
  j["taylor_order"] = c.taylor_order;
  j["delta"] = c.delta;
  j["probe_tol"] = c.probe_tol;
  j["T_bound"] = c.T_bound;
  j["gamma"] = c.gamma;
  j["suite"] = c.suite;
  j["seed"] = c.seed;
  j["format"] = c.format;
  return j;
}

void validate(const RunConfig& c) {
  if (c.command != "eqm" && c.command != "resolvent" && c.command != "loop" && c.command != "verify")
    usage_error("command must be one of eqm, resolvent, loop, verify");
  if (c.upsilon < 2 || c.upsilon % 2) usage_error("upsilon must be even and at least 2");
  if (int(c.t.size()) > c.upsilon) usage_error("more couplings than upsilon");
  for (double v : c.t)
    if (!std::isfinite(v)) usage_error("couplings must be finite");
  std::vector<double> t = c.t;
  t.resize(c.upsilon, 0.0);
  bool zero = true;
  for (double v : t) zero = zero && v == 0.0;
  if (!zero && !(t.back() > 0.0)) usage_error("t_upsilon must be positive");
  if (c.probe_m != 0 && c.probe_m < c.upsilon) usage_error("probe_m must be 0 or at least upsilon");
  if (c.probe_m > 120) usage_error("probe_m must not exceed 120");
  if (c.jet_order < 0 || c.jet_order > 4) usage_error("jet_order must lie in 0..4");
  // genus 3 runs but loses its digits to the probe components away from t = 0
  if (c.g_max < 0 || c.g_max > 2) usage_error("g_max must lie in 0..2");
  if (c.laurent_depth < 1 || c.laurent_depth > 60) usage_error("laurent_depth must lie in 1..60");
  if (c.taylor_order < 1 || c.taylor_order > 6) usage_error("taylor_order must lie in 1..6");
  if (!(c.delta > 0.0) || !std::isfinite(c.delta)) usage_error("delta must be positive");
  if (!(c.probe_tol >= 0.0 && c.probe_tol < 1.0)) usage_error("probe_tol must lie in [0, 1)");
  if (!(c.T_bound > 0.0) || !(c.gamma > 0.0)) usage_error("T_bound and gamma must be positive");
  if (c.suite != "gaussian" && c.suite != "quartic" && c.suite != "full" && c.suite != "none")
    usage_error("suite must be one of gaussian, quartic, full, none");
  if (c.format != "json" && c.format != "csv") usage_error("format must be json or csv");
  if (c.command != "verify") {
    Admissibility a = admissibility_check(physical_field(c), {c.T_bound, c.gamma});
    if (!a.ok) usage_error("couplings not admissible: " + a.reason);
  }
}

ExternalField physical_field(const RunConfig& c) { return build_field(c.upsilon, c.t, c.upsilon, c.jet_order); }

LoopOptions loop_options(const RunConfig& c) {
  LoopOptions o;
  o.g_max = c.g_max;
  o.laurent_depth = c.laurent_depth;
  o.taylor_order = c.taylor_order;
  o.probe_m = c.probe_m;
  o.probe_tol = c.probe_tol;
  return o;
}

}  // namespace loopeq
