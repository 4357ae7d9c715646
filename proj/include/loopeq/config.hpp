#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopeq/loop.hpp"
#include "loopeq/model.hpp"

namespace loopeq {

struct RunConfig {
  std::string command;  // eqm | resolvent | loop | verify
  int upsilon = 4;
  std::vector<double> t = {0.0, 0.0, 0.0, 0.0};  // physical t_1..t_upsilon
  int probe_m = 0;                               // 0 picks it from the geometry
  int jet_order = 0;                             // eqm only; the loop solver sets its own
  int g_max = 1;
  int laurent_depth = 12;
  int taylor_order = 1;
  double delta = 2.0;      // contour standoff for the reported loop residuals
  double probe_tol = 0.0;  // 0 keeps the solver default
  double T_bound = 1.0, gamma = 1.0;
  std::string suite = "full";  // gaussian | quartic | full | none
  std::uint64_t seed = 20240917;
  std::string out;  // empty writes to stdout
  std::string format = "json";
};

// Reads known keys; unknown keys are usage errors so typos never pass silently.
RunConfig config_from_json(const nlohmann::ordered_json& j, RunConfig base = {});
RunConfig config_from_file(const std::string& path, RunConfig base = {});
nlohmann::ordered_json config_to_json(const RunConfig& c);

// Throws a usage error naming the first problem.
void validate(const RunConfig& c);

ExternalField physical_field(const RunConfig& c);
LoopOptions loop_options(const RunConfig& c);

}  // namespace loopeq
