#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace loopeq {

// gaussian checks run at t = 0, quartic ones away from it.
enum class Scope { gaussian, quartic };

struct CheckResult {
  int criterion = 0;
  std::string name;
  Scope scope = Scope::gaussian;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
  bool timing = false;  // value is a wall-clock time, kept out of diff-stable output
};

struct VerifyOptions {
  std::string suite = "full";  // gaussian | quartic | full | none
  int g_max = 2;
  std::uint64_t seed = 20240917;
};

constexpr int kCriteria = 13;
std::string criterion_title(int k);

// The checks of criterion k that belong to the suite.
std::vector<CheckResult> run_criterion(int k, const VerifyOptions& opt);
std::vector<CheckResult> run_suite(const VerifyOptions& opt);

bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace loopeq
