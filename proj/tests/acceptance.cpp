// Acceptance criteria 1..13: one PASS/FAIL line per criterion, then its checks.
// Usage: loopeq_acceptance [k ...]   (all criteria when no k is given)

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "loopeq/error.hpp"
#include "loopeq/verify.hpp"

using namespace loopeq;

int main(int argc, char** argv) {
  std::vector<int> ks;
  for (int i = 1; i < argc; ++i) ks.push_back(std::atoi(argv[i]));
  if (ks.empty())
    for (int k = 1; k <= kCriteria; ++k) ks.push_back(k);
  VerifyOptions opt;
  opt.suite = "full";
  opt.g_max = 2;
  bool ok = true;
  for (int k : ks) {
    std::vector<CheckResult> checks;
    std::string error;
    try {
      checks = run_criterion(k, opt);
    } catch (const Error& e) {
      error = e.what();
    }
    bool pass = error.empty() && !checks.empty() && all_pass(checks);
    ok = ok && pass;
    std::printf("criterion %2d %s: %s\n", k, pass ? "PASS" : "FAIL", error.empty() ? criterion_title(k).c_str() : error.c_str());
    for (const auto& c : checks)
      std::printf("    %s %-58s %s %.6g (limit %.3g) %s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(),
                  c.timing ? "seconds" : "value", c.value, c.threshold, c.detail.c_str());
  }
  return ok ? 0 : 1;
}
