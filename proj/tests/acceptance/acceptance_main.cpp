// One line per acceptance criterion; nonzero exit if any criterion fails.
// Optional arguments: criterion numbers to run.
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "zpole/verify.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
  if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  const zpole::VerifyOptions opts;
  bool all = true;
  for (int id : ids) {
    const zpole::CriterionReport r = zpole::run_criterion(id, opts);
    const zpole::Check* worst = nullptr;
    for (const auto& c : r.checks) {
      if (!c.pass) {
        worst = &c;
        break;
      }
    }
    std::printf("criterion %d: %s  %s  (%zu checks, %.2fs", id, r.pass() ? "PASS" : "FAIL",
                r.title.c_str(), r.checks.size(), r.seconds);
    if (r.time_limit > 0) std::printf(" of %.0fs", r.time_limit);
    std::printf(")");
    if (worst) std::printf("  first failing: %s = %.3g", worst->name.c_str(), worst->value);
    std::printf("\n");
    all = all && r.pass();
  }
  return all ? 0 : 1;
}
