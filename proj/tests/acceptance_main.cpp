// Acceptance suite: one line per criterion, exit code 0 iff all pass.

#include <cstdio>
#include <cstring>

#include "xmt/experiment.hpp"

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
  }
  const auto results = xmt::experiment::verify_all(quick);
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %2d. %s (%.1fs)\n    %s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.c_str());
    all = all && r.passed;
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
  return all ? 0 : 1;
}
