// Runs the acceptance criteria (all, or the ids given as arguments) and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <cstdlib>
#include <cstdio>
#include <string>
#include <vector>

#include "epival/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace epival::acceptance;
  std::vector<int> ids;
  for (int a = 1; a < argc; ++a) ids.push_back(std::atoi(argv[a]));
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  }
  int workers = 0;
  if (const char* env = std::getenv("EPIVAL_WORKERS")) workers = std::atoi(env);

  bool all_pass = true;
  for (int id : ids) {
    try {
      CriterionResult r = run_criterion(id, workers);
      std::printf("criterion %2d [%s]: %s  (%s)\n", r.id, r.name.c_str(),
                  r.pass ? "PASS" : "FAIL", r.details.c_str());
      all_pass = all_pass && r.pass;
    } catch (const std::exception& e) {
      std::printf("criterion %2d: FAIL  (exception: %s)\n", id, e.what());
      all_pass = false;
    }
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
