// Acceptance runner: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. `--criterion N` runs a single one.

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <vector>

#include "wqed/validate.hpp"

int main(int argc, char** argv) {
  setenv("OPENBLAS_NUM_THREADS", "1", 0);
  std::vector<int> only;
  int jobs = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only.push_back(std::atoi(argv[++i]));
    else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc)
      jobs = std::atoi(argv[++i]);
    else {
      std::cerr << "usage: wqed_acceptance [--criterion N]... [--jobs N]\n";
      return 2;
    }
  }
  const auto results = wqed::run_acceptance(std::cout, jobs, only);
  return wqed::all_passed(results) ? 0 : 1;
}
