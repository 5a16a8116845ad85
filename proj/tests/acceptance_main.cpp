// Runs every acceptance criterion and prints one line per criterion.
// Exit status is 0 only when all selected criteria pass.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "wallach/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria A1-A12"};
  wallach::AcceptanceOptions options;
  app.add_option("--only", options.only, "Criterion ids");
  app.add_option("--f2-shift", options.f2_x1_quartic_shift, "Perturb the x1^4 coefficient of F2");
  app.add_option("--seed", options.seed, "RNG seed");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (const auto& r : wallach::run_acceptance(options)) {
    std::printf("%-4s %s  %s  [%.2f s]  %s\n", r.id.c_str(), r.passed ? "PASS" : "FAIL", r.anchor.c_str(), r.seconds,
                r.detail.c_str());
    failed += r.passed ? 0 : 1;
  }
  std::printf("%d failed\n", failed);
  return failed == 0 ? 0 : 1;
}
