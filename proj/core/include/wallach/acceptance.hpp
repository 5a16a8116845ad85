#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wallach {

struct AcceptanceOptions {
  /// Added to the x1^4 coefficient of F2 wherever the suite linearizes;
  /// nonzero values must make A3 fail.
  double f2_x1_quartic_shift = 0.0;
  std::uint64_t seed = 20240613;
  /// Restrict to these ids (e.g. "A3"); empty runs all twelve.
  std::vector<std::string> only;
};

struct AcceptanceResult {
  std::string id;
  std::string anchor;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<AcceptanceResult> run_acceptance(const AcceptanceOptions& options = {});

void to_json(nlohmann::json& j, const AcceptanceResult& r);

}  // namespace wallach
