#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cml/poly.hpp"

namespace cml {

inline constexpr const char kVersion[] = "0.1.0";

using Json = nlohmann::ordered_json;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double measured = 0.0;
};

// Machine-checkable record of a construction: which inputs went in, what came
// out, and the list of verifications that were run. Serialization is fully
// deterministic (insertion-ordered keys, no timestamps), so byte-identical
// reruns are part of the contract.
struct Certificate {
  std::string construction;
  Json inputs = Json::object();
  Json outputs = Json::object();
  std::vector<CheckResult> checks;
  TolerancePolicy tolerances;
  std::uint64_t seed = 0;
  std::string version = kVersion;

  void add_check(std::string name, bool check_passed, std::string detail, double measured) {
    checks.push_back({std::move(name), check_passed, std::move(detail), measured});
  }

  bool passed() const {
    if (checks.empty()) return false;
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

}  // namespace cml
