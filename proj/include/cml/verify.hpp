#pragma once

#include <cstdint>

#include "cml/certificate.hpp"

namespace cml {

struct SuiteConfig {
  std::uint64_t seed = 42;
  int trials = 1000;      // per cheap property; expensive ones run trials/10
  int parallelism = 1;
  TolerancePolicy tolerances;
};

// Runs every module invariant as a seeded property check and aggregates the
// results into one certificate (one check per property). Deterministic for a
// fixed (seed, trials): the per-property random streams are derived by
// counter splitting, so the parallelism level never changes any outcome.
Certificate run_suite(const SuiteConfig& cfg);

}  // namespace cml
