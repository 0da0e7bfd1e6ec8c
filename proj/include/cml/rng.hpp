#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cml {

// splitmix64 finalizer. Used to derive independent per-property seeds from a
// single master seed so that adding or reordering suite properties does not
// perturb the streams of the others.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  return mix_seed(master + 0x9e3779b97f4a7c15ULL * (counter + 1));
}

// Deterministic uniform generator. The double mapping uses the raw engine
// output directly ((u >> 11) * 2^-53) instead of std::uniform_real_distribution,
// whose output is implementation-defined; mt19937_64 itself is pinned by the
// standard, so streams are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform over {lo, ..., hi} inclusive via rejection-free modulo on a
  // 64-bit draw; the bias is < 2^-50 for the tiny ranges used here.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  std::complex<double> unit_disk() {
    while (true) {
      double re = uniform(-1.0, 1.0);
      double im = uniform(-1.0, 1.0);
      if (re * re + im * im <= 1.0) return {re, im};
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cml
