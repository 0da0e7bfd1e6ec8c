#include "cml/plane_curves.hpp"

#include <algorithm>
#include <cmath>

namespace cml {

std::int64_t jordan_totient(std::int64_t m) {
  if (m < 1) throw Error(ErrorKind::InvalidInput, "totient argument must be positive");
  if (m > 3000000000LL)
    throw Error(ErrorKind::InvalidInput, "totient argument too large for 64-bit arithmetic");
  std::int64_t j = 1;
  std::int64_t rest = m;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    std::int64_t pk = 1;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
    }
    j *= pk * pk - (pk / p) * (pk / p);
  }
  if (rest > 1) j *= rest * rest - 1;
  return j;
}

std::vector<MultisectionSize> admissible_sizes(std::int64_t bound) {
  if (bound < 9) throw Error(ErrorKind::InvalidInput, "bound must be at least 9");
  if (bound > 20000000LL)
    throw Error(ErrorKind::InvalidInput, "bound too large for the subset-sum table");

  // Values 9 * J_2(m); each index m is available at most once.
  std::vector<std::int64_t> value{0};  // index 0 unused
  for (std::int64_t m = 1;; ++m) {
    const std::int64_t v = 9 * jordan_totient(m);
    if (v > bound) {
      // J_2 is not monotone, but J_2(m) > m^2 / 2, so once 9 m^2 / 2 clears
      // the bound no later index can contribute.
      if (9 * m * m / 2 > bound) break;
      value.push_back(0);  // mark unusable
      continue;
    }
    value.push_back(v);
  }

  // 0/1 subset-sum with witness tracking: parent[n] = largest index m used to
  // first reach n. Processing m in increasing order keeps witnesses
  // deterministic.
  std::vector<std::int32_t> parent(static_cast<std::size_t>(bound) + 1, -1);
  parent[0] = 0;
  for (std::int64_t m = 1; m < static_cast<std::int64_t>(value.size()); ++m) {
    const std::int64_t v = value[static_cast<std::size_t>(m)];
    if (v == 0) continue;
    for (std::int64_t n = bound; n >= v; --n)
      if (parent[static_cast<std::size_t>(n)] < 0 && parent[static_cast<std::size_t>(n - v)] >= 0)
        parent[static_cast<std::size_t>(n)] = static_cast<std::int32_t>(m);
  }

  std::vector<MultisectionSize> out;
  for (std::int64_t n = 1; n <= bound; ++n) {
    if (parent[static_cast<std::size_t>(n)] < 0) continue;
    MultisectionSize item;
    item.n = n;
    std::int64_t rest = n;
    while (rest > 0) {
      const std::int64_t m = parent[static_cast<std::size_t>(rest)];
      item.index_set.push_back(m);
      rest -= value[static_cast<std::size_t>(m)];
    }
    std::sort(item.index_set.begin(), item.index_set.end());
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<std::int64_t> banerjee_chen_sizes(std::int64_t bound) {
  if (bound < 216) throw Error(ErrorKind::InvalidInput, "bound must be at least 216");
  std::vector<std::int64_t> out;
  // J_2(m) > m^2 / 2 bounds the search range.
  for (std::int64_t m = 4; 18 * m * m / 2 <= bound; ++m) {
    const std::int64_t v = 18 * jordan_totient(m);
    if (v <= bound) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace cml
