#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace cachecraft {

// Demand vectors are numbered 0..N^K-1 in lexicographic order, user 0 most
// significant. Parallel kernels split that range into a fixed number of
// blocks independent of the thread count and reduce the per-block partials
// in block order, so results do not depend on scheduling.
inline constexpr std::uint64_t kReductionBlocks = 256;

inline std::uint64_t block_begin(std::uint64_t total, std::uint64_t blocks, std::uint64_t b) {
  return total / blocks * b + std::min(b, total % blocks);
}

inline std::uint64_t block_count(std::uint64_t total) {
  return total < kReductionBlocks ? (total == 0 ? 1 : total) : kReductionBlocks;
}

// Calls f(demand, probability) for demand indices [begin, end).
template <typename F>
void for_each_demand(const std::vector<double>& p, int num_users, std::uint64_t begin,
                     std::uint64_t end, F&& f) {
  if (begin >= end) return;
  const auto n = static_cast<std::uint64_t>(p.size());
  std::vector<int> d(static_cast<std::size_t>(num_users));
  std::uint64_t idx = begin;
  for (int k = num_users - 1; k >= 0; --k) {
    d[k] = static_cast<int>(idx % n);
    idx /= n;
  }
  // prefix[k] is the product of p over users 0..k-1.
  std::vector<double> prefix(static_cast<std::size_t>(num_users) + 1, 1.0);
  for (int k = 0; k < num_users; ++k) prefix[k + 1] = prefix[k] * p[d[k]];
  for (std::uint64_t i = begin; i < end; ++i) {
    f(static_cast<const std::vector<int>&>(d), prefix[num_users]);
    int k = num_users - 1;
    while (k >= 0 && ++d[k] == static_cast<int>(n)) {
      d[k] = 0;
      --k;
    }
    if (k < 0) break;
    for (int u = k; u < num_users; ++u) prefix[u + 1] = prefix[u] * p[d[u]];
  }
}

}  // namespace cachecraft
