#pragma once

// Brute-force reference for negotiate(): enumerate every user -> band map,
// keep the ones the sharing rule admits, and pick the one that best serves
// users in AL rank order (lexicographic on preference position).

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "uwbsim/allocator.hpp"

namespace uwbsim::oracle {

inline Assignment negotiate_oracle(std::span<const AllocationLevel> levels) {
  std::vector<AllocationLevel> ranked(levels.begin(), levels.end());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    for (std::size_t j = i + 1; j < ranked.size(); ++j) {
      const bool swap = ranked[j].al > ranked[i].al || (ranked[j].al == ranked[i].al && ranked[j].user < ranked[i].user);
      if (swap) std::swap(ranked[i], ranked[j]);
    }
  }
  const std::size_t n = ranked.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;

  std::vector<int> best_cost;
  std::vector<int> best_map;
  std::vector<int> map(n);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      map[i] = static_cast<int>(c % 3) + 1;
      c /= 3;
    }
    bool ok = true;
    // The top three ranks each hold a band alone.
    for (std::size_t i = 0; i < std::min<std::size_t>(n, 3) && ok; ++i) {
      for (std::size_t j = i + 1; j < std::min<std::size_t>(n, 3); ++j) ok = ok && map[i] != map[j];
    }
    // With a fourth user, the band of lowest aggregate AL is the one held by
    // rank 3 (the weakest dedicated user); ties resolve to it as well.
    if (ok && n == 4) ok = map[3] == map[2];
    if (!ok) continue;
    std::vector<int> cost(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& seq = ranked[i].sequence;
      cost[i] = static_cast<int>(std::find(seq.begin(), seq.end(), map[i]) - seq.begin());
    }
    if (best_map.empty() || cost < best_cost) {
      best_cost = cost;
      best_map = map;
    }
  }
  Assignment a;
  for (std::size_t i = 0; i < n; ++i) a.bands[static_cast<std::size_t>(best_map[i] - 1)].push_back(ranked[i].user);
  return a;
}

}  // namespace uwbsim::oracle
