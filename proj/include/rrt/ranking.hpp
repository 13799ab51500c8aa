#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "rrt/rng.hpp"

namespace rrt {

// Returns a permutation of {0..keys.size()-1} ordering keys decreasingly;
// runs of equal keys are put in uniformly random order. Consumes rng only
// when ties exist, one Fisher-Yates shuffle per tied run.
template <typename Key>
std::vector<std::size_t> rank_descending(const std::vector<Key>& keys, RngStream& rng) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && keys[order[j]] == keys[order[i]]) ++j;
    for (std::size_t k = j - 1; k > i; --k) {
      const std::size_t pick = i + static_cast<std::size_t>(rng.next_below(k - i + 1));
      std::swap(order[k], order[pick]);
    }
    i = j;
  }
  return order;
}

}  // namespace rrt
