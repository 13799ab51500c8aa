#pragma once

#include <cstdint>
#include <vector>

#include "rrt/destruction.hpp"
#include "rrt/percolation.hpp"
#include "rrt/tree.hpp"

namespace fixtures {

// Eleven-vertex increasing tree used across the suites. Children of 0 are
// 1 and 4; children of 1 are 2 and 3; children of 3 are 5 and 7; 4 has the
// single child 6, 5 has 9, 7 has 8, and 8 has 10.
inline rrt::RootedTree tree11() {
  return rrt::RootedTree({0, 1, 1, 0, 3, 4, 3, 7, 5, 8});
}

// Marks on edges {2, 3, 5, 10}: clusters {0,1,4,6}, {2}, {3,7,8}, {5,9}, {10}.
inline rrt::MarkedTree marked11(double p = 0.5) {
  std::vector<std::uint8_t> marks(10, 0);
  for (int e : {2, 3, 5, 10}) marks[static_cast<std::size_t>(e - 1)] = 1;
  return rrt::MarkedTree(tree11(), marks, p);
}

// Destruction trajectory on tree11 whose pattern before time 1 equals the
// marks above, with edge 5 cut before edge 3 so the component {5,9} detaches
// straight from the root component.
inline rrt::DestructionRecord record11() {
  rrt::DestructionRecord rec;
  rec.tree = tree11();
  rec.removal_time = {1.5, 0.3, 0.2, 1.6, 0.1, 1.7, 1.8, 1.9, 2.0, 0.4};
  rec.removal_order = {5, 3, 2, 10, 1, 4, 6, 7, 8, 9};
  return rec;
}

}  // namespace fixtures
