#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <utility>

#include "rrt/tree.hpp"

namespace rrt {

// Exact small-instance references computed by exhaustive enumeration over all
// increasing trees (and mark patterns / edge choices). Everything here walks
// ancestor paths directly from the definitions, independently of the scan
// routines it is used to check. All functions are guarded at n <= 10.

// Counts over (tree, edge) pairs of the size detached by removing the edge.
std::map<std::int64_t, std::int64_t> exact_first_cut_counts(std::int64_t n);

// Expected number of uniform cuts to isolate the root of a random recursive
// tree, by memoized recursion over all trees.
double exact_mean_cuts(std::int64_t n);

// Exact joint law of (root cluster size, largest generation-1 cluster size)
// under Bernoulli bond percolation with retention p.
std::map<std::pair<std::int64_t, std::int64_t>, double> exact_root_child_joint(std::int64_t n,
                                                                               double p);

// Exact joint law of (C_root, C_1, C_2, C_11) with uniform tie-breaking for
// the cluster placed at address 1 averaged out.
using RankedJointKey = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;
std::map<RankedJointKey, double> exact_ranked_joint(std::int64_t n, double p);

}  // namespace rrt
