#include "rrt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rrt {

namespace {

void guard(std::int64_t n) {
  if (n < 1 || n > 10) throw std::invalid_argument("oracle: n must lie in [1, 10]");
}

// True iff edge `e` lies on the path from vertex v to the root.
bool edge_on_root_path(const RootedTree& tree, Vertex v, Vertex e) {
  for (Vertex w = v; w != 0; w = tree.parent_of(w)) {
    if (w == e) return true;
  }
  return false;
}

// Cluster root of v under a mark pattern: walk up until a marked edge or 0.
Vertex walk_cluster_root(const RootedTree& tree, std::uint32_t mask, Vertex v) {
  while (v != 0 && !((mask >> (v - 1)) & 1u)) v = tree.parent_of(v);
  return v;
}

double pattern_probability(std::uint32_t mask, std::int64_t n, double p) {
  const int marked = __builtin_popcount(mask);
  return std::pow(1.0 - p, marked) * std::pow(p, static_cast<double>(n - marked));
}

}  // namespace

std::map<std::int64_t, std::int64_t> exact_first_cut_counts(std::int64_t n) {
  guard(n);
  std::map<std::int64_t, std::int64_t> counts;
  for (const RootedTree& tree : enumerate_increasing_trees(n)) {
    for (Vertex e = 1; e <= n; ++e) {
      std::int64_t detached = 0;
      for (Vertex v = 1; v <= n; ++v) {
        if (edge_on_root_path(tree, v, e)) ++detached;
      }
      ++counts[detached];
    }
  }
  return counts;
}

namespace {

double mean_cuts_of(const RootedTree& tree, std::map<std::vector<Vertex>, double>& memo) {
  const std::int64_t n = tree.n_edges();
  if (n == 0) return 0.0;
  auto it = memo.find(tree.parents());
  if (it != memo.end()) return it->second;
  double total = 0.0;
  for (Vertex e = 1; e <= n; ++e) {
    // Root side after cutting e, canonically relabeled.
    std::vector<Vertex> keep;
    for (Vertex v = 0; v <= n; ++v) {
      if (v == 0 || !edge_on_root_path(tree, v, e)) keep.push_back(v);
    }
    CanonicalRelabeling relabel(keep);
    std::vector<Vertex> parent(keep.size() - 1);
    for (std::size_t i = 1; i < keep.size(); ++i) {
      parent[i - 1] = relabel.to_new(tree.parent_of(keep[i]));
    }
    total += 1.0 + mean_cuts_of(RootedTree(std::move(parent)), memo);
  }
  const double value = total / static_cast<double>(n);
  memo.emplace(tree.parents(), value);
  return value;
}

}  // namespace

double exact_mean_cuts(std::int64_t n) {
  guard(n);
  std::map<std::vector<Vertex>, double> memo;
  double total = 0.0;
  const auto trees = enumerate_increasing_trees(n);
  for (const RootedTree& tree : trees) total += mean_cuts_of(tree, memo);
  return total / static_cast<double>(trees.size());
}

std::map<std::pair<std::int64_t, std::int64_t>, double> exact_root_child_joint(std::int64_t n,
                                                                               double p) {
  guard(n);
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("oracle: p must lie in (0,1]");
  std::map<std::pair<std::int64_t, std::int64_t>, double> law;
  const auto trees = enumerate_increasing_trees(n);
  const double tree_prob = 1.0 / static_cast<double>(trees.size());
  for (const RootedTree& tree : trees) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::int64_t c_root = 0;
      std::vector<std::int64_t> size(static_cast<std::size_t>(n) + 1, 0);
      for (Vertex v = 0; v <= n; ++v) {
        const Vertex r = walk_cluster_root(tree, mask, v);
        ++size[static_cast<std::size_t>(r)];
        if (r == 0) ++c_root;
      }
      std::int64_t c_1 = 0;
      for (Vertex v = 1; v <= n; ++v) {
        if (!((mask >> (v - 1)) & 1u)) continue;
        if (walk_cluster_root(tree, mask, tree.parent_of(v)) == 0) {
          c_1 = std::max(c_1, size[static_cast<std::size_t>(v)]);
        }
      }
      law[{c_root, c_1}] += tree_prob * pattern_probability(mask, n, p);
    }
  }
  return law;
}

std::map<RankedJointKey, double> exact_ranked_joint(std::int64_t n, double p) {
  guard(n);
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("oracle: p must lie in (0,1]");
  std::map<RankedJointKey, double> law;
  const auto trees = enumerate_increasing_trees(n);
  const double tree_prob = 1.0 / static_cast<double>(trees.size());
  for (const RootedTree& tree : trees) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const double prob = tree_prob * pattern_probability(mask, n, p);
      std::vector<std::int64_t> size(static_cast<std::size_t>(n) + 1, 0);
      std::int64_t c_root = 0;
      for (Vertex v = 0; v <= n; ++v) {
        const Vertex r = walk_cluster_root(tree, mask, v);
        ++size[static_cast<std::size_t>(r)];
        if (r == 0) ++c_root;
      }
      std::vector<Vertex> gen1;
      for (Vertex v = 1; v <= n; ++v) {
        if (((mask >> (v - 1)) & 1u) && walk_cluster_root(tree, mask, tree.parent_of(v)) == 0) {
          gen1.push_back(v);
        }
      }
      std::vector<std::int64_t> sizes;
      for (Vertex v : gen1) sizes.push_back(size[static_cast<std::size_t>(v)]);
      std::sort(sizes.rbegin(), sizes.rend());
      const std::int64_t c_1 = sizes.empty() ? 0 : sizes[0];
      const std::int64_t c_2 = sizes.size() > 1 ? sizes[1] : 0;
      if (c_1 == 0) {
        law[{c_root, 0, 0, 0}] += prob;
        continue;
      }
      // Every cluster tied for the top slot sits at address 1 with equal
      // probability; average the induced laws of its largest child.
      std::vector<Vertex> tied;
      for (Vertex v : gen1) {
        if (size[static_cast<std::size_t>(v)] == c_1) tied.push_back(v);
      }
      const double share = prob / static_cast<double>(tied.size());
      for (Vertex chosen : tied) {
        std::int64_t c_11 = 0;
        for (Vertex w = 1; w <= n; ++w) {
          if (((mask >> (w - 1)) & 1u) &&
              walk_cluster_root(tree, mask, tree.parent_of(w)) == chosen) {
            c_11 = std::max(c_11, size[static_cast<std::size_t>(w)]);
          }
        }
        law[{c_root, c_1, c_2, c_11}] += share;
      }
    }
  }
  return law;
}

}  // namespace rrt
