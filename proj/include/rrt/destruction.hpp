#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rrt/percolation.hpp"
#include "rrt/rng.hpp"
#include "rrt/tree.hpp"
#include "rrt/uindex.hpp"

namespace rrt {

// Full trajectory of the continuous-time destruction: one removal time per
// edge, plus the edges listed in ascending removal order.
struct DestructionRecord {
  RootedTree tree;
  std::vector<double> removal_time;  // per edge label 1..n at index label-1
  std::vector<Vertex> removal_order;
};

// Equips every edge with an independent Exp(1/ln n) clock. Requires n >= 2.
// Exact floating-point ties (probability zero) are resampled; the stored
// order breaks residual comparisons by edge label.
DestructionRecord destroy(const RootedTree& tree, RngStream& rng);

struct ComponentEntry {
  std::int64_t size = 0;
  double birth = 0.0;
  bool operator==(const ComponentEntry&) const = default;
};
using ComponentTree = IndexedTree<ComponentEntry>;

// Flat view of the components created by the replay, in birth order.
// Index 0 is the root component (n+1, 0); children of a component are the
// indices pointing at it, which appear in birth order by construction.
struct ComponentForest {
  std::vector<std::int32_t> parent;  // -1 for the root component
  std::vector<Vertex> root_vertex;   // 0 for the root; else the founding edge
  std::vector<std::int64_t> size;
  std::vector<double> birth;
};
ComponentForest component_forest(const DestructionRecord& record);

// Tree of components (B, b): children of each address in birth order.
ComponentTree tree_of_components(const DestructionRecord& record);

// Children of every node re-addressed in decreasing order of size, uniform
// tie-breaking, parent-child relation preserved.
ComponentTree rank_component_tree(const ComponentTree& ct, RngStream& rng);

// Drops entries born at or after t. Expects a birth-ordered tree (children
// births increase with the index), which keeps the result gap-free.
ComponentTree truncate_components(const ComponentTree& ct, double t);

// Destruction time horizon observing a Bernoulli percolation with parameter
// p: exactly -ln n * ln p. Requires n >= 2 and 0 < p < 1.
double percolation_time(std::int64_t n, double p);

// Root isolation: repeatedly remove a uniform edge of the component holding
// vertex 0; returns the detached subtree sizes in cut order. Sizes sum to n.
std::vector<std::int64_t> isolate_root(const RootedTree& tree, RngStream& rng);

// Same law as isolate_root on a fresh random recursive tree, simulated purely
// on sizes through the splitting law (n+1)/(n j (j+1)); no tree storage.
std::vector<std::int64_t> isolate_root_size_chain(std::int64_t n, RngStream& rng);

// P(xi = j) = 1/(j(j+1)) via inverse CDF: floor(1/(1-U)).
std::int64_t sample_xi(RngStream& rng);

// xi conditioned on xi <= bound, by rejection.
std::int64_t sample_xi_conditional(std::int64_t bound, RngStream& rng);

// Root isolation coupled with the increasing random walk S: cut sizes agree
// with the i.i.d. steps xi until the walk's last passage below n.
struct WalkRecord {
  std::vector<std::int64_t> xi;            // walk steps, up to the first overshoot
  std::vector<std::int64_t> partial_sums;  // S_0, S_1, ..., aligned: S_k at index k
  std::int64_t l_n = 0;                    // last k with S_k <= n
  std::vector<std::int64_t> cut_sizes;     // detached sizes B_1..B_{X_n}
  std::int64_t x_n = 0;
};
WalkRecord im_coupled_walk(std::int64_t n, RngStream& rng);

// Binary tree of the vertex sets produced by successive removals. Leaves are
// single vertices; child 0 continues the side holding the component's root.
struct CutTree {
  struct Node {
    Vertex leaf = -1;  // >= 0 for leaves
    std::int32_t child[2] = {-1, -1};
  };
  std::vector<Node> nodes;
  std::int32_t root = -1;

  std::vector<Vertex> vertex_set(std::int32_t node) const;
  std::string to_json() const;  // nested arrays of vertex lists
};
CutTree cut_tree(const DestructionRecord& record);

// Interprets removals before time t as a percolation pattern and identifies,
// for every component born before t, the percolation cluster sharing its root.
struct ClusterRankInfo {
  Vertex root_vertex = 0;
  std::int64_t cluster_size = 0;
  std::int64_t rank = 0;        // level in the truncated size-ranked component tree
  std::int64_t generation = 0;  // removed edges on the path from vertex 0
};
struct RankGenResult {
  IndexedTree<std::int64_t> frak_c;  // cluster sizes re-ranked per level
  std::vector<ClusterRankInfo> clusters;
};
RankGenResult rank_and_generation_clusters(const DestructionRecord& record, double t,
                                           RngStream& rng);

}  // namespace rrt
