#pragma once

#include <cstdint>
#include <vector>

#include "rrt/rng.hpp"
#include "rrt/tree.hpp"
#include "rrt/uindex.hpp"

namespace rrt {

// Outcome of a Bernoulli bond percolation: the tree plus the set of marked
// (removed) edges. Edge j joins vertex j to its parent; marked_[j-1] records
// whether it was removed. The retention probability is kept as used.
class MarkedTree {
 public:
  MarkedTree(RootedTree tree, std::vector<std::uint8_t> marked, double p);

  const RootedTree& tree() const { return tree_; }
  double retention() const { return p_; }
  bool is_marked(Vertex edge) const { return marked_[static_cast<std::size_t>(edge) - 1] != 0; }
  std::int64_t mark_count() const;
  std::vector<Vertex> marks() const;  // sorted edge labels

 private:
  RootedTree tree_;
  std::vector<std::uint8_t> marked_;
  double p_;
};

// Marks each edge independently with probability 1-p. Requires 0 < p <= 1.
MarkedTree percolate(const RootedTree& tree, double p, RngStream& rng);

// Supercritical regime parameter: exactly 1 - t/ln n. Requires n >= 2, 0 < t < ln n.
double supercritical_p(std::int64_t n, double t);

struct ClusterInfo {
  Vertex root_vertex = 0;
  std::int64_t size = 0;
  std::int64_t generation = 0;
  std::vector<Vertex> members;
};

// All percolation clusters, ordered by root vertex. Generations are counted
// as marked edges on the original-tree path from 0, in one root-to-leaves pass.
std::vector<ClusterInfo> extract_clusters(const MarkedTree& marked);

// Flat per-vertex cluster assignment; the backbone behind the tree builders
// and the replicate-heavy experiments.
struct ClusterScan {
  std::vector<Vertex> cluster_root;       // per vertex
  std::vector<std::int64_t> root_size;    // indexed by cluster root vertex, 0 elsewhere
  std::vector<std::int64_t> root_gen;     // indexed by cluster root vertex
};
ClusterScan scan_clusters(const MarkedTree& marked);

std::int64_t root_cluster_size(const MarkedTree& marked);

// Root cluster size, largest generation-1 cluster, and the largest child of
// the (uniform tie-broken) cluster ranked first in generation 1. Matches the
// law of the corresponding cluster_size_tree entries without building maps.
struct RootChildSample {
  std::int64_t c_root = 0;
  std::int64_t c_1 = 0;
  std::int64_t c_11 = 0;
};
RootChildSample sample_root_child_sizes(const MarkedTree& marked, RngStream& rng);

// Tree of cluster sizes: entry at the root is the root cluster size; children
// of each entry are the sizes of clusters one marked edge away, ranked
// decreasingly with uniform tie-breaking consumed in address-lex order.
IndexedTree<std::int64_t> cluster_size_tree(const MarkedTree& marked, RngStream& rng);

// Tree of full genealogical subtree sizes |tau_u|, children ranked decreasingly
// with uniform tie-breaking.
IndexedTree<std::int64_t> subtree_size_tree(const MarkedTree& marked, RngStream& rng);

// Entry at u scaled by (1-p)^{-|u|} n^{-p}. Rejects p = 1 when entries below
// the root exist.
IndexedTree<double> normalize_tree(const IndexedTree<std::int64_t>& ct, std::int64_t n, double p);

}  // namespace rrt
