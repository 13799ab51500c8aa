#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rrt/rng.hpp"

namespace rrt {

using Vertex = std::int32_t;

// Increasing tree on {0,...,n} stored as a flat parent array: entry j-1 holds
// the parent of vertex j, and parent(j) < j always. Vertex 0 is the root.
class RootedTree {
 public:
  RootedTree() = default;
  explicit RootedTree(std::vector<Vertex> parent);

  std::int64_t n_edges() const { return static_cast<std::int64_t>(parent_.size()); }
  std::int64_t n_vertices() const { return n_edges() + 1; }

  Vertex parent_of(Vertex v) const { return parent_[static_cast<std::size_t>(v) - 1]; }
  const std::vector<Vertex>& parents() const { return parent_; }

  bool operator==(const RootedTree& other) const { return parent_ == other.parent_; }

  // Children adjacency in O(n): children of v are head[v]..head[v+1) in `order`.
  struct Adjacency {
    std::vector<std::int32_t> head;
    std::vector<Vertex> order;
  };
  Adjacency children() const;

  // size of the descendant subtree of every vertex (including the vertex).
  std::vector<std::int64_t> subtree_sizes() const;

  std::string to_json() const;
  static RootedTree from_json(const std::string& text);

  // Compact binary format: magic "RRT1", u32 edge count, u32 parents, little endian.
  void write_binary(std::ostream& os) const;
  static RootedTree read_binary(std::istream& is);

 private:
  std::vector<Vertex> parent_;
};

// Uniform random recursive tree on {0,...,n}: vertex j attaches to a uniform
// vertex of {0,...,j-1}.
RootedTree generate_rrt(std::int64_t n, RngStream& rng);

// Allocation-free variant for hot loops; `parent` is resized to n.
void generate_rrt_into(std::vector<Vertex>& parent, std::int64_t n, RngStream& rng);

// All n! increasing trees on {0,...,n}. Guarded at n <= 10.
std::vector<RootedTree> enumerate_increasing_trees(std::int64_t n);

// Order-preserving bijection from a sorted vertex set onto {0,...,k-1}.
class CanonicalRelabeling {
 public:
  explicit CanonicalRelabeling(std::vector<Vertex> sorted_vertices);

  std::int64_t size() const { return static_cast<std::int64_t>(vertices_.size()); }
  Vertex to_new(Vertex old_label) const;
  Vertex to_old(Vertex new_label) const { return vertices_[static_cast<std::size_t>(new_label)]; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

 private:
  std::vector<Vertex> vertices_;
};

// Maximal descendant subtree of v, canonically relabeled to {0,...,k-1}.
RootedTree extract_subtree(const RootedTree& tree, Vertex v);

// Vertices of the descendant subtree of v, in increasing label order.
std::vector<Vertex> subtree_vertices(const RootedTree& tree, Vertex v);

}  // namespace rrt
