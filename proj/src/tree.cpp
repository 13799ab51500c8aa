#include "rrt/tree.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace rrt {

RootedTree::RootedTree(std::vector<Vertex> parent) : parent_(std::move(parent)) {
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    const auto v = static_cast<Vertex>(i + 1);
    if (parent_[i] < 0 || parent_[i] >= v) {
      throw std::invalid_argument("RootedTree: parent[" + std::to_string(v) +
                                  "] must lie in {0,...," + std::to_string(v - 1) + "}");
    }
  }
}

RootedTree::Adjacency RootedTree::children() const {
  const std::int64_t nv = n_vertices();
  Adjacency adj;
  adj.head.assign(static_cast<std::size_t>(nv) + 1, 0);
  adj.order.resize(static_cast<std::size_t>(n_edges()));
  for (Vertex p : parent_) ++adj.head[static_cast<std::size_t>(p) + 1];
  for (std::size_t v = 1; v < adj.head.size(); ++v) adj.head[v] += adj.head[v - 1];
  std::vector<std::int32_t> cursor(adj.head.begin(), adj.head.end() - 1);
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    adj.order[static_cast<std::size_t>(cursor[static_cast<std::size_t>(parent_[i])]++)] =
        static_cast<Vertex>(i + 1);
  }
  return adj;
}

std::vector<std::int64_t> RootedTree::subtree_sizes() const {
  std::vector<std::int64_t> size(static_cast<std::size_t>(n_vertices()), 1);
  // parent(j) < j, so one reverse sweep accumulates bottom-up.
  for (std::int64_t j = n_edges(); j >= 1; --j) {
    size[static_cast<std::size_t>(parent_[static_cast<std::size_t>(j - 1)])] +=
        size[static_cast<std::size_t>(j)];
  }
  return size;
}

std::string RootedTree::to_json() const {
  nlohmann::json j;
  j["n"] = n_edges();
  j["parent"] = parent_;
  return j.dump();
}

RootedTree RootedTree::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<Vertex> parent = j.at("parent").get<std::vector<Vertex>>();
  if (j.at("n").get<std::int64_t>() != static_cast<std::int64_t>(parent.size())) {
    throw std::invalid_argument("RootedTree::from_json: n does not match parent length");
  }
  return RootedTree(std::move(parent));
}

namespace {

void put_u32_le(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32_le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("RootedTree::read_binary: truncated input");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void RootedTree::write_binary(std::ostream& os) const {
  os.write("RRT1", 4);
  put_u32_le(os, static_cast<std::uint32_t>(n_edges()));
  for (Vertex p : parent_) put_u32_le(os, static_cast<std::uint32_t>(p));
}

RootedTree RootedTree::read_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "RRT1") {
    throw std::runtime_error("RootedTree::read_binary: bad magic");
  }
  const std::uint32_t n = get_u32_le(is);
  std::vector<Vertex> parent(n);
  for (std::uint32_t i = 0; i < n; ++i) parent[i] = static_cast<Vertex>(get_u32_le(is));
  return RootedTree(std::move(parent));
}

void generate_rrt_into(std::vector<Vertex>& parent, std::int64_t n, RngStream& rng) {
  if (n < 0) throw std::invalid_argument("generate_rrt: n must be >= 0");
  parent.resize(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j) {
    parent[static_cast<std::size_t>(j - 1)] =
        static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(j)));
  }
}

RootedTree generate_rrt(std::int64_t n, RngStream& rng) {
  std::vector<Vertex> parent;
  generate_rrt_into(parent, n, rng);
  return RootedTree(std::move(parent));
}

std::vector<RootedTree> enumerate_increasing_trees(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("enumerate_increasing_trees: n must be >= 0");
  if (n > 10) throw std::invalid_argument("enumerate_increasing_trees: guarded at n <= 10");
  std::vector<RootedTree> out;
  std::vector<Vertex> parent(static_cast<std::size_t>(n), 0);
  // Odometer over the cartesian product {0}x{0,1}x...x{0..n-1}.
  while (true) {
    out.emplace_back(parent);
    std::int64_t j = n;
    while (j >= 1) {
      auto& p = parent[static_cast<std::size_t>(j - 1)];
      if (p + 1 < j) {
        ++p;
        break;
      }
      p = 0;
      --j;
    }
    if (j == 0) break;
  }
  return out;
}

CanonicalRelabeling::CanonicalRelabeling(std::vector<Vertex> sorted_vertices)
    : vertices_(std::move(sorted_vertices)) {
  if (vertices_.empty()) throw std::invalid_argument("CanonicalRelabeling: empty vertex set");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (vertices_[i - 1] >= vertices_[i]) {
      throw std::invalid_argument("CanonicalRelabeling: vertices must be sorted and distinct");
    }
  }
}

Vertex CanonicalRelabeling::to_new(Vertex old_label) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), old_label);
  if (it == vertices_.end() || *it != old_label) {
    throw std::invalid_argument("CanonicalRelabeling: label not in set");
  }
  return static_cast<Vertex>(it - vertices_.begin());
}

std::vector<Vertex> subtree_vertices(const RootedTree& tree, Vertex v) {
  if (v < 0 || v >= tree.n_vertices()) {
    throw std::invalid_argument("subtree_vertices: vertex out of range");
  }
  // in_subtree[w] propagates down since parent(w) < w.
  const std::int64_t nv = tree.n_vertices();
  std::vector<char> in(static_cast<std::size_t>(nv), 0);
  in[static_cast<std::size_t>(v)] = 1;
  std::vector<Vertex> out{v};
  for (Vertex w = v + 1; w < nv; ++w) {
    if (in[static_cast<std::size_t>(tree.parent_of(w))]) {
      in[static_cast<std::size_t>(w)] = 1;
      out.push_back(w);
    }
  }
  return out;
}

RootedTree extract_subtree(const RootedTree& tree, Vertex v) {
  const std::vector<Vertex> verts = subtree_vertices(tree, v);
  CanonicalRelabeling relabel(verts);
  std::vector<Vertex> parent(verts.size() - 1);
  for (std::size_t i = 1; i < verts.size(); ++i) {
    parent[i - 1] = relabel.to_new(tree.parent_of(verts[i]));
  }
  return RootedTree(std::move(parent));
}

}  // namespace rrt
