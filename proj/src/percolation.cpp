#include "rrt/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rrt/ranking.hpp"

namespace rrt {

MarkedTree::MarkedTree(RootedTree tree, std::vector<std::uint8_t> marked, double p)
    : tree_(std::move(tree)), marked_(std::move(marked)), p_(p) {
  if (static_cast<std::int64_t>(marked_.size()) != tree_.n_edges()) {
    throw std::invalid_argument("MarkedTree: mark vector length must equal edge count");
  }
}

std::int64_t MarkedTree::mark_count() const {
  std::int64_t c = 0;
  for (std::uint8_t m : marked_) c += m != 0;
  return c;
}

std::vector<Vertex> MarkedTree::marks() const {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < marked_.size(); ++i) {
    if (marked_[i]) out.push_back(static_cast<Vertex>(i + 1));
  }
  return out;
}

MarkedTree percolate(const RootedTree& tree, double p, RngStream& rng) {
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("percolate: p must lie in (0,1]");
  std::vector<std::uint8_t> marked(static_cast<std::size_t>(tree.n_edges()));
  const double q = 1.0 - p;
  for (auto& m : marked) m = rng.next_bernoulli(q) ? 1 : 0;
  return MarkedTree(tree, std::move(marked), p);
}

double supercritical_p(std::int64_t n, double t) {
  if (n < 2) throw std::invalid_argument("supercritical_p: n must be >= 2");
  const double ln_n = std::log(static_cast<double>(n));
  if (!(t > 0.0) || !(t < ln_n)) {
    throw std::invalid_argument("supercritical_p: t must lie in (0, ln n)");
  }
  return 1.0 - t / ln_n;
}

ClusterScan scan_clusters(const MarkedTree& marked) {
  const auto n = marked.tree().n_edges();
  ClusterScan s;
  s.cluster_root.assign(static_cast<std::size_t>(n) + 1, 0);
  s.root_size.assign(static_cast<std::size_t>(n) + 1, 0);
  s.root_gen.assign(static_cast<std::size_t>(n) + 1, 0);
  s.root_size[0] = 1;
  // parent(j) < j: one forward pass settles root, generation and sizes.
  for (Vertex j = 1; j <= n; ++j) {
    const Vertex p = marked.tree().parent_of(j);
    if (marked.is_marked(j)) {
      s.cluster_root[static_cast<std::size_t>(j)] = j;
      s.root_gen[static_cast<std::size_t>(j)] =
          s.root_gen[static_cast<std::size_t>(s.cluster_root[static_cast<std::size_t>(p)])] + 1;
    } else {
      s.cluster_root[static_cast<std::size_t>(j)] = s.cluster_root[static_cast<std::size_t>(p)];
    }
    ++s.root_size[static_cast<std::size_t>(s.cluster_root[static_cast<std::size_t>(j)])];
  }
  return s;
}

std::vector<ClusterInfo> extract_clusters(const MarkedTree& marked) {
  const ClusterScan s = scan_clusters(marked);
  const auto n = marked.tree().n_edges();
  std::vector<ClusterInfo> out;
  std::vector<std::int32_t> index(static_cast<std::size_t>(n) + 1, -1);
  for (Vertex v = 0; v <= n; ++v) {
    if (s.cluster_root[static_cast<std::size_t>(v)] == v) {
      index[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(out.size());
      ClusterInfo info;
      info.root_vertex = v;
      info.size = s.root_size[static_cast<std::size_t>(v)];
      info.generation = s.root_gen[static_cast<std::size_t>(v)];
      info.members.reserve(static_cast<std::size_t>(info.size));
      out.push_back(std::move(info));
    }
  }
  for (Vertex v = 0; v <= n; ++v) {
    out[static_cast<std::size_t>(
            index[static_cast<std::size_t>(s.cluster_root[static_cast<std::size_t>(v)])])]
        .members.push_back(v);
  }
  return out;
}

std::int64_t root_cluster_size(const MarkedTree& marked) {
  const auto n = marked.tree().n_edges();
  std::vector<char> in_root(static_cast<std::size_t>(n) + 1, 0);
  in_root[0] = 1;
  std::int64_t count = 1;
  for (Vertex j = 1; j <= n; ++j) {
    if (!marked.is_marked(j) && in_root[static_cast<std::size_t>(marked.tree().parent_of(j))]) {
      in_root[static_cast<std::size_t>(j)] = 1;
      ++count;
    }
  }
  return count;
}

namespace {

// Cluster tree structure shared by both size-tree builders: node 0 is the
// cluster rooted at vertex 0; further nodes are marked vertices in label order.
struct ClusterGraph {
  std::vector<Vertex> roots;                       // node -> root vertex
  std::vector<std::vector<std::int32_t>> children; // node -> child nodes
};

ClusterGraph build_cluster_graph(const MarkedTree& marked, const ClusterScan& scan) {
  const auto n = marked.tree().n_edges();
  ClusterGraph g;
  std::vector<std::int32_t> node_of(static_cast<std::size_t>(n) + 1, -1);
  g.roots.push_back(0);
  node_of[0] = 0;
  for (Vertex v = 1; v <= n; ++v) {
    if (marked.is_marked(v)) {
      node_of[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(g.roots.size());
      g.roots.push_back(v);
    }
  }
  g.children.resize(g.roots.size());
  for (Vertex v = 1; v <= n; ++v) {
    if (marked.is_marked(v)) {
      const Vertex parent_cluster =
          scan.cluster_root[static_cast<std::size_t>(marked.tree().parent_of(v))];
      g.children[static_cast<std::size_t>(node_of[static_cast<std::size_t>(parent_cluster)])]
          .push_back(node_of[static_cast<std::size_t>(v)]);
    }
  }
  return g;
}

// Assigns addresses by ranked preorder: children of every node sorted by key
// decreasingly, ties shuffled uniformly, tie randomness consumed in
// address-lexicographic order.
IndexedTree<std::int64_t> ranked_tree_from_graph(const ClusterGraph& g,
                                                 const std::vector<std::int64_t>& keys,
                                                 RngStream& rng) {
  IndexedTree<std::int64_t> out;
  struct Item {
    std::int32_t node;
    UIndex address;
  };
  std::vector<Item> stack;
  stack.push_back({0, UIndex::root()});
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    out.set(item.address, keys[static_cast<std::size_t>(item.node)]);
    const auto& kids = g.children[static_cast<std::size_t>(item.node)];
    if (kids.empty()) continue;
    std::vector<std::int64_t> kid_keys(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
      kid_keys[i] = keys[static_cast<std::size_t>(kids[i])];
    }
    const std::vector<std::size_t> order = rank_descending(kid_keys, rng);
    for (std::size_t r = order.size(); r-- > 0;) {
      stack.push_back({kids[order[r]], item.address.child(static_cast<std::uint32_t>(r + 1))});
    }
  }
  return out;
}

}  // namespace

IndexedTree<std::int64_t> cluster_size_tree(const MarkedTree& marked, RngStream& rng) {
  const ClusterScan scan = scan_clusters(marked);
  const ClusterGraph g = build_cluster_graph(marked, scan);
  std::vector<std::int64_t> keys(g.roots.size());
  for (std::size_t i = 0; i < g.roots.size(); ++i) {
    keys[i] = scan.root_size[static_cast<std::size_t>(g.roots[i])];
  }
  return ranked_tree_from_graph(g, keys, rng);
}

IndexedTree<std::int64_t> subtree_size_tree(const MarkedTree& marked, RngStream& rng) {
  const ClusterScan scan = scan_clusters(marked);
  const ClusterGraph g = build_cluster_graph(marked, scan);
  const std::vector<std::int64_t> sizes = marked.tree().subtree_sizes();
  std::vector<std::int64_t> keys(g.roots.size());
  for (std::size_t i = 0; i < g.roots.size(); ++i) {
    keys[i] = sizes[static_cast<std::size_t>(g.roots[i])];
  }
  return ranked_tree_from_graph(g, keys, rng);
}

RootChildSample sample_root_child_sizes(const MarkedTree& marked, RngStream& rng) {
  const auto n = marked.tree().n_edges();
  const ClusterScan s = scan_clusters(marked);
  RootChildSample out;
  out.c_root = s.root_size[0];
  std::int64_t best = 0;
  std::int64_t tie_count = 0;
  Vertex chosen = -1;
  for (Vertex v = 1; v <= n; ++v) {
    if (!marked.is_marked(v)) continue;
    if (s.cluster_root[static_cast<std::size_t>(marked.tree().parent_of(v))] != 0) continue;
    const std::int64_t sz = s.root_size[static_cast<std::size_t>(v)];
    if (sz > best) {
      best = sz;
      tie_count = 1;
      chosen = v;
    } else if (sz == best) {
      // Reservoir pick keeps each tied cluster equally likely at address 1.
      ++tie_count;
      if (rng.next_below(static_cast<std::uint64_t>(tie_count)) == 0) chosen = v;
    }
  }
  out.c_1 = best;
  if (chosen >= 0) {
    std::int64_t best_child = 0;
    for (Vertex w = chosen + 1; w <= n; ++w) {
      if (!marked.is_marked(w)) continue;
      if (s.cluster_root[static_cast<std::size_t>(marked.tree().parent_of(w))] != chosen) continue;
      best_child = std::max(best_child, s.root_size[static_cast<std::size_t>(w)]);
    }
    out.c_11 = best_child;
  }
  return out;
}

IndexedTree<double> normalize_tree(const IndexedTree<std::int64_t>& ct, std::int64_t n, double p) {
  if (n < 2) throw std::invalid_argument("normalize_tree: n must be >= 2");
  IndexedTree<double> out;
  const double n_pow_p = std::exp(p * std::log(static_cast<double>(n)));
  for (const auto& [u, value] : ct) {
    if (u.level() >= 1 && p == 1.0) {
      throw std::invalid_argument("normalize_tree: p = 1 divides by zero below the root");
    }
    const double factor =
        std::pow(1.0 - p, -static_cast<double>(u.level())) / n_pow_p;
    out.set(u, static_cast<double>(value) * factor);
  }
  return out;
}

}  // namespace rrt
