#include "rrt/destruction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "rrt/ranking.hpp"

namespace rrt {

DestructionRecord destroy(const RootedTree& tree, RngStream& rng) {
  const std::int64_t n = tree.n_edges();
  if (n < 2) throw std::invalid_argument("destroy: n must be >= 2");
  const double rate = 1.0 / std::log(static_cast<double>(n));

  DestructionRecord rec;
  rec.tree = tree;
  rec.removal_time.resize(static_cast<std::size_t>(n));
  for (auto& t : rec.removal_time) t = rng.next_exponential(rate);

  rec.removal_order.resize(static_cast<std::size_t>(n));
  std::iota(rec.removal_order.begin(), rec.removal_order.end(), Vertex{1});
  auto sort_order = [&rec] {
    std::sort(rec.removal_order.begin(), rec.removal_order.end(), [&rec](Vertex a, Vertex b) {
      const double ta = rec.removal_time[static_cast<std::size_t>(a) - 1];
      const double tb = rec.removal_time[static_cast<std::size_t>(b) - 1];
      return ta != tb ? ta < tb : a < b;
    });
  };
  sort_order();
  // Exact collisions have probability zero; resample until distinct.
  for (bool clean = false; !clean;) {
    clean = true;
    for (std::size_t i = 1; i < rec.removal_order.size(); ++i) {
      const auto a = static_cast<std::size_t>(rec.removal_order[i - 1]) - 1;
      const auto b = static_cast<std::size_t>(rec.removal_order[i]) - 1;
      if (rec.removal_time[a] == rec.removal_time[b]) {
        rec.removal_time[b] = rng.next_exponential(rate);
        clean = false;
      }
    }
    if (!clean) sort_order();
  }
  return rec;
}

namespace {

// Shared replay machinery: for every removal, the detached size and the edge
// founding the component it happened in.
struct ReplayCore {
  std::vector<std::int32_t> step;      // per edge, position in removal order
  std::vector<Vertex> founder;         // per edge, founding edge of its component (0 = root)
  std::vector<std::int64_t> detached;  // per edge, size detached by its removal
};

ReplayCore replay_core(const DestructionRecord& record) {
  const std::int64_t n = record.tree.n_edges();
  if (n < 1) throw std::invalid_argument("replay: record must have edges");
  if (static_cast<std::int64_t>(record.removal_order.size()) != n ||
      static_cast<std::int64_t>(record.removal_time.size()) != n) {
    throw std::invalid_argument("replay: record arrays must match edge count");
  }
  ReplayCore core;
  core.step.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t k = 0; k < n; ++k) {
    core.step[static_cast<std::size_t>(record.removal_order[static_cast<std::size_t>(k)])] =
        static_cast<std::int32_t>(k);
  }

  // founder(c) = nearest ancestor edge removed before c. Jump pointers walk a
  // chain of strictly decreasing steps; vertices are already in top-down order.
  core.founder.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Vertex c = 1; c <= n; ++c) {
    Vertex a = record.tree.parent_of(c);
    while (a != 0 && core.step[static_cast<std::size_t>(a)] >=
                         core.step[static_cast<std::size_t>(c)]) {
      a = core.founder[static_cast<std::size_t>(a)];
    }
    core.founder[static_cast<std::size_t>(c)] = a;
  }

  // Reverse union-find: re-adding edges from the last removal backwards makes
  // the component of c just before re-adding edge c exactly the detached part.
  std::vector<Vertex> uf(static_cast<std::size_t>(n) + 1);
  std::iota(uf.begin(), uf.end(), Vertex{0});
  std::vector<std::int64_t> comp_size(static_cast<std::size_t>(n) + 1, 1);
  auto find = [&uf](Vertex v) {
    Vertex r = v;
    while (uf[static_cast<std::size_t>(r)] != r) r = uf[static_cast<std::size_t>(r)];
    while (uf[static_cast<std::size_t>(v)] != r) {
      const Vertex next = uf[static_cast<std::size_t>(v)];
      uf[static_cast<std::size_t>(v)] = r;
      v = next;
    }
    return r;
  };
  core.detached.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t k = n; k-- > 0;) {
    const Vertex c = record.removal_order[static_cast<std::size_t>(k)];
    const Vertex rc = find(c);
    core.detached[static_cast<std::size_t>(c)] = comp_size[static_cast<std::size_t>(rc)];
    const Vertex rp = find(record.tree.parent_of(c));
    uf[static_cast<std::size_t>(rc)] = rp;
    comp_size[static_cast<std::size_t>(rp)] += comp_size[static_cast<std::size_t>(rc)];
  }
  return core;
}

}  // namespace

ComponentForest component_forest(const DestructionRecord& record) {
  const std::int64_t n = record.tree.n_edges();
  const ReplayCore core = replay_core(record);
  ComponentForest f;
  const auto count = static_cast<std::size_t>(n) + 1;
  f.parent.resize(count);
  f.root_vertex.resize(count);
  f.size.resize(count);
  f.birth.resize(count);
  f.parent[0] = -1;
  f.root_vertex[0] = 0;
  f.size[0] = n + 1;
  f.birth[0] = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const Vertex c = record.removal_order[static_cast<std::size_t>(k)];
    const Vertex fe = core.founder[static_cast<std::size_t>(c)];
    const auto i = static_cast<std::size_t>(k) + 1;
    f.parent[i] = fe == 0 ? 0 : core.step[static_cast<std::size_t>(fe)] + 1;
    f.root_vertex[i] = c;
    f.size[i] = core.detached[static_cast<std::size_t>(c)];
    f.birth[i] = record.removal_time[static_cast<std::size_t>(c) - 1];
  }
  return f;
}

namespace {

ComponentTree forest_to_tree(const ComponentForest& f) {
  ComponentTree out;
  std::vector<UIndex> address(f.parent.size());
  std::vector<std::uint32_t> child_count(f.parent.size(), 0);
  for (std::size_t i = 0; i < f.parent.size(); ++i) {
    if (f.parent[i] >= 0) {
      const auto p = static_cast<std::size_t>(f.parent[i]);
      address[i] = address[p].child(++child_count[p]);
    }
    out.set(address[i], ComponentEntry{f.size[i], f.birth[i]});
  }
  return out;
}

}  // namespace

ComponentTree tree_of_components(const DestructionRecord& record) {
  return forest_to_tree(component_forest(record));
}

ComponentTree rank_component_tree(const ComponentTree& ct, RngStream& rng) {
  ComponentTree out;
  if (ct.empty()) return out;
  struct Item {
    UIndex old_address;
    UIndex new_address;
  };
  std::vector<Item> stack{{UIndex::root(), UIndex::root()}};
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    out.set(item.new_address, ct.at(item.old_address));
    std::vector<std::int64_t> sizes;
    for (std::uint32_t j = 1; ct.contains(item.old_address.child(j)); ++j) {
      sizes.push_back(ct.at(item.old_address.child(j)).size);
    }
    if (sizes.empty()) continue;
    const std::vector<std::size_t> order = rank_descending(sizes, rng);
    for (std::size_t r = order.size(); r-- > 0;) {
      stack.push_back({item.old_address.child(static_cast<std::uint32_t>(order[r] + 1)),
                       item.new_address.child(static_cast<std::uint32_t>(r + 1))});
    }
  }
  return out;
}

ComponentTree truncate_components(const ComponentTree& ct, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("truncate_components: t must be positive");
  ComponentTree out;
  for (const auto& [u, entry] : ct) {
    if (entry.birth < t) out.set(u, entry);
  }
  return out;
}

double percolation_time(std::int64_t n, double p) {
  if (n < 2) throw std::invalid_argument("percolation_time: n must be >= 2");
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("percolation_time: p must lie in (0,1)");
  }
  return -std::log(static_cast<double>(n)) * std::log(p);
}

std::vector<std::int64_t> isolate_root(const RootedTree& tree, RngStream& rng) {
  const std::int64_t n = tree.n_edges();
  if (n < 1) throw std::invalid_argument("isolate_root: n must be >= 1");
  const RootedTree::Adjacency adj = tree.children();
  std::vector<char> alive(static_cast<std::size_t>(n) + 1, 1);
  std::int64_t alive_edges = n;
  std::vector<std::int64_t> cuts;
  std::vector<Vertex> dfs;
  while (alive_edges > 0) {
    Vertex e;
    do {
      e = static_cast<Vertex>(1 + rng.next_below(static_cast<std::uint64_t>(n)));
    } while (!alive[static_cast<std::size_t>(e)]);
    // Detach the subtree of e that is still connected.
    std::int64_t detached = 0;
    dfs.assign(1, e);
    alive[static_cast<std::size_t>(e)] = 0;
    while (!dfs.empty()) {
      const Vertex v = dfs.back();
      dfs.pop_back();
      ++detached;
      for (std::int32_t i = adj.head[static_cast<std::size_t>(v)];
           i < adj.head[static_cast<std::size_t>(v) + 1]; ++i) {
        const Vertex c = adj.order[static_cast<std::size_t>(i)];
        if (alive[static_cast<std::size_t>(c)]) {
          alive[static_cast<std::size_t>(c)] = 0;
          dfs.push_back(c);
        }
      }
    }
    cuts.push_back(detached);
    alive_edges -= detached;
  }
  return cuts;
}

std::int64_t sample_xi(RngStream& rng) {
  const double u = rng.next_double();
  return static_cast<std::int64_t>(1.0 / (1.0 - u));
}

std::int64_t sample_xi_conditional(std::int64_t bound, RngStream& rng) {
  if (bound < 1) throw std::invalid_argument("sample_xi_conditional: bound must be >= 1");
  for (;;) {
    const std::int64_t x = sample_xi(rng);
    if (x <= bound) return x;
  }
}

std::vector<std::int64_t> isolate_root_size_chain(std::int64_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("isolate_root_size_chain: n must be >= 1");
  std::vector<std::int64_t> cuts;
  std::int64_t remaining = n;
  while (remaining > 0) {
    const std::int64_t j = sample_xi_conditional(remaining, rng);
    cuts.push_back(j);
    remaining -= j;
  }
  return cuts;
}

WalkRecord im_coupled_walk(std::int64_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("im_coupled_walk: n must be >= 1");
  WalkRecord rec;
  rec.partial_sums.push_back(0);
  std::int64_t remaining = n;
  bool overshot = false;
  while (remaining > 0) {
    std::int64_t x = sample_xi(rng);
    if (!overshot) {
      rec.xi.push_back(x);
      const std::int64_t s = rec.partial_sums.back() + x;
      rec.partial_sums.push_back(s);
      if (s <= n) {
        // Accepting exactly when S stays below n realizes xi | xi <= remaining.
        rec.cut_sizes.push_back(x);
        remaining -= x;
        continue;
      }
      overshot = true;
    }
    if (x <= remaining) {
      rec.cut_sizes.push_back(x);
      remaining -= x;
    }
  }
  rec.l_n = static_cast<std::int64_t>(rec.xi.size());
  if (!rec.xi.empty() && rec.partial_sums.back() > n) --rec.l_n;
  rec.x_n = static_cast<std::int64_t>(rec.cut_sizes.size());
  return rec;
}

std::vector<Vertex> CutTree::vertex_set(std::int32_t node) const {
  std::vector<Vertex> out;
  std::vector<std::int32_t> stack{node};
  while (!stack.empty()) {
    const std::int32_t i = stack.back();
    stack.pop_back();
    const Node& nd = nodes[static_cast<std::size_t>(i)];
    if (nd.leaf >= 0) {
      out.push_back(nd.leaf);
    } else {
      stack.push_back(nd.child[0]);
      stack.push_back(nd.child[1]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string CutTree::to_json() const {
  // Children are created after their parent, so a reverse sweep sees both
  // subtrees finished; each node serializes as [vertex-list, left, right].
  std::vector<nlohmann::json> built(nodes.size());
  std::vector<std::vector<Vertex>> sets(nodes.size());
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const Node& nd = nodes[i];
    if (nd.leaf >= 0) {
      sets[i] = {nd.leaf};
      built[i] = nlohmann::json::array({nlohmann::json(sets[i])});
    } else {
      const auto l = static_cast<std::size_t>(nd.child[0]);
      const auto r = static_cast<std::size_t>(nd.child[1]);
      std::vector<Vertex> merged(sets[l].size() + sets[r].size());
      std::merge(sets[l].begin(), sets[l].end(), sets[r].begin(), sets[r].end(), merged.begin());
      sets[i] = std::move(merged);
      built[i] = nlohmann::json::array(
          {nlohmann::json(sets[i]), std::move(built[l]), std::move(built[r])});
    }
  }
  return built[static_cast<std::size_t>(root)].dump();
}

CutTree cut_tree(const DestructionRecord& record) {
  const std::int64_t n = record.tree.n_edges();
  const ReplayCore core = replay_core(record);
  CutTree out;
  out.nodes.reserve(static_cast<std::size_t>(2 * n + 1));
  out.nodes.push_back({});
  out.root = 0;
  // active node and current size per component, keyed by founding edge.
  std::vector<std::int32_t> active(static_cast<std::size_t>(n) + 1, -1);
  std::vector<std::int64_t> cur_size(static_cast<std::size_t>(n) + 1, 0);
  active[0] = 0;
  cur_size[0] = n + 1;
  if (n + 1 == 1) out.nodes[0].leaf = 0;
  for (std::int64_t k = 0; k < n; ++k) {
    const Vertex c = record.removal_order[static_cast<std::size_t>(k)];
    const Vertex f = core.founder[static_cast<std::size_t>(c)];
    const std::int64_t det = core.detached[static_cast<std::size_t>(c)];
    const std::int64_t rest = cur_size[static_cast<std::size_t>(f)] - det;
    const auto parent_node = active[static_cast<std::size_t>(f)];
    const auto rest_node = static_cast<std::int32_t>(out.nodes.size());
    out.nodes.push_back({});
    if (rest == 1) out.nodes.back().leaf = f;  // component root stays alone
    const auto det_node = static_cast<std::int32_t>(out.nodes.size());
    out.nodes.push_back({});
    if (det == 1) out.nodes.back().leaf = c;
    out.nodes[static_cast<std::size_t>(parent_node)].child[0] = rest_node;
    out.nodes[static_cast<std::size_t>(parent_node)].child[1] = det_node;
    active[static_cast<std::size_t>(f)] = rest_node;
    cur_size[static_cast<std::size_t>(f)] = rest;
    active[static_cast<std::size_t>(c)] = det_node;
    cur_size[static_cast<std::size_t>(c)] = det;
  }
  return out;
}

RankGenResult rank_and_generation_clusters(const DestructionRecord& record, double t,
                                           RngStream& rng) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("rank_and_generation_clusters: t must be positive");
  }
  const std::int64_t n = record.tree.n_edges();

  // Removals before t are the percolation pattern.
  std::vector<std::uint8_t> marked(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j) {
    marked[static_cast<std::size_t>(j - 1)] =
        record.removal_time[static_cast<std::size_t>(j - 1)] < t ? 1 : 0;
  }
  const double equiv_p = std::exp(-t / std::log(static_cast<double>(std::max<std::int64_t>(n, 2))));
  const MarkedTree pattern(record.tree, std::move(marked), equiv_p);
  const ClusterScan scan = scan_clusters(pattern);

  // Components born before t, re-indexed with parents intact.
  const ComponentForest forest = component_forest(record);
  std::vector<std::int32_t> keep_index(forest.parent.size(), -1);
  std::vector<std::int32_t> kept_parent;
  std::vector<Vertex> kept_root;
  std::vector<std::int64_t> kept_size;
  for (std::size_t i = 0; i < forest.parent.size(); ++i) {
    if (forest.birth[i] >= t && i != 0) continue;
    keep_index[i] = static_cast<std::int32_t>(kept_root.size());
    kept_parent.push_back(forest.parent[i] < 0
                              ? -1
                              : keep_index[static_cast<std::size_t>(forest.parent[i])]);
    kept_root.push_back(forest.root_vertex[i]);
    kept_size.push_back(forest.size[i]);
  }

  std::vector<std::vector<std::int32_t>> children(kept_root.size());
  for (std::size_t i = 1; i < kept_root.size(); ++i) {
    children[static_cast<std::size_t>(kept_parent[i])].push_back(static_cast<std::int32_t>(i));
  }

  RankGenResult out;
  // First ranking pass (sigma): order by component size to assign ranks, then
  // re-rank the stored cluster sizes (sigma-tilde) level by level.
  struct Item {
    std::int32_t comp;
    std::int64_t rank;
  };
  std::vector<std::vector<std::int64_t>> cluster_size_of(kept_root.size());
  std::vector<Item> stack{{0, 0}};
  std::vector<std::int64_t> comp_rank(kept_root.size(), 0);
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    comp_rank[static_cast<std::size_t>(item.comp)] = item.rank;
    auto& kids = children[static_cast<std::size_t>(item.comp)];
    if (kids.empty()) continue;
    std::vector<std::int64_t> sizes(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
      sizes[i] = kept_size[static_cast<std::size_t>(kids[i])];
    }
    const std::vector<std::size_t> order = rank_descending(sizes, rng);
    std::vector<std::int32_t> ranked(kids.size());
    for (std::size_t r = 0; r < kids.size(); ++r) ranked[r] = kids[order[r]];
    kids = std::move(ranked);
    for (std::size_t r = kids.size(); r-- > 0;) {
      stack.push_back({kids[r], item.rank + 1});
    }
  }

  out.clusters.reserve(kept_root.size());
  for (std::size_t i = 0; i < kept_root.size(); ++i) {
    const Vertex v = kept_root[i];
    ClusterRankInfo info;
    info.root_vertex = v;
    info.cluster_size = scan.root_size[static_cast<std::size_t>(v)];
    info.rank = comp_rank[i];
    info.generation = scan.root_gen[static_cast<std::size_t>(v)];
    out.clusters.push_back(info);
  }

  // sigma-tilde: address by decreasing cluster size within each sibling set.
  struct Addressed {
    std::int32_t comp;
    UIndex address;
  };
  std::vector<Addressed> stack2{{0, UIndex::root()}};
  while (!stack2.empty()) {
    Addressed item = std::move(stack2.back());
    stack2.pop_back();
    out.frak_c.set(item.address,
                   out.clusters[static_cast<std::size_t>(item.comp)].cluster_size);
    const auto& kids = children[static_cast<std::size_t>(item.comp)];
    if (kids.empty()) continue;
    std::vector<std::int64_t> csizes(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
      csizes[i] = out.clusters[static_cast<std::size_t>(kids[i])].cluster_size;
    }
    const std::vector<std::size_t> order = rank_descending(csizes, rng);
    for (std::size_t r = order.size(); r-- > 0;) {
      stack2.push_back({kids[order[r]], item.address.child(static_cast<std::uint32_t>(r + 1))});
    }
  }
  return out;
}

}  // namespace rrt
