#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "rrt/rng.hpp"
#include "rrt/tree.hpp"

using rrt::generate_rrt;
using rrt::RngStream;
using rrt::RootedTree;
using rrt::Vertex;

TEST_SUITE_BEGIN("tree");

TEST_CASE("n = 0 gives the single-vertex tree") {
  RngStream rng(1, 0);
  const RootedTree t = generate_rrt(0, rng);
  CHECK(t.n_edges() == 0);
  CHECK(t.n_vertices() == 1);
  CHECK(t.to_json() == R"({"n":0,"parent":[]})");
}

TEST_CASE("generated trees are increasing") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed, 0);
    const RootedTree t = generate_rrt(5, rng);
    for (Vertex j = 1; j <= 5; ++j) CHECK(t.parent_of(j) < j);
  }
}

TEST_CASE("n = 2: path and star each appear half the time") {
  // The two increasing trees on {0,1,2}: parent[2] = 1 (path) or 0 (star).
  int path = 0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    RngStream rng(12345, static_cast<std::uint64_t>(i));
    const RootedTree t = generate_rrt(2, rng);
    path += t.parent_of(2) == 1;
  }
  CHECK(std::abs(static_cast<double>(path) / draws - 0.5) < 0.002);
}

namespace {

// Mixed-radix index of a tree inside the enumeration order.
std::size_t tree_index(const RootedTree& t) {
  std::size_t idx = 0;
  for (Vertex j = 1; j <= t.n_edges(); ++j) {
    idx = idx * static_cast<std::size_t>(j) + static_cast<std::size_t>(t.parent_of(j));
  }
  return idx;
}

}  // namespace

TEST_CASE("uniformity over all increasing trees, chi-square at n = 5") {
  const std::size_t cells = 120;
  std::vector<std::int64_t> counts(cells, 0);
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    RngStream rng(777, static_cast<std::uint64_t>(i));
    ++counts[tree_index(generate_rrt(5, rng))];
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(draws) / static_cast<double>(cells);
  for (std::int64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 172.4177);  // 99.9% quantile, 119 dof
}

TEST_CASE("enumeration yields n! distinct increasing trees") {
  CHECK(rrt::enumerate_increasing_trees(1).size() == 1);
  CHECK(rrt::enumerate_increasing_trees(3).size() == 6);
  CHECK(rrt::enumerate_increasing_trees(4).size() == 24);
  CHECK(rrt::enumerate_increasing_trees(7).size() == 5040);
  const auto trees = rrt::enumerate_increasing_trees(4);
  std::set<std::vector<Vertex>> distinct;
  for (const RootedTree& t : trees) {
    distinct.insert(t.parents());
    for (Vertex j = 1; j <= 4; ++j) CHECK(t.parent_of(j) < j);
  }
  CHECK(distinct.size() == trees.size());
  CHECK_THROWS_AS(rrt::enumerate_increasing_trees(11), std::invalid_argument);
}

TEST_CASE("canonical relabeling preserves order") {
  rrt::CanonicalRelabeling identity({0, 1, 2});
  CHECK(identity.to_new(0) == 0);
  CHECK(identity.to_new(1) == 1);
  CHECK(identity.to_new(2) == 2);

  rrt::CanonicalRelabeling shifted({3, 5, 9});
  CHECK(shifted.to_new(3) == 0);
  CHECK(shifted.to_new(5) == 1);
  CHECK(shifted.to_new(9) == 2);
  CHECK(shifted.to_old(2) == 9);

  rrt::CanonicalRelabeling single({2});
  CHECK(single.to_new(2) == 0);

  CHECK_THROWS_AS(rrt::CanonicalRelabeling({}), std::invalid_argument);
  CHECK_THROWS_AS(shifted.to_new(4), std::invalid_argument);
}

TEST_CASE("extract_subtree") {
  const RootedTree t = fixtures::tree11();

  SUBCASE("the root gives the whole tree back") {
    CHECK(rrt::extract_subtree(t, 0) == t);
  }
  SUBCASE("a leaf gives the single-vertex tree") {
    CHECK(rrt::extract_subtree(t, 9).n_vertices() == 1);
  }
  SUBCASE("the subtree of vertex 3 spans {3,5,7,8,9,10}") {
    CHECK(rrt::subtree_vertices(t, 3) == std::vector<Vertex>{3, 5, 7, 8, 9, 10});
    const RootedTree sub = rrt::extract_subtree(t, 3);
    CHECK(sub.n_vertices() == 6);
    CHECK(sub.parents() == std::vector<Vertex>{0, 0, 2, 1, 3});
  }
  SUBCASE("out of range vertex throws") {
    CHECK_THROWS_AS(rrt::extract_subtree(t, 11), std::invalid_argument);
  }
}

TEST_CASE("subtree plus relabeled complement splits the tree") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RngStream rng(seed, 9);
    const RootedTree t = generate_rrt(8, rng);
    const auto v = static_cast<Vertex>(1 + rng.next_below(8));
    const std::vector<Vertex> inside = rrt::subtree_vertices(t, v);
    std::vector<Vertex> outside;
    for (Vertex w = 0; w <= 8; ++w) {
      if (!std::binary_search(inside.begin(), inside.end(), w)) outside.push_back(w);
    }
    CHECK(inside.size() + outside.size() == 9);
    // The complement relabels to an increasing tree as well.
    rrt::CanonicalRelabeling relabel(outside);
    std::vector<Vertex> parent(outside.size() - 1);
    for (std::size_t i = 1; i < outside.size(); ++i) {
      parent[i - 1] = relabel.to_new(t.parent_of(outside[i]));
    }
    CHECK_NOTHROW(RootedTree{parent});
  }
}

TEST_CASE("subtree_sizes agrees with subtree_vertices") {
  RngStream rng(5, 0);
  const RootedTree t = generate_rrt(30, rng);
  const auto sizes = t.subtree_sizes();
  for (Vertex v = 0; v <= 30; v += 5) {
    CHECK(sizes[static_cast<std::size_t>(v)] ==
          static_cast<std::int64_t>(rrt::subtree_vertices(t, v).size()));
  }
}

TEST_CASE("serialization round trips") {
  RngStream rng(3, 1);
  const RootedTree t = generate_rrt(50, rng);

  SUBCASE("json") {
    CHECK(RootedTree::from_json(t.to_json()) == t);
  }
  SUBCASE("binary") {
    std::stringstream buf;
    t.write_binary(buf);
    CHECK(RootedTree::read_binary(buf) == t);
  }
  SUBCASE("same seed, same bytes") {
    RngStream a(42, 0);
    RngStream b(42, 0);
    CHECK(generate_rrt(20, a).to_json() == generate_rrt(20, b).to_json());
  }
  SUBCASE("bad magic is rejected") {
    std::stringstream buf("XXXX");
    CHECK_THROWS(RootedTree::read_binary(buf));
  }
}

TEST_SUITE_END();
