#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "rrt/oracle.hpp"
#include "rrt/percolation.hpp"
#include "rrt/rng.hpp"
#include "rrt/stats.hpp"
#include "rrt/uindex.hpp"

using rrt::MarkedTree;
using rrt::RngStream;
using rrt::RootedTree;
using rrt::UIndex;
using rrt::Vertex;

TEST_SUITE_BEGIN("percolation");

TEST_CASE("p = 1 marks nothing") {
  RngStream rng(1, 0);
  const RootedTree t = rrt::generate_rrt(20, rng);
  const MarkedTree m = rrt::percolate(t, 1.0, rng);
  CHECK(m.mark_count() == 0);
  CHECK_THROWS_AS(rrt::percolate(t, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(rrt::percolate(t, 1.5, rng), std::invalid_argument);
}

TEST_CASE("n = 3, p = 1/2: all eight mark patterns are equally likely") {
  RngStream gen(4, 0);
  const RootedTree t = rrt::generate_rrt(3, gen);
  std::vector<std::int64_t> counts(8, 0);
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    RngStream rng(99, static_cast<std::uint64_t>(i));
    const MarkedTree m = rrt::percolate(t, 0.5, rng);
    int mask = 0;
    for (Vertex e = 1; e <= 3; ++e) mask |= m.is_marked(e) << (e - 1);
    ++counts[static_cast<std::size_t>(mask)];
  }
  const std::vector<double> probs(8, 0.125);
  CHECK(rrt::chi_square(counts, probs) < 24.3219);  // 99.9% quantile, 7 dof
}

TEST_CASE("supercritical_p evaluates 1 - t/ln n") {
  CHECK(rrt::supercritical_p(7, 1.0) == doctest::Approx(1.0 - 1.0 / std::log(7.0)).epsilon(1e-12));
  CHECK(rrt::supercritical_p(7, 1.0) == doctest::Approx(0.48610).epsilon(1e-3));
  CHECK(rrt::supercritical_p(1000000, 1.0) == doctest::Approx(0.927618).epsilon(1e-5));
  CHECK(rrt::supercritical_p(100, 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(rrt::supercritical_p(100, std::log(100.0)), std::invalid_argument);
  CHECK_THROWS_AS(rrt::supercritical_p(1, 0.5), std::invalid_argument);
}

TEST_CASE("extract_clusters on the fixture pattern") {
  const auto clusters = rrt::extract_clusters(fixtures::marked11());
  REQUIRE(clusters.size() == 5);
  CHECK(clusters[0].members == std::vector<Vertex>{0, 1, 4, 6});
  CHECK(clusters[0].generation == 0);
  CHECK(clusters[1].members == std::vector<Vertex>{2});
  CHECK(clusters[1].generation == 1);
  CHECK(clusters[2].members == std::vector<Vertex>{3, 7, 8});
  CHECK(clusters[2].generation == 1);
  CHECK(clusters[3].members == std::vector<Vertex>{5, 9});
  CHECK(clusters[3].generation == 2);
  CHECK(clusters[4].members == std::vector<Vertex>{10});
  CHECK(clusters[4].generation == 2);
}

TEST_CASE("no marks: one cluster; all marks: singletons at their depths") {
  const RootedTree t = fixtures::tree11();
  const MarkedTree none(t, std::vector<std::uint8_t>(10, 0), 1.0);
  const auto one = rrt::extract_clusters(none);
  REQUIRE(one.size() == 1);
  CHECK(one[0].size == 11);
  CHECK(one[0].generation == 0);

  const MarkedTree all(t, std::vector<std::uint8_t>(10, 1), 0.5);
  const auto singles = rrt::extract_clusters(all);
  REQUIRE(singles.size() == 11);
  for (const auto& c : singles) {
    CHECK(c.size == 1);
    std::int64_t depth = 0;
    for (Vertex v = c.root_vertex; v != 0; v = t.parent_of(v)) ++depth;
    CHECK(c.generation == depth);
  }
}

TEST_CASE("clusters partition the vertex set") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed, 2);
    const RootedTree t = rrt::generate_rrt(200, rng);
    const MarkedTree m = rrt::percolate(t, 0.7, rng);
    const auto clusters = rrt::extract_clusters(m);
    std::int64_t total = 0;
    std::vector<char> seen(201, 0);
    for (const auto& c : clusters) {
      total += c.size;
      CHECK(c.size == static_cast<std::int64_t>(c.members.size()));
      for (Vertex v : c.members) {
        CHECK(!seen[static_cast<std::size_t>(v)]);
        seen[static_cast<std::size_t>(v)] = 1;
      }
    }
    CHECK(total == 201);
  }
}

TEST_CASE("cluster_size_tree on the fixture") {
  RngStream tie(0, 0);
  const auto ct = rrt::cluster_size_tree(fixtures::marked11(), tie);
  CHECK(ct.size() == 5);
  CHECK(ct.at(UIndex::root()) == 4);
  CHECK(ct.at(UIndex::parse("1")) == 3);
  CHECK(ct.at(UIndex::parse("2")) == 1);
  CHECK(ct.at(UIndex::parse("1.1")) == 2);
  CHECK(ct.at(UIndex::parse("1.2")) == 1);
  CHECK(ct.valid_shape());
}

TEST_CASE("cluster_size_tree with no marks is the single root entry") {
  RngStream rng(8, 0);
  const RootedTree t = rrt::generate_rrt(40, rng);
  const MarkedTree m(t, std::vector<std::uint8_t>(40, 0), 1.0);
  RngStream tie(0, 1);
  const auto ct = rrt::cluster_size_tree(m, tie);
  CHECK(ct.size() == 1);
  CHECK(ct.at(UIndex::root()) == 41);
}

TEST_CASE("generation equals address level, entries sum to n + 1") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream rng(seed, 3);
    const RootedTree t = rrt::generate_rrt(300, rng);
    const MarkedTree m = rrt::percolate(t, 0.8, rng);
    RngStream tie = rng.substream(7);
    const auto ct = rrt::cluster_size_tree(m, tie);
    std::int64_t total = 0;
    for (const auto& [u, v] : ct) total += v;
    CHECK(total == 301);
    // Multiset of level-l entries equals the multiset of generation-l sizes.
    std::map<std::int64_t, std::map<std::int64_t, int>> by_level;
    for (const auto& [u, v] : ct) ++by_level[static_cast<std::int64_t>(u.level())][v];
    std::map<std::int64_t, std::map<std::int64_t, int>> by_gen;
    for (const auto& c : rrt::extract_clusters(m)) ++by_gen[c.generation][c.size];
    CHECK(by_level == by_gen);
  }
}

TEST_CASE("joint law of (C_root, C_1) at n = 3 matches the enumeration oracle") {
  const std::int64_t n = 3;
  const double p = 0.5;
  const auto exact = rrt::exact_root_child_joint(n, p);
  std::map<std::pair<std::int64_t, std::int64_t>, double> empirical;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    RngStream rng(321, static_cast<std::uint64_t>(i));
    RngStream gen_rng = rng.substream(0);
    RngStream perc_rng = rng.substream(1);
    RngStream tie_rng = rng.substream(2);
    const RootedTree t = rrt::generate_rrt(n, gen_rng);
    const MarkedTree m = rrt::percolate(t, p, perc_rng);
    const auto ct = rrt::cluster_size_tree(m, tie_rng);
    const auto* c1 = ct.find(UIndex::parse("1"));
    empirical[{ct.at(UIndex::root()), c1 ? *c1 : 0}] += 1.0 / draws;
  }
  CHECK(rrt::total_variation(empirical, exact) < 0.02);
}

TEST_CASE("ranked joint law (C_root, C_1, C_2, C_11) matches the oracle with ties") {
  const std::int64_t n = 4;
  const double p = 0.5;
  const auto exact = rrt::exact_ranked_joint(n, p);
  std::map<rrt::RankedJointKey, double> empirical;
  const int draws = 300000;
  for (int i = 0; i < draws; ++i) {
    RngStream rng(654, static_cast<std::uint64_t>(i));
    RngStream gen_rng = rng.substream(0);
    RngStream perc_rng = rng.substream(1);
    RngStream tie_rng = rng.substream(2);
    const RootedTree t = rrt::generate_rrt(n, gen_rng);
    const MarkedTree m = rrt::percolate(t, p, perc_rng);
    const auto ct = rrt::cluster_size_tree(m, tie_rng);
    const auto* c1 = ct.find(UIndex::parse("1"));
    const auto* c2 = ct.find(UIndex::parse("2"));
    const auto* c11 = ct.find(UIndex::parse("1.1"));
    empirical[{ct.at(UIndex::root()), c1 ? *c1 : 0, c2 ? *c2 : 0, c11 ? *c11 : 0}] +=
        1.0 / draws;
  }
  CHECK(rrt::total_variation(empirical, exact) < 0.02);
}

TEST_CASE("sample_root_child_sizes agrees in law with cluster_size_tree") {
  const std::int64_t n = 4;
  const double p = 0.5;
  const auto exact = rrt::exact_ranked_joint(n, p);
  // Marginalize the oracle onto (C_root, C_1, C_11).
  std::map<rrt::RankedJointKey, double> marginal;
  for (const auto& [key, prob] : exact) {
    const auto [c0, c1, c2, c11] = key;
    marginal[{c0, c1, 0, c11}] += prob;
  }
  std::map<rrt::RankedJointKey, double> empirical;
  const int draws = 300000;
  for (int i = 0; i < draws; ++i) {
    RngStream rng(987, static_cast<std::uint64_t>(i));
    RngStream gen_rng = rng.substream(0);
    RngStream perc_rng = rng.substream(1);
    RngStream tie_rng = rng.substream(2);
    const RootedTree t = rrt::generate_rrt(n, gen_rng);
    const MarkedTree m = rrt::percolate(t, p, perc_rng);
    const auto s = rrt::sample_root_child_sizes(m, tie_rng);
    empirical[{s.c_root, s.c_1, 0, s.c_11}] += 1.0 / draws;
  }
  CHECK(rrt::total_variation(empirical, marginal) < 0.02);
}

TEST_CASE("subtree_size_tree on the fixture") {
  RngStream tie(0, 4);
  const auto st = rrt::subtree_size_tree(fixtures::marked11(), tie);
  CHECK(st.size() == 5);
  CHECK(st.at(UIndex::root()) == 11);
  CHECK(st.at(UIndex::parse("1")) == 6);
  CHECK(st.at(UIndex::parse("2")) == 1);
  CHECK(st.at(UIndex::parse("1.1")) == 2);
  CHECK(st.at(UIndex::parse("1.2")) == 1);
}

TEST_CASE("subtree sizes dominate: value at u covers itself plus children") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream rng(seed, 5);
    const RootedTree t = rrt::generate_rrt(300, rng);
    const MarkedTree m = rrt::percolate(t, 0.7, rng);
    RngStream tie = rng.substream(8);
    const auto st = rrt::subtree_size_tree(m, tie);
    for (const auto& [u, v] : st) {
      std::int64_t child_sum = 0;
      for (std::uint32_t j = 1; st.contains(u.child(j)); ++j) child_sum += st.at(u.child(j));
      CHECK(v >= 1 + child_sum);
    }
  }
}

TEST_CASE("per level, ranked cluster sizes are dominated by ranked subtree sizes") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream rng(seed, 6);
    const RootedTree t = rrt::generate_rrt(400, rng);
    const MarkedTree m = rrt::percolate(t, 0.8, rng);
    RngStream tie_a = rng.substream(1);
    RngStream tie_b = rng.substream(2);
    const auto ct = rrt::cluster_size_tree(m, tie_a);
    const auto st = rrt::subtree_size_tree(m, tie_b);
    std::map<std::size_t, std::vector<std::int64_t>> cluster_levels;
    std::map<std::size_t, std::vector<std::int64_t>> subtree_levels;
    for (const auto& [u, v] : ct) cluster_levels[u.level()].push_back(v);
    for (const auto& [u, v] : st) subtree_levels[u.level()].push_back(v);
    for (auto& [level, values] : cluster_levels) {
      auto& other = subtree_levels[level];
      REQUIRE(values.size() == other.size());
      std::sort(values.rbegin(), values.rend());
      std::sort(other.rbegin(), other.rend());
      for (std::size_t i = 0; i < values.size(); ++i) CHECK(values[i] <= other[i]);
    }
  }
}

TEST_CASE("normalize_tree applies (1-p)^-level / n^p") {
  const std::int64_t n = 1000;
  const double p = 0.8;
  const double n_pow_p = std::exp(p * std::log(static_cast<double>(n)));
  rrt::IndexedTree<std::int64_t> ct;
  ct.set(UIndex::root(), static_cast<std::int64_t>(std::llround(n_pow_p)));
  ct.set(UIndex::parse("1"), 50);
  const auto scaled = rrt::normalize_tree(ct, n, p);
  CHECK(scaled.at(UIndex::root()) ==
        doctest::Approx(std::llround(n_pow_p) / n_pow_p).epsilon(1e-12));
  CHECK(scaled.at(UIndex::parse("1")) == doctest::Approx(50.0 / (0.2 * n_pow_p)).epsilon(1e-12));

  rrt::IndexedTree<std::int64_t> root_only;
  root_only.set(UIndex::root(), 123);
  CHECK(rrt::normalize_tree(root_only, n, 1.0).at(UIndex::root()) ==
        doctest::Approx(123.0 / n).epsilon(1e-12));
  CHECK_THROWS_AS(rrt::normalize_tree(ct, n, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rrt::normalize_tree(ct, 1, p), std::invalid_argument);

  // A level-1 entry equal to (1-p) n^p scales to exactly 1.
  const std::int64_t big_n = 1000000;
  const double big_p = rrt::supercritical_p(big_n, 1.0);
  const double unit = (1.0 - big_p) * std::exp(big_p * std::log(static_cast<double>(big_n)));
  rrt::IndexedTree<std::int64_t> level1;
  level1.set(UIndex::root(), 1);
  level1.set(UIndex::parse("1"), static_cast<std::int64_t>(std::llround(unit)));
  CHECK(rrt::normalize_tree(level1, big_n, big_p).at(UIndex::parse("1")) ==
        doctest::Approx(std::llround(unit) / unit).epsilon(1e-12));
}

TEST_SUITE_END();
