#include <cmath>
#include <vector>

#include "doctest.h"
#include "rrt/rng.hpp"

using rrt::RngStream;

TEST_SUITE_BEGIN("rng");

TEST_CASE("identical (seed, stream) replays the same sequence") {
  RngStream a(7, 3);
  RngStream b(7, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams differ from the start") {
  RngStream a(7, 3);
  RngStream b(7, 4);
  int agree = 0;
  for (int i = 0; i < 64; ++i) agree += a.next_u64() == b.next_u64();
  CHECK(agree == 0);
}

TEST_CASE("next_below stays in range and is roughly uniform") {
  RngStream rng(1, 0);
  std::vector<int> counts(10, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto v = rng.next_below(10);
    REQUIRE(v < 10);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) CHECK(std::abs(c - draws / 10) < 600);
  CHECK_THROWS_AS(rng.next_below(0), std::invalid_argument);
}

TEST_CASE("exponential draws are positive with mean about 1/rate") {
  RngStream rng(2, 0);
  double sum = 0.0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    const double x = rng.next_exponential(2.0);
    REQUIRE(x > 0.0);
    sum += x;
  }
  CHECK(std::abs(sum / draws - 0.5) < 0.01);
  CHECK_THROWS_AS(rng.next_exponential(0.0), std::invalid_argument);
}

TEST_CASE("discard jumps ahead exactly") {
  RngStream a(11, 5);
  RngStream b(11, 5);
  for (int i = 0; i < 123; ++i) a.next_u64();
  b.discard(123);
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams are deterministic and leave the parent untouched") {
  RngStream parent(9, 1);
  const auto before = RngStream(9, 1);
  RngStream s1 = parent.substream(0);
  RngStream s2 = parent.substream(0);
  RngStream s3 = parent.substream(1);
  CHECK(s1.next_u64() == s2.next_u64());
  CHECK(s1.next_u64() != s3.next_u64());
  RngStream fresh(9, 1);
  RngStream untouched = before;
  CHECK(fresh.next_u64() == untouched.next_u64());
}

TEST_SUITE_END();
