#include "toroidal/partitions.hpp"

#include <doctest.h>

#include <set>

using namespace toroidal;

namespace {

// p(n) by the bounded-part recurrence, independent of the pentagonal one.
std::int64_t count_bounded(int n, int max_part) {
  if (n == 0) return 1;
  std::int64_t total = 0;
  for (int k = 1; k <= std::min(n, max_part); ++k) total += count_bounded(n - k, k);
  return total;
}

}  // namespace

TEST_CASE("partition construction rejects non-decreasing or non-positive parts") {
  CHECK_THROWS_AS(Partition({1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Partition({2, 0}), std::invalid_argument);
  Partition p({3, 1, 1});
  CHECK(p.size() == 5);
  CHECK(p.length() == 3);
  CHECK(p.contains(1, 3));
  CHECK_FALSE(p.contains(2, 2));
}

TEST_CASE("enumeration order and counts") {
  const auto four = enumerate_partitions(4);
  REQUIRE(four.size() == 5);
  CHECK(four.front().parts() == std::vector<int>{4});
  CHECK(four[1].parts() == std::vector<int>{3, 1});
  CHECK(four[2].parts() == std::vector<int>{2, 2});
  CHECK(four.back().parts() == std::vector<int>{1, 1, 1, 1});
  CHECK(enumerate_partitions(0).size() == 1);
  for (int n = 0; n <= 20; ++n) {
    const auto all = enumerate_partitions(n);
    CHECK(static_cast<std::int64_t>(all.size()) == count_bounded(n, n));
    CHECK(partition_count(n) == count_bounded(n, n));
    CHECK(std::set<Partition>(all.begin(), all.end()).size() == all.size());
  }
}

TEST_CASE("pairs and tuples have convolution counts") {
  for (int n = 0; n <= 8; ++n) {
    std::int64_t expected = 0;
    for (int k = 0; k <= n; ++k) expected += count_bounded(k, k) * count_bounded(n - k, n - k);
    CHECK(static_cast<std::int64_t>(enumerate_pairs(n).size()) == expected);
    CHECK(static_cast<std::int64_t>(enumerate_tuples(2, n).size()) == expected);
  }
  CHECK(enumerate_pairs(2).size() == 5);
  CHECK(enumerate_tuples(3, 1).size() == 3);
}

TEST_CASE("nodes and weights") {
  const auto n21 = nodes(Partition({2, 1}));
  CHECK(n21 == std::vector<Node>{{1, 1}, {1, 2}, {2, 1}});
  CHECK(nodes(Partition({3})) == std::vector<Node>{{1, 1}, {1, 2}, {1, 3}});
  for (const auto& lambda : enumerate_partitions(7)) CHECK(static_cast<int>(nodes(lambda).size()) == lambda.size());
  CHECK(node_weight({1, 1}, {0.3, 0.2}, {1.7, -0.4}) == std::complex<double>(1.0));
  CHECK(std::abs(node_weight({2, 3}, 2.0, 5.0) - 20.0) < 1e-15);
  CHECK(std::abs(node_weight({4, 6}, 1.0, 1.0) - 1.0) < 1e-15);
}
