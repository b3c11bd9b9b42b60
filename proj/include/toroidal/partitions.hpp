#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace toroidal {

/// Integer partition stored as weakly decreasing positive parts.
class Partition {
 public:
  Partition() = default;
  /// Throws std::invalid_argument unless parts are weakly decreasing and positive.
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int size() const { return size_; }
  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }
  int operator[](int row) const { return parts_[row]; }

  /// Row-major containment test with 1-based (row, column).
  bool contains(int row, int col) const;

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;
  int size_ = 0;
};

/// Box of a Young diagram, 1-based.
struct Node {
  int row;
  int col;
  auto operator<=>(const Node&) const = default;
};

/// All partitions of n in reverse-lexicographic order: (n), (n-1,1), ... , (1^n).
std::vector<Partition> enumerate_partitions(int n);

/// All partitions of size <= n, grouped by size.
std::vector<Partition> enumerate_partitions_up_to(int n);

/// Ordered pairs (lambda, mu) with |lambda| + |mu| = n, lambda size ascending.
std::vector<std::pair<Partition, Partition>> enumerate_pairs(int n);

/// Ordered k-tuples of partitions with total size n.
std::vector<std::vector<Partition>> enumerate_tuples(int k, int n);

std::vector<Node> nodes(const Partition& lambda);

/// q3^(row-1) * q1^(col-1).
std::complex<double> node_weight(Node node, std::complex<double> q1, std::complex<double> q3);

/// p(n) via the Euler pentagonal recurrence.
std::int64_t partition_count(int n);

}  // namespace toroidal
