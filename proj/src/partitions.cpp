#include "toroidal/partitions.hpp"

#include "toroidal/util.hpp"

#include <numeric>
#include <stdexcept>

namespace toroidal {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw std::invalid_argument("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1])
      throw std::invalid_argument("partition parts must be weakly decreasing");
  }
  size_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

bool Partition::contains(int row, int col) const {
  return row >= 1 && col >= 1 && row <= length() && col <= parts_[row - 1];
}

namespace {

void generate(int remaining, int max_part, std::vector<int>& prefix, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    generate(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int n) {
  if (n < 0) throw std::invalid_argument("enumerate_partitions: n < 0");
  std::vector<Partition> out;
  std::vector<int> prefix;
  generate(n, n, prefix, out);
  return out;
}

std::vector<Partition> enumerate_partitions_up_to(int n) {
  std::vector<Partition> out;
  for (int k = 0; k <= n; ++k) {
    auto level = enumerate_partitions(k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<std::pair<Partition, Partition>> enumerate_pairs(int n) {
  std::vector<std::pair<Partition, Partition>> out;
  for (int k = 0; k <= n; ++k) {
    const auto left = enumerate_partitions(k);
    const auto right = enumerate_partitions(n - k);
    for (const auto& l : left)
      for (const auto& r : right) out.emplace_back(l, r);
  }
  return out;
}

std::vector<std::vector<Partition>> enumerate_tuples(int k, int n) {
  if (k == 0) return n == 0 ? std::vector<std::vector<Partition>>{{}} : std::vector<std::vector<Partition>>{};
  std::vector<std::vector<Partition>> out;
  for (int first = 0; first <= n; ++first) {
    const auto heads = enumerate_partitions(first);
    const auto tails = enumerate_tuples(k - 1, n - first);
    for (const auto& h : heads)
      for (const auto& t : tails) {
        std::vector<Partition> tuple{h};
        tuple.insert(tuple.end(), t.begin(), t.end());
        out.push_back(std::move(tuple));
      }
  }
  return out;
}

std::vector<Node> nodes(const Partition& lambda) {
  std::vector<Node> out;
  out.reserve(lambda.size());
  for (int a = 1; a <= lambda.length(); ++a)
    for (int b = 1; b <= lambda[a - 1]; ++b) out.push_back({a, b});
  return out;
}

std::complex<double> node_weight(Node node, std::complex<double> q1, std::complex<double> q3) {
  return ipow(q3, node.row - 1) * ipow(q1, node.col - 1);
}

std::int64_t partition_count(int n) {
  if (n < 0) return 0;
  std::vector<std::int64_t> p(n + 1, 0);
  p[0] = 1;
  for (int m = 1; m <= n; ++m) {
    std::int64_t total = 0;
    for (int k = 1;; ++k) {
      const int g1 = k * (3 * k - 1) / 2;
      const int g2 = k * (3 * k + 1) / 2;
      if (g1 > m) break;
      const int sign = (k % 2 == 1) ? 1 : -1;
      total += sign * p[m - g1];
      if (g2 <= m) total += sign * p[m - g2];
    }
    p[m] = total;
  }
  return p[n];
}

}  // namespace toroidal
