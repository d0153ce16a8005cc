#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kmsad {

// Exact unsigned integer wide enough for Eulerian rows up to n = 34.
using BigCount = unsigned __int128;

std::string to_string(BigCount value);

inline constexpr int kDefaultOrderCap = 16;
inline constexpr int kMaxOrderCap = 30;
inline constexpr int kMaxEnumerationOrder = 9;
inline constexpr int kMaxPartitionOrder = 10;

// A bijection of {1..n}, stored in one-line notation.
class Permutation {
 public:
  explicit Permutation(std::vector<int> mapping);

  static Permutation identity(int n);

  int size() const { return static_cast<int>(mapping_.size()); }
  int operator[](int i) const { return mapping_[i]; }
  const std::vector<int>& mapping() const { return mapping_; }

 private:
  std::vector<int> mapping_;
};

// Number of positions i with sigma_i > sigma_{i+1}.
int descent_count(const Permutation& perm);

// Row n of the Eulerian triangle, coefficients[k-1] = number of
// n-permutations with k-1 descents.
struct EulerianRow {
  int n = 0;
  std::vector<BigCount> coefficients;

  BigCount operator[](int k) const { return coefficients.at(k - 1); }
  BigCount sum() const;
  bool operator==(const EulerianRow&) const = default;
};

EulerianRow eulerian_row_recursive(int n, int cap = kDefaultOrderCap);

// Exhaustive descent count over S_n; independent of the recursion.
EulerianRow eulerian_row_by_enumeration(int n);

// Elements are 1-based; a block is a sorted list of elements.
using Block = std::vector<int>;
using SetPartition = std::vector<Block>;

// All partitions of {1..n} into non-empty blocks, in restricted-growth order.
std::vector<SetPartition> set_partitions(int n);

// Subset of {1..n} as a bitmask, element i <-> bit (i-1).
using Subset = std::uint32_t;
using SubsetTable = std::map<Subset, std::complex<double>>;

Subset subset_of(const Block& block);

// Connected parts from moments defined on every non-empty subset of {1..n}.
SubsetTable connected_from_moments(const SubsetTable& moments, int n);

// Moments reassembled from connected parts by summing over set partitions.
SubsetTable moments_from_connected(const SubsetTable& connected, int n);

}  // namespace kmsad
