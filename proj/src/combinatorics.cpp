#include "kmsad/combinatorics.hpp"

#include <algorithm>
#include <numeric>

#include "kmsad/error.hpp"

namespace kmsad {

std::string to_string(BigCount value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Permutation::Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
  const int n = size();
  std::vector<bool> seen(n + 1, false);
  for (int v : mapping_) {
    if (v < 1 || v > n || seen[v]) {
      throw DomainError("permutation: not a bijection of {1..n}");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 1);
  return Permutation(std::move(m));
}

int descent_count(const Permutation& perm) {
  int d = 0;
  for (int i = 0; i + 1 < perm.size(); ++i) {
    if (perm[i] > perm[i + 1]) ++d;
  }
  return d;
}

BigCount EulerianRow::sum() const {
  BigCount s = 0;
  for (auto c : coefficients) s += c;
  return s;
}

EulerianRow eulerian_row_recursive(int n, int cap) {
  if (cap > kMaxOrderCap) {
    throw DomainError("eulerian: cap exceeds 128-bit safe range");
  }
  if (n < 1 || n > cap) {
    throw DomainError("eulerian: order " + std::to_string(n) + " outside [1, " +
                      std::to_string(cap) + "] (cap exceeded)");
  }
  std::vector<BigCount> row{1};
  for (int m = 2; m <= n; ++m) {
    std::vector<BigCount> next(m, 1);
    for (int k = 2; k <= m - 1; ++k) {
      next[k - 1] = static_cast<BigCount>(k) * row[k - 1] +
                    static_cast<BigCount>(m + 1 - k) * row[k - 2];
    }
    row = std::move(next);
  }
  return {n, std::move(row)};
}

EulerianRow eulerian_row_by_enumeration(int n) {
  if (n < 1 || n > kMaxEnumerationOrder) {
    throw DomainError("eulerian enumeration: order " + std::to_string(n) +
                      " outside [1, " + std::to_string(kMaxEnumerationOrder) +
                      "] (cap exceeded)");
  }
  std::vector<BigCount> counts(n, 0);
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 1);
  do {
    counts[descent_count(Permutation(m))] += 1;
  } while (std::next_permutation(m.begin(), m.end()));
  return {n, std::move(counts)};
}

std::vector<SetPartition> set_partitions(int n) {
  if (n < 1 || n > kMaxPartitionOrder) {
    throw DomainError("set_partitions: n outside [1, " +
                      std::to_string(kMaxPartitionOrder) + "]");
  }
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<SetPartition> out;
  std::vector<int> a(n, 0);
  std::vector<int> prefix_max(n, 0);
  while (true) {
    const int blocks = prefix_max[n - 1] + 1;
    SetPartition p(blocks);
    for (int i = 0; i < n; ++i) p[a[i]].push_back(i + 1);
    out.push_back(std::move(p));

    int i = n - 1;
    while (i > 0 && a[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return out;
}

Subset subset_of(const Block& block) {
  Subset s = 0;
  for (int e : block) s |= Subset{1} << (e - 1);
  return s;
}

namespace {

void require_complete(const SubsetTable& table, int n, const char* what) {
  if (n < 1 || n > kMaxPartitionOrder) {
    throw DomainError(std::string(what) + ": n outside supported range");
  }
  const Subset full = (Subset{1} << n) - 1;
  for (Subset s = 1; s <= full; ++s) {
    if (!table.contains(s)) {
      throw DomainError(std::string(what) + ": incomplete table, subset " +
                        std::to_string(s) + " missing");
    }
  }
}

Subset lowest_bit(Subset s) { return s & (~s + 1); }

}  // namespace

SubsetTable connected_from_moments(const SubsetTable& moments, int n) {
  require_complete(moments, n, "connected_from_moments");
  const Subset full = (Subset{1} << n) - 1;

  // Omega(S) = sum_{B containing min(S)} Omega^c(B) Omega(S \ B), Omega(empty) = 1.
  auto moment = [&](Subset s) -> std::complex<double> {
    return s == 0 ? std::complex<double>{1.0, 0.0} : moments.at(s);
  };

  SubsetTable connected;
  for (Subset s = 1; s <= full; ++s) {
    const Subset anchor = lowest_bit(s);
    const Subset rest = s ^ anchor;
    std::complex<double> value = moment(s);
    // Proper sub-blocks B = anchor | t with t a proper subset of rest.
    if (rest != 0) {
      for (Subset t = (rest - 1) & rest;; t = (t - 1) & rest) {
        const Subset block = anchor | t;
        value -= connected.at(block) * moment(s ^ block);
        if (t == 0) break;
      }
    }
    connected.emplace(s, value);
  }
  return connected;
}

SubsetTable moments_from_connected(const SubsetTable& connected, int n) {
  require_complete(connected, n, "moments_from_connected");
  const Subset full = (Subset{1} << n) - 1;
  SubsetTable moments;
  for (Subset s = 1; s <= full; ++s) {
    std::vector<int> elems;
    for (int i = 0; i < n; ++i) {
      if (s & (Subset{1} << i)) elems.push_back(i + 1);
    }
    std::complex<double> total{0.0, 0.0};
    for (const auto& partition : set_partitions(static_cast<int>(elems.size()))) {
      std::complex<double> product{1.0, 0.0};
      for (const auto& block : partition) {
        Block mapped;
        for (int e : block) mapped.push_back(elems[e - 1]);
        product *= connected.at(subset_of(mapped));
      }
      total += product;
    }
    moments.emplace(s, total);
  }
  return moments;
}

}  // namespace kmsad
