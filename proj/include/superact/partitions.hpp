// Integer partitions, irrep dimensions for the symmetric-group /
// unitary-group duality, and exact small combinatorics.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

namespace superact {

// Weakly decreasing parts, stored with exactly d entries (zero-padded).
using Partition = std::vector<int>;

// Exact binomial coefficient (fits 64 bits for all uses here).
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::uint64_t multinomial(const std::vector<int>& counts) {
  int n = 0;
  std::uint64_t r = 1;
  for (int c : counts) {
    for (int i = 1; i <= c; ++i) r = r * (n + i) / i;
    n += c;
  }
  return r;
}

// All partitions of n into at most d parts, zero-padded to length d,
// in lexicographically descending order.
inline std::vector<Partition> partitions(int d, int n) {
  std::vector<Partition> out;
  Partition cur(d, 0);
  auto rec = [&](auto&& self, int pos, int rem, int maxpart) -> void {
    if (pos == d) {
      if (rem == 0) out.push_back(cur);
      return;
    }
    for (int v = std::min(rem, maxpart); v >= 0; --v) {
      if (static_cast<long long>(v) * (d - pos) < rem) break;
      cur[pos] = v;
      self(self, pos + 1, rem - v, v);
      cur[pos] = 0;
    }
  };
  rec(rec, 0, n, n);
  return out;
}

// Multiplicity space dimension: number of semistandard Young tableaux with
// entries in 1..d (Weyl dimension formula, exact for small shapes).
inline long ssyt_count(const Partition& lam, int d) {
  long long num = 1, den = 1;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const int li = i < static_cast<int>(lam.size()) ? lam[i] : 0;
      const int lj = j < static_cast<int>(lam.size()) ? lam[j] : 0;
      num *= li - lj + j - i;
      den *= j - i;
    }
  return static_cast<long>(num / den);
}

// Number of standard Young tableaux, via path counting in the Bratteli
// diagram (exact in 64 bits for the sizes used here).
namespace detail {
inline std::uint64_t syt_rec(std::map<Partition, std::uint64_t>& memo,
                             const Partition& lam) {
  Partition key = lam;
  while (!key.empty() && key.back() == 0) key.pop_back();
  if (key.empty()) return 1;
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  std::uint64_t total = 0;
  for (size_t i = 0; i < key.size(); ++i) {
    if (key[i] == 0) continue;
    if (i + 1 < key.size() && key[i + 1] == key[i]) continue;  // not a corner
    Partition sub = key;
    sub[i] -= 1;
    total += syt_rec(memo, sub);
  }
  memo[key] = total;
  return total;
}
}  // namespace detail

inline std::uint64_t syt_count(const Partition& lam) {
  static std::mutex mu;
  static std::map<Partition, std::uint64_t> memo;
  std::lock_guard<std::mutex> lock(mu);
  return detail::syt_rec(memo, lam);
}

}  // namespace superact
