// Orbit basis of permutation-invariant operators on n tensor factors.
// A local "pair type" is an entry position (i,j) of the local matrix,
// flattened as i*d + j; an orbit type counts how many sites carry each
// pair type.  The orbit basis element C_r is the 0/1 sum of all site
// assignments with those counts.
#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>

#include "superact/linalg.hpp"
#include "superact/partitions.hpp"

namespace superact {

// Counts per local pair type; length d*d, entries sum to n.
using OrbitType = std::vector<int>;

// All orbit types for n sites over `types` local pair types whose support
// is restricted to `support` (empty = all).  Canonical (lexicographically
// descending) order.
inline std::vector<OrbitType> orbit_enumerate(
    int types, int n, const std::vector<int>& support = {}) {
  std::vector<bool> allowed(types, support.empty());
  for (int s : support) allowed[s] = true;
  std::vector<OrbitType> out;
  OrbitType cur(types, 0);
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == types) {
      if (rem == 0) out.push_back(cur);
      return;
    }
    const int hi = allowed[pos] ? rem : 0;
    for (int v = hi; v >= 0; --v) {
      cur[pos] = v;
      self(self, pos + 1, rem - v);
      cur[pos] = 0;
    }
  };
  rec(rec, 0, n);
  return out;
}

struct OrbitMetrics {
  std::uint64_t orbit_size = 0;  // number of site assignments in the orbit
  double trace = 0.0;            // trace of C_r
  double hs_norm_sq = 0.0;       // Hilbert-Schmidt norm squared of C_r
};

inline OrbitMetrics orbit_metrics(const OrbitType& r, int d) {
  OrbitMetrics m;
  m.orbit_size = multinomial(r);
  m.hs_norm_sq = static_cast<double>(m.orbit_size);
  bool all_diag = true;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && r[i * d + j] != 0) all_diag = false;
  m.trace = all_diag ? static_cast<double>(m.orbit_size) : 0.0;
  return m;
}

// Dense matrix of the orbit basis element C_r on (C^d)^(x n); small n only.
inline ComplexMatrix orbit_dense(const OrbitType& r, int d, int n) {
  const long D = static_cast<long>(std::pow(d, n));
  ComplexMatrix out = ComplexMatrix::Zero(D, D);
  std::vector<int> site_type(n);
  // Enumerate all assignments of pair types to sites with counts r.
  auto rec = [&](auto&& self, int site, OrbitType rem) -> void {
    if (site == n) {
      long row = 0, col = 0;
      for (int s = 0; s < n; ++s) {
        row = row * d + site_type[s] / d;
        col = col * d + site_type[s] % d;
      }
      out(row, col) += 1.0;
      return;
    }
    for (int t = 0; t < d * d; ++t) {
      if (rem[t] == 0) continue;
      rem[t]--;
      site_type[site] = t;
      self(self, site + 1, rem);
      rem[t]++;
    }
  };
  rec(rec, 0, r);
  return out;
}

// Coefficients of X^(x n) in the orbit basis: c_r = prod_t X_t^{r_t}.
inline std::vector<cplx> tensor_power_coeffs(const ComplexMatrix& X, int n,
                                             const std::vector<OrbitType>& orbits) {
  const int d = static_cast<int>(X.rows());
  std::vector<cplx> out;
  out.reserve(orbits.size());
  for (const auto& r : orbits) {
    cplx c = 1.0;
    for (int t = 0; t < d * d; ++t)
      for (int rep = 0; rep < r[t]; ++rep) c *= X(t / d, t % d);
    out.push_back(c);
  }
  return out;
}

// Permutation-invariant operator on R (x) (C^d)^(x n): for each reference
// pair (k,l) a coefficient vector over the canonical orbit list.
struct SymmetricOperator {
  int n = 0;
  int d = 2;    // local dimension
  int d_R = 1;  // reference dimension
  std::vector<OrbitType> orbits;
  ComplexMatrix coeffs;  // (d_R*d_R) x orbits.size(); row index k*d_R + l

  SymmetricOperator() = default;
  SymmetricOperator(int n_, int d_, int dR)
      : n(n_), d(d_), d_R(dR), orbits(orbit_enumerate(d_ * d_, n_)) {
    coeffs = ComplexMatrix::Zero(static_cast<long>(d_R) * d_R,
                                 static_cast<long>(orbits.size()));
  }
};

// Invariant under S_k x S_{n-k}: coefficients over pairs of orbits, flat
// index r1 * m2 + r2 (first factor = first k sites).
struct PairSymmetricOperator {
  int n = 0;
  int k = 0;
  int d = 2;
  int d_R = 1;
  std::vector<OrbitType> orbits1, orbits2;
  ComplexMatrix coeffs;  // (d_R*d_R) x (m1*m2)

  PairSymmetricOperator() = default;
  PairSymmetricOperator(int n_, int k_, int d_, int dR)
      : n(n_),
        k(k_),
        d(d_),
        d_R(dR),
        orbits1(orbit_enumerate(d_ * d_, k_)),
        orbits2(orbit_enumerate(d_ * d_, n_ - k_)) {
    coeffs = ComplexMatrix::Zero(
        static_cast<long>(d_R) * d_R,
        static_cast<long>(orbits1.size()) * orbits2.size());
  }
};

namespace detail {
// Index lookup for a canonical orbit list.
struct OrbitIndex {
  std::map<OrbitType, int> idx;
  explicit OrbitIndex(const std::vector<OrbitType>& orbits) {
    for (size_t i = 0; i < orbits.size(); ++i)
      idx[orbits[i]] = static_cast<int>(i);
  }
  int operator()(const OrbitType& r) const { return idx.at(r); }
};
}  // namespace detail

// Dense realization of a SymmetricOperator (small n only).
inline ComplexMatrix symmetric_dense(const SymmetricOperator& X) {
  const long Dn = static_cast<long>(std::pow(X.d, X.n));
  ComplexMatrix out =
      ComplexMatrix::Zero(X.d_R * Dn, X.d_R * Dn);
  for (size_t r = 0; r < X.orbits.size(); ++r) {
    ComplexMatrix cr = orbit_dense(X.orbits[r], X.d, X.n);
    for (int k = 0; k < X.d_R; ++k)
      for (int l = 0; l < X.d_R; ++l) {
        const cplx c = X.coeffs(k * X.d_R + l, r);
        if (c == cplx(0.0)) continue;
        out.block(k * Dn, l * Dn, Dn, Dn) += c * cr;
      }
  }
  return out;
}

}  // namespace superact
