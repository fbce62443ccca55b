// Site-wise channel action in the orbit-coefficient picture.
//
// Applying a product channel g^(x n) to a permutation-invariant operator
// acts on each local pair type independently.  The 4x4 transfer matrix
// L[(a,a') -> (q,q')] = g[aq, a'q'] (g the unnormalized local Choi matrix)
// pushes one site; an orbit type pushes through as a monomial coefficient
// of the product polynomial prod_X (sum_Y L[X->Y] y_Y)^{t_X}.
#pragma once

#include <unordered_map>

#include "superact/effective_channel.hpp"
#include "superact/orbit.hpp"

namespace superact {

using TransferMatrix = Eigen::Matrix4cd;

// Row = input pair type a*2+a', column = output pair type q*2+q'.
inline TransferMatrix transfer_from_local_choi(const ComplexMatrix& g) {
  TransferMatrix L;
  for (int a = 0; a < 2; ++a)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int q = 0; q < 2; ++q)
        for (int q1 = 0; q1 < 2; ++q1)
          L(a * 2 + a1, q * 2 + q1) = g(a * 2 + q, a1 * 2 + q1);
  return L;
}

inline TransferMatrix transfer_identity() {
  return transfer_from_local_choi(choi_identity(2).gamma);
}

// Dephase-and-shift site channel seen on an erased line.
inline TransferMatrix transfer_pauli() {
  return transfer_from_local_choi(flagged_pauli_channel().gamma);
}

namespace detail {

inline double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Expansion of the pushforward of C_t through L^(x k): list of
// (orbit index, coefficient) pairs over the canonical k-site orbit list.
inline std::vector<std::pair<int, cplx>> push_orbit(
    const OrbitType& t, const TransferMatrix& L, const OrbitIndex& oindex) {
  std::unordered_map<std::uint32_t, cplx> poly;
  poly[0] = 1.0;
  for (int X = 0; X < 4; ++X)
    for (int rep = 0; rep < t[X]; ++rep) {
      std::unordered_map<std::uint32_t, cplx> next;
      for (const auto& [key, c] : poly)
        for (int Y = 0; Y < 4; ++Y) {
          if (L(X, Y) == cplx(0.0)) continue;
          next[key + (std::uint32_t(1) << (8 * Y))] += c * L(X, Y);
        }
      poly = std::move(next);
    }
  double tfact = 1.0;
  for (int X = 0; X < 4; ++X) tfact *= factorial(t[X]);
  std::vector<std::pair<int, cplx>> out;
  out.reserve(poly.size());
  for (const auto& [key, c] : poly) {
    OrbitType u = {static_cast<int>(key & 0xff),
                   static_cast<int>((key >> 8) & 0xff),
                   static_cast<int>((key >> 16) & 0xff),
                   static_cast<int>((key >> 24) & 0xff)};
    double ufact = 1.0;
    for (int Y = 0; Y < 4; ++Y) ufact *= factorial(u[Y]);
    out.emplace_back(oindex(u), c * (ufact / tfact));
  }
  return out;
}

using PushCache = std::map<OrbitType, std::vector<std::pair<int, cplx>>>;

inline const std::vector<std::pair<int, cplx>>& push_cached(
    PushCache& cache, const OrbitType& t, const TransferMatrix& L,
    const OrbitIndex& oindex) {
  auto it = cache.find(t);
  if (it != cache.end()) return it->second;
  return cache.emplace(t, push_orbit(t, L, oindex)).first->second;
}

// Enumerate all splits t = t1 + t2 with |t1| = k, calling f(t1, t2).
template <typename F>
inline void for_each_split(const OrbitType& t, int k, F&& f) {
  OrbitType t1(4, 0), t2(4, 0);
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == 4) {
      if (rem != 0) return;
      f(t1, t2);
      return;
    }
    for (int v = std::min(rem, t[pos]); v >= 0; --v) {
      t1[pos] = v;
      t2[pos] = t[pos] - v;
      self(self, pos + 1, rem - v);
    }
    t1[pos] = 0;
    t2[pos] = t[pos];
  };
  rec(rec, 0, k);
}

}  // namespace detail

// Push an invariant operator on R (x) A^n through independent site channels:
// transfer L1 on the first k sites, L2 on the rest.  The reference factor
// rides along untouched; the result is S_k x S_{n-k} invariant.
inline PairSymmetricOperator concat_orbit(const SymmetricOperator& E, int k,
                                          const TransferMatrix& L1,
                                          const TransferMatrix& L2) {
  const int n = E.n, dR = E.d_R;
  PairSymmetricOperator out(n, k, 2, dR);
  detail::OrbitIndex idx1(out.orbits1), idx2(out.orbits2);
  detail::PushCache cache1, cache2;
  const long m2 = static_cast<long>(out.orbits2.size());
  for (size_t ti = 0; ti < E.orbits.size(); ++ti) {
    if (E.coeffs.col(ti).cwiseAbs().maxCoeff() == 0.0) continue;
    detail::for_each_split(
        E.orbits[ti], k, [&](const OrbitType& t1, const OrbitType& t2) {
          const auto& p1 = detail::push_cached(cache1, t1, L1, idx1);
          const auto& p2 = detail::push_cached(cache2, t2, L2, idx2);
          for (const auto& [u1, c1] : p1)
            for (const auto& [u2, c2] : p2)
              out.coeffs.col(u1 * m2 + u2) += (c1 * c2) * E.coeffs.col(ti);
        });
  }
  return out;
}

// Push a S_k x S_{n-k} invariant operator through independent site channels
// (L1 on the first factor, L2 on the second); group structure is preserved.
inline PairSymmetricOperator pair_pushforward(const PairSymmetricOperator& Y,
                                              const TransferMatrix& L1,
                                              const TransferMatrix& L2) {
  PairSymmetricOperator out(Y.n, Y.k, 2, Y.d_R);
  detail::OrbitIndex idx1(out.orbits1), idx2(out.orbits2);
  detail::PushCache cache1, cache2;
  const long m2 = static_cast<long>(out.orbits2.size());
  for (size_t r1 = 0; r1 < Y.orbits1.size(); ++r1)
    for (size_t r2 = 0; r2 < Y.orbits2.size(); ++r2) {
      const long col = static_cast<long>(r1) * m2 + r2;
      if (Y.coeffs.col(col).cwiseAbs().maxCoeff() == 0.0) continue;
      const auto& p1 = detail::push_cached(cache1, Y.orbits1[r1], L1, idx1);
      const auto& p2 = detail::push_cached(cache2, Y.orbits2[r2], L2, idx2);
      for (const auto& [u1, c1] : p1)
        for (const auto& [u2, c2] : p2)
          out.coeffs.col(u1 * m2 + u2) += (c1 * c2) * Y.coeffs.col(col);
    }
  return out;
}

// Restriction of the S_n orbit basis to S_k x S_{n-k} (no channel applied).
inline PairSymmetricOperator split_orbit(const SymmetricOperator& E, int k) {
  return concat_orbit(E, k, transfer_identity(), transfer_identity());
}

// Group average over S_n of a S_k x S_{n-k} invariant operator:
// sym(C_{s1} (x) C_{s2}) = [prod_X C(t_X, s1_X) / C(n, k)] C_{s1+s2}.
inline SymmetricOperator symmetrize_pair(const PairSymmetricOperator& Y) {
  const int n = Y.n, k = Y.k, dR = Y.d_R;
  SymmetricOperator out(n, 2, dR);
  detail::OrbitIndex idx(out.orbits);
  const double cnk = static_cast<double>(binomial(n, k));
  const long m2 = static_cast<long>(Y.orbits2.size());
  for (size_t r1 = 0; r1 < Y.orbits1.size(); ++r1)
    for (size_t r2 = 0; r2 < Y.orbits2.size(); ++r2) {
      const long col = static_cast<long>(r1) * m2 + r2;
      if (Y.coeffs.col(col).cwiseAbs().maxCoeff() == 0.0) continue;
      OrbitType t(4);
      double w = 1.0;
      for (int X = 0; X < 4; ++X) {
        t[X] = Y.orbits1[r1][X] + Y.orbits2[r2][X];
        w *= static_cast<double>(binomial(t[X], Y.orbits1[r1][X]));
      }
      out.coeffs.col(idx(t)) += (w / cnk) * Y.coeffs.col(col);
    }
  return out;
}

// Binomial average over erasure-pattern sizes: 2^-n sum_k C(n,k) sym(Y_k).
inline SymmetricOperator resymmetrize(
    const std::vector<PairSymmetricOperator>& per_k) {
  const int n = static_cast<int>(per_k.size()) - 1;
  SymmetricOperator out(n, 2, per_k[0].d_R);
  const double norm = std::pow(2.0, -n);
  for (int k = 0; k <= n; ++k) {
    SymmetricOperator s = symmetrize_pair(per_k[k]);
    out.coeffs += (norm * static_cast<double>(binomial(n, k))) * s.coeffs;
  }
  return out;
}

// Extend an encoder state on R (x) A^n to n+1 sites by adjoining a maximally
// mixed site and symmetrizing; preserves the marginal condition on R.
inline SymmetricOperator lift_encoder(const SymmetricOperator& E) {
  const int n = E.n, dR = E.d_R;
  PairSymmetricOperator Y(n + 1, n, 2, dR);
  // One-site orbit list is canonical: (1,0,0,0),(0,1,0,0),(0,0,1,0),(0,0,0,1).
  for (size_t ti = 0; ti < E.orbits.size(); ++ti) {
    Y.coeffs.col(ti * 4 + 0) = 0.5 * E.coeffs.col(ti);
    Y.coeffs.col(ti * 4 + 3) = 0.5 * E.coeffs.col(ti);
  }
  return symmetrize_pair(Y);
}

// Orbit expansion of the conditional n-site channel (first k sites carry the
// dephase-and-shift channel, the rest are ideal).  The operator factorizes
// across the two site groups, so coefficients are stored per factor over
// support-restricted orbit lists (local pair types are pairs of an input and
// an output index, sixteen in total).
struct ChannelOrbitExpansion {
  int n = 0, k = 0;
  std::vector<OrbitType> orbits1, orbits2;
  std::vector<cplx> coeffs1, coeffs2;  // coefficient of C_{r1} (x) C_{r2}
};

namespace detail {
inline std::vector<int> choi_support(const ComplexMatrix& g) {
  std::vector<int> s;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      if (std::abs(g(i, j)) > 0.0) s.push_back(i * static_cast<int>(g.cols()) + j);
  return s;
}
}  // namespace detail

inline ChannelOrbitExpansion channel_orbit(int n, int k) {
  ChannelOrbitExpansion out;
  out.n = n;
  out.k = k;
  const ComplexMatrix g1 = flagged_pauli_channel().gamma;
  const ComplexMatrix g2 = choi_identity(2).gamma;
  out.orbits1 = orbit_enumerate(16, k, detail::choi_support(g1));
  out.orbits2 = orbit_enumerate(16, n - k, detail::choi_support(g2));
  out.coeffs1 = tensor_power_coeffs(g1, k, out.orbits1);
  out.coeffs2 = tensor_power_coeffs(g2, n - k, out.orbits2);
  return out;
}

}  // namespace superact
