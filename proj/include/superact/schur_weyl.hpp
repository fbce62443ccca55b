// Block (irrep) picture of permutation-invariant qubit operators.
//
// The symmetric-group invariant algebra on (C^2)^(x n) decomposes into one
// square block per two-row partition.  The converter below computes, for
// every orbit basis element C_r, its block matrix along a fixed sequential
// spin-coupling path; stacking those numbers gives a square linear map
// between orbit coefficients and block entries, which is inverted once.
// Entries are obtained by a transfer-style polynomial recursion over sites:
// couple one site at a time, carrying a (block-entry x orbit-monomial)
// table.
#pragma once

#include <cstdint>
#include <unordered_map>

#include "superact/orbit.hpp"

namespace superact {

struct BlockOperator {
  int d_R = 1;
  std::vector<std::uint64_t> fmult;   // permutation multiplicity per block
  std::vector<int> bdim;              // irrep-side dimension per block
  std::vector<ComplexMatrix> blocks;  // each (d_R*bdim) square
};

struct Converter {
  int n = 0;
  std::vector<Partition> lambdas;  // two-row partitions of n
  std::vector<int> mdim;           // lambda1 - lambda2 + 1
  std::vector<std::uint64_t> fdim;
  std::vector<OrbitType> orbits;   // canonical order, 4 pair types
  std::vector<int> offsets;        // stacked offset per lambda
  int total = 0;                   // sum of mdim^2 == orbits.size()
  Eigen::MatrixXd F;               // orbit coords -> stacked block entries
  Eigen::MatrixXd Finv;
};

namespace detail {

inline std::uint32_t orbit_key(const OrbitType& r) {
  return static_cast<std::uint32_t>(r[0]) |
         (static_cast<std::uint32_t>(r[1]) << 8) |
         (static_cast<std::uint32_t>(r[2]) << 16) |
         (static_cast<std::uint32_t>(r[3]) << 24);
}

// Clebsch-Gordan coefficient for coupling (two_j, two_m_new - two_mu) with a
// spin-1/2 of two_mu onto two_j_new = two_j +/- 1, evaluated at two_m_new.
inline double cg_half(int two_j, int up, int two_m_new, int two_mu) {
  const double den = two_j + 1;
  if (up) {
    return (two_mu > 0) ? std::sqrt((two_j + two_m_new + 1) / (2 * den))
                        : std::sqrt((two_j - two_m_new + 1) / (2 * den));
  }
  return (two_mu > 0) ? -std::sqrt((two_j - two_m_new + 1) / (2 * den))
                      : std::sqrt((two_j + two_m_new + 1) / (2 * den));
}

}  // namespace detail

inline Converter build_converter(int n) {
  Converter cv;
  cv.n = n;
  cv.lambdas = partitions(2, n);
  cv.orbits = orbit_enumerate(4, n);
  detail::OrbitIndex oindex(cv.orbits);
  int off = 0;
  for (const auto& lam : cv.lambdas) {
    cv.mdim.push_back(lam[0] - lam[1] + 1);
    cv.fdim.push_back(syt_count(lam));
    cv.offsets.push_back(off);
    off += cv.mdim.back() * cv.mdim.back();
  }
  cv.total = off;
  if (cv.total != static_cast<int>(cv.orbits.size()))
    throw std::logic_error("build_converter: dimension count mismatch");
  cv.F = Eigen::MatrixXd::Zero(cv.total, cv.total);

  for (size_t li = 0; li < cv.lambdas.size(); ++li) {
    const int l1 = cv.lambdas[li][0], l2 = cv.lambdas[li][1];
    // Path: l1 up-steps, then l2 down-steps.
    std::unordered_map<std::uint32_t, Eigen::MatrixXd> table;
    table[0] = Eigen::MatrixXd::Ones(1, 1);
    int two_j = 0;
    for (int s = 0; s < n; ++s) {
      const int up = s < l1 ? 1 : 0;
      const int two_j_new = up ? two_j + 1 : two_j - 1;
      const int mdim_new = two_j_new + 1;
      std::unordered_map<std::uint32_t, Eigen::MatrixXd> next;
      for (const auto& [key, B] : table) {
        for (int mua = -1; mua <= 1; mua += 2)
          for (int mub = -1; mub <= 1; mub += 2) {
            const int pair_type = (mua > 0 ? 0 : 1) * 2 + (mub > 0 ? 0 : 1);
            const std::uint32_t nkey =
                key + (std::uint32_t(1) << (8 * pair_type));
            Eigen::MatrixXd contrib = Eigen::MatrixXd::Zero(mdim_new, mdim_new);
            bool nonzero = false;
            for (int ia = 0; ia < mdim_new; ++ia) {
              const int two_ma = 2 * ia - two_j_new;
              const int two_ma_old = two_ma - mua;
              if (std::abs(two_ma_old) > two_j) continue;
              const double ca = detail::cg_half(two_j, up, two_ma, mua);
              for (int ib = 0; ib < mdim_new; ++ib) {
                const int two_mb = 2 * ib - two_j_new;
                const int two_mb_old = two_mb - mub;
                if (std::abs(two_mb_old) > two_j) continue;
                const double cb = detail::cg_half(two_j, up, two_mb, mub);
                const double v = ca * cb *
                                 B((two_ma_old + two_j) / 2,
                                   (two_mb_old + two_j) / 2);
                if (v != 0.0) {
                  contrib(ia, ib) += v;
                  nonzero = true;
                }
              }
            }
            if (!nonzero) continue;
            auto it = next.find(nkey);
            if (it == next.end())
              next.emplace(nkey, contrib);
            else
              it->second += contrib;
          }
      }
      table = std::move(next);
      two_j = two_j_new;
    }
    const int m = cv.mdim[li], offset = cv.offsets[li];
    for (const auto& [key, B] : table) {
      OrbitType r = {static_cast<int>(key & 0xff),
                     static_cast<int>((key >> 8) & 0xff),
                     static_cast<int>((key >> 16) & 0xff),
                     static_cast<int>((key >> 24) & 0xff)};
      const int col = oindex(r);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          cv.F(offset + a * m + b, col) = B(a, b);
    }
  }
  cv.Finv = cv.F.partialPivLu().inverse();
  return cv;
}

// ---- single-group conversions ------------------------------------------

inline BlockOperator to_blocks(const SymmetricOperator& X, const Converter& cv) {
  const int dR = X.d_R;
  BlockOperator out;
  out.d_R = dR;
  out.fmult = cv.fdim;
  out.bdim = cv.mdim;
  for (size_t li = 0; li < cv.lambdas.size(); ++li)
    out.blocks.push_back(
        ComplexMatrix::Zero(dR * cv.mdim[li], dR * cv.mdim[li]));
  for (int k = 0; k < dR; ++k)
    for (int l = 0; l < dR; ++l) {
      ComplexVector stacked = cv.F * X.coeffs.row(k * dR + l).transpose();
      for (size_t li = 0; li < cv.lambdas.size(); ++li) {
        const int m = cv.mdim[li], off = cv.offsets[li];
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            out.blocks[li](k * m + a, l * m + b) = stacked(off + a * m + b);
      }
    }
  return out;
}

inline SymmetricOperator from_blocks(const BlockOperator& B,
                                     const Converter& cv) {
  const int dR = B.d_R;
  SymmetricOperator out(cv.n, 2, dR);
  for (int k = 0; k < dR; ++k)
    for (int l = 0; l < dR; ++l) {
      ComplexVector stacked = ComplexVector::Zero(cv.total);
      for (size_t li = 0; li < cv.lambdas.size(); ++li) {
        const int m = cv.mdim[li], off = cv.offsets[li];
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            stacked(off + a * m + b) = B.blocks[li](k * m + a, l * m + b);
      }
      out.coeffs.row(k * dR + l) = (cv.Finv * stacked).transpose();
    }
  return out;
}

// ---- pair-group conversions ----------------------------------------------
// Blocks are indexed by partition pairs (lambda_1 of k, lambda_2 of n-k),
// flat index li1 * L2 + li2; irrep dimension m1*m2, multiplicity f1*f2.
// Within a block, rows are ((ref*m1 + a)*m2 + c).

inline BlockOperator to_blocks_pair(const PairSymmetricOperator& X,
                                    const Converter& cv1,
                                    const Converter& cv2) {
  const int dR = X.d_R;
  const size_t L1 = cv1.lambdas.size(), L2 = cv2.lambdas.size();
  BlockOperator out;
  out.d_R = dR;
  for (size_t i = 0; i < L1; ++i)
    for (size_t j = 0; j < L2; ++j) {
      out.fmult.push_back(cv1.fdim[i] * cv2.fdim[j]);
      out.bdim.push_back(cv1.mdim[i] * cv2.mdim[j]);
      out.blocks.push_back(
          ComplexMatrix::Zero(dR * out.bdim.back(), dR * out.bdim.back()));
    }
  const long m2 = static_cast<long>(cv2.orbits.size());
  for (int k = 0; k < dR; ++k)
    for (int l = 0; l < dR; ++l) {
      ComplexMatrix Xc(cv1.orbits.size(), cv2.orbits.size());
      for (long r1 = 0; r1 < Xc.rows(); ++r1)
        for (long r2 = 0; r2 < Xc.cols(); ++r2)
          Xc(r1, r2) = X.coeffs(k * dR + l, r1 * m2 + r2);
      ComplexMatrix B = cv1.F * Xc * cv2.F.transpose();
      for (size_t i = 0; i < L1; ++i)
        for (size_t j = 0; j < L2; ++j) {
          const int mi = cv1.mdim[i], mj = cv2.mdim[j];
          auto& blk = out.blocks[i * L2 + j];
          for (int a = 0; a < mi; ++a)
            for (int b = 0; b < mi; ++b)
              for (int c = 0; c < mj; ++c)
                for (int d = 0; d < mj; ++d)
                  blk((k * mi + a) * mj + c, (l * mi + b) * mj + d) =
                      B(cv1.offsets[i] + a * mi + b,
                        cv2.offsets[j] + c * mj + d);
        }
    }
  return out;
}

inline PairSymmetricOperator from_blocks_pair(const BlockOperator& B,
                                              const Converter& cv1,
                                              const Converter& cv2, int n,
                                              int k_sites) {
  const int dR = B.d_R;
  PairSymmetricOperator out(n, k_sites, 2, dR);
  const size_t L1 = cv1.lambdas.size(), L2 = cv2.lambdas.size();
  const long m2 = static_cast<long>(cv2.orbits.size());
  for (int k = 0; k < dR; ++k)
    for (int l = 0; l < dR; ++l) {
      ComplexMatrix Bm = ComplexMatrix::Zero(cv1.total, cv2.total);
      for (size_t i = 0; i < L1; ++i)
        for (size_t j = 0; j < L2; ++j) {
          const int mi = cv1.mdim[i], mj = cv2.mdim[j];
          const auto& blk = B.blocks[i * L2 + j];
          for (int a = 0; a < mi; ++a)
            for (int b = 0; b < mi; ++b)
              for (int c = 0; c < mj; ++c)
                for (int d = 0; d < mj; ++d)
                  Bm(cv1.offsets[i] + a * mi + b, cv2.offsets[j] + c * mj + d) =
                      blk((k * mi + a) * mj + c, (l * mi + b) * mj + d);
        }
      ComplexMatrix Xc = cv1.Finv * Bm * cv2.Finv.transpose();
      for (long r1 = 0; r1 < Xc.rows(); ++r1)
        for (long r2 = 0; r2 < Xc.cols(); ++r2)
          out.coeffs(k * dR + l, r1 * m2 + r2) = Xc(r1, r2);
    }
  return out;
}

// ---- block-side utilities -------------------------------------------------

// Trace of the full operator: sum over blocks of f * Tr.
inline cplx block_trace(const BlockOperator& B) {
  cplx t = 0.0;
  for (size_t i = 0; i < B.blocks.size(); ++i)
    t += static_cast<double>(B.fmult[i]) * B.blocks[i].trace();
  return t;
}

// Hilbert-Schmidt pairing Tr[A B] of two block operators over the same group.
inline cplx block_pairing(const BlockOperator& A, const BlockOperator& B) {
  cplx t = 0.0;
  for (size_t i = 0; i < A.blocks.size(); ++i)
    t += static_cast<double>(A.fmult[i]) *
         (A.blocks[i] * B.blocks[i]).trace();
  return t;
}

// Partial trace onto the reference factor: T_ij = sum_b f_b sum_a
// block[(i,a),(j,a)].
inline ComplexMatrix block_ref_trace(const BlockOperator& B) {
  ComplexMatrix T = ComplexMatrix::Zero(B.d_R, B.d_R);
  for (size_t bi = 0; bi < B.blocks.size(); ++bi) {
    const int m = B.bdim[bi];
    for (int i = 0; i < B.d_R; ++i)
      for (int j = 0; j < B.d_R; ++j) {
        cplx acc = 0.0;
        for (int a = 0; a < m; ++a) acc += B.blocks[bi](i * m + a, j * m + a);
        T(i, j) += static_cast<double>(B.fmult[bi]) * acc;
      }
  }
  return T;
}

}  // namespace superact
