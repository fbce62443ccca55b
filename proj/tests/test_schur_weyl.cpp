#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "superact/schur_weyl.hpp"

using namespace superact;

namespace {

std::mt19937_64 rng(12345);

SymmetricOperator random_symmetric(int n, int dR) {
  std::normal_distribution<double> g;
  SymmetricOperator X(n, 2, dR);
  for (long r = 0; r < X.coeffs.rows(); ++r)
    for (long c = 0; c < X.coeffs.cols(); ++c)
      X.coeffs(r, c) = cplx(g(rng), g(rng));
  return X;
}

PairSymmetricOperator random_pair(int n, int k, int dR) {
  std::normal_distribution<double> g;
  PairSymmetricOperator X(n, k, 2, dR);
  for (long r = 0; r < X.coeffs.rows(); ++r)
    for (long c = 0; c < X.coeffs.cols(); ++c)
      X.coeffs(r, c) = cplx(g(rng), g(rng));
  return X;
}

ComplexMatrix pair_dense(const PairSymmetricOperator& X) {
  const long D = 1L << X.n;
  const long m2 = static_cast<long>(X.orbits2.size());
  ComplexMatrix out = ComplexMatrix::Zero(X.d_R * D, X.d_R * D);
  for (size_t r1 = 0; r1 < X.orbits1.size(); ++r1) {
    ComplexMatrix C1 = orbit_dense(X.orbits1[r1], 2, X.k);
    for (size_t r2 = 0; r2 < X.orbits2.size(); ++r2) {
      ComplexMatrix C = kron(C1, orbit_dense(X.orbits2[r2], 2, X.n - X.k));
      for (int k = 0; k < X.d_R; ++k)
        for (int l = 0; l < X.d_R; ++l) {
          const cplx c = X.coeffs(k * X.d_R + l, r1 * m2 + r2);
          if (c == cplx(0.0)) continue;
          out.block(k * D, l * D, D, D) += c * C;
        }
    }
  }
  return out;
}

// Multiply two orbit-coefficient operators via their dense forms and
// re-extract coefficients; used only as a small-n oracle cross-check.
double hs_distance(const ComplexMatrix& A, const ComplexMatrix& B) {
  return (A - B).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("converter dimensions are consistent") {
  for (int n = 1; n <= 8; ++n) {
    Converter cv = build_converter(n);
    CHECK(cv.total == static_cast<int>(binomial(n + 3, 3)));
    std::uint64_t sum_fm = 0;
    for (size_t i = 0; i < cv.lambdas.size(); ++i) {
      CHECK(cv.mdim[i] == cv.lambdas[i][0] - cv.lambdas[i][1] + 1);
      sum_fm += cv.fdim[i] * cv.mdim[i];
    }
    CHECK(sum_fm == (1ULL << n));
    // Invertibility of the orbit -> block-entry map.
    CHECK((cv.F * cv.Finv - Eigen::MatrixXd::Identity(cv.total, cv.total))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }
}

TEST_CASE("round trip through blocks is the identity") {
  for (int n = 1; n <= 5; ++n) {
    Converter cv = build_converter(n);
    SymmetricOperator X = random_symmetric(n, 2);
    SymmetricOperator Y = from_blocks(to_blocks(X, cv), cv);
    CHECK((X.coeffs - Y.coeffs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("block map is a homomorphism and preserves trace and adjoint") {
  for (int n = 2; n <= 5; ++n) {
    Converter cv = build_converter(n);
    SymmetricOperator X = random_symmetric(n, 2);
    SymmetricOperator Y = random_symmetric(n, 2);
    BlockOperator BX = to_blocks(X, cv), BY = to_blocks(Y, cv);

    ComplexMatrix dx = symmetric_dense(X), dy = symmetric_dense(Y);

    // Trace rule with multiplicities.
    CHECK(std::abs(block_trace(BX) - dx.trace()) < 1e-8);
    // Pairing rule.
    CHECK(std::abs(block_pairing(BX, BY) - (dx * dy).trace()) < 1e-7);

    // Product of blocks corresponds to product of operators.
    BlockOperator BP = BX;
    for (size_t i = 0; i < BP.blocks.size(); ++i)
      BP.blocks[i] = BX.blocks[i] * BY.blocks[i];
    SymmetricOperator P = from_blocks(BP, cv);
    CHECK(hs_distance(symmetric_dense(P), dx * dy) < 1e-8);

    // Adjoint of blocks corresponds to adjoint of the operator.
    BlockOperator BA = BX;
    for (auto& b : BA.blocks) b = dagger(b);
    SymmetricOperator A = from_blocks(BA, cv);
    CHECK(hs_distance(symmetric_dense(A), dagger(dx)) < 1e-9);

    // Reference partial trace.
    ComplexMatrix T = block_ref_trace(BX);
    ComplexMatrix Td = partial_trace(
        dx, {2, static_cast<int>(dx.rows() / 2)}, {1});
    CHECK(hs_distance(T, Td) < 1e-8);
  }
}

TEST_CASE("positivity is equivalent in the block picture") {
  const int n = 4;
  Converter cv = build_converter(n);
  SymmetricOperator X = random_symmetric(n, 1);
  // Make it Hermitian PSD by squaring through the blocks.
  BlockOperator B = to_blocks(X, cv);
  for (auto& b : B.blocks) b = (b * dagger(b)).eval();
  SymmetricOperator P = from_blocks(B, cv);
  ComplexMatrix dense = hermitize(symmetric_dense(P));
  CHECK(min_eigenvalue(dense) > -1e-9);
}

TEST_CASE("pair block map matches dense tensor products") {
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k < n; ++k) {
      Converter cv1 = build_converter(k), cv2 = build_converter(n - k);
      PairSymmetricOperator X = random_pair(n, k, 2);
      // Round trip.
      PairSymmetricOperator Y =
          from_blocks_pair(to_blocks_pair(X, cv1, cv2), cv1, cv2, n, k);
      CHECK((X.coeffs - Y.coeffs).cwiseAbs().maxCoeff() < 1e-9);

      // Products and traces against the dense realization.
      PairSymmetricOperator Z = random_pair(n, k, 2);
      BlockOperator BX = to_blocks_pair(X, cv1, cv2);
      BlockOperator BZ = to_blocks_pair(Z, cv1, cv2);
      ComplexMatrix dx = pair_dense(X), dz = pair_dense(Z);
      CHECK(std::abs(block_trace(BX) - dx.trace()) < 1e-8);
      CHECK(std::abs(block_pairing(BX, BZ) - (dx * dz).trace()) < 1e-6);
      BlockOperator BP = BX;
      for (size_t i = 0; i < BP.blocks.size(); ++i)
        BP.blocks[i] = BX.blocks[i] * BZ.blocks[i];
      PairSymmetricOperator P = from_blocks_pair(BP, cv1, cv2, n, k);
      CHECK(hs_distance(pair_dense(P), dx * dz) < 1e-7);

      ComplexMatrix T = block_ref_trace(BX);
      ComplexMatrix Td = partial_trace(
          dx, {2, static_cast<int>(dx.rows() / 2)}, {1});
      CHECK(hs_distance(T, Td) < 1e-7);
    }
}
