#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "superact/symmetric_channel.hpp"

using namespace superact;

namespace {

std::mt19937_64 rng(777);

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

ChoiMatrix random_qubit_channel(int kraus) {
  std::normal_distribution<double> g;
  ComplexMatrix A(2 * kraus, 2);
  for (long i = 0; i < A.rows(); ++i)
    for (long j = 0; j < A.cols(); ++j) A(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(A);
  ComplexMatrix V = qr.householderQ() * ComplexMatrix::Identity(2 * kraus, 2);
  std::vector<ComplexMatrix> ks;
  for (int i = 0; i < kraus; ++i) ks.push_back(V.block(2 * i, 0, 2, 2));
  return choi_from_kraus(ks, 2, 2);
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

// Average over all site permutations (reference factor fixed).
ComplexMatrix sym_average(const ComplexMatrix& X, int dR, int n) {
  std::vector<int> dims(n + 1, 2);
  dims[0] = dR;
  std::vector<int> perm(n + 1);
  for (int i = 0; i <= n; ++i) perm[i] = i;
  ComplexMatrix acc = ComplexMatrix::Zero(X.rows(), X.cols());
  int count = 0;
  std::sort(perm.begin() + 1, perm.end());
  do {
    acc += permute_systems(X, dims, perm);
    ++count;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return acc / static_cast<double>(count);
}

}  // namespace

TEST_CASE("transfer matrices of reference site channels") {
  CHECK((transfer_identity() - Eigen::Matrix4cd::Identity()).norm() < 1e-15);
  const double p = ppt_channel_p();
  Eigen::Matrix4cd P = Eigen::Matrix4cd::Zero();
  P(0, 0) = 1 - p;
  P(0, 3) = p;
  P(3, 0) = p;
  P(3, 3) = 1 - p;
  CHECK((transfer_pauli() - P).norm() < 1e-15);
}

TEST_CASE("site-wise pushforward matches dense channel application") {
  for (int n = 2; n <= 3; ++n)
    for (int k = 0; k <= n; ++k) {
      SymmetricOperator E = random_symmetric(n, 2);
      ChoiMatrix g1 = random_qubit_channel(2);
      ChoiMatrix g2 = random_qubit_channel(3);
      PairSymmetricOperator M =
          concat_orbit(E, k, transfer_from_local_choi(g1.gamma),
                       transfer_from_local_choi(g2.gamma));
      // Dense oracle: apply id_R (x) g1^(x k) (x) g2^(x n-k).
      ChoiMatrix T = choi_identity(2);
      for (int s = 0; s < n; ++s) T = tensor(T, s < k ? g1 : g2);
      ComplexMatrix ref = apply_channel(T, symmetric_dense(E));
      CHECK((pair_dense(M) - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("pushforward through the erased-pattern channel pair") {
  const int n = 3, k = 2;
  SymmetricOperator E = random_symmetric(n, 2);
  PairSymmetricOperator M =
      concat_orbit(E, k, transfer_pauli(), transfer_identity());
  ChoiMatrix T = tensor(choi_identity(2), pauli_flag_channel_k(n, k));
  ComplexMatrix ref = apply_channel(T, symmetric_dense(E));
  CHECK((pair_dense(M) - ref).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("splitting then symmetrizing is the identity on invariants") {
  for (int n = 1; n <= 5; ++n)
    for (int k = 0; k <= n; ++k) {
      SymmetricOperator E = random_symmetric(n, 2);
      SymmetricOperator R = symmetrize_pair(split_orbit(E, k));
      CHECK((R.coeffs - E.coeffs).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("pair symmetrization matches the dense group average") {
  for (int n = 2; n <= 3; ++n)
    for (int k = 1; k < n; ++k) {
      PairSymmetricOperator Y = random_pair(n, k, 2);
      ComplexMatrix ref = sym_average(pair_dense(Y), 2, n);
      ComplexMatrix got = symmetric_dense(symmetrize_pair(Y));
      CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("binomial resymmetrization recombines split data") {
  const int n = 4;
  SymmetricOperator E = random_symmetric(n, 2);
  std::vector<PairSymmetricOperator> per_k;
  for (int k = 0; k <= n; ++k) per_k.push_back(split_orbit(E, k));
  SymmetricOperator R = resymmetrize(per_k);
  CHECK((R.coeffs - E.coeffs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("splitting weights satisfy the convolution identity") {
  // sum over splits of prod_X C(t_X, s1_X) = C(n, k), for every t and k.
  for (int n = 1; n <= 25; n += 6)
    for (int k = 0; k <= n; k += 3)
      for (const auto& t : orbit_enumerate(4, n)) {
        std::uint64_t sum = 0;
        detail::for_each_split(t, k, [&](const OrbitType& s1, const OrbitType&) {
          std::uint64_t w = 1;
          for (int X = 0; X < 4; ++X) w *= binomial(t[X], s1[X]);
          sum += w;
        });
        REQUIRE(sum == binomial(n, k));
      }
}

TEST_CASE("encoder lift adjoins a maximally mixed site") {
  for (int n = 1; n <= 3; ++n) {
    SymmetricOperator E = random_symmetric(n, 2);
    SymmetricOperator L = lift_encoder(E);
    ComplexMatrix pi = 0.5 * identity(2);
    ComplexMatrix ref =
        sym_average(kron(symmetric_dense(E), pi), 2, n + 1);
    CHECK((symmetric_dense(L) - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("conditional channel orbit support counts") {
  for (int n : {3, 8, 17})
    for (int k = 0; k <= n; ++k) {
      ChannelOrbitExpansion C = channel_orbit(n, k);
      std::uint64_t nz1 = 0, nz2 = 0;
      for (cplx c : C.coeffs1)
        if (c != cplx(0.0)) ++nz1;
      for (cplx c : C.coeffs2)
        if (c != cplx(0.0)) ++nz2;
      CHECK(nz1 * nz2 == binomial(k + 3, 3) * binomial(n - k + 3, 3));
    }
}

TEST_CASE("conditional channel orbit expansion matches dense form") {
  const int n = 3;
  for (int k = 0; k <= n; ++k) {
    ChannelOrbitExpansion C = channel_orbit(n, k);
    const long D = 1L << (2 * n);
    ComplexMatrix dense = ComplexMatrix::Zero(D, D);
    for (size_t r1 = 0; r1 < C.orbits1.size(); ++r1) {
      if (C.coeffs1[r1] == cplx(0.0)) continue;
      ComplexMatrix C1 = orbit_dense(C.orbits1[r1], 4, k);
      for (size_t r2 = 0; r2 < C.orbits2.size(); ++r2) {
        if (C.coeffs2[r2] == cplx(0.0)) continue;
        dense += C.coeffs1[r1] * C.coeffs2[r2] *
                 kron(C1, orbit_dense(C.orbits2[r2], 4, n - k));
      }
    }
    // The site-wise (input,output) grouping is a permutation of the
    // grouped (inputs..., outputs...) ordering of the n-line Choi matrix.
    ChoiMatrix ref = pauli_flag_channel_k(n, k);
    std::vector<int> dims(2 * n, 2), perm(2 * n);
    for (int s = 0; s < n; ++s) {
      perm[2 * s] = s;          // site input
      perm[2 * s + 1] = n + s;  // site output
    }
    ComplexMatrix refp = permute_systems(ref.gamma, dims, perm);
    CHECK((dense - refp).cwiseAbs().maxCoeff() < 1e-12);
  }
}
