#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "superact/choi.hpp"

using namespace superact;

namespace {

std::mt19937_64 rng(12345);

ComplexMatrix random_matrix(int r, int c) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

ComplexMatrix random_density(int d) {
  ComplexMatrix g = random_matrix(d, d);
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// Random CPTP map via a Stinespring isometry from a QR decomposition.
std::vector<ComplexMatrix> random_kraus(int din, int dout, int nk) {
  ComplexMatrix g = random_matrix(dout * nk, din);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dout * nk, din);
  std::vector<ComplexMatrix> ks;
  for (int k = 0; k < nk; ++k) {
    ComplexMatrix K(dout, din);
    for (int b = 0; b < dout; ++b) K.row(b) = q.row(k * dout + b);
    ks.push_back(K);
  }
  return ks;
}

ComplexMatrix apply_kraus(const std::vector<ComplexMatrix>& ks,
                          const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(ks[0].rows(), ks[0].rows());
  for (const auto& K : ks) out += K * rho * K.adjoint();
  return out;
}

std::vector<ComplexMatrix> depolarizing_kraus(double p) {
  ComplexMatrix I = identity(2), X(2, 2), Y(2, 2), Z(2, 2);
  X << 0, 1, 1, 0;
  Y << 0, cplx(0, -1), cplx(0, 1), 0;
  Z << 1, 0, 0, -1;
  return {std::sqrt(1 - 3 * p / 4) * I, std::sqrt(p / 4) * X,
          std::sqrt(p / 4) * Y, std::sqrt(p / 4) * Z};
}

}  // namespace

TEST_CASE("maximally entangled state") {
  for (int d : {2, 3, 4}) {
    auto phi = mes(d);
    CHECK(std::abs(phi.trace().real() - 1.0) < 1e-14);
    CHECK((phi * phi - phi).cwiseAbs().maxCoeff() < 1e-14);  // projector
    // Marginal is maximally mixed.
    auto marg = partial_trace(phi, {d, d}, {1});
    CHECK((marg - identity(d) / double(d)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("identity Choi relates to the maximally entangled state") {
  for (int d : {2, 3}) {
    auto g = choi_identity(d);
    CHECK((g.gamma / double(d) - mes(d)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("apply matches Kraus application") {
  for (auto [din, dout, nk] : {std::tuple{2, 2, 3}, {3, 2, 4}, {2, 5, 2}}) {
    auto ks = random_kraus(din, dout, nk);
    auto N = choi_from_kraus(ks, din, dout);
    for (int rep = 0; rep < 3; ++rep) {
      auto rho = random_density(din);
      CHECK((apply_channel(N, rho) - apply_kraus(ks, rho)).cwiseAbs().maxCoeff() <
            1e-12);
    }
  }
}

TEST_CASE("choi_from_kraus rejects incomplete Kraus sets") {
  auto ks = depolarizing_kraus(0.3);
  ks.pop_back();
  CHECK_THROWS(choi_from_kraus(ks, 2, 2));
}

TEST_CASE("compose matches sequential application") {
  auto k1 = random_kraus(2, 3, 2);
  auto k2 = random_kraus(3, 2, 3);
  auto N1 = choi_from_kraus(k1, 2, 3);
  auto N2 = choi_from_kraus(k2, 3, 2);
  auto N21 = compose(N2, N1);
  CHECK(N21.dim_in == 2);
  CHECK(N21.dim_out == 2);
  for (int rep = 0; rep < 4; ++rep) {
    auto rho = random_density(2);
    CHECK((apply_channel(N21, rho) - apply_channel(N2, apply_channel(N1, rho))).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("tensor matches product application") {
  auto k1 = random_kraus(2, 2, 2);
  auto k2 = random_kraus(3, 2, 2);
  auto N1 = choi_from_kraus(k1, 2, 2);
  auto N2 = choi_from_kraus(k2, 3, 2);
  auto N12 = tensor(N1, N2);
  auto rho1 = random_density(2), rho2 = random_density(3);
  auto lhs = apply_channel(N12, kron(rho1, rho2));
  auto rhs = kron(apply_channel(N1, rho1), apply_channel(N2, rho2));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("adjoint satisfies the defining inner-product identity") {
  auto ks = random_kraus(3, 2, 3);
  auto N = choi_from_kraus(ks, 3, 2);
  auto Ns = adjoint(N);
  for (int rep = 0; rep < 4; ++rep) {
    ComplexMatrix X = random_matrix(3, 3), Y = random_matrix(2, 2);
    cplx lhs = (Y.adjoint() * apply_channel(N, X)).trace();
    cplx rhs = (apply_channel(Ns, Y).adjoint() * X).trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  // Adjoint of a CPTP map is unital.
  CHECK((apply_channel(Ns, identity(2)) - identity(3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("entanglement fidelity of benchmark channels") {
  CHECK(std::abs(entanglement_fidelity(choi_identity(3)) - 1.0) < 1e-14);
  // Depolarizing: F_E = 1 - 3p/4.
  for (double p : {0.1, 0.5, 1.0}) {
    auto N = choi_from_kraus(depolarizing_kraus(p), 2, 2);
    CHECK(std::abs(entanglement_fidelity(N) - (1 - 3 * p / 4)) < 1e-12);
  }
}

TEST_CASE("validate recognizes cptp, cpu and ppt") {
  auto N = choi_from_kraus(random_kraus(3, 4, 2), 3, 4);
  CHECK(validate(N, "cptp").ok);
  CHECK(validate(adjoint(N), "cpu").ok);
  // Identity channel Choi is NPT for d >= 2; a measure-and-prepare map is PPT.
  CHECK_FALSE(validate(choi_identity(2), "ppt").ok);
  ChoiMatrix mp(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) mp.gamma(a * 2 + b, a * 2 + b) = 0.5;
  CHECK(validate(mp, "ppt").ok);
  // Perturbing the marginal breaks cptp.
  ChoiMatrix bad = N;
  bad.gamma(0, 0) += 1e-6;
  CHECK_FALSE(validate(bad, "cptp").ok);
}

TEST_CASE("partial operations against direct constructions") {
  ComplexMatrix A = random_matrix(2, 2), B = random_matrix(3, 3),
                C = random_matrix(2, 2);
  ComplexMatrix X = kron(A, kron(B, C));
  std::vector<int> dims = {2, 3, 2};
  CHECK((partial_trace(X, dims, {1}) - B.trace() * kron(A, C))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((partial_trace(X, dims, {0, 2}) - A.trace() * C.trace() * B)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((partial_transpose(X, dims, {1}) - kron(A, kron(B.transpose(), C)))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((permute_systems(X, dims, {2, 0, 1}) - kron(C, kron(A, B)))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}
