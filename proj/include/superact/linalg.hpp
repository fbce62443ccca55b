// Dense complex linear algebra helpers shared by all modules.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace superact {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using cplx = std::complex<double>;

inline ComplexMatrix dagger(const ComplexMatrix& A) { return A.adjoint(); }

// Re-enforce Hermiticity by averaging with the conjugate transpose.
inline ComplexMatrix hermitize(const ComplexMatrix& A) {
  return 0.5 * (A + A.adjoint());
}

inline ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
  ComplexMatrix C(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      C.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return C;
}

inline ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d, d); }

namespace detail {
// Row-major multi-index <-> flat index over a list of local dimensions.
inline std::vector<int> unflatten(long idx, const std::vector<int>& dims) {
  std::vector<int> out(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = static_cast<int>(idx % dims[k]);
    idx /= dims[k];
  }
  return out;
}
inline long flatten(const std::vector<int>& idx, const std::vector<int>& dims) {
  long out = 0;
  for (size_t k = 0; k < dims.size(); ++k) out = out * dims[k] + idx[k];
  return out;
}
inline long dim_product(const std::vector<int>& dims) {
  long d = 1;
  for (int x : dims) d *= x;
  return d;
}
}  // namespace detail

// Trace out the systems listed in `traced` (indices into `dims`).
inline ComplexMatrix partial_trace(const ComplexMatrix& X,
                                   const std::vector<int>& dims,
                                   const std::vector<int>& traced) {
  const long D = detail::dim_product(dims);
  if (X.rows() != D || X.cols() != D)
    throw std::invalid_argument("partial_trace: dimension mismatch");
  std::vector<bool> is_traced(dims.size(), false);
  for (int t : traced) is_traced[t] = true;
  std::vector<int> kept_dims, traced_dims;
  for (size_t k = 0; k < dims.size(); ++k)
    (is_traced[k] ? traced_dims : kept_dims).push_back(dims[k]);
  const long Dk = detail::dim_product(kept_dims);
  const long Dt = detail::dim_product(traced_dims);
  ComplexMatrix out = ComplexMatrix::Zero(Dk, Dk);
  std::vector<int> full(dims.size());
  for (long r = 0; r < Dk; ++r) {
    const auto ri = detail::unflatten(r, kept_dims);
    for (long c = 0; c < Dk; ++c) {
      const auto ci = detail::unflatten(c, kept_dims);
      cplx acc = 0.0;
      for (long t = 0; t < Dt; ++t) {
        const auto ti = detail::unflatten(t, traced_dims);
        size_t ik = 0, it = 0;
        for (size_t k = 0; k < dims.size(); ++k)
          full[k] = is_traced[k] ? ti[it++] : ri[ik++];
        const long row = detail::flatten(full, dims);
        ik = 0;
        it = 0;
        for (size_t k = 0; k < dims.size(); ++k)
          full[k] = is_traced[k] ? ti[it++] : ci[ik++];
        const long col = detail::flatten(full, dims);
        acc += X(row, col);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

// Transpose the systems listed in `transposed` (indices into `dims`).
inline ComplexMatrix partial_transpose(const ComplexMatrix& X,
                                       const std::vector<int>& dims,
                                       const std::vector<int>& transposed) {
  const long D = detail::dim_product(dims);
  if (X.rows() != D || X.cols() != D)
    throw std::invalid_argument("partial_transpose: dimension mismatch");
  std::vector<bool> is_t(dims.size(), false);
  for (int t : transposed) is_t[t] = true;
  ComplexMatrix out(D, D);
  for (long r = 0; r < D; ++r) {
    auto ri = detail::unflatten(r, dims);
    for (long c = 0; c < D; ++c) {
      auto ci = detail::unflatten(c, dims);
      auto rr = ri, cc = ci;
      for (size_t k = 0; k < dims.size(); ++k)
        if (is_t[k]) std::swap(rr[k], cc[k]);
      out(detail::flatten(rr, dims), detail::flatten(cc, dims)) = X(r, c);
    }
  }
  return out;
}

// Reorder tensor factors: new system i is old system perm[i].
inline ComplexMatrix permute_systems(const ComplexMatrix& X,
                                     const std::vector<int>& dims,
                                     const std::vector<int>& perm) {
  const long D = detail::dim_product(dims);
  if (X.rows() != D || X.cols() != D)
    throw std::invalid_argument("permute_systems: dimension mismatch");
  std::vector<int> new_dims(dims.size());
  for (size_t i = 0; i < perm.size(); ++i) new_dims[i] = dims[perm[i]];
  ComplexMatrix out(D, D);
  std::vector<int> rn(dims.size()), cn(dims.size());
  for (long r = 0; r < D; ++r) {
    auto ri = detail::unflatten(r, dims);
    for (size_t i = 0; i < perm.size(); ++i) rn[i] = ri[perm[i]];
    const long rw = detail::flatten(rn, new_dims);
    for (long c = 0; c < D; ++c) {
      auto ci = detail::unflatten(c, dims);
      for (size_t i = 0; i < perm.size(); ++i) cn[i] = ci[perm[i]];
      out(rw, detail::flatten(cn, new_dims)) = X(r, c);
    }
  }
  return out;
}

inline double min_eigenvalue(const ComplexMatrix& H) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(H));
  return es.eigenvalues().minCoeff();
}

// Hermitian (pseudo)inverse square root with relative cutoff on eigenvalues.
inline ComplexMatrix inverse_sqrt_psd(const ComplexMatrix& H,
                                      double rel_cutoff = 1e-12) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(H));
  const auto& ev = es.eigenvalues();
  const double cutoff = rel_cutoff * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cutoff) inv(i) = 1.0 / std::sqrt(ev(i));
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace superact
