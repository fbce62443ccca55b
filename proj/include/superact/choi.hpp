// Choi-matrix representation of linear maps between finite-dimensional
// quantum systems, with the unnormalized Choi operator as the canonical
// object.  Index convention: the Choi operator of N: A -> B lives on
// A (x) B, flat index a*dim_out + b.
#pragma once

#include <string>
#include <vector>

#include "superact/linalg.hpp"

namespace superact {

using DensityOperator = ComplexMatrix;

struct ChoiMatrix {
  int dim_in = 0;
  int dim_out = 0;
  ComplexMatrix gamma;  // (dim_in*dim_out) x (dim_in*dim_out), unnormalized

  ChoiMatrix() = default;
  ChoiMatrix(int din, int dout)
      : dim_in(din),
        dim_out(dout),
        gamma(ComplexMatrix::Zero(static_cast<long>(din) * dout,
                                  static_cast<long>(din) * dout)) {}
  long dim() const { return static_cast<long>(dim_in) * dim_out; }
};

// Normalized maximally entangled state (projector, trace one) on C^d (x) C^d.
inline DensityOperator mes(int d) {
  ComplexVector v = ComplexVector::Zero(static_cast<long>(d) * d);
  for (int a = 0; a < d; ++a) v(static_cast<long>(a) * d + a) = 1.0;
  v /= std::sqrt(static_cast<double>(d));
  return v * v.adjoint();
}

// Unnormalized Choi operator of the identity map on C^d.
inline ChoiMatrix choi_identity(int d) {
  ChoiMatrix c(d, d);
  for (int a = 0; a < d; ++a)
    for (int a2 = 0; a2 < d; ++a2)
      c.gamma(static_cast<long>(a) * d + a, static_cast<long>(a2) * d + a2) =
          1.0;
  return c;
}

// Choi operator from Kraus operators (each dout x din).  Throws if the
// completeness relation fails beyond `tol` (pass tol < 0 to skip).
inline ChoiMatrix choi_from_kraus(const std::vector<ComplexMatrix>& kraus,
                                  int din, int dout, double tol = 1e-10) {
  ChoiMatrix c(din, dout);
  ComplexMatrix sum = ComplexMatrix::Zero(din, din);
  for (const auto& K : kraus) {
    if (K.rows() != dout || K.cols() != din)
      throw std::invalid_argument("choi_from_kraus: Kraus shape mismatch");
    sum += K.adjoint() * K;
    for (int a = 0; a < din; ++a)
      for (int b = 0; b < dout; ++b)
        for (int a2 = 0; a2 < din; ++a2)
          for (int b2 = 0; b2 < dout; ++b2)
            c.gamma(static_cast<long>(a) * dout + b,
                    static_cast<long>(a2) * dout + b2) +=
                K(b, a) * std::conj(K(b2, a2));
  }
  if (tol >= 0.0 &&
      (sum - ComplexMatrix::Identity(din, din)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("choi_from_kraus: Kraus set not trace-preserving");
  c.gamma = hermitize(c.gamma);
  return c;
}

// Apply the map to an operator X on the input system.
inline ComplexMatrix apply_channel(const ChoiMatrix& N, const ComplexMatrix& X) {
  const int da = N.dim_in, db = N.dim_out;
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (int a = 0; a < da; ++a)
    for (int a2 = 0; a2 < da; ++a2) {
      const cplx x = X(a, a2);
      if (x == cplx(0.0)) continue;
      for (int b = 0; b < db; ++b)
        for (int b2 = 0; b2 < db; ++b2)
          out(b, b2) += x * N.gamma(static_cast<long>(a) * db + b,
                                    static_cast<long>(a2) * db + b2);
    }
  return out;
}

// Composition second `after` first: returns Choi of (N2 o N1), N1: A->B, N2: B->C.
inline ChoiMatrix compose(const ChoiMatrix& N2, const ChoiMatrix& N1) {
  if (N1.dim_out != N2.dim_in)
    throw std::invalid_argument("compose: dimension mismatch");
  const int da = N1.dim_in, db = N1.dim_out, dc = N2.dim_out;
  ChoiMatrix out(da, dc);
  for (int a = 0; a < da; ++a)
    for (int a2 = 0; a2 < da; ++a2)
      for (int c = 0; c < dc; ++c)
        for (int c2 = 0; c2 < dc; ++c2) {
          cplx acc = 0.0;
          for (int b = 0; b < db; ++b)
            for (int b2 = 0; b2 < db; ++b2)
              acc += N1.gamma(static_cast<long>(a) * db + b,
                              static_cast<long>(a2) * db + b2) *
                     N2.gamma(static_cast<long>(b) * dc + c,
                              static_cast<long>(b2) * dc + c2);
          out.gamma(static_cast<long>(a) * dc + c,
                    static_cast<long>(a2) * dc + c2) = acc;
        }
  out.gamma = hermitize(out.gamma);
  return out;
}

// Tensor product of maps; inputs (A1 A2) ordered before outputs (B1 B2).
inline ChoiMatrix tensor(const ChoiMatrix& N1, const ChoiMatrix& N2) {
  const int da1 = N1.dim_in, db1 = N1.dim_out;
  const int da2 = N2.dim_in, db2 = N2.dim_out;
  ChoiMatrix out(da1 * da2, db1 * db2);
  // kron gives ordering (A1 B1 A2 B2); permute to (A1 A2 B1 B2).
  ComplexMatrix k = kron(N1.gamma, N2.gamma);
  out.gamma =
      permute_systems(k, {da1, db1, da2, db2}, {0, 2, 1, 3});
  return out;
}

// Adjoint map N*: B->A, defined by Tr[Y^dag N(X)] = Tr[(N*(Y))^dag X].
inline ChoiMatrix adjoint(const ChoiMatrix& N) {
  const int da = N.dim_in, db = N.dim_out;
  ChoiMatrix out(db, da);
  for (int a = 0; a < da; ++a)
    for (int a2 = 0; a2 < da; ++a2)
      for (int b = 0; b < db; ++b)
        for (int b2 = 0; b2 < db; ++b2)
          out.gamma(static_cast<long>(b) * da + a,
                    static_cast<long>(b2) * da + a2) =
              std::conj(N.gamma(static_cast<long>(a) * db + b,
                                static_cast<long>(a2) * db + b2));
  return out;
}

// Entanglement fidelity of a map M: A->B with dim_in == dim_out == d:
// overlap of the normalized Choi state with the maximally entangled state.
inline double entanglement_fidelity(const ChoiMatrix& M) {
  if (M.dim_in != M.dim_out)
    throw std::invalid_argument("entanglement_fidelity: needs equal dims");
  const int d = M.dim_in;
  cplx acc = 0.0;
  for (int a = 0; a < d; ++a)
    for (int a2 = 0; a2 < d; ++a2)
      acc += M.gamma(static_cast<long>(a) * d + a,
                     static_cast<long>(a2) * d + a2);
  return acc.real() / (d * d);
}

struct ValidationReport {
  bool ok = true;
  double psd_violation = 0.0;       // most negative eigenvalue (clamped at 0)
  double marginal_residual = 0.0;   // max-abs deviation of the marginal
  std::string detail;
};

// Validate structural properties of a map.
//   kind == "cptp": Gamma PSD and Tr_B Gamma == 1_A
//   kind == "cpu" : Gamma PSD and Tr_A Gamma == 1_B (unital adjoint side)
//   kind == "ppt" : Gamma^{T_B} PSD
// PSD tolerance is relative to the trace norm scale of Gamma.
inline ValidationReport validate(const ChoiMatrix& N, const std::string& kind,
                                 double psd_tol = 1e-9,
                                 double marginal_tol = 1e-10) {
  ValidationReport rep;
  const std::vector<int> dims = {N.dim_in, N.dim_out};
  const double scale = std::max(N.gamma.cwiseAbs().sum(), 1.0);
  if (kind == "cptp" || kind == "cpu") {
    const double mineig = min_eigenvalue(N.gamma);
    rep.psd_violation = std::max(0.0, -mineig);
    if (rep.psd_violation > psd_tol * scale) {
      rep.ok = false;
      rep.detail += "not PSD; ";
    }
    const ComplexMatrix marg =
        (kind == "cptp") ? partial_trace(N.gamma, dims, {1})
                         : partial_trace(N.gamma, dims, {0});
    const int dm = (kind == "cptp") ? N.dim_in : N.dim_out;
    rep.marginal_residual =
        (marg - ComplexMatrix::Identity(dm, dm)).cwiseAbs().maxCoeff();
    if (rep.marginal_residual > marginal_tol) {
      rep.ok = false;
      rep.detail += "marginal not identity; ";
    }
  } else if (kind == "ppt") {
    const double mineig =
        min_eigenvalue(partial_transpose(N.gamma, dims, {1}));
    rep.psd_violation = std::max(0.0, -mineig);
    if (rep.psd_violation > psd_tol * scale) {
      rep.ok = false;
      rep.detail += "partial transpose not PSD; ";
    }
  } else {
    throw std::invalid_argument("validate: unknown kind " + kind);
  }
  return rep;
}

}  // namespace superact
