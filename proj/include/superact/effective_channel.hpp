// Construction of the channel pair (a 4-dim PPT channel built around a
// private state, and an erasure channel), the coherent encoder/decoder that
// wires one use of each into a flagged qubit channel, and the
// erasure-pattern-conditioned channel family.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "superact/choi.hpp"

namespace superact {

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// Matrix unit |i><j| in dimension d.
inline ComplexMatrix unit(int i, int j, int d) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

// Cyclic shift |x> -> |x + l mod d>.
inline ComplexMatrix shift(int l, int d) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int x = 0; x < d; ++x) m(((x + l) % d + d) % d, x) = 1.0;
  return m;
}

// Build a Choi operator by applying a linear map to all matrix units.
inline ChoiMatrix choi_from_function(
    const std::function<ComplexMatrix(const ComplexMatrix&)>& f, int din,
    int dout) {
  ChoiMatrix c(din, dout);
  for (int a = 0; a < din; ++a)
    for (int a2 = 0; a2 < din; ++a2) {
      ComplexMatrix out = f(unit(a, a2, din));
      for (int b = 0; b < dout; ++b)
        for (int b2 = 0; b2 < dout; ++b2)
          c.gamma(static_cast<long>(a) * dout + b,
                  static_cast<long>(a2) * dout + b2) = out(b, b2);
    }
  return c;
}

// Mixing probability of the PPT channel.
inline double ppt_channel_p() { return 1.0 / (1.0 + std::sqrt(2.0)); }

// Erasure channel on C^d with erasure probability q; output dimension d+1,
// erasure symbol at index d.
inline ChoiMatrix erasure_channel(int d, double q) {
  std::vector<ComplexMatrix> ks;
  ComplexMatrix k0 = ComplexMatrix::Zero(d + 1, d);
  for (int a = 0; a < d; ++a) k0(a, a) = std::sqrt(1.0 - q);
  ks.push_back(k0);
  for (int a = 0; a < d; ++a) {
    ComplexMatrix ka = ComplexMatrix::Zero(d + 1, d);
    ka(d, a) = std::sqrt(q);
    ks.push_back(ka);
  }
  return choi_from_kraus(ks, d, d + 1);
}

// Kraus operators of the 4-dim PPT channel, in the (key (x) shield) basis
// with flat index 2*key + shield.
inline std::vector<ComplexMatrix> ppt_channel_kraus() {
  const double p = ppt_channel_p();
  const double s2 = std::sqrt(2.0);
  ComplexMatrix M0 = 0.5 * (std::sqrt(2 + s2) * unit(0, 0, 2) +
                            std::sqrt(2 - s2) * unit(1, 1, 2));
  ComplexMatrix M1 = 0.5 * (std::sqrt(2 - s2) * unit(0, 0, 2) -
                            std::sqrt(2 + s2) * unit(1, 1, 2));
  return {std::sqrt((1 - p) / 2) * kron(identity(2), unit(0, 0, 2)),
          std::sqrt((1 - p) / 4) * kron(identity(2), pauli_x()),
          std::sqrt((1 - p) / 2) * kron(pauli_z(), unit(1, 1, 2)),
          std::sqrt((1 - p) / 4) * kron(pauli_z(), pauli_y()),
          std::sqrt(p) * kron(pauli_x(), M0),
          std::sqrt(p) * kron(pauli_y(), M1)};
}

inline ChoiMatrix horodecki_channel() {
  return choi_from_kraus(ppt_channel_kraus(), 4, 4);
}

// Key-attacked private-state decomposition of the PPT channel's Choi state:
// sector weights, shield states sigma^l and twisting unitaries U^{i,l}
// acting on the (input-shield, output-shield) pair.
struct PrivateStateSectors {
  int K = 2;    // key dimension
  int d_s = 2;  // single-shield dimension
  std::vector<double> weights;
  std::vector<ComplexMatrix> shield_states;                // [l], d_s^2 dim
  std::vector<std::vector<ComplexMatrix>> twist_unitaries;  // [l][i]
};

inline PrivateStateSectors private_decomposition() {
  const double p = ppt_channel_p();
  const double s2 = std::sqrt(2.0);
  PrivateStateSectors s;
  s.K = 2;
  s.d_s = 2;
  s.weights = {1 - p, p};
  s.shield_states = {identity(4) / 4.0,
                     0.5 * (unit(0, 0, 4) + unit(3, 3, 4))};
  ComplexMatrix u10 = unit(0, 0, 4) - unit(3, 3, 4) + unit(1, 2, 4) +
                      unit(2, 1, 4);
  ComplexMatrix u11(4, 4);
  u11 << 1 / s2, 0, 0, 1 / s2,
         0, 0, 1, 0,
         0, 1, 0, 0,
         1 / s2, 0, 0, -1 / s2;
  s.twist_unitaries = {{identity(4), u10}, {identity(4), u11.cast<cplx>()}};
  return s;
}

// Sector-l private state on (R', R'', B', B'') with flat index
// ((r'*d_s + r'')*K + b')*d_s + b''  (input key/shield, output key/shield).
inline DensityOperator private_state(const PrivateStateSectors& s, int l) {
  const int K = s.K, ds = s.d_s;
  const long D = static_cast<long>(K) * ds * K * ds;
  ComplexMatrix g = ComplexMatrix::Zero(D, D);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      ComplexMatrix sh = s.twist_unitaries[l][i] * s.shield_states[l] *
                         s.twist_unitaries[l][j].adjoint();
      for (int rs = 0; rs < ds; ++rs)
        for (int bs = 0; bs < ds; ++bs)
          for (int rs2 = 0; rs2 < ds; ++rs2)
            for (int bs2 = 0; bs2 < ds; ++bs2) {
              const long row =
                  ((static_cast<long>(i) * ds + rs) * K + (i + l) % K) * ds +
                  bs;
              const long col =
                  ((static_cast<long>(j) * ds + rs2) * K + (j + l) % K) * ds +
                  bs2;
              g(row, col) += sh(rs * ds + bs, rs2 * ds + bs2) / double(K);
            }
    }
  return g;
}

// Channel reconstructed from sector data: unnormalized Choi operator equals
// (K d_s) times the weighted private-state mixture.
inline ChoiMatrix channel_from_sectors(const PrivateStateSectors& s) {
  const int d = s.K * s.d_s;
  ChoiMatrix c(d, d);
  c.gamma = ComplexMatrix::Zero(d * d, d * d);
  for (size_t l = 0; l < s.weights.size(); ++l)
    c.gamma += double(d) * s.weights[l] * private_state(s, static_cast<int>(l));
  return c;
}

// Coherent encoder: logical key on A1' -> (A1', A1'', A2', A2'').  Appends a
// fresh |0> key register and a maximally entangled shield pair, then copies
// the key with a generalized CNOT.  A single isometric Kraus operator.
inline ChoiMatrix encoder_tilde(int K, int d_s) {
  const int dout = K * d_s * K * d_s;
  ComplexMatrix w = ComplexMatrix::Zero(dout, K);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d_s));
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < d_s; ++k) {
      const long row = ((static_cast<long>(i) * d_s + k) * K + i) * d_s + k;
      w(row, i) = amp;
    }
  return choi_from_kraus({w}, K, dout);
}

namespace detail {
// Untwisting unitary on (B1', B1'', A2', A2''): conditioned on the key pair
// (B1' = i + l, A2' = i), undo U^{i,l} on the shield pair (A2'', B1'').
inline ComplexMatrix untwisting(const PrivateStateSectors& s) {
  const int K = s.K, ds = s.d_s;
  const long D = static_cast<long>(K) * ds * K * ds;
  ComplexMatrix v = ComplexMatrix::Zero(D, D);
  for (int l = 0; l < K; ++l)
    for (int i = 0; i < K; ++i) {
      const ComplexMatrix ud = s.twist_unitaries[l][i].adjoint();
      const int b1p = (i + l) % K;
      for (int b1s = 0; b1s < ds; ++b1s)
        for (int a2s = 0; a2s < ds; ++a2s)
          for (int b1s2 = 0; b1s2 < ds; ++b1s2)
            for (int a2s2 = 0; a2s2 < ds; ++a2s2) {
              const long row =
                  ((static_cast<long>(b1p) * ds + b1s) * K + i) * ds + a2s;
              const long col =
                  ((static_cast<long>(b1p) * ds + b1s2) * K + i) * ds + a2s2;
              v(row, col) += ud(a2s * ds + b1s, a2s2 * ds + b1s2);
            }
    }
  return v;
}
}  // namespace detail

// Decoder branch for the unerased case: (B1', B1'', A2', A2'') -> key.
// Untwist, discard shields, measure the key-pair parity, undo the shift on
// Bob's key, uncopy with the inverse CNOT, discard the copy.
inline ChoiMatrix decoder_no_erasure(const PrivateStateSectors& s) {
  const int K = s.K, ds = s.d_s;
  const int din = K * ds * K * ds;
  const ComplexMatrix vd = detail::untwisting(s);
  auto f = [&](const ComplexMatrix& omega) -> ComplexMatrix {
    ComplexMatrix st = vd * omega * vd.adjoint();
    ComplexMatrix keys = partial_trace(st, {K, ds, K, ds}, {1, 3});
    ComplexMatrix st2 = ComplexMatrix::Zero(K * K, K * K);
    for (int l = 0; l < K; ++l) {
      ComplexMatrix pi = ComplexMatrix::Zero(K * K, K * K);
      for (int i = 0; i < K; ++i)
        pi += kron(unit((i + l) % K, (i + l) % K, K), unit(i, i, K));
      ComplexMatrix corr = kron(shift(-l, K), identity(K));
      ComplexMatrix t = corr * pi * keys * pi * corr.adjoint();
      st2 += t;
    }
    ComplexMatrix cn = ComplexMatrix::Zero(K * K, K * K);
    for (int m = 0; m < K; ++m) cn += kron(unit(m, m, K), shift(-m, K));
    st2 = cn * st2 * cn.adjoint();
    return partial_trace(st2, {K, K}, {1});
  };
  return choi_from_function(f, din, K);
}

// Decoder branch for the erased case: (B1', B1'') -> key by discarding the
// shield.
inline ChoiMatrix decoder_erasure(int K, int d_s) {
  auto f = [&](const ComplexMatrix& omega) -> ComplexMatrix {
    return partial_trace(omega, {K, d_s}, {1});
  };
  return choi_from_function(f, K * d_s, K);
}

// Full flag-conditioned decoder on B1 (x) B2, where B2 is the erasure
// channel output (K*d_s levels plus the erasure symbol).  Output ordering
// (key, flag), flag 0 = unerased.
inline ChoiMatrix assemble_decoder(const PrivateStateSectors& s) {
  const int K = s.K, ds = s.d_s;
  const int d1 = K * ds;          // B1
  const int d2 = K * ds + 1;      // B2
  const int din = d1 * d2;
  const int dout = K * 2;
  const ChoiMatrix d0 = decoder_no_erasure(s);
  const ChoiMatrix d1c = decoder_erasure(K, ds);
  auto f = [&](const ComplexMatrix& omega) -> ComplexMatrix {
    // No-erasure block: (B1, A2) with A2 = first K*d_s levels of B2.
    ComplexMatrix sub = ComplexMatrix::Zero(d1 * d1, d1 * d1);
    for (int b1 = 0; b1 < d1; ++b1)
      for (int a2 = 0; a2 < d1; ++a2)
        for (int b1p = 0; b1p < d1; ++b1p)
          for (int a2p = 0; a2p < d1; ++a2p)
            sub(b1 * d1 + a2, b1p * d1 + a2p) =
                omega(b1 * d2 + a2, b1p * d2 + a2p);
    ComplexMatrix out0 = apply_channel(d0, sub);
    // Erasure block.
    ComplexMatrix sube = ComplexMatrix::Zero(d1, d1);
    for (int b1 = 0; b1 < d1; ++b1)
      for (int b1p = 0; b1p < d1; ++b1p)
        sube(b1, b1p) = omega(b1 * d2 + (d2 - 1), b1p * d2 + (d2 - 1));
    ComplexMatrix out1 = apply_channel(d1c, sube);
    return kron(out0, unit(0, 0, 2)) + kron(out1, unit(1, 1, 2));
  };
  return choi_from_function(f, din, dout);
}

struct EffectiveChannelSpec {
  int K = 2;
  int d_s = 2;
  double q = 0.5;
  std::vector<double> weights;  // shift weights conditioned on erasure
};

inline EffectiveChannelSpec default_effective_spec(double q = 0.5) {
  const double p = ppt_channel_p();
  return {2, 2, q, {1 - p, p}};
}

// Flagged qubit channel: with probability 1-q pass the key through and
// flag 0; with probability q dephase, apply a random shift with the given
// weights, and flag 1.  Output ordering (key, flag).
inline ChoiMatrix effective_channel(const EffectiveChannelSpec& spec) {
  const int K = spec.K;
  auto f = [&](const ComplexMatrix& rho) -> ComplexMatrix {
    ComplexMatrix deph = ComplexMatrix::Zero(K, K);
    for (int i = 0; i < K; ++i) deph(i, i) = rho(i, i);
    ComplexMatrix noisy = ComplexMatrix::Zero(K, K);
    for (size_t l = 0; l < spec.weights.size(); ++l) {
      ComplexMatrix x = shift(static_cast<int>(l), K);
      noisy += spec.weights[l] * x * deph * x.adjoint();
    }
    return kron((1 - spec.q) * rho, unit(0, 0, 2)) +
           kron(spec.q * noisy, unit(1, 1, 2));
  };
  return choi_from_function(f, K, K * 2);
}

// Max-abs residual between the composed protocol (decoder after the tensor
// of the sector channel and an erasure channel, after the encoder) and the
// flagged qubit channel predicted from the sector data.
inline double verify_effective_equivalence(const PrivateStateSectors& s,
                                           double q,
                                           const ChoiMatrix& chanP) {
  const int K = s.K, ds = s.d_s;
  const ChoiMatrix enc = encoder_tilde(K, ds);
  const ChoiMatrix chanA = erasure_channel(K * ds, q);
  const ChoiMatrix joint = tensor(chanP, chanA);
  const ChoiMatrix dec = assemble_decoder(s);
  const ChoiMatrix full = compose(dec, compose(joint, enc));
  EffectiveChannelSpec spec{K, ds, q, s.weights};
  const ChoiMatrix target = effective_channel(spec);
  return (full.gamma - target.gamma).cwiseAbs().maxCoeff();
}

// Qubit Pauli channel reached on a flagged (erased) line: dephase then
// shift, Choi diag(1-p, p, p, 1-p).
inline ChoiMatrix flagged_pauli_channel() {
  const double p = ppt_channel_p();
  ChoiMatrix c(2, 2);
  c.gamma = ComplexMatrix::Zero(4, 4);
  c.gamma(0, 0) = 1 - p;
  c.gamma(1, 1) = p;
  c.gamma(2, 2) = p;
  c.gamma(3, 3) = 1 - p;
  return c;
}

// Channel family conditioned on the erasure pattern: the first k lines carry
// the Pauli channel, the remaining n-k lines are ideal.  Dense; small n only.
inline ChoiMatrix pauli_flag_channel_k(int n, int k) {
  ChoiMatrix out = choi_identity(1);
  const ChoiMatrix pc = flagged_pauli_channel();
  const ChoiMatrix idc = choi_identity(2);
  for (int s = 0; s < n; ++s) out = tensor(out, s < k ? pc : idc);
  return out;
}

}  // namespace superact
