// Alternating encoder/decoder optimization of the entanglement fidelity of
// a reference qubit sent through n parallel uses of the flagged channel.
//
// The erasure flags are classical, so the decoder may condition on the
// erasure pattern; by permutation symmetry only the pattern size k matters
// and every operator lives in a S_k x S_{n-k} (decoders) or S_n (encoder)
// invariant algebra, handled in its block picture.  Each phase applies
// normalized quadratic ("sandwich") updates that cannot decrease the
// fidelity, iterated to a fixed point.
//
// Conventions: the decoder variable D_k on R (x) B^n is the fully
// transposed, system-swapped Choi matrix of the decoding channel, so the
// fidelity is (1/4) Tr[M_k D_k] with M_k the pushed-forward encoder, and
// trade-preservation reads sum_i D^(i,i) = identity.
#pragma once

#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <thread>

#include "superact/schur_weyl.hpp"
#include "superact/symmetric_channel.hpp"

namespace superact {

struct SeesawConfig {
  int n = 2;
  int d = 2;  // reference dimension (qubit)
  int restarts = 16;
  double tol = 1e-9;        // |F_dec - F_enc| convergence threshold
  double power_tol = 1e-11; // fixed-point threshold inside each phase
  int max_power = 5000;
  int max_outer = 500;
  std::uint64_t seed = 0;
  int threads = 1;
  const SymmetricOperator* warm_start = nullptr;  // encoder seed, restart 0
};

struct CodeResult {
  int n = 0, d = 2;
  double fidelity = 0;
  std::vector<double> per_k;  // conditional fidelity per erasure-pattern size
  SymmetricOperator encoder;
  BlockOperator encoder_blocks;
  std::vector<BlockOperator> decoders;  // one per pattern size k = 0..n
  int best_restart = -1;
  int outer_iterations = 0;
  double wall_time = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t restart,
                              std::uint64_t role, std::uint64_t k) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ restart);
  s = splitmix64(s ^ (role << 32));
  s = splitmix64(s ^ k);
  return std::mt19937_64(s);
}

// Box-Muller standard complex Gaussian fill (deterministic across
// platforms, unlike std::normal_distribution).
inline void fill_gaussian(ComplexMatrix& G, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (long i = 0; i < G.rows(); ++i)
    for (long j = 0; j < G.cols(); ++j) {
      const double r = std::sqrt(-2.0 * std::log(1.0 - u(rng)));
      const double t = 2.0 * M_PI * u(rng);
      G(i, j) = cplx(r * std::cos(t), r * std::sin(t));
    }
}

// Congruence Sw * G * Sw computed through the positive square root of G, so
// the result is a Gram matrix and stays positive semidefinite even when Sw
// amplifies directions in which G is nearly singular.
inline ComplexMatrix psd_congruence(const ComplexMatrix& G,
                                    const ComplexMatrix& Sw) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(G));
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  const ComplexMatrix B =
      lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint() * Sw;
  return B.adjoint() * B;
}

// Spectral pseudo inverse square root together with the projector onto the
// clipped (near-null) subspace; both are exact functions of one
// eigendecomposition, which keeps the rank-deficient case stable.
inline void split_inverse_sqrt(const ComplexMatrix& S, double rel_cutoff,
                               ComplexMatrix& W, ComplexMatrix& nullP) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(S));
  const Eigen::VectorXd lam = es.eigenvalues();
  const double cutoff = std::max(lam.maxCoeff(), 0.0) * rel_cutoff;
  Eigen::VectorXd w(lam.size()), np(lam.size());
  for (long i = 0; i < lam.size(); ++i) {
    const bool keep = lam(i) > cutoff && lam(i) > 0.0;
    w(i) = keep ? 1.0 / std::sqrt(lam(i)) : 0.0;
    np(i) = keep ? 0.0 : 1.0;
  }
  W = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  nullP = es.eigenvectors() * np.asDiagonal() * es.eigenvectors().adjoint();
}

// Enforce sum_i D^(i,i) = identity per block via a symmetric normalization;
// rank deficiency is completed with a maximally mixed remainder on the
// unused subspace.  A second pass (where the marginal is already close to
// the identity and the congruence is well conditioned) polishes the
// constraint to machine precision.
inline void normalize_decoder_pass(BlockOperator& D, double rel_cutoff) {
  for (size_t bi = 0; bi < D.blocks.size(); ++bi) {
    const int m = D.bdim[bi], dR = D.d_R;
    ComplexMatrix S = ComplexMatrix::Zero(m, m);
    for (int i = 0; i < dR; ++i)
      S += D.blocks[bi].block(i * m, i * m, m, m);
    ComplexMatrix W, nullP;
    split_inverse_sqrt(S, rel_cutoff, W, nullP);
    D.blocks[bi] = psd_congruence(D.blocks[bi], kron(identity(dR), W));
    if (nullP.cwiseAbs().maxCoeff() > 1e-14)
      D.blocks[bi] += kron(identity(dR) / double(dR), nullP);
  }
}

// Fast variant for the inner power iterations: the iterate M D M is PSD up
// to rounding already, so the exact Gram-form clip is deferred to the end of
// the phase and the constraint is imposed by a plain congruence.
inline void normalize_decoder_fast(BlockOperator& D) {
  for (size_t bi = 0; bi < D.blocks.size(); ++bi) {
    const int m = D.bdim[bi], dR = D.d_R;
    ComplexMatrix S = ComplexMatrix::Zero(m, m);
    for (int i = 0; i < dR; ++i)
      S += D.blocks[bi].block(i * m, i * m, m, m);
    ComplexMatrix W, nullP;
    split_inverse_sqrt(S, 1e-8, W, nullP);
    const ComplexMatrix Sw = kron(identity(dR), W);
    D.blocks[bi] = hermitize(Sw * D.blocks[bi] * Sw);
    if (nullP.cwiseAbs().maxCoeff() > 1e-14)
      D.blocks[bi] += kron(identity(dR) / double(dR), nullP);
  }
}

inline void normalize_decoder(BlockOperator& D) {
  normalize_decoder_pass(D, 1e-8);
  double res = 0;
  for (size_t bi = 0; bi < D.blocks.size(); ++bi) {
    const int m = D.bdim[bi];
    ComplexMatrix S = ComplexMatrix::Zero(m, m);
    for (int i = 0; i < D.d_R; ++i)
      S += D.blocks[bi].block(i * m, i * m, m, m);
    res = std::max(res, (S - identity(m)).cwiseAbs().maxCoeff());
  }
  if (res > 1e-11) normalize_decoder_pass(D, 1e-8);
}

// Enforce the encoder marginal sum_b f_b Tr_irrep E_b = identity on R; rank
// deficiency is completed with a product-state patch carrying the missing
// reference weight.
inline void normalize_encoder_pass(BlockOperator& E, const Converter& cv,
                                   double rel_cutoff) {
  const int dR = E.d_R;
  const ComplexMatrix T = hermitize(block_ref_trace(E));
  ComplexMatrix W, R;
  split_inverse_sqrt(T, rel_cutoff, W, R);
  for (size_t bi = 0; bi < E.blocks.size(); ++bi)
    E.blocks[bi] = psd_congruence(E.blocks[bi], kron(W, identity(E.bdim[bi])));
  if (R.cwiseAbs().maxCoeff() > 1e-14) {
    // Patch in blocks: convert the product-state completion through cv.
    SymmetricOperator patch(cv.n, 2, dR);
    const double c = std::pow(0.5, cv.n);
    detail::OrbitIndex idx(patch.orbits);
    for (const auto& t : orbit_enumerate(4, cv.n, {0, 3}))
      for (int i = 0; i < dR; ++i)
        for (int j = 0; j < dR; ++j)
          patch.coeffs(i * dR + j, idx(t)) = c * R(i, j);
    BlockOperator pb = to_blocks(patch, cv);
    for (size_t bi = 0; bi < E.blocks.size(); ++bi)
      E.blocks[bi] += pb.blocks[bi];
  }
}

inline void normalize_encoder_fast(BlockOperator& E, const Converter& cv) {
  const int dR = E.d_R;
  const ComplexMatrix T = hermitize(block_ref_trace(E));
  ComplexMatrix W, R;
  split_inverse_sqrt(T, 1e-8, W, R);
  for (size_t bi = 0; bi < E.blocks.size(); ++bi) {
    const ComplexMatrix Sw = kron(W, identity(E.bdim[bi]));
    E.blocks[bi] = hermitize(Sw * E.blocks[bi] * Sw);
  }
  if (R.cwiseAbs().maxCoeff() > 1e-14) {
    SymmetricOperator patch(cv.n, 2, dR);
    const double c = std::pow(0.5, cv.n);
    detail::OrbitIndex idx(patch.orbits);
    for (const auto& t : orbit_enumerate(4, cv.n, {0, 3}))
      for (int i = 0; i < dR; ++i)
        for (int j = 0; j < dR; ++j)
          patch.coeffs(i * dR + j, idx(t)) = c * R(i, j);
    BlockOperator pb = to_blocks(patch, cv);
    for (size_t bi = 0; bi < E.blocks.size(); ++bi)
      E.blocks[bi] += pb.blocks[bi];
  }
}

inline void normalize_encoder(BlockOperator& E, const Converter& cv) {
  normalize_encoder_pass(E, cv, 1e-8);
  const ComplexMatrix T = block_ref_trace(E);
  if ((T - identity(E.d_R)).cwiseAbs().maxCoeff() > 1e-11)
    normalize_encoder_pass(E, cv, 1e-8);
}

inline BlockOperator random_decoder(const Converter& cv1, const Converter& cv2,
                                    int dR, std::mt19937_64& rng) {
  BlockOperator D;
  D.d_R = dR;
  for (size_t i = 0; i < cv1.lambdas.size(); ++i)
    for (size_t j = 0; j < cv2.lambdas.size(); ++j) {
      D.fmult.push_back(cv1.fdim[i] * cv2.fdim[j]);
      D.bdim.push_back(cv1.mdim[i] * cv2.mdim[j]);
      ComplexMatrix G(dR * D.bdim.back(), dR * D.bdim.back());
      fill_gaussian(G, rng);
      D.blocks.push_back(hermitize(G * G.adjoint()));
    }
  normalize_decoder(D);
  return D;
}

inline SymmetricOperator random_encoder(const Converter& cv, int dR,
                                        std::mt19937_64& rng) {
  BlockOperator E;
  E.d_R = dR;
  E.fmult = cv.fdim;
  E.bdim = cv.mdim;
  for (size_t i = 0; i < cv.lambdas.size(); ++i) {
    ComplexMatrix G(dR * cv.mdim[i], dR * cv.mdim[i]);
    fill_gaussian(G, rng);
    E.blocks.push_back(hermitize(G * G.adjoint()));
  }
  normalize_encoder(E, cv);
  return from_blocks(E, cv);
}

// One decoder phase for a fixed pushed-forward encoder M: iterate the
// normalized sandwich update until the objective stalls.  Returns the
// conditional fidelity (1/4) Tr[M D].
inline double power_decoder(const BlockOperator& M, BlockOperator& D,
                            const SeesawConfig& cfg) {
  double f = 0.25 * block_pairing(M, D).real();
  for (int it = 0; it < cfg.max_power; ++it) {
    BlockOperator next = D;
    for (size_t bi = 0; bi < D.blocks.size(); ++bi)
      next.blocks[bi] = M.blocks[bi] * D.blocks[bi] * M.blocks[bi];
    normalize_decoder_fast(next);
    const double fn = 0.25 * block_pairing(M, next).real();
    if (fn > f) D = std::move(next);
    if (fn <= f + cfg.power_tol) {
      f = std::max(f, fn);
      break;
    }
    f = fn;
  }
  // Restore exact feasibility (positivity clip) once per phase.
  normalize_decoder(D);
  return 0.25 * block_pairing(M, D).real();
}

// One encoder phase for the fixed pulled-back decoder aggregate Mb.
inline double power_encoder(const BlockOperator& Mb, BlockOperator& E,
                            const Converter& cv, const SeesawConfig& cfg) {
  double f = 0.25 * block_pairing(Mb, E).real();
  for (int it = 0; it < cfg.max_power; ++it) {
    BlockOperator next = E;
    for (size_t bi = 0; bi < E.blocks.size(); ++bi)
      next.blocks[bi] = Mb.blocks[bi] * E.blocks[bi] * Mb.blocks[bi];
    normalize_encoder_fast(next, cv);
    const double fn = 0.25 * block_pairing(Mb, next).real();
    if (fn > f) E = std::move(next);
    if (fn <= f + cfg.power_tol) {
      f = std::max(f, fn);
      break;
    }
    f = fn;
  }
  normalize_encoder(E, cv);
  return 0.25 * block_pairing(Mb, E).real();
}

}  // namespace detail

// Pushforward of the encoder through the conditional channel with k erased
// lines, in block form.
inline BlockOperator encoder_to_code_blocks(const SymmetricOperator& E, int k,
                                            const std::vector<Converter>& cv) {
  return to_blocks_pair(
      concat_orbit(E, k, transfer_pauli(), transfer_identity()), cv[k],
      cv[E.n - k]);
}

struct RestartOutcome {
  double fidelity = 0;
  std::vector<double> per_k;
  SymmetricOperator encoder;
  std::vector<BlockOperator> decoders;
  int outer = 0;
};

inline RestartOutcome seesaw_single(const SeesawConfig& cfg,
                                    const std::vector<Converter>& cv,
                                    int restart) {
  const int n = cfg.n, dR = cfg.d;
  std::vector<double> wk(n + 1);
  for (int k = 0; k <= n; ++k)
    wk[k] = std::pow(0.5, n) * static_cast<double>(binomial(n, k));

  RestartOutcome out;
  auto rng_enc = detail::stream(cfg.seed, restart, 0, 0);
  if (restart == 0 && cfg.warm_start != nullptr)
    out.encoder = *cfg.warm_start;
  else
    out.encoder = detail::random_encoder(cv[n], dR, rng_enc);

  out.decoders.resize(n + 1);
  out.per_k.assign(n + 1, 0.0);
  bool dec_init = false;
  double f_dec = 0, f_enc = -1, f_prev = -1;
  const TransferMatrix Lp = transfer_pauli(), Li = transfer_identity();

  for (out.outer = 1; out.outer <= cfg.max_outer; ++out.outer) {
    // Decoder phase: optimize each conditional decoder independently.
    f_dec = 0;
    for (int k = 0; k <= n; ++k) {
      BlockOperator M = encoder_to_code_blocks(out.encoder, k, cv);
      if (!dec_init) {
        auto rng = detail::stream(cfg.seed, restart, 1, k);
        out.decoders[k] = detail::random_decoder(cv[k], cv[n - k], dR, rng);
      }
      out.per_k[k] = detail::power_decoder(M, out.decoders[k], cfg);
      f_dec += wk[k] * out.per_k[k];
    }
    dec_init = true;

    // Encoder phase: pull every decoder back to the input side, average
    // over pattern sizes, and optimize the encoder against the aggregate.
    SymmetricOperator Macc(n, 2, dR);
    for (int k = 0; k <= n; ++k) {
      PairSymmetricOperator Dp =
          from_blocks_pair(out.decoders[k], cv[k], cv[n - k], n, k);
      SymmetricOperator pulled = symmetrize_pair(pair_pushforward(Dp, Lp, Li));
      Macc.coeffs += wk[k] * pulled.coeffs;
    }
    BlockOperator Mb = to_blocks(Macc, cv[n]);
    BlockOperator Eb = to_blocks(out.encoder, cv[n]);
    f_enc = detail::power_encoder(Mb, Eb, cv[n], cfg);
    out.encoder = from_blocks(Eb, cv[n]);

    // Converged when the two phases agree, or when an entire round no
    // longer improves the objective (the sequence is non-decreasing).
    if (std::abs(f_enc - f_dec) < cfg.tol ||
        (f_prev >= 0 && f_enc <= f_prev + cfg.tol))
      break;
    f_prev = f_enc;
  }
  out.fidelity = std::max(f_dec, f_enc);
  return out;
}

inline CodeResult cq_seesaw(const SeesawConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = cfg.n;
  std::vector<Converter> cv;
  cv.reserve(n + 1);
  for (int s = 0; s <= n; ++s) cv.push_back(build_converter(s));

  CodeResult best;
  best.n = n;
  best.d = cfg.d;
  std::mutex mu;
  auto consider = [&](RestartOutcome&& o, int r) {
    std::lock_guard<std::mutex> lk(mu);
    if (o.fidelity > best.fidelity ||
        (o.fidelity == best.fidelity && best.best_restart < 0)) {
      best.fidelity = o.fidelity;
      best.per_k = o.per_k;
      best.encoder = std::move(o.encoder);
      best.decoders = std::move(o.decoders);
      best.outer_iterations = o.outer;
      best.best_restart = r;
    }
  };

  if (cfg.threads <= 1) {
    for (int r = 0; r < cfg.restarts; ++r)
      consider(seesaw_single(cfg, cv, r), r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> counter{0};
    for (int t = 0; t < cfg.threads; ++t)
      pool.emplace_back([&] {
        for (int r = counter++; r < cfg.restarts; r = counter++)
          consider(seesaw_single(cfg, cv, r), r);
      });
    for (auto& th : pool) th.join();
  }
  best.encoder_blocks = to_blocks(best.encoder, cv[n]);
  best.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return best;
}

// Warm-start seed for n+1 sites from a converged n-site encoder.
inline SymmetricOperator lifted_seed(const CodeResult& prev) {
  return lift_encoder(prev.encoder);
}

// ---------------------------------------------------------------------------
// Dense reference implementation without any permutation-symmetry
// assumptions, for small n.  The erasure flags are classical and the n-line
// channel Choi matrix is block diagonal across flag patterns, so the decoder
// is stored as one dense operator on R (x) keys per erasure pattern.

struct ExplicitResult {
  double fidelity = 0;
  ComplexMatrix encoder;                // Choi on R (x) A^n
  std::vector<ComplexMatrix> decoders;  // per pattern, on R (x) keys^n
};

namespace detail {

struct SparseChoi {
  // Triplets (a, b, a', b', value) of the conditional n-line channel on the
  // key registers, for one erasure pattern (probability folded out).
  struct Entry {
    long a, b, a1, b1;
    cplx v;
  };
  std::vector<Entry> entries;
};

// Conditional channels given each erasure pattern (bitmask over lines).
inline std::vector<SparseChoi> pattern_choi(int n) {
  const ComplexMatrix gid = choi_identity(2).gamma;
  const ComplexMatrix gp = flagged_pauli_channel().gamma;
  auto local = [&](const ComplexMatrix& g) {
    std::vector<SparseChoi::Entry> out;
    for (long a = 0; a < 2; ++a)
      for (long b = 0; b < 2; ++b)
        for (long a1 = 0; a1 < 2; ++a1)
          for (long b1 = 0; b1 < 2; ++b1) {
            const cplx v = g(a * 2 + b, a1 * 2 + b1);
            if (std::abs(v) > 0) out.push_back({a, b, a1, b1, v});
          }
    return out;
  };
  const auto lid = local(gid), lp = local(gp);
  std::vector<SparseChoi> out(1L << n);
  for (long pat = 0; pat < (1L << n); ++pat) {
    auto rec = [&](auto&& self, int s, SparseChoi::Entry acc) -> void {
      if (s == n) {
        out[pat].entries.push_back(acc);
        return;
      }
      const auto& loc = ((pat >> (n - 1 - s)) & 1) ? lp : lid;
      for (const auto& e : loc)
        self(self, s + 1,
             {acc.a * 2 + e.a, acc.b * 2 + e.b, acc.a1 * 2 + e.a1,
              acc.b1 * 2 + e.b1, acc.v * e.v});
    };
    rec(rec, 0, {0, 0, 0, 0, cplx(1.0)});
  }
  return out;
}

}  // namespace detail

inline ExplicitResult explicit_seesaw(const SeesawConfig& cfg) {
  if (cfg.n > 8)
    throw std::invalid_argument("explicit_seesaw: n too large for dense mode");
  const int n = cfg.n, dR = cfg.d;
  const auto chans = detail::pattern_choi(n);
  const long DA = 1L << n, P = 1L << n;
  const double wpat = std::pow(0.5, n);

  auto push = [&](const ComplexMatrix& E, long pat) {
    ComplexMatrix M = ComplexMatrix::Zero(dR * DA, dR * DA);
    for (const auto& e : chans[pat].entries)
      for (int r = 0; r < dR; ++r)
        for (int r1 = 0; r1 < dR; ++r1)
          M(r * DA + e.b, r1 * DA + e.b1) +=
              E(r * DA + e.a, r1 * DA + e.a1) * e.v;
    return M;
  };
  auto pull = [&](const ComplexMatrix& D, long pat, ComplexMatrix& acc,
                  double w) {
    for (const auto& e : chans[pat].entries)
      for (int r = 0; r < dR; ++r)
        for (int r1 = 0; r1 < dR; ++r1)
          acc(r1 * DA + e.a1, r * DA + e.a) +=
              w * D(r1 * DA + e.b1, r * DA + e.b) * e.v;
  };
  auto norm_dec_pass = [&](ComplexMatrix& D) {
    ComplexMatrix S = ComplexMatrix::Zero(DA, DA);
    for (int i = 0; i < dR; ++i) S += D.block(i * DA, i * DA, DA, DA);
    ComplexMatrix W, R;
    detail::split_inverse_sqrt(S, 1e-8, W, R);
    D = detail::psd_congruence(D, kron(identity(dR), W));
    if (R.cwiseAbs().maxCoeff() > 1e-14)
      D += kron(identity(dR) / double(dR), R);
  };
  auto norm_dec = [&](ComplexMatrix& D) {
    norm_dec_pass(D);
    norm_dec_pass(D);
  };
  auto norm_enc_pass = [&](ComplexMatrix& E) {
    ComplexMatrix T = ComplexMatrix::Zero(dR, dR);
    for (int i = 0; i < dR; ++i)
      for (int j = 0; j < dR; ++j)
        T(i, j) = E.block(i * DA, j * DA, DA, DA).trace();
    ComplexMatrix W, R;
    detail::split_inverse_sqrt(T, 1e-8, W, R);
    E = detail::psd_congruence(E, kron(W, identity(DA)));
    if (R.cwiseAbs().maxCoeff() > 1e-14)
      E += kron(R, identity(DA) / double(DA));
  };
  auto norm_enc = [&](ComplexMatrix& E) {
    norm_enc_pass(E);
    norm_enc_pass(E);
  };
  auto fid = [&](const ComplexMatrix& A, const ComplexMatrix& B) {
    return 0.25 * (A * B).trace().real();
  };

  ExplicitResult best;
  for (int r = 0; r < cfg.restarts; ++r) {
    auto rng_e = detail::stream(cfg.seed, r, 2, 0);
    ComplexMatrix E(dR * DA, dR * DA);
    detail::fill_gaussian(E, rng_e);
    E = hermitize(E * E.adjoint());
    norm_enc(E);
    std::vector<ComplexMatrix> D(P);
    for (long pat = 0; pat < P; ++pat) {
      auto rng_d = detail::stream(cfg.seed, r, 3, static_cast<std::uint64_t>(pat));
      ComplexMatrix G(dR * DA, dR * DA);
      detail::fill_gaussian(G, rng_d);
      D[pat] = hermitize(G * G.adjoint());
      norm_dec(D[pat]);
    }

    double f_dec = 0, f_enc = -1, f_prev = -1;
    for (int outer = 0; outer < cfg.max_outer; ++outer) {
      f_dec = 0;
      for (long pat = 0; pat < P; ++pat) {
        const ComplexMatrix M = push(E, pat);
        double f = fid(M, D[pat]);
        for (int it = 0; it < cfg.max_power; ++it) {
          ComplexMatrix Dn = M * D[pat] * M;
          norm_dec(Dn);
          const double fn = fid(M, Dn);
          if (fn > f) D[pat] = std::move(Dn);
          if (fn <= f + cfg.power_tol) {
            f = std::max(f, fn);
            break;
          }
          f = fn;
        }
        f_dec += wpat * f;
      }
      ComplexMatrix Pm = ComplexMatrix::Zero(dR * DA, dR * DA);
      for (long pat = 0; pat < P; ++pat) pull(D[pat], pat, Pm, wpat);
      Pm = hermitize(Pm);
      f_enc = fid(Pm, E);
      for (int it = 0; it < cfg.max_power; ++it) {
        ComplexMatrix En = Pm * E * Pm;
        norm_enc(En);
        const double fn = fid(Pm, En);
        if (fn > f_enc) E = std::move(En);
        if (fn <= f_enc + cfg.power_tol) {
          f_enc = std::max(f_enc, fn);
          break;
        }
        f_enc = fn;
      }
      if (std::abs(f_enc - f_dec) < cfg.tol ||
          (f_prev >= 0 && f_enc <= f_prev + cfg.tol))
        break;
      f_prev = f_enc;
    }
    const double f = std::max(f_dec, f_enc);
    if (f > best.fidelity) {
      best.fidelity = f;
      best.encoder = E;
      best.decoders = D;
    }
  }
  return best;
}

}  // namespace superact
