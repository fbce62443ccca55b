#pragma once

// Single-file container for optimized codes: a JSON manifest followed by
// named complex float64 arrays, one per block of the encoder, the decoders,
// and the pushed-forward channel operators.  The layout is fixed so that
// identical inputs produce byte-identical files.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "partitions.hpp"
#include "schur_weyl.hpp"
#include "seesaw.hpp"

namespace superact {

inline constexpr char kArchiveMagic[8] = {'S', 'A', 'C', 'V',
                                          '0', '0', '0', '1'};
inline constexpr int kArchiveFormatVersion = 1;
inline constexpr const char* kOrbitOrdering = "count-vector-lex-descending-v1";
inline constexpr const char* kToolVersion = "superactivation 1.0.0";

struct CodeArchive {
  nlohmann::json manifest;
  std::vector<std::pair<std::string, ComplexMatrix>> arrays;

  const ComplexMatrix* find(const std::string& name) const {
    for (const auto& [k, v] : arrays)
      if (k == name) return &v;
    return nullptr;
  }
};

namespace detail {

inline std::string lambda_label(const std::vector<int>& lam) {
  return std::to_string(lam[0]) + "," + std::to_string(lam[1]);
}

inline void write_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

inline void write_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

inline void write_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  write_u64(out, bits);
}

struct ByteReader {
  const std::string& buf;
  size_t pos = 0;
  void need(size_t k) const {
    if (pos + k > buf.size()) throw std::runtime_error("archive truncated");
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= std::uint64_t(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= std::uint32_t(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::string bytes(size_t k) {
    need(k);
    std::string s = buf.substr(pos, k);
    pos += k;
    return s;
  }
};

}  // namespace detail

// Assemble the archive for an optimized code.  The payload stores the
// encoder blocks, each per-pattern-class decoder block, and the
// pushed-forward channel blocks used by the fidelity formula, in a fixed
// enumeration order.
inline CodeArchive build_archive(const CodeResult& res,
                                 const std::vector<Converter>& cv,
                                 const SeesawConfig& cfg) {
  const int n = res.n;
  CodeArchive ar;

  nlohmann::json groups = nlohmann::json::object();
  for (int j = 0; j <= n; ++j) {
    nlohmann::json list = nlohmann::json::array();
    for (size_t li = 0; li < cv[j].lambdas.size(); ++li)
      list.push_back({{"lambda", cv[j].lambdas[li]},
                      {"m", cv[j].mdim[li]},
                      {"f", cv[j].fdim[li]}});
    groups[std::to_string(j)] = list;
  }
  ar.manifest = {
      {"format_version", kArchiveFormatVersion},
      {"n", n},
      {"d", res.d},
      {"fidelity", res.fidelity},
      {"per_k_fidelities", res.per_k},
      {"groups", groups},
      {"orbit_ordering", kOrbitOrdering},
      {"provenance",
       {{"seed", cfg.seed},
        {"restarts", cfg.restarts},
        {"tol", cfg.tol},
        {"power_tol", cfg.power_tol},
        {"tool_version", kToolVersion}}}};

  for (size_t li = 0; li < cv[n].lambdas.size(); ++li)
    ar.arrays.emplace_back(
        "enc/" + detail::lambda_label(cv[n].lambdas[li]),
        res.encoder_blocks.blocks[li]);
  for (int k = 0; k <= n; ++k) {
    const BlockOperator M = encoder_to_code_blocks(res.encoder, k, cv);
    for (size_t i = 0; i < cv[k].lambdas.size(); ++i)
      for (size_t j = 0; j < cv[n - k].lambdas.size(); ++j) {
        const std::string tag = std::to_string(k) + "/" +
                                detail::lambda_label(cv[k].lambdas[i]) + "|" +
                                detail::lambda_label(cv[n - k].lambdas[j]);
        const size_t bi = i * cv[n - k].lambdas.size() + j;
        ar.arrays.emplace_back("dec/" + tag, res.decoders[k].blocks[bi]);
        ar.arrays.emplace_back("m/" + tag, M.blocks[bi]);
      }
  }
  return ar;
}

inline std::string serialize_archive(const CodeArchive& ar) {
  std::string out;
  out.append(kArchiveMagic, 8);
  const std::string man = ar.manifest.dump();
  detail::write_u64(out, man.size());
  out += man;
  detail::write_u64(out, ar.arrays.size());
  for (const auto& [name, mat] : ar.arrays) {
    detail::write_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    detail::write_u32(out, static_cast<std::uint32_t>(mat.rows()));
    detail::write_u32(out, static_cast<std::uint32_t>(mat.cols()));
    for (long r = 0; r < mat.rows(); ++r)
      for (long c = 0; c < mat.cols(); ++c) {
        detail::write_f64(out, mat(r, c).real());
        detail::write_f64(out, mat(r, c).imag());
      }
  }
  return out;
}

inline void write_archive(const CodeArchive& ar, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  const std::string buf = serialize_archive(ar);
  f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline CodeArchive parse_archive(const std::string& buf) {
  detail::ByteReader rd{buf};
  if (rd.bytes(8) != std::string(kArchiveMagic, 8))
    throw std::runtime_error("bad archive magic");
  CodeArchive ar;
  const std::uint64_t mlen = rd.u64();
  ar.manifest = nlohmann::json::parse(rd.bytes(mlen));
  const std::uint64_t count = rd.u64();
  for (std::uint64_t a = 0; a < count; ++a) {
    const std::uint32_t nlen = rd.u32();
    std::string name = rd.bytes(nlen);
    const std::uint32_t rows = rd.u32();
    const std::uint32_t cols = rd.u32();
    ComplexMatrix mat(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
      for (std::uint32_t c = 0; c < cols; ++c) {
        const double re = rd.f64();
        const double im = rd.f64();
        mat(r, c) = cplx(re, im);
      }
    ar.arrays.emplace_back(std::move(name), std::move(mat));
  }
  return ar;
}

inline CodeArchive read_archive(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_archive(ss.str());
}

struct VerifyReport {
  bool ok = true;
  double fidelity = 0.0;
  std::vector<std::string> failures;

  void fail(const std::string& msg) {
    ok = false;
    failures.push_back(msg);
  }
};

// Re-derive everything checkable from the payload: shapes against the
// manifest labels, positivity of all stored blocks, the decoder and
// encoder normalization constraints, consistency of the stored channel
// blocks with the stored encoder, and finally the fidelity against the
// manifest value.
inline VerifyReport verify_archive(const CodeArchive& ar) {
  VerifyReport rep;
  const int n = ar.manifest.at("n").get<int>();
  const int dR = ar.manifest.at("d").get<int>();
  std::vector<Converter> cv;
  cv.reserve(n + 1);
  for (int j = 0; j <= n; ++j) cv.push_back(build_converter(j));

  // Shapes and labels.
  for (int j = 0; j <= n; ++j) {
    const auto& list = ar.manifest.at("groups").at(std::to_string(j));
    if (list.size() != cv[j].lambdas.size()) {
      rep.fail("group table for " + std::to_string(j) + " sites is wrong");
      return rep;
    }
    for (size_t li = 0; li < cv[j].lambdas.size(); ++li) {
      if (list[li].at("lambda").get<std::vector<int>>() != cv[j].lambdas[li] ||
          list[li].at("m").get<int>() != cv[j].mdim[li] ||
          list[li].at("f").get<int>() != cv[j].fdim[li])
        rep.fail("group entry mismatch at " + std::to_string(j) + "/" +
                 std::to_string(li));
    }
  }

  auto check_block = [&](const std::string& name, int dim,
                         ComplexMatrix const** out) {
    const ComplexMatrix* p = ar.find(name);
    if (!p) {
      rep.fail("missing array " + name);
      return false;
    }
    if (p->rows() != dim || p->cols() != dim) {
      rep.fail("array " + name + " has the wrong shape");
      return false;
    }
    if (!p->allFinite()) {
      rep.fail("array " + name + " contains non-finite values");
      return false;
    }
    if (min_eigenvalue(hermitize(*p)) < -1e-8) {
      rep.fail("array " + name + " is not positive semidefinite");
      return false;
    }
    *out = p;
    return true;
  };

  // Encoder blocks: positivity plus unit reference trace.
  BlockOperator E;
  E.d_R = dR;
  bool enc_ok = true;
  for (size_t li = 0; li < cv[n].lambdas.size(); ++li) {
    const ComplexMatrix* p = nullptr;
    if (!check_block("enc/" + detail::lambda_label(cv[n].lambdas[li]),
                     dR * cv[n].mdim[li], &p)) {
      enc_ok = false;
      continue;
    }
    E.fmult.push_back(cv[n].fdim[li]);
    E.bdim.push_back(cv[n].mdim[li]);
    E.blocks.push_back(*p);
  }
  if (enc_ok) {
    const ComplexMatrix T = block_ref_trace(E);
    if ((T - identity(dR)).cwiseAbs().maxCoeff() > 1e-8)
      rep.fail("encoder reference-trace constraint violated");
  }

  // Decoder and channel blocks per pattern class.
  double fid = 0.0;
  bool fid_ok = enc_ok;
  SymmetricOperator enc_orbit;
  if (enc_ok) enc_orbit = from_blocks(E, cv[n]);
  for (int k = 0; k <= n; ++k) {
    BlockOperator M_ref;
    if (enc_ok) M_ref = encoder_to_code_blocks(enc_orbit, k, cv);
    const double wk =
        std::pow(0.5, n) * double(binomial(n, k));
    for (size_t i = 0; i < cv[k].lambdas.size(); ++i)
      for (size_t j = 0; j < cv[n - k].lambdas.size(); ++j) {
        const std::string tag = std::to_string(k) + "/" +
                                detail::lambda_label(cv[k].lambdas[i]) + "|" +
                                detail::lambda_label(cv[n - k].lambdas[j]);
        const size_t bi = i * cv[n - k].lambdas.size() + j;
        const int m = cv[k].mdim[i] * cv[n - k].mdim[j];
        const int f = cv[k].fdim[i] * cv[n - k].fdim[j];
        const ComplexMatrix* D = nullptr;
        const ComplexMatrix* M = nullptr;
        if (!check_block("dec/" + tag, dR * m, &D) ||
            !check_block("m/" + tag, dR * m, &M)) {
          fid_ok = false;
          continue;
        }
        ComplexMatrix S = ComplexMatrix::Zero(m, m);
        for (int r = 0; r < dR; ++r) S += D->block(r * m, r * m, m, m);
        if ((S - identity(m)).cwiseAbs().maxCoeff() > 1e-8)
          rep.fail("decoder normalization violated in dec/" + tag);
        if (enc_ok &&
            (*M - M_ref.blocks[bi]).cwiseAbs().maxCoeff() > 1e-8) {
          rep.fail("channel block m/" + tag +
                   " is inconsistent with the stored encoder");
          fid_ok = false;
        }
        fid += 0.25 * wk * double(f) * ((*M) * (*D)).trace().real();
      }
  }
  rep.fidelity = fid;
  if (fid_ok) {
    const double claimed = ar.manifest.at("fidelity").get<double>();
    if (!(std::abs(fid - claimed) <= 1e-9))
      rep.fail("recomputed fidelity " + std::to_string(fid) +
               " does not match manifest value " + std::to_string(claimed));
  } else {
    rep.fail("fidelity could not be recomputed from the payload");
  }
  return rep;
}

}  // namespace superact
