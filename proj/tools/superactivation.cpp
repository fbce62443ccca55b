// Command-line driver: seesaw optimization with code archives, archive
// verification, finite-blocklength bound curves, and built-in self checks.
//
// Machine-readable JSON goes to stdout; human-readable logs go to stderr.
// Exit codes: 0 success, 1 verification/check failure, 2 usage error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "superact/archive.hpp"
#include "superact/bounds.hpp"
#include "superact/effective_channel.hpp"
#include "superact/seesaw.hpp"

using nlohmann::json;
using namespace superact;

namespace {

int default_threads() {
  if (const char* env = std::getenv("SUPERACTIVATION_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

int run_seesaw(const SeesawConfig& cfg_in, const std::string& mode,
               const std::string& out, const std::string& warm_path) {
  SeesawConfig cfg = cfg_in;
  if (mode == "explicit") {
    if (!out.empty() || !warm_path.empty()) {
      std::cerr << "explicit mode does not support --out/--warm-start\n";
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    ExplicitResult res = explicit_seesaw(cfg);
    const double wt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::cout << json{{"n", cfg.n},
                      {"fidelity", res.fidelity},
                      {"iterations", 0},
                      {"wall_time", wt}}
                     .dump()
              << "\n";
    return 0;
  }

  SymmetricOperator warm;
  if (!warm_path.empty()) {
    CodeArchive prev = read_archive(warm_path);
    const int pn = prev.manifest.at("n").get<int>();
    if (pn > cfg.n) {
      std::cerr << "warm-start archive has n=" << pn << " > requested n\n";
      return 2;
    }
    std::vector<Converter> pcv;
    for (int j = 0; j <= pn; ++j) pcv.push_back(build_converter(j));
    BlockOperator E;
    E.d_R = prev.manifest.at("d").get<int>();
    for (size_t li = 0; li < pcv[pn].lambdas.size(); ++li) {
      const ComplexMatrix* p = prev.find(
          "enc/" + superact::detail::lambda_label(pcv[pn].lambdas[li]));
      if (!p) {
        std::cerr << "warm-start archive is missing an encoder block\n";
        return 1;
      }
      E.fmult.push_back(pcv[pn].fdim[li]);
      E.bdim.push_back(pcv[pn].mdim[li]);
      E.blocks.push_back(*p);
    }
    warm = from_blocks(E, pcv[pn]);
    for (int j = pn; j < cfg.n; ++j) warm = lift_encoder(warm);
    cfg.warm_start = &warm;
  }

  CodeResult res = cq_seesaw(cfg);
  std::cerr << "best restart " << res.best_restart << ", fidelity "
            << res.fidelity << "\n";
  if (!out.empty()) {
    std::vector<Converter> cv;
    for (int j = 0; j <= cfg.n; ++j) cv.push_back(build_converter(j));
    write_archive(build_archive(res, cv, cfg), out);
    std::cerr << "archive written to " << out << "\n";
  }
  std::cout << json{{"n", res.n},
                    {"fidelity", res.fidelity},
                    {"iterations", res.outer_iterations},
                    {"wall_time", res.wall_time}}
                   .dump()
            << "\n";
  return 0;
}

int run_verify(const std::string& path) {
  VerifyReport rep = verify_archive(read_archive(path));
  for (const auto& f : rep.failures) std::cerr << "FAIL: " << f << "\n";
  std::cout << json{{"ok", rep.ok}, {"fidelity", rep.fidelity}}.dump() << "\n";
  return rep.ok ? 0 : 1;
}

int run_bounds(double eps, const std::string& kind, long n_min, long n_max,
               long points, const std::string& format, const std::string& out,
               bool crossing, int d, double c_be) {
  const EffectiveChannelSpec spec = default_effective_spec();
  const EntropyStats st = entropy_stats(spec);
  auto value_at = [&](long n) -> double {
    const int ni = static_cast<int>(n);
    if (kind == "normal") return lower_bound_normal(ni, eps, st);
    if (kind == "berry_esseen")
      return lower_bound_berry_esseen(ni, eps, st, c_be);
    if (kind == "erasure_upper") return upper_bound_erasure(ni, eps);
    if (kind == "ppt_upper") return upper_bound_ppt(ni, eps);
    return error_exponent_upper(ni, d, spec);  // error_exponent
  };

  // Sample points: every integer for small ranges, geometric otherwise.
  std::vector<long> ns;
  if (points <= 0 || points >= n_max - n_min + 1) {
    for (long n = n_min; n <= n_max; ++n) ns.push_back(n);
  } else {
    double x = double(n_min);
    const double r = std::pow(double(n_max) / double(n_min),
                              1.0 / double(points - 1));
    for (long i = 0; i < points; ++i, x *= r) {
      const long n = std::lround(x);
      if (ns.empty() || n > ns.back()) ns.push_back(n);
    }
    if (ns.back() != n_max) ns.push_back(n_max);
  }

  std::ostringstream body;
  if (format == "csv") {
    body << "n,value,valid\n";
    for (long n : ns) {
      const double v = value_at(n);
      body << n << "," << std::setprecision(17) << v << ","
           << (std::isfinite(v) ? 1 : 0) << "\n";
    }
  } else {
    json arr = json::array();
    for (long n : ns) {
      const double v = value_at(n);
      arr.push_back({{"n", n},
                     {"value", std::isfinite(v) ? json(v) : json()},
                     {"valid", std::isfinite(v)}});
    }
    body << arr.dump() << "\n";
  }
  if (out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(out, std::ios::trunc);
    if (!f) {
      std::cerr << "cannot open " << out << "\n";
      return 2;
    }
    f << body.str();
  }

  if (crossing) {
    if (kind == "normal") {
      std::cout << json{{"crossing", crossing_normal(eps, spec)}}.dump()
                << "\n";
    } else if (kind == "berry_esseen") {
      std::cout << json{{"crossing", crossing_berry_esseen(eps, spec, c_be)}}
                       .dump()
                << "\n";
    } else if (kind == "error_exponent") {
      std::cout << json{{"crossing_quarter", crossing_exponent(0.25, spec)},
                        {"crossing_half", crossing_exponent(0.5, spec)}}
                       .dump()
                << "\n";
    } else {
      std::cerr << "--crossing is not defined for kind " << kind << "\n";
      return 2;
    }
  }
  return 0;
}

bool check(const char* what, bool ok) {
  std::cerr << "check " << what << ": " << (ok ? "ok" : "FAIL") << "\n";
  return ok;
}

bool suite_effective() {
  bool ok = true;
  const PrivateStateSectors s = private_decomposition();
  const ChoiMatrix P = horodecki_channel();
  ok &= check("protocol reduces to the flagged channel",
              verify_effective_equivalence(s, 0.5, P) <= 1e-10);
  const ValidationReport vr = validate(P, "ppt");
  ok &= check("two-qubit channel is PPT",
              vr.ok && vr.psd_violation <= 1e-10);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(P.gamma));
  ok &= check("two-qubit channel has Choi rank 6",
              (es.eigenvalues().array() > 1e-10).count() == 6);
  return ok;
}

bool suite_core() {
  bool ok = true;
  const EffectiveChannelSpec spec = default_effective_spec();
  const EntropyStats st = entropy_stats(spec);
  ok &= check("first moment", std::abs(st.iota - 0.0107) < 1e-4);
  ok &= check("variance", std::abs(st.nu - 1.009) < 1e-3);
  ok &= check("third absolute moment", std::abs(st.tau - 1.061) < 2e-3);
  ok &= check("normal-approximation crossing",
              crossing_normal(0.25, spec) == 4218);
  ok &= check("refined crossing", crossing_berry_esseen(0.25, spec) == 4504);
  const auto th = fidelity_thresholds(2);
  ok &= check("fidelity thresholds",
              th.first == 0.5 && th.second == 0.75);
  return ok;
}

bool suite_symmetry() {
  bool ok = true;
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 4; ++n) {
    const Converter cv = build_converter(n);
    ok &= check("basis change is invertible",
                (cv.F * cv.Finv - ComplexMatrix::Identity(cv.total, cv.total))
                        .cwiseAbs()
                        .maxCoeff() < 1e-10);
    SymmetricOperator A(n, 2, 2);
    for (long r = 0; r < A.coeffs.rows(); ++r)
      for (long c = 0; c < A.coeffs.cols(); ++c)
        A.coeffs(r, c) = cplx(std::uniform_real_distribution<>(-1, 1)(rng),
                              std::uniform_real_distribution<>(-1, 1)(rng));
    const SymmetricOperator B = from_blocks(to_blocks(A, cv), cv);
    ok &= check("block round trip",
                (A.coeffs - B.coeffs).cwiseAbs().maxCoeff() < 1e-10);
  }
  for (int n = 2; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) {
      const ChannelOrbitExpansion ex = channel_orbit(n, k);
      long nz = 0;
      for (const cplx& c1 : ex.coeffs1)
        for (const cplx& c2 : ex.coeffs2)
          if (std::abs(c1) * std::abs(c2) > 1e-14) ++nz;
      ok &= check("channel orbit sparsity",
                  nz == long(binomial(k + 3, 3) * binomial(n - k + 3, 3)));
    }
  return ok;
}

int run_check(const std::string& suite) {
  bool ok = true;
  if (suite == "core" || suite == "all") ok &= suite_core();
  if (suite == "effective" || suite == "all") ok &= suite_effective();
  if (suite == "symmetry" || suite == "all") ok &= suite_symmetry();
  std::cout << json{{"ok", ok}}.dump() << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-blocklength superactivation toolkit"};
  app.require_subcommand(1);

  SeesawConfig cfg;
  cfg.threads = default_threads();
  std::string mode = "symmetric", out, warm;
  auto* sc = app.add_subcommand("seesaw", "optimize a code");
  sc->add_option("--n", cfg.n, "number of channel uses")->required();
  sc->add_option("--d", cfg.d, "reference dimension");
  sc->add_option("--mode", mode, "symmetric|explicit")
      ->check(CLI::IsMember({"symmetric", "explicit"}));
  sc->add_option("--restarts", cfg.restarts, "random restarts");
  sc->add_option("--tol", cfg.tol, "outer convergence tolerance");
  sc->add_option("--power-tol", cfg.power_tol, "inner fixed-point tolerance");
  sc->add_option("--max-outer", cfg.max_outer, "outer iteration cap");
  sc->add_option("--max-power", cfg.max_power, "inner iteration cap");
  sc->add_option("--seed", cfg.seed, "RNG seed");
  sc->add_option("--threads", cfg.threads, "worker threads");
  sc->add_option("--out", out, "archive output path");
  sc->add_option("--warm-start", warm, "archive used to seed restart 0");

  std::string vpath;
  auto* vc = app.add_subcommand("verify", "verify a code archive");
  vc->add_option("path", vpath, "archive path")->required();

  double eps = 0.25, c_be = 0.4748;
  std::string kind = "normal", bformat = "csv", bout;
  long n_min = 1, n_max = 10000, points = 0;
  int bd = 2;
  bool want_crossing = false;
  auto* bc = app.add_subcommand("bounds", "emit rate-bound curves");
  bc->add_option("--epsilon", eps, "error tolerance");
  bc->add_option("--kind", kind, "bound family")
      ->check(CLI::IsMember({"normal", "berry_esseen", "erasure_upper",
                             "ppt_upper", "error_exponent"}));
  bc->add_option("--n-min", n_min, "smallest blocklength");
  bc->add_option("--n-max", n_max, "largest blocklength");
  bc->add_option("--points", points, "sample count (0 = every integer)");
  bc->add_option("--format", bformat, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  bc->add_option("--out", bout, "output file (default stdout)");
  bc->add_option("--d", bd, "reference dimension for the exponent bound");
  bc->add_option("--c-be", c_be, "Berry-Esseen constant");
  bc->add_flag("--crossing", want_crossing, "also print the crossing point");

  std::string suite = "all";
  auto* cc = app.add_subcommand("check", "run built-in self checks");
  cc->add_option("--suite", suite, "core|symmetry|effective|all")
      ->check(CLI::IsMember({"core", "symmetry", "effective", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sc->parsed()) return run_seesaw(cfg, mode, out, warm);
    if (vc->parsed()) return run_verify(vpath);
    if (bc->parsed())
      return run_bounds(eps, kind, n_min, n_max, points, bformat, bout,
                        want_crossing, bd, c_be);
    return run_check(suite);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
