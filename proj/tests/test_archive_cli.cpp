#include <catch2/catch_amalgamated.hpp>

#include "superact/archive.hpp"
#include "superact/seesaw.hpp"

using namespace superact;

namespace {

CodeArchive make_archive(int n, std::uint64_t seed, int restarts = 4) {
  SeesawConfig cfg;
  cfg.n = n;
  cfg.restarts = restarts;
  cfg.seed = seed;
  CodeResult res = cq_seesaw(cfg);
  std::vector<Converter> cv;
  for (int j = 0; j <= n; ++j) cv.push_back(build_converter(j));
  return build_archive(res, cv, cfg);
}

}  // namespace

TEST_CASE("archives survive a serialization round trip") {
  const CodeArchive ar = make_archive(2, 5);
  const std::string buf = serialize_archive(ar);
  const CodeArchive back = parse_archive(buf);
  REQUIRE(back.manifest == ar.manifest);
  REQUIRE(back.arrays.size() == ar.arrays.size());
  for (size_t i = 0; i < ar.arrays.size(); ++i) {
    CHECK(back.arrays[i].first == ar.arrays[i].first);
    CHECK(back.arrays[i].second == ar.arrays[i].second);
  }
  // Re-serialization is byte-identical.
  CHECK(serialize_archive(back) == buf);
}

TEST_CASE("identical configurations produce byte-identical archives") {
  const std::string a = serialize_archive(make_archive(3, 11));
  const std::string b = serialize_archive(make_archive(3, 11));
  CHECK(a == b);
  const std::string c = serialize_archive(make_archive(3, 12));
  CHECK(a != c);
}

TEST_CASE("verification accepts fresh archives") {
  for (int n = 1; n <= 3; ++n) {
    const CodeArchive ar = make_archive(n, 3);
    const VerifyReport rep = verify_archive(ar);
    for (const auto& f : rep.failures) UNSCOPED_INFO(f);
    CHECK(rep.ok);
    CHECK(rep.fidelity ==
          Catch::Approx(ar.manifest.at("fidelity").get<double>())
              .margin(1e-12));
  }
}

TEST_CASE("verification rejects a flipped payload byte") {
  const CodeArchive ar = make_archive(2, 5);
  std::string buf = serialize_archive(ar);
  // Locate the first decoder array and flip the top byte of its first
  // coefficient (the eighth byte of the float64, holding sign+exponent).
  const size_t pos = buf.find("dec/0/");
  REQUIRE(pos != std::string::npos);
  const size_t name_len = std::string("dec/0/0,0|2,0").size();
  const size_t payload = pos + name_len + 8;  // skip name and two u32 dims
  REQUIRE(payload + 8 <= buf.size());
  buf[payload + 7] = char(static_cast<unsigned char>(buf[payload + 7]) ^ 0x41);
  const VerifyReport rep = verify_archive(parse_archive(buf));
  CHECK_FALSE(rep.ok);
}

TEST_CASE("verification rejects a tampered manifest fidelity") {
  CodeArchive ar = make_archive(2, 5);
  ar.manifest["fidelity"] = ar.manifest["fidelity"].get<double>() + 1e-3;
  const VerifyReport rep = verify_archive(ar);
  REQUIRE_FALSE(rep.ok);
  bool fidelity_flagged = false;
  for (const auto& f : rep.failures)
    if (f.find("fidelity") != std::string::npos) fidelity_flagged = true;
  CHECK(fidelity_flagged);
}

TEST_CASE("verification rejects an encoder inconsistent with the channel "
          "blocks") {
  CodeArchive ar = make_archive(2, 5);
  for (auto& [name, mat] : ar.arrays)
    if (name.rfind("enc/", 0) == 0) {
      mat(0, 0) += cplx(5e-2, 0.0);
      break;
    }
  const VerifyReport rep = verify_archive(ar);
  CHECK_FALSE(rep.ok);
}

TEST_CASE("file based write and read round trip") {
  const CodeArchive ar = make_archive(1, 9);
  const std::string path = "/tmp/superact_test_archive.code";
  write_archive(ar, path);
  const CodeArchive back = read_archive(path);
  CHECK(serialize_archive(back) == serialize_archive(ar));
  CHECK(verify_archive(back).ok);
  std::remove(path.c_str());
}
