// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "support.hpp"
#include "symcap/serialization.hpp"

using namespace symcap;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("symcap_ser_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <class Fn>
std::string schema_path_of(Fn&& fn) {
  try {
    fn();
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("fnv-1a reference vectors") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
  CHECK(hex64(0) == "0000000000000000");
  Json a;
  a["p"] = 0.06;
  a["n"] = 5;
  Json b;
  b["p"] = 0.06;
  b["n"] = 5;
  CHECK(config_hash(a) == config_hash(b));
  b["n"] = 6;
  CHECK(config_hash(a) != config_hash(b));
  const Json prov = provenance(7, config_hash(a));
  CHECK(prov["seed"] == 7);
  CHECK(prov["version"] == std::string(kToolVersion));
  CHECK(prov["config_hash"] == config_hash(a));
}

TEST_CASE("channel, basis and input round trips") {
  auto rng = test::rng_for(81);
  for (int trial = 0; trial < 10; ++trial) {
    const FamilyKind f = test::random_family(rng);
    const PauliChannel ch = make_channel(f, test::random_p(rng, f));
    const PauliChannel back = channel_from_json(Json::parse(to_json(ch).dump()));
    CHECK(back.probabilities() == ch.probabilities());

    const int n = 1 + static_cast<int>(rng() % 12);
    const SymmetricInput in = test::random_input(rng, n);
    const SymmetricInput in2 = input_from_json(Json::parse(to_json(in).dump()));
    CHECK(in2.n == n);
    CHECK((in2.alpha - in.alpha).norm() <= 1e-15);

    const SpanningBasis b = choose_spanning_states(n, trial);
    const SpanningBasis b2 = basis_from_json(Json::parse(to_json(b).dump()));
    CHECK(b2.overlap == b.overlap);
    CHECK(b2.beta == b.beta);
  }
  // Hand-written files need not be normalized.
  const Json loose = Json::parse(R"({"n": 1, "alpha0": [[3, 0], [0, 0]], "alpha1": [[0, 0], [0, 4]]})");
  const SymmetricInput in = input_from_json(loose);
  CHECK(in.alpha.row(0).norm() == doctest::Approx(1.0));
  CHECK(in.alpha.row(1).norm() == doctest::Approx(1.0));
}

TEST_CASE("threshold record round trip") {
  auto rng = test::rng_for(82);
  ThresholdRecord rec;
  rec.family = FamilyKind::two_pauli;
  rec.n = 4;
  rec.p_star = 0.1134567;
  rec.p_upper = 0.1134577;
  rec.ci_lo = 2.5e-7;
  rec.ci_hi = -3.0e-6;
  rec.best_input = test::random_input(rng, 4);
  rec.seed = 99;
  rec.restarts = 6;
  rec.wall_time_s = 1.5;
  const ThresholdRecord back = record_from_json(Json::parse(to_json(rec).dump()));
  CHECK(back.family == rec.family);
  CHECK(back.n == rec.n);
  CHECK(back.p_star == rec.p_star);
  CHECK(back.p_upper == rec.p_upper);
  CHECK(back.ci_lo == rec.ci_lo);
  CHECK(back.ci_hi == rec.ci_hi);
  CHECK(back.seed == rec.seed);
  CHECK(back.restarts == rec.restarts);
  CHECK((back.best_input.alpha - rec.best_input.alpha).norm() <= 1e-15);
}

TEST_CASE("schema errors carry the offending path") {
  CHECK(schema_path_of([] { input_from_json(Json::parse(R"({"alpha0": []})")); }) == "/n");
  CHECK(schema_path_of([] { input_from_json(Json::parse(R"({"n": 2, "alpha0": [[1,0],[0,0],[0,0]]})")); }) ==
        "/alpha1");
  CHECK(schema_path_of([] {
          input_from_json(Json::parse(R"({"n": 1, "alpha0": [[1,0],[0,"x"]], "alpha1": [[1,0],[0,0]]})"));
        }) == "/alpha0/1");
  CHECK(schema_path_of([] { input_from_json(Json::parse(R"({"n": 2, "alpha0": [[1,0]], "alpha1": [[1,0]]})")); }) ==
        "/alpha0");
  CHECK(schema_path_of([] { input_from_json(Json::parse(R"({"n": 1, "alpha0": [[0,0],[0,0]], "alpha1": [[1,0],[0,0]]})")); }) ==
        "/alpha0");
  CHECK(schema_path_of([] { input_from_json(Json::parse("[1, 2]")); }) == "/");
  CHECK(schema_path_of([] { input_from_json(Json::parse(R"({"n": 1.5})")); }) == "/n");

  const fs::path dir = scratch_dir();
  const fs::path bad = dir / "bad.json";
  write_file_atomic(bad, "{\"n\": 3,");
  CHECK(schema_path_of([&] { parse_json_file(bad); }) == bad.string());
  CHECK(schema_path_of([&] { parse_json_file(dir / "missing.json"); }) == (dir / "missing.json").string());
  fs::remove_all(dir);
}

TEST_CASE("atomic writes replace the whole file") {
  const fs::path dir = scratch_dir();
  const fs::path f = dir / "out.txt";
  write_file_atomic(f, "first version, longer text");
  write_file_atomic(f, "second");
  CHECK(slurp(f) == "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS_AS(write_file_atomic(dir / "no_such_dir" / "x.txt", "x"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("precomputation cache reloads bitwise") {
  const fs::path dir = scratch_dir();
  for (int n : {1, 3, 6}) {
    const PauliChannel ch = make_channel(FamilyKind::depolarizing, 0.06);
    const Precomputation pre = precompute<double>(ch, n, choose_spanning_states(n, 1));
    Json meta;
    meta["tag"] = "n" + std::to_string(n);
    const fs::path f = dir / ("cache" + std::to_string(n) + ".bin");
    save_precomputation(f, pre, meta);
    const LoadedCache back = load_precomputation(f);
    CHECK(back.meta["tag"] == meta["tag"]);
    CHECK(peek_cache_meta(f).value()["tag"] == meta["tag"]);
    CHECK(back.pre.n == n);
    CHECK(back.pre.channel.probabilities() == ch.probabilities());
    REQUIRE(back.pre.blocks.size() == pre.blocks.size());
    for (std::size_t b = 0; b < pre.blocks.size(); ++b) {
      const auto& x = pre.blocks[b].nd;
      const auto& y = back.pre.blocks[b].nd;
      REQUIRE(x.size() == y.size());
      CHECK(std::memcmp(x.data(), y.data(), x.size() * sizeof(x[0])) == 0);
      CHECK(back.pre.blocks[b].lambda == pre.blocks[b].lambda);
      CHECK(back.pre.blocks[b].specht == pre.blocks[b].specht);
    }
    // Same CI from the reloaded cache.
    const SymmetricInput in = repetition_input(n);
    CHECK(evaluate_ci<double>(in, back.pre) == evaluate_ci<double>(in, pre));
  }
  // Corrupt and foreign files.
  const fs::path trunc = dir / "trunc.bin";
  const std::string full = slurp(dir / "cache3.bin");
  write_file_atomic(trunc, full.substr(0, full.size() - 5));
  CHECK_THROWS_AS(load_precomputation(trunc), SchemaError);
  write_file_atomic(trunc, "not a cache at all");
  CHECK_THROWS_AS(load_precomputation(trunc), SchemaError);
  CHECK_FALSE(peek_cache_meta(trunc).has_value());
  CHECK_FALSE(peek_cache_meta(dir / "absent.bin").has_value());
  fs::remove_all(dir);
}

TEST_CASE("sweep rows and files round trip") {
  auto rng = test::rng_for(83);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  SweepFile file;
  file.provenance = provenance(5, "0123456789abcdef");
  for (int i = 0; i < 20; ++i) {
    SweepRow r;
    r.family = test::random_family(rng);
    r.n = i + 1;
    r.p_star = u(rng);
    r.ci_lo = u(rng) * 1e-5;
    r.ci_hi = -u(rng) * 1e-3;
    r.seed = rng();
    r.restarts = i % 7;
    r.wall_time_s = u(rng) * 100;
    const SweepRow back = parse_sweep_row(format_sweep_row(r));
    CHECK(back.family == r.family);
    CHECK(back.n == r.n);
    CHECK(back.p_star == r.p_star);
    CHECK(back.ci_lo == r.ci_lo);
    CHECK(back.ci_hi == r.ci_hi);
    CHECK(back.seed == r.seed);
    CHECK(back.restarts == r.restarts);
    CHECK(back.wall_time_s == r.wall_time_s);
    file.rows.push_back(r);
  }
  const std::string text = format_sweep_file(file);
  CHECK(text.rfind("# ", 0) == 0);
  CHECK(text.find(std::string(kSweepHeader)) != std::string::npos);
  const SweepFile back = parse_sweep_file(text);
  CHECK(back.provenance == file.provenance);
  REQUIRE(back.rows.size() == file.rows.size());
  CHECK(format_sweep_file(back) == text);

  CHECK_THROWS_AS(parse_sweep_row("dep,3,0.1"), SchemaError);
  CHECK_THROWS_AS(parse_sweep_row("amp,3,0.1,1,1,1,1,1"), SchemaError);
  CHECK_THROWS_AS(parse_sweep_row("dep,3,zz,1,1,1,1,1"), SchemaError);
  CHECK_THROWS_AS(parse_sweep_file("# {}\nwrong,header\n"), SchemaError);
}

TEST_CASE("shortest round-trip reals") {
  for (double v : {0.1, 0.063096, 1e-300, -2.5e-7, 0.0, 123456.789}) {
    CHECK(std::stod(format_real(v)) == v);
  }
  CHECK(format_real(0.1) == "0.1");
}
