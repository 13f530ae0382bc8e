#include <doctest.h>

#include <json.hpp>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pslab/cli.hpp"
#include "pslab/error.hpp"
#include "pslab/field_io.hpp"
#include "pslab/manifest.hpp"
#include "pslab/ode1d.hpp"

using namespace pslab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pslab_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

struct CliRun {
  int code = 0;
  std::string err;
  std::string out;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "pslab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream err;
  std::ostringstream out;
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data());
  std::cerr.rdbuf(old_err);
  std::cout.rdbuf(old_out);
  r.err = err.str();
  r.out = out.str();
  return r;
}

SolutionPair small_pair(double beta = 2.5) {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 7);
  return SolutionPair(ScalarField::sample(g, [](const Point& x) { return 1.0 + x[0] * x[0] + 0.1 * x[1]; }),
                      ScalarField::sample(g, [](const Point& x) { return 2.0 - x[1] / 3.0; }), beta);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("field files round trip exactly") {
  TempDir dir;
  const SolutionPair p = small_pair();
  write_field(dir / "f.json", p);
  const FieldFile back = read_field_file(dir / "f.json");
  CHECK(back.warnings.empty());
  CHECK(back.pair.beta() == 2.5);
  CHECK(back.pair.grid() == p.grid());
  for (std::size_t i = 0; i < p.grid().size(); ++i) {
    REQUIRE(back.pair.u()[i] == p.u()[i]);
    REQUIRE(back.pair.v()[i] == p.v()[i]);
  }
}

TEST_CASE("field files are validated") {
  json j = field_to_json(small_pair());
  SUBCASE("wrong array length") {
    j["u"].erase(0);
    CHECK_THROWS_AS(field_from_json(j), ShapeError);
  }
  SUBCASE("wrong version") {
    j["version"] = "PSLAB-FIELD v0";
    CHECK_THROWS_AS(field_from_json(j), ShapeError);
  }
  SUBCASE("missing key") {
    j.erase("v");
    CHECK_THROWS_AS(field_from_json(j), ConfigError);
  }
  SUBCASE("mistyped key") {
    j["n"] = "seven";
    CHECK_THROWS_AS(field_from_json(j), ConfigError);
  }
  SUBCASE("missing beta defaults to 1 with a warning") {
    j.erase("beta");
    std::ostringstream err;
    auto* old = std::cerr.rdbuf(err.rdbuf());
    const FieldFile f = field_from_json(j);
    std::cerr.rdbuf(old);
    CHECK(f.pair.beta() == 1.0);
    CHECK(f.warnings.size() == 1);
  }
}

TEST_CASE("profile files keep metadata and arrays") {
  TempDir dir;
  HeteroclinicOptions opts;
  opts.L = 12.0;
  opts.n = 1201;
  const Profile1D p = solve_heteroclinic(opts);
  write_profile(dir / "p.json", p, 1e-12);
  const Profile1D q = read_profile(dir / "p.json");
  CHECK(q.L == p.L);
  CHECK(q.n == p.n);
  CHECK(q.offset == p.offset);
  CHECK(q.u == p.u);
  CHECK(q.v == p.v);
  CHECK_THROWS_AS(read_profile(dir / "missing.json"), ConfigError);
}

TEST_CASE("malformed JSON names the byte offset") {
  TempDir dir;
  write_text(dir / "bad.json", "{\"grid\": {\"dim\": 2,, }");
  try {
    read_json(dir / "bad.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("digests") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

  const std::vector<double> a{1.0, 2.0, 3.0};
  std::vector<double> b = a;
  Fingerprint f1;
  Fingerprint f2;
  Fingerprint f3;
  f1.add("x", a);
  f2.add("x", b);
  b[2] = std::nextafter(3.0, 4.0);
  f3.add("x", b);
  const std::string h1 = f1.hex();
  CHECK(h1 == f2.hex());
  CHECK(h1 != f3.hex());
  CHECK(h1 == f1.hex());
  Fingerprint renamed;
  renamed.add("y", a);
  CHECK(renamed.hex() != h1);
}

TEST_CASE("manifest records inputs and outputs") {
  TempDir dir;
  write_text(dir / "in.txt", "abc");
  RunManifest m;
  m.subcommand = "diagnose";
  m.add_input(dir / "in.txt");
  m.outputs.push_back(dir / "out.csv");
  m.fingerprint = "00";
  const json j = m.to_json();
  CHECK(j["tool"] == "pslab");
  CHECK(j["version"] == kToolVersion);
  CHECK(j["subcommand"] == "diagnose");
  CHECK(j["inputs"][0]["sha256"] == sha256_hex("abc"));
  CHECK(j["outputs"].size() == 1);
  CHECK_THROWS_AS(m.add_input(dir / "nope.txt"), ConfigError);
}

TEST_CASE("cli: solve, diagnose and manifests") {
  TempDir dir;
  const CliRun s = run({"solve2d", "--harmonic-degree", "1", "--lo", "-1", "--hi", "1", "--n", "33", "--beta", "4",
                        "--tol", "1e-9", "--out", dir / "field.json"});
  REQUIRE(s.code == 0);
  CHECK(fs::exists(dir / "field.json"));
  REQUIRE(fs::exists(dir / "manifest.json"));
  const json m = json::parse(std::ifstream(dir / "manifest.json"));
  CHECK(m["subcommand"] == "solve2d");
  CHECK_FALSE(m["fingerprint"].get<std::string>().empty());

  const CliRun d = run({"diagnose", "--field", dir / "field.json", "--center", "0,0", "--radii", "0.2:0.6:5", "--out",
                        dir / "scan.csv"});
  CHECK(d.code == 0);
  std::ifstream csv(dir / "scan.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "r,H,E,N,J,ball_mass");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) rows += line.empty() ? 0 : 1;
  CHECK(rows == 5);
  CHECK(fs::exists(dir / "scan.json"));

  const CliRun far = run({"diagnose", "--field", dir / "field.json", "--center", "0,0", "--radii", "0.5:1.5:3",
                          "--out", dir / "far.csv"});
  CHECK(far.code == 3);
  CHECK(far.err.find("max admissible radius") != std::string::npos);
}

TEST_CASE("cli: error exit codes") {
  TempDir dir;
  write_text(dir / "bad.json", "{\"grid\": [1, 2,");
  const CliRun bad = run({"solve2d", "--config", dir / "bad.json", "--out", dir / "f.json"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("byte") != std::string::npos);

  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"solve1d", "--n", "1000", "--out", dir / "p.json"}).code == 2);

  write_text(dir / "cfg.json",
             R"({"grid": {"dim": 3, "lo": -1, "hi": 1, "n": 9}, "boundary": {"kind": "harmonic", "degree": 2}})");
  const CliRun unsupported = run({"solve2d", "--config", dir / "cfg.json", "--out", dir / "f.json"});
  CHECK(unsupported.code == 2);
}

TEST_CASE("cli: 1D profile and asymptotics") {
  TempDir dir;
  const CliRun p = run({"solve1d", "--L", "12", "--n", "1201", "--out", dir / "profile.json"});
  REQUIRE(p.code == 0);
  const CliRun s = run({"solve2d", "--profile", dir / "profile.json", "--lo", "-4", "--hi", "4", "--n", "33",
                        "--lift", "grid", "--optimal-omega", "--tol", "1e-9", "--out", dir / "lift.json"});
  REQUIRE(s.code == 0);
  const CliRun a = run({"asymptotics", "--field", dir / "lift.json", "--ops", "decay,planes,defect,levelset",
                        "--out", dir / "asym.json"});
  REQUIRE(a.code == 0);
  const json j = json::parse(std::ifstream(dir / "asym.json"));
  CHECK(j.contains("decay"));
  CHECK(j.contains("planes"));
  CHECK(j["defect"].get<double>() <= 1e-6);
  CHECK(fs::exists(dir / "asym_planes.csv"));
}
