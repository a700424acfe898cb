#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "halfline/cli.hpp"
#include "halfline/errors.hpp"
#include "halfline/field_io.hpp"

using namespace halfline;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("halfline-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

struct Run {
  int status = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "halfline");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(io::read_text(dir / "manifest.json")); }

const std::vector<std::string> kSmallStudy{"--ensemble", "2", "--enriched", "3", "--T-primes", "1,2"};

}  // namespace

TEST_CASE("field files round-trip exactly") {
  Field2D f({0.0, 0.25, 5}, {0.5, 0.125, 3});
  for (std::size_t j = 0; j < f.values.size(); ++j) f.values[j] = {std::sin(1.0 + j), -1.0 / (3.0 + j)};
  const fs::path dir = scratch("io");
  fs::create_directories(dir);
  io::write_field_binary(f, dir / "f.bin");
  const Field2D g = io::read_field_binary(dir / "f.bin");
  CHECK(g.x == f.x);
  CHECK(g.t == f.t);
  CHECK(g.values == f.values);
  CHECK(fs::file_size(dir / "f.bin") == 8 + 3 * 8 + 4 * 8 + f.values.size() * 16);

  io::write_text(dir / "bad.bin", "NOTAFIELD-------------------------------------------");
  CHECK_THROWS_AS(io::read_field_binary(dir / "bad.bin"), Error);

  const std::string csv = io::field_csv(f);
  CHECK(csv.rfind("t,x,re,im\n0.5,0,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 15);
}

TEST_CASE("signal CSV reads back with its support") {
  const TimeSignal h = TimeSignal::sample([](double t) { return cplx(t * (0.5 - t), t); }, 0.0, 0.01, 80, 0.5);
  const fs::path dir = scratch("signal");
  fs::create_directories(dir);
  io::write_text(dir / "h.csv", io::signal_csv(h));
  const TimeSignal r = io::read_signal_csv(dir / "h.csv");
  CHECK(r.samples == h.samples);
  CHECK(r.dt == doctest::Approx(0.01));
  CHECK(r.support_end == doctest::Approx(0.5));
  io::write_text(dir / "uneven.csv", "t,re,im\n0,1,0\n0.1,1,0\n0.3,1,0\n");
  CHECK_THROWS_AS(io::read_signal_csv(dir / "uneven.csv"), ConfigError);
}

TEST_CASE("checksums ignore signed zeros and round-off far below the peak") {
  Field2D a({0.0, 1.0, 3}, {0.0, 1.0, 1});
  a.values = {cplx(1.0, 0.0), cplx(0.0, 0.5), cplx(0.25, 0.0)};
  Field2D b = a;
  b.values[0] = cplx(1.0, -0.0);
  b.values[2] = cplx(0.25, 1e-17);
  CHECK(io::field_checksum(a) == io::field_checksum(b));
  b.values[1] = cplx(0.0, 0.5000001);
  CHECK(io::field_checksum(a) != io::field_checksum(b));
  CHECK(io::to_hex(0xabcULL) == "0000000000000abc");
}

TEST_CASE("run configurations round-trip") {
  cli::RunConfig c;
  CHECK(cli::parse_config(cli::serialize(c)) == c);
  c.command = "verify";
  c.estimates = {"dirichlet", "neumann-inhomogeneous"};
  c.pairs = {"inf:2", "8:4"};
  c.s_values = {0.5, 1.0 / 3.0};
  c.tail_tolerance = 3.7e-19;
  c.seed = 18446744073709551557ULL;
  c.write_csv = false;
  const std::string text = cli::serialize(c);
  CHECK(cli::parse_config(text) == c);
  CHECK(cli::serialize(cli::parse_config(text)) == text);

  CHECK_THROWS_AS(cli::parse_config("{\"schema_version\": 1, \"colour\": 2}"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config("{\"schema_version\": 2}"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config("{\"T\": 1}"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config("{\"schema_version\": 1, \"T\": \"one\"}"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config("{\"schema_version\": 1, \"member\": -1}"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config("not json"), ConfigError);
  // missing keys keep their defaults
  CHECK(cli::parse_config("{\"schema_version\": 1, \"T\": 2}").T == 2.0);
}

TEST_CASE("configurations are checked before anything runs") {
  cli::RunConfig c;
  c.command = "verify";
  c.estimates = {"dirichlet"};
  c.s_values = {0.0};
  CHECK_NOTHROW(cli::validate(c));
  c.pairs = {"4:4"};
  CHECK_THROWS_AS(cli::validate(c), DomainError);
  c.pairs = {"inf:2"};
  c.estimates = {"neumann-inhomogeneous"};
  CHECK_THROWS_AS(cli::validate(c), DomainError);
  c.estimates = {"dirichlet"};
  c.checks = {"trace"};
  c.trace_s = {0.5};
  CHECK_THROWS_AS(cli::validate(c), DomainError);
  c.checks = {"plots"};
  CHECK_THROWS_AS(cli::validate(c), ConfigError);

  cli::RunConfig fan;
  fan.command = "verify";
  fan.estimates = {"dirichlet"};
  fan.pairs = {"inf:2", "8:4", "6:6"};
  fan.s_values = {0.0, 0.25};
  CHECK(cli::study_targets(fan).size() == 6);
  fan.suite = "default";
  CHECK(cli::study_targets(fan).size() == 21);
}

TEST_CASE("solve reproduces the committed checksum of the seeded bump") {
  const fs::path dir = scratch("golden");
  const Run r = run({"solve", "--kind", "dirichlet", "--profile", "bump", "--T", "1", "-o", dir.string()});
  REQUIRE(r.status == 0);
  std::string golden = io::read_text(fs::path(HALFLINE_GOLDEN_DIR) / "solve_dirichlet_bump_T1.checksum");
  golden.erase(golden.find_last_not_of(" \n") + 1);
  const Field2D u = io::read_field_binary(dir / "field.bin");
  CHECK(io::to_hex(io::field_checksum(u)) == golden);
  const auto m = manifest(dir);
  CHECK(m["outputs"]["field.bin"]["checksum"] == golden);
  CHECK(m["trace_relative_l2"].get<double>() < 1e-6);
  CHECK(m["T_prime"].get<double>() == 1.0);
  for (const char* f : {"field.csv", "trace.csv", "boundary.csv", "config.json"}) CHECK(fs::exists(dir / f));
}

TEST_CASE("zero data give all-zero field files") {
  const fs::path dir = scratch("zero");
  REQUIRE(run({"solve", "--profile", "zero", "--kind", "neumann", "-o", dir.string()}).status == 0);
  const Field2D u = io::read_field_binary(dir / "field.bin");
  for (const cplx& v : u.values) CHECK(v == cplx{});
}

TEST_CASE("reunify records the extended window") {
  const fs::path dir = scratch("reunify");
  const Run r = run({"solve", "--reunify", "--T", "0.8", "--initial", "gaussian", "--x-max", "6", "-o", dir.string()});
  REQUIRE(r.status == 0);
  CHECK(manifest(dir)["T_prime"].get<double>() == doctest::Approx(1.0));
  CHECK(fs::exists(dir / "initial.csv"));
}

TEST_CASE("a configuration file is overridden by flags") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  cli::RunConfig c;
  c.kind = "neumann";
  c.T = 0.5;
  c.output_dir = (dir / "out").string();
  io::write_text(dir / "run.json", cli::serialize(c));
  const Run r = run({"solve", "--config", (dir / "run.json").string(), "--T", "0.6", "--print-config"});
  REQUIRE(r.status == 0);
  const cli::RunConfig merged = cli::parse_config(r.out);
  CHECK(merged.kind == "neumann");
  CHECK(merged.T == 0.6);
  CHECK(!fs::exists(dir / "out"));
}

TEST_CASE("the output directory falls back to the environment") {
  const fs::path dir = scratch("env");
  ::setenv(cli::kOutDirVariable, dir.string().c_str(), 1);
  cli::RunConfig c;
  CHECK(cli::output_dir(c) == dir);
  REQUIRE(run({"solve", "--profile", "zero", "--T", "0.2"}).status == 0);
  ::unsetenv(cli::kOutDirVariable);
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("verify") {
  SUBCASE("an empty suite succeeds with an empty report") {
    const fs::path dir = scratch("empty");
    REQUIRE(run({"verify", "-o", dir.string()}).status == 0);
    CHECK(io::read_text(dir / "ratios.csv") ==
          "estimate,s,lambda,r,index,family,T_prime,grid,numerator,denominator,ratio\n");
    CHECK(manifest(dir)["reports"].empty());
  }
  SUBCASE("a non-admissible pair stops before any solve") {
    const fs::path dir = scratch("refused");
    const Run r = run({"verify", "--estimate", "dirichlet", "--pairs", "inf:2,3:3", "--s", "0", "-o", dir.string()});
    CHECK(r.status == cli::kExitConfig);
    CHECK(r.err.find("not admissible") != std::string::npos);
    CHECK(!fs::exists(dir));
  }
  SUBCASE("one report per pair and index, repeatable bit for bit") {
    std::vector<std::string> args{"verify", "--estimate", "dirichlet", "--pairs", "inf:2,6:6", "--s", "0,0.25"};
    args.insert(args.end(), kSmallStudy.begin(), kSmallStudy.end());
    auto a = args, b = args;
    const fs::path da = scratch("verify-a"), db = scratch("verify-b");
    a.insert(a.end(), {"-o", da.string()});
    b.insert(b.end(), {"-o", db.string()});
    REQUIRE(run(a).status == 0);
    REQUIRE(run(b).status == 0);
    CHECK(manifest(da)["reports"].size() == 4);
    CHECK(io::read_text(da / "ratios.csv") == io::read_text(db / "ratios.csv"));
    CHECK(io::read_text(da / "summary.txt") == io::read_text(db / "summary.txt"));
  }
  SUBCASE("a tripped gate sets the exit status") {
    std::vector<std::string> args{"verify", "--estimate", "dirichlet", "--pairs", "6:6", "--s", "0",
                                  "--drift-limit", "1.0000001", "-o", scratch("tripped").string()};
    args.insert(args.end(), kSmallStudy.begin(), kSmallStudy.end());
    const Run r = run(args);
    CHECK(r.status == cli::kExitTripped);
    CHECK(r.out.find("TRIPPED") != std::string::npos);
  }
}

TEST_CASE("kernel-scan selects kernels and refinement") {
  const fs::path dir = scratch("scan");
  const Run r = run({"kernel-scan", "--kernel", "fresnel", "--refine", "2", "--t-points", "4", "--tau-points", "5",
                     "-o", dir.string()});
  REQUIRE(r.status == 0);
  const auto m = manifest(dir);
  REQUIRE(m["reports"].size() == 1);
  CHECK(m["reports"][0]["kernel"] == "fresnel");
  CHECK(m["reports"][0]["refinement_ratio"].get<double>() > 0.0);
  CHECK(m["config"]["refine"] == 2);
  CHECK(run({"kernel-scan", "--kernel", "airy", "-o", dir.string()}).status == cli::kExitConfig);
}
