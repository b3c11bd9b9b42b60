#include "cli.hpp"
#include "toroidal/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace toroidal;
using Json = report::Json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / ("toroidal_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("identities exit codes") {
  const auto ok = run({"identities", "--degree", "4"});
  CHECK(ok.code == cli::kExitPass);
  const auto doc = Json::parse(ok.out);
  CHECK(doc.at("manifest").at("command") == "identities");
  for (const auto& c : doc.at("checks")) CHECK(c.at("pass").get<bool>());
  CHECK(run({"identities", "--degree", "0"}).code == cli::kExitUsage);
  CHECK(run({"identities", "--degree", "abc"}).code == cli::kExitUsage);
  CHECK(run({"nonsense"}).code == cli::kExitUsage);
}

TEST_CASE("ILW commands") {
  const auto zero = run({"ilw", "spectrum", "--level", "0"});
  REQUIRE(zero.code == 0);
  const auto values = Json::parse(zero.out).at("result").at("eigenvalues");
  REQUIRE(values.size() == 1);
  CHECK(values[0].at("re").get<double>() == 0.0);
  CHECK(run({"ilw", "crosscheck", "--level", "1"}).code == 0);
}

TEST_CASE("elliptic commands") {
  const auto vac = run({"elliptic", "i1", "--level", "0", "--q1", "0.8", "--q3", "1.25", "--u1", "1", "--u2", "2"});
  REQUIRE(vac.code == 0);
  const auto level0 = Json::parse(vac.out).at("result").at("levels").at(0).at("eigenvalues");
  REQUIRE(level0.size() == 1);
  // q2 = 1 here, so q = 1 and the vacuum value is u1 + u2
  CHECK(level0[0].at("re").get<double>() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(run({"elliptic", "i1", "--p", "1.2"}).code == cli::kExitUsage);
}

TEST_CASE("gaudin and series commands") {
  CHECK(run({"gaudin", "count", "--N", "1"}).code == 0);
  const auto dir = scratch_dir();
  write(dir / "roots.json", R"({"q1": [0.9, 0.1], "q3": 1.05, "p": 0.2, "roots": []})");
  const auto series = run({"series", "t", "--roots", (dir / "roots.json").string(), "--lmax", "0"});
  REQUIRE(series.code == 0);
  const auto c0 = Json::parse(series.out).at("result").at("direct").at("coefficients").at(0);
  double euler = 1.0;
  for (int k = 1; k < 100; ++k) euler *= 1.0 - std::pow(0.2, k);
  CHECK(c0.at("re").get<double>() == doctest::Approx(1.0 / euler).epsilon(1e-11));
}

TEST_CASE("input errors") {
  const auto dir = scratch_dir();
  write(dir / "bad.json", "{ not json");
  CHECK(run({"bethe", "solve", "--params", (dir / "bad.json").string()}).code == cli::kExitInput);
  CHECK(run({"bethe", "solve", "--params", (dir / "missing.json").string()}).code == cli::kExitInput);
  write(dir / "wrong.json", R"({"r": 2.5})");
  CHECK(run({"bethe", "solve", "--system", "Ilw", "--params", (dir / "wrong.json").string()}).code == cli::kExitInput);
}

TEST_CASE("config precedence and replay") {
  const auto dir = scratch_dir();
  write(dir / "cfg.txt", "# defaults\nlevel = 2\npihat = 0.9\n");
  const auto from_config = run({"--config", (dir / "cfg.txt").string(), "ilw", "spectrum", "--level", "1"});
  REQUIRE(from_config.code == 0);
  const auto doc = Json::parse(from_config.out);
  CHECK(doc.at("manifest").at("parameters").at("level") == "1");
  CHECK(doc.at("manifest").at("parameters").at("pihat") == "0.9");
  write(dir / "unknown.txt", "colour = red\n");
  CHECK(run({"--config", (dir / "unknown.txt").string(), "ilw", "spectrum"}).code == cli::kExitUsage);

  write(dir / "system.json", R"({"r": 2.5, "tau": -0.7, "v1": 0.15, "v2": -1.15, "n": 2})");
  const auto first = run({"--manifest", (dir / "m.json").string(), "bethe", "solve", "--system", "Ilw", "--params",
                          (dir / "system.json").string(), "--count-expected", "5"});
  REQUIRE(first.code == 0);
  const auto again = run({"replay", (dir / "m.json").string()});
  CHECK(again.code == 0);
  CHECK(again.out == first.out);
  CHECK(Json::parse(slurp(dir / "m.json")).contains("wall_time_seconds"));
}
