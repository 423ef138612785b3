#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "jcd/error.hpp"
#include "jcd/io.hpp"

using namespace jcd;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("jcd_io_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int CountLines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

ErrorCode CodeOf(const json& doc) {
  try {
    SpecFromJson(doc);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoError;
}

std::string MessageOf(const json& doc) {
  try {
    SpecFromJson(doc);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const json kScenario1 = json::parse(R"({
  "name": "scenario1", "T": 2, "K": 2, "R": 1,
  "channels": [[[1, 0], [0, 0]], [[0.7071067811865476, 0], [0.7071067811865476, 0]]],
  "snr": [6, 8], "P_m": 1, "P_c": 4, "real_constellation": true
})");

}  // namespace

TEST_CASE("minimal config reproduces the builtin scenario") {
  const auto spec = SpecFromJson(kScenario1);
  const auto builtin = BuiltinScenario("scenario1");
  CHECK(SpecToJson(spec) == SpecToJson(builtin));
}

TEST_CASE("config round trip") {
  for (const auto& name : BuiltinScenarioNames()) {
    const auto spec = BuiltinScenario(name);
    CHECK(SpecToJson(SpecFromJson(SpecToJson(spec))) == SpecToJson(spec));
  }
  json j = kScenario1;
  j["channels"] = "random";
  j["snr"] = {{"mean", 3.0}, {"jitter_std", 0.5}};
  j["plateau"] = {{"window", 10}, {"min_improvement", 1e-3}};
  j["convention"] = "circular";
  const auto spec = SpecFromJson(j);
  CHECK(std::holds_alternative<RandomChannels>(spec.channels));
  CHECK(std::get<JitteredSnr>(spec.snr).jitter_std == 0.5);
  CHECK(spec.opt.plateau == PlateauRule{10, 1e-3});
  CHECK(spec.opt.kernel.convention == NoiseConvention::kCircular);
  CHECK(SpecToJson(SpecFromJson(SpecToJson(spec))) == SpecToJson(spec));
}

TEST_CASE("invalid configs name the offending field") {
  json j = kScenario1;
  j["channels"][0] = {{1, 0}, {0, 0}, {0, 0}};
  CHECK(CodeOf(j) == ErrorCode::kValidationError);
  CHECK(MessageOf(j).find("channels[0]") != std::string::npos);

  j = kScenario1;
  j["snr"] = {6};
  CHECK(MessageOf(j).find("'snr'") != std::string::npos);

  j = kScenario1;
  j.erase("T");
  CHECK(MessageOf(j).find("'T'") != std::string::npos);

  j = kScenario1;
  j["bogus"] = 1;
  CHECK(MessageOf(j).find("'bogus'") != std::string::npos);

  j = kScenario1;
  j["P_c"] = 0.5;
  CHECK(CodeOf(j) == ErrorCode::kValidationError);

  j = kScenario1;
  j["n_eval"] = 10;
  CHECK(MessageOf(j).find("'n_eval'") != std::string::npos);

  j = kScenario1;
  j["eta"] = "fast";
  CHECK(MessageOf(j).find("'eta'") != std::string::npos);

  CHECK(CodeOf(json::array()) == ErrorCode::kParseError);
}

TEST_CASE("config files and scenario names") {
  const auto dir = TempDir("config");
  std::ofstream(dir / "s1.json") << kScenario1.dump();
  std::ofstream(dir / "broken.json") << "{ \"T\": ";
  CHECK(SpecToJson(LoadScenario((dir / "s1.json").string())) == SpecToJson(BuiltinScenario("scenario1")));
  CHECK(LoadScenario("scenario2").name == "scenario2");
  try {
    LoadConfig(dir / "broken.json");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
  }
  CHECK_THROWS_AS(LoadScenario("no_such_scenario"), Error);
}

TEST_CASE("number formatting and hashing") {
  CHECK(FormatNumber(0.1) == "0.10000000000000001");
  CHECK(FormatNumber(2.0) == "2");
  CHECK(Fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("constellation csv round trip is exact") {
  const MessageSpace space({2, 2});
  Eigen::MatrixXcd x(4, 2);
  x << 0.1, Complex{-1.0 / 3.0, 0.25}, 1e-17, -2.5, Complex{0, 1}, 0.7, -0.3, 1.1;
  const Constellation c(x);
  const std::string csv = ConstellationCsv(c, space);
  CHECK(csv.rfind("w,antenna,re,im\n", 0) == 0);
  CHECK(CountLines(csv) == 1 + 4 * 2);
  CHECK(csv.find("\n01,1,") != std::string::npos);
  const auto back = ParseConstellationCsv(csv);
  CHECK(back.constellation.points() == x);
  CHECK(back.labels == std::vector<std::string>{"00", "01", "10", "11"});
  CHECK_THROWS_AS(ParseConstellationCsv("w,re\n"), Error);
  CHECK_THROWS_AS(ParseConstellationCsv("w,antenna,re,im\n00,0,abc,0\n"), Error);
}

TEST_CASE("scenario results on disk") {
  auto spec = BuiltinScenario("scenario2");
  spec.opt.n_samples = 300;
  spec.opt.max_iterations = 5;
  spec.opt.n_eval = 2000;
  const auto result = RunScenario(spec);
  const auto bundle = BundleFromScenario(result);
  const auto dir = TempDir("scenario");
  WriteResults(bundle, dir);

  for (const char* f : {"constellation.csv", "constellation_mmse.csv", "constellation_matched.csv",
                        "mi.csv", "summary.csv", "loss_history.csv", "manifest.json"})
    CHECK(fs::exists(dir / f));
  CHECK_FALSE(fs::exists(dir / "constellation_zf.csv"));
  CHECK(CountLines(Slurp(dir / "constellation.csv")) == 1 + 4 * 2);

  const std::string mi = Slurp(dir / "mi.csv");
  CHECK(mi.rfind("experiment,snr_db,encoder,user,mi,stderr\n", 0) == 0);
  CHECK(mi.find(",zf,0,NA,NA\n") != std::string::npos);
  CHECK(CountLines(mi) == 1 + 4 * 2);

  const std::string summary = Slurp(dir / "summary.csv");
  CHECK(summary.rfind("snr_db,encoder,min_mi,mean_mi\n", 0) == 0);
  for (const auto& row : bundle.summary) {
    if (!row.min_mi) continue;
    double lo = 1e9;
    for (const auto& m : bundle.mi)
      if (m.encoder == row.encoder) lo = std::min(lo, *m.mi);
    CHECK(*row.min_mi == lo);
  }
  CHECK(Slurp(dir / "loss_history.csv").rfind("iteration,max_loss,argmax_user\n", 0) == 0);

  const json manifest = json::parse(Slurp(dir / "manifest.json"));
  CHECK(manifest["run_id"] == RunId(bundle));
  CHECK(manifest["command"] == "scenario");
  CHECK(manifest["config"] == bundle.config);
  for (const auto& o : manifest["outputs"]) CHECK(o["run_id"] == manifest["run_id"]);
  CHECK(ReadConstellationCsv(dir / "constellation.csv").constellation.points() ==
        result.rows.back().constellation->points());
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("svg export") {
  Eigen::MatrixXcd x(4, 2);
  x << 1, 1, -1, 1, 1, -1, -1, -1;
  const std::vector<std::string> labels{"00", "01", "10", "11"};
  Eigen::VectorXd d(2);
  d << 1, 0;
  const std::string svg = ConstellationSvg(Constellation(x), labels, {d, d});
  auto count = [&](const std::string& needle) {
    int n = 0;
    for (auto p = svg.find(needle); p != std::string::npos; p = svg.find(needle, p + 1)) ++n;
    return n;
  };
  CHECK(count("class=\"point\"") == 4);
  CHECK(count("class=\"point-label\"") == 4);
  CHECK(count("class=\"channel\"") == 2);
  for (const auto& l : labels) CHECK(svg.find(">" + l + "</text>") != std::string::npos);

  try {
    ConstellationSvg(Constellation(Eigen::MatrixXcd::Ones(16, 4)), std::vector<std::string>(16, "x"), {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnplottable);
  }
  Eigen::MatrixXcd complex_points = x;
  complex_points(0, 0) = Complex{1, 0.5};
  CHECK_THROWS_AS(ConstellationSvg(Constellation(complex_points), labels, {}), Error);
}
