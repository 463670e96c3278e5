#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "bethe_forge/cli.hpp"
#include "bethe_forge/errors.hpp"
#include "bethe_forge/io.hpp"
#include "support.hpp"

using namespace bethe;
using namespace bethe::testing;
using nlohmann::json;

namespace {

const std::filesystem::path kPresets = BETHE_FORGE_PRESET_DIR;

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("bethe_forge_" + name);
  std::ofstream(path) << text;
  return path.string();
}

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_mode(Mode mode, const std::string& input, RunConfig config = {}) {
  config.mode = mode;
  config.input = input;
  std::ostringstream out, err;
  const int code = run(config, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, MalformedJsonIsExitTwoWithPosition) {
  const auto path = write_temp("bad.json", "{\n  \"p\": [1, 0],\n  \"q\": [1 0]\n}\n");
  const auto r = run_mode(Mode::Classify, path);
  EXPECT_EQ(r.code, kParse);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST(Cli, UnknownKeyAndMissingFileAreParseErrors) {
  EXPECT_EQ(run_mode(Mode::Classify, write_temp("key.json", R"({"pp": 1})")).code, kParse);
  EXPECT_EQ(run_mode(Mode::Classify, "/nonexistent/h.json").code, kParse);
  EXPECT_EQ(run_mode(Mode::Classify, write_temp("fam.json", R"({"family": "XYZ", "free": {}})")).code, kParse);
  EXPECT_THROW(parse_range("1..x"), ParseError);
  EXPECT_EQ(parse_range("2..3"), std::make_pair(2, 3));
  EXPECT_EQ(parse_range("2"), std::make_pair(2, 2));
}

TEST(Cli, HypothesisViolationIsExitThree) {
  // No t/s entries: the rank-1 gate fails.
  const auto r = run_mode(Mode::Classify, write_temp("gate.json", R"({"p": 1, "q": 2, "tp": 0.5})"));
  EXPECT_EQ(r.code, kGate);
}

TEST(Cli, PresetClassifiesWithSmallFitResidual) {
  RunConfig config;
  config.format = Format::Json;
  const auto r = run_mode(Mode::Classify, (kPresets / "gZF.json").string(), config);
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto report = json::parse(r.out);
  EXPECT_EQ(report["classification"], "gZF");
  EXPECT_LE(report["match"]["fit_residual"].get<double>(), 1e-9);
  EXPECT_TRUE(report["verdict"]["solvable"].get<bool>());
}

TEST(Cli, EveryPresetClassifiesAsItsFamily) {
  for (const auto& entry : std::filesystem::directory_iterator(kPresets)) {
    std::ifstream in(entry.path());
    const auto raw = json::parse(in);
    RunConfig config;
    config.format = Format::Json;
    const auto r = run_mode(Mode::Classify, entry.path().string(), config);
    ASSERT_EQ(r.code, kOk) << entry.path() << r.err;
    const auto report = json::parse(r.out);
    ASSERT_FALSE(report["match"].is_null()) << entry.path();
    EXPECT_EQ(report["match"]["family"], raw["family"]) << entry.path();
    EXPECT_EQ(report["match"]["branch"], raw["branch"]) << entry.path();
  }
}

TEST(Cli, RandomHamiltonianIsNotSolvable) {
  std::mt19937_64 rng(91);
  const auto path = write_temp("random.json", to_json(random_params(rng)).dump());
  RunConfig config;
  config.format = Format::Json;
  const auto r = run_mode(Mode::Classify, path, config);
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto report = json::parse(r.out);
  EXPECT_EQ(report["classification"], "not CBA-solvable");
  EXPECT_FALSE(report["verdict"]["solvable"].get<bool>());
  // Spectrum mode refuses it.
  EXPECT_EQ(run_mode(Mode::Spectrum, path).code, kRefused);
}

TEST(Cli, FourExcitationsAreRefused) {
  RunConfig config;
  config.m_min = 1;
  config.m_max = 4;
  const auto r = run_mode(Mode::Spectrum, (kPresets / "gZF.json").string(), config);
  EXPECT_EQ(r.code, kRefused);
  EXPECT_NE(r.err.find("M ≤ 3 supported"), std::string::npos) << r.err;
}

TEST(Cli, ChainTooLongIsRefused) {
  RunConfig config;
  config.length = 40;
  EXPECT_EQ(run_mode(Mode::Spectrum, (kPresets / "gZF.json").string(), config).code, kRefused);
}

TEST(Cli, VerifyPassesOnPresets) {
  for (const char* name : {"gZF.json", "SB5.json", "17V1b.json", "bariev.json"}) {
    RunConfig config;
    config.format = Format::Json;
    const auto r = run_mode(Mode::Verify, (kPresets / name).string(), config);
    EXPECT_EQ(r.code, kOk) << name << r.err;
    EXPECT_TRUE(json::parse(r.out)["passed"].get<bool>()) << name;
  }
}

TEST(Cli, ConjugateVacuumRunsOnTheChargeConjugate) {
  RunConfig config;
  config.format = Format::Json;
  config.conjugate_vacuum = true;
  const auto r = run_mode(Mode::Verify, (kPresets / "gIK.json").string(), config);
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(json::parse(r.out)["conjugate_vacuum"].get<bool>());
}

TEST(Cli, JsonOutputIsDeterministic) {
  RunConfig config;
  config.format = Format::Json;
  const auto path = (kPresets / "gB.json").string();
  const auto a = run_mode(Mode::Spectrum, path, config);
  const auto b = run_mode(Mode::Spectrum, path, config);
  ASSERT_EQ(a.code, kOk);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CatalogListsTenFamilies) {
  RunConfig config;
  config.format = Format::Json;
  const auto r = run_mode(Mode::Catalog, "", config);
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto report = json::parse(r.out);
  ASSERT_EQ(report["families"].size(), 10u);
  for (const auto& f : report["families"]) {
    if (f["name"] == "gIK") EXPECT_EQ(f["invariances"], json::array({"T", "PC"}));
    if (f["name"] == "17V1b") EXPECT_TRUE(f["invariances"].empty());
    if (f["name"] == "SB5") EXPECT_EQ(f["invariances"], json::array({"PCT"}));
  }
  const auto text = run_mode(Mode::Catalog, "");
  EXPECT_NE(text.out.find("T, PC"), std::string::npos);
}

TEST(Cli, CatalogExamplesRoundTrip) {
  RunConfig config;
  config.format = Format::Json;
  const auto report = json::parse(run_mode(Mode::Catalog, "", config).out);
  for (const auto& f : report["families"]) {
    const auto path = write_temp("example.json", f["example"].dump());
    const auto r = run_mode(Mode::Classify, path, config);
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(json::parse(r.out)["match"]["family"], f["name"]);
  }
}
