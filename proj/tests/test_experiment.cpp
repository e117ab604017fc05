#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "rnm/experiment.hpp"
#include "test_support.hpp"

using namespace rnm;
namespace fs = std::filesystem;

namespace {

SpacePtr space3() { return make_space({0.5, 0.3, 0.2}); }

nlohmann::json basic_scenario_json() {
  return nlohmann::json{
      {"name", "contraction-ball"},
      {"space", {{"weights", {0.5, 0.3, 0.2}}}},
      {"fiber", {{"dimension", 2}, {"q", 2.0}}},
      {"body", {{"kind", "ball"}, {"center", 0.0}, {"radius", 1.0}}},
      {"map", {{"constructor", "contraction"}, {"alpha", 0.5}}},
      {"sequence",
       {{"generator", "mann"},
        {"x0", "sample"},
        {"steps", 250},
        {"schedule", {{"kind", "constant"}, {"c", 0.5}}}}},
      {"checks", {{"seed", 777}}}};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("rnmkit-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("translate_to_origin") {
  const SpacePtr space = space3();
  const FiberSpec fiber(2, 2.0);
  Rng rng(61);

  SUBCASE("already centred pairs are returned unchanged") {
    const ConvexBody ball = ConvexBody::ball(RNElement::zero(space, fiber),
                                             L0Real::constant(space, 1.0));
    const AsymptoticMap map = make_rotation(ball, L0Real::constant(space, 0.5));
    const TranslatedInstance t = translate_to_origin(ball, map);
    CHECK(l0_norm(t.offset).max_abs() == 0.0);
    const RNElement x = ball.sample(rng);
    CHECK(exact_equal(t.map.apply(x), map.apply(x)));
  }

  SUBCASE("off-centre bodies are recentred and the map is conjugated") {
    const RNElement c = RNElement::from_fibers(space, fiber,
                                               {{1, 2}, {-1, 0}, {0, 3}});
    const ConvexBody ball = ConvexBody::ball(c, L0Real::constant(space, 1.5));
    const AsymptoticMap map =
        make_contraction(ball, L0Real::constant(space, 0.5), c);
    const TranslatedInstance t = translate_to_origin(ball, map);
    CHECK(t.body.contains(RNElement::zero(space, fiber), 0.0));
    CHECK(exact_equal(t.offset, c));
    for (int k = 0; k < 20; ++k) {
      const RNElement u = t.body.sample(rng);
      const RNElement lhs = t.map.apply(u);
      const RNElement rhs = map.apply(u + c) - c;
      CHECK((l0_norm(lhs - rhs)).max_abs() <= 1e-12);
    }
    // Certificates carry over untouched.
    for (int m = 1; m <= map.eta_horizon(); ++m) {
      CHECK(t.map.eta_at(m).values() == map.eta_at(m).values());
    }
    // Translating again is a no-op: the second offset is zero.
    const TranslatedInstance t2 = translate_to_origin(t.body, t.map);
    CHECK(l0_norm(t2.offset).max_abs() == 0.0);
  }
}

TEST_CASE("scenario parsing") {
  const ScenarioConfig config =
      ScenarioConfig::from_json(basic_scenario_json(), "fallback");
  CHECK(config.name == "contraction-ball");
  CHECK(config.checks.seed == 777);
  CHECK(config.checks.epsilon == 1e-3);   // defaults fill in
  CHECK(config.checks.horizon == 64);
  CHECK(config.hash().size() == 16);
  CHECK(config.hash() == config.hash());

  nlohmann::json broken = basic_scenario_json();
  broken.erase("fiber");
  CHECK_THROWS_AS(ScenarioConfig::from_json(broken, "x"), ConfigError);

  nlohmann::json bad_lambda = basic_scenario_json();
  bad_lambda["checks"]["lambda"] = 1.5;
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad_lambda, "x"), ConfigError);

  nlohmann::json unknown_map = basic_scenario_json();
  unknown_map["map"]["constructor"] = "teleport";
  const ScenarioConfig parsed = ScenarioConfig::from_json(unknown_map, "x");
  CHECK_THROWS_AS(run_demiclosedness(parsed), ConfigError);
}

TEST_CASE("run_demiclosedness: identity is a trivial pass") {
  nlohmann::json doc = basic_scenario_json();
  doc["name"] = "identity";
  doc["map"] = {{"constructor", "identity"}};
  const DemiclosednessReport report =
      run_demiclosedness(ScenarioConfig::from_json(doc, "identity"));
  CHECK(report.verdict == "pass");
  CHECK(report.hypothesis_weak);
  CHECK(report.hypothesis_residual);
  CHECK(report.conclusion_linf == 0.0);
  CHECK(report.limit_source == "plateau");
  CHECK(report.plateau_reached);
  CHECK(report.structural_ok);
}

TEST_CASE("run_demiclosedness: contraction via Mann iterates") {
  const DemiclosednessReport report = run_demiclosedness(
      ScenarioConfig::from_json(basic_scenario_json(), "contraction"));
  CHECK(report.verdict == "pass");
  CHECK(report.limit_source == "fixed-point");
  CHECK(report.conclusion_linf <= 1e-6);
  CHECK(report.structural_ok);
  CHECK(report.partition_pieces >= 1);
  CHECK(report.lipschitz_violations == 0);
  CHECK(report.recomposition_ok);
}

TEST_CASE("run_demiclosedness: broken residual hypothesis is vacuous") {
  nlohmann::json doc = basic_scenario_json();
  doc["name"] = "alternating";
  doc["sequence"] = {{"generator", "prescribed"},
                     {"kind", "alternating"},
                     {"first", {{0.9, 0.0}, {0.9, 0.0}, {0.9, 0.0}}},
                     {"second", {{-0.9, 0.0}, {-0.9, 0.0}, {-0.9, 0.0}}},
                     {"steps", 60}};
  const DemiclosednessReport report =
      run_demiclosedness(ScenarioConfig::from_json(doc, "alternating"));
  CHECK(report.verdict == "hypotheses-not-met");
  CHECK_FALSE(report.hypothesis_residual);
}

TEST_CASE("run_demiclosedness: schedule kinds") {
  SUBCASE("an explicit schedule list drives the iteration") {
    nlohmann::json doc = basic_scenario_json();
    doc["name"] = "list-schedule";
    doc["sequence"]["steps"] = 120;
    std::vector<double> values(120, 0.5);
    doc["sequence"]["schedule"] = {{"kind", "list"}, {"values", values}};
    const DemiclosednessReport report =
        run_demiclosedness(ScenarioConfig::from_json(doc, "list-schedule"));
    CHECK(report.verdict == "pass");
  }

  SUBCASE("harmonic mixing converges too slowly for the default tail gates") {
    nlohmann::json doc = basic_scenario_json();
    doc["name"] = "harmonic";
    doc["sequence"]["steps"] = 300;
    doc["sequence"]["schedule"] = {{"kind", "harmonic"}, {"c0", 1.0}};
    const DemiclosednessReport report =
        run_demiclosedness(ScenarioConfig::from_json(doc, "harmonic"));
    CHECK(report.verdict == "hypotheses-not-met");  // vacuous, not a violation
  }
}

TEST_CASE("run_demiclosedness: prescribed sequences must stay in the body") {
  nlohmann::json doc = basic_scenario_json();
  doc["sequence"] = {{"generator", "prescribed"},
                     {"kind", "geometric"},
                     {"limit", "center"},
                     {"direction", {{5.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}},
                     {"ratio", 0.9},
                     {"steps", 40}};
  const DemiclosednessReport report =
      run_demiclosedness(ScenarioConfig::from_json(doc, "escape"));
  CHECK(report.verdict == "generator-error");
  CHECK_FALSE(report.generator_ok);
}

TEST_CASE("run_demiclosedness: reports are deterministic") {
  const ScenarioConfig config =
      ScenarioConfig::from_json(basic_scenario_json(), "det");
  const std::string a = run_demiclosedness(config).to_json().dump(2);
  const std::string b = run_demiclosedness(config).to_json().dump(2);
  CHECK(a == b);
}

TEST_CASE("run_suite") {
  SUBCASE("empty directory is an empty pass") {
    TempDir dir("empty");
    TempDir reports("empty-reports");
    const SuiteResult result =
        run_suite(dir.path.string(), reports.path.string(), {});
    CHECK(result.rows.empty());
    CHECK(result.exit_code() == 0);
    CHECK(fs::exists(reports.path / "summary.json"));
  }

  SUBCASE("one passing scenario") {
    TempDir dir("one");
    TempDir reports("one-reports");
    std::ofstream(dir.path / "contraction.json")
        << basic_scenario_json().dump(2);
    const SuiteResult result =
        run_suite(dir.path.string(), reports.path.string(), {});
    REQUIRE(result.rows.size() == 1);
    CHECK(result.passes == 1);
    CHECK(result.exit_code() == 0);
    CHECK(fs::exists(reports.path / "contraction.report.json"));
  }

  SUBCASE("a malformed file is recorded and flips the exit code") {
    TempDir dir("bad");
    TempDir reports("bad-reports");
    std::ofstream(dir.path / "broken.json") << "{ not json";
    std::ofstream(dir.path / "ok.json") << basic_scenario_json().dump(2);
    const SuiteResult result =
        run_suite(dir.path.string(), reports.path.string(), {});
    REQUIRE(result.rows.size() == 2);
    CHECK(result.errors == 1);
    CHECK(result.passes == 1);
    CHECK(result.exit_code() == 1);
  }

  SUBCASE("csv summaries carry the row columns") {
    TempDir dir("csv");
    TempDir reports("csv-reports");
    std::ofstream(dir.path / "contraction.json")
        << basic_scenario_json().dump(2);
    const SuiteResult result =
        run_suite(dir.path.string(), reports.path.string(), {}, "csv");
    CHECK(result.exit_code() == 0);
    const std::string csv = slurp(reports.path / "summary.csv");
    CHECK(csv.find("name,hypotheses,conclusion_residual,verdict,wall_time_ms") !=
          std::string::npos);
    CHECK(csv.find("contraction-ball") != std::string::npos);
  }

  SUBCASE("same seed gives byte-identical reports") {
    TempDir dir("det");
    TempDir lhs("det-a");
    TempDir rhs("det-b");
    std::ofstream(dir.path / "contraction.json")
        << basic_scenario_json().dump(2);
    RunOverrides overrides;
    overrides.seed = 424242;
    run_suite(dir.path.string(), lhs.path.string(), overrides);
    run_suite(dir.path.string(), rhs.path.string(), overrides);
    CHECK(slurp(lhs.path / "contraction.report.json") ==
          slurp(rhs.path / "contraction.report.json"));
    CHECK_FALSE(slurp(lhs.path / "contraction.report.json").empty());
  }
}

TEST_CASE("selftest corpus runs clean") {
  std::ostringstream sink;
  CHECK(run_selftest(sink, 2024) == 0);
  CHECK(sink.str().find("[fail]") == std::string::npos);
}
