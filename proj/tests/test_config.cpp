#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fio/config.hpp"

using namespace fio;
using nlohmann::json;

TEST_CASE("empty document gives the documented defaults") {
  const LabConfig c = parse_config(json::object());
  CHECK(c.n == 2);
  CHECK(c.grids == std::vector<int>{64});
  CHECK(c.seed == 42);
  CHECK(c.sphere_nodes == 256);
  CHECK(c.smoothing_bump.plateau == doctest::Approx(1.0 / 128));
  CHECK(c.three_lines.tolerance == 0.10);
  CHECK(c.three_lines.restarts == 64);
  CHECK(c.three_lines.t_samples.size() == 11);
  CHECK(c.ensemble.kmax == 16);
}

TEST_CASE("ensemble kmax default shrinks with the smallest grid") {
  const LabConfig c = parse_config({{"grid", {{"n", 2}, {"N", 8}}}});
  CHECK(c.grids == std::vector<int>{8});
  CHECK(c.ensemble.kmax == 2);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(parse_config({{"seeed", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"grid", {{"n", 2}, {"M", 8}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"three_lines", {{"lacunary", {{"r", 1.0}, {"K", 3}}}}}}), ConfigError);
  try {
    parse_config({{"sandwich", {{"shells", 3}}}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("sandwich.shells") != std::string::npos);
  }
}

TEST_CASE("type and range errors") {
  CHECK_THROWS_AS(parse_config({{"seed", "42"}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"grid", {{"N", 12}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"grid", {{"n", 4}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 2}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"three_lines", {{"symbol", "spiky"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"bump", {{"plateau", 1.0}, {"support", 0.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("to_json round trips") {
  const json doc = {{"experiment", "bound-sweep"},
                    {"grid", {{"n", 2}, {"refine", {64, 128}}}},
                    {"seed", 7},
                    {"ensemble", {{"count", 3}, {"kmax", 8}}},
                    {"bound_sweep", {{"p", {1.5, 3.0}}, {"symbols", {"identity", "flat-of-b"}}}},
                    {"three_lines", {{"eps", 0.02}}}};
  const LabConfig c = parse_config(doc);
  const json once = to_json(c);
  const json twice = to_json(parse_config(once));
  CHECK(once == twice);
  CHECK(once["seed"] == 7);
  CHECK(once["grid"]["refine"] == json({64, 128}));
  CHECK(once["three_lines"]["eps"] == 0.02);
  CHECK(once["schema_version"] == kConfigSchemaVersion);
}

TEST_CASE("shipped configurations load") {
  for (const char* name : {"default", "sandwich", "three_lines_n8", "three_lines_n16", "bound_sweep", "pipeline",
                           "embedding"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_config(std::string(FIO_CONFIG_DIR) + "/" + name + ".json"));
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("malformed JSON file") {
  const std::string path = (std::filesystem::temp_directory_path() / "fio_test_config_bad.json").string();
  std::ofstream(path) << "{\"seed\": ";
  CHECK_THROWS_AS(load_config(path), ConfigError);
}
