#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "goldman/config.hpp"

using namespace goldman;

TEST_CASE("defaults validate") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.mode == CocycleMode::Solved);
  CHECK(cfg.max_len == 8);
}

TEST_CASE("key = value grammar") {
  const auto cfg = parse_config_text(
      "# comment\n"
      "mode = coboundary   # trailing comment\n"
      "\n"
      "coboundary = 1.5, -2\n"
      "max_len=5\n"
      "zoom = -1,0,1,0.5\n"
      "chart = ray\n");
  CHECK(cfg.mode == CocycleMode::Coboundary);
  CHECK(cfg.coboundary_x == 1.5);
  CHECK(cfg.coboundary_y == -2);
  CHECK(cfg.max_len == 5);
  REQUIRE(cfg.zoom);
  CHECK(cfg.zoom->y1 == 0.5);
  CHECK(cfg.chart == Chart::Ray);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse_config_text("colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("max_len\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("max_len = eight\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("mode = random\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("zoom = 1,1,0,0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("twist = big\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("max_len = 11\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config_text("genus = 3\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config_text("mode = file\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config_json("[1, 2]"), ConfigError);
}

TEST_CASE("JSON is equivalent to text") {
  const auto text = parse_config_text("mode = zero\nseed = 7\namplitude = 0.25\ncoboundary = 1,2\nzoom = 0,0,1,1\n");
  const auto json = parse_config_json(
      R"({"mode": "zero", "seed": 7, "amplitude": 0.25, "coboundary": [1, 2], "zoom": "0,0,1,1"})");
  CHECK(text.echo() == json.echo());
}

TEST_CASE("echo round trips and leaves out execution settings") {
  RunConfig cfg;
  cfg.set("amplitude", "0.3");
  cfg.set("twist", "boundary");
  cfg.set("zoom", "0.1,0.2,0.3,0.4");
  cfg.set("threads", "4");
  cfg.set("out", "somewhere");
  const auto text = cfg.echo_text();
  CHECK(text.find("threads") == std::string::npos);
  CHECK(text.find("out =") == std::string::npos);
  CHECK(text.find("amplitude = 0.3\n") != std::string::npos);
  const auto back = parse_config_text(text);
  CHECK(back.echo() == cfg.echo());
  RunConfig other = cfg;
  other.threads = 1;
  CHECK(other.echo() == cfg.echo());
}

TEST_CASE("load_config dispatches on content") {
  const std::string path = "test_config_tmp.json";
  {
    std::ofstream out(path);
    out << "  {\"max_len\": 4}";
  }
  CHECK(load_config(path).max_len == 4);
  {
    std::ofstream out(path);
    out << "max_len = 3\n";
  }
  CHECK(load_config(path).max_len == 3);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("does/not/exist.cfg"), ConfigError);
}
