#include <doctest.h>

#include <sstream>

#include "tfe10/cli.hpp"
#include "tfe10/errors.hpp"

using namespace tfe10;
using namespace tfe10::cli;

TEST_CASE("config parsing") {
  const auto d = parse_config("");
  CHECK(d.n == 1.0);
  CHECK(d.points == 4096);
  CHECK(parse_config("# comment\n n = 0.5 \n").n == 0.5);
  CHECK(parse_config("N = 2\nformat = json").N == 2);
  CHECK(parse_config("format = json").format == Format::json);
  CHECK_THROWS_AS(parse_config("foo = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("points = abc"), ConfigError);
  CHECK_THROWS_AS(parse_config("n 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("points = -1").validate(), ConfigError);
}

TEST_CASE("canonical form is stable and sensitive") {
  RunConfig a;
  a.subcommand = "kernel";
  RunConfig b = a;
  CHECK(a.canonical() == b.canonical());
  b.n = 0.5;
  CHECK(a.canonical() != b.canonical());
}

TEST_CASE("kernel subcommand writes a provenance header") {
  RunConfig c;
  c.subcommand = "kernel";
  c.points = 256;
  std::ostringstream out, err;
  CHECK(execute(c, out, err) == 0);
  CHECK(out.str().rfind("# tfe10 ", 0) == 0);
  CHECK(out.str().find("y,F,dF,d2F") != std::string::npos);
}

TEST_CASE("main maps usage errors to exit code 2") {
  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), "tfe10");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return main(static_cast<int>(argv.size()), argv.data());
  };
  CHECK(run({"kernel", "--bogus"}) == 2);
  CHECK(run({"kernel", "--points", "10"}) == 2);
  CHECK(run({"nosuch"}) == 2);
}
