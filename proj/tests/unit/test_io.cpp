#include <doctest.h>

#include "tfe10/io.hpp"

using namespace tfe10;

TEST_CASE("doubles round-trip with 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  const double v = 1.0 / 3.0;
  CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("csv rows and tables") {
  const double row[] = {1.0, 2.5};
  CHECK(io::csv_row(row) == "1,2.5\n");
  CHECK(io::table_csv({"a", "b"}, {{1.0, 2.0}}) == "a,b\n1,2\n");
}

TEST_CASE("fnv1a matches the reference 64-bit values") {
  CHECK(io::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("provenance header names the subcommand and hashes the config") {
  const auto h = io::provenance_header("kernel", "n=1\n");
  CHECK(h.rfind("# tfe10 ", 0) == 0);
  CHECK(h.find("| subcommand kernel |") != std::string::npos);
  CHECK(h != io::provenance_header("kernel", "n=2\n"));
  CHECK(h.back() == '\n');
}
