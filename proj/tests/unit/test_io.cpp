#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "metric_repair/instances.hpp"
#include "metric_repair/io.hpp"

using namespace metric_repair;
namespace fs = std::filesystem;

namespace {

int parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    io::read_matrix(in, "m.csv");
  } catch (const io::ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("matrix round-trip is bit-exact") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const DistanceMatrix d = gen_random(InstanceKind::exponential, 9, 0.37, seed);
      std::ostringstream out;
      io::write_matrix(out, d);
      std::istringstream in(out.str());
      CHECK(io::read_matrix(in) == d);
    }
  }

  TEST_CASE("matrix text") {
    std::ostringstream out;
    io::write_matrix(out, DistanceMatrix::from_upper(3, {7, 1, 0.1}));
    CHECK(out.str() == "0,7,1\n7,0,0.10000000000000001\n1,0.10000000000000001,0\n");
  }

  TEST_CASE("matrix errors carry line numbers") {
    CHECK(parse_error_line("0,1\n1,x\n") == 2);
    CHECK(parse_error_line("0,1,2\n1,0,3\n2,3\n") == 3);
    CHECK(parse_error_line("0,1\n2,0\n") == 1);
    CHECK(parse_error_line("0,1\n\n1,1\n") == 3);
    CHECK(parse_error_line("0,-1\n-1,0\n") == 1);
    CHECK(parse_error_line("") == 0);
    CHECK(parse_error_line("0,inf\ninf,0\n") == 1);

    std::istringstream in("0,1\n1,x\n");
    try {
      io::read_matrix(in, "bad.csv");
      FAIL("expected ParseError");
    } catch (const io::ParseError& e) {
      CHECK(std::string(e.what()).rfind("bad.csv:2:", 0) == 0);
    }
  }

  TEST_CASE("whitespace, CRLF and blank lines are tolerated") {
    std::istringstream in("0, 2\r\n\n2 ,0\r\n");
    const DistanceMatrix d = io::read_matrix(in);
    CHECK(d.size() == 2);
    CHECK(d(0, 1) == 2.0);
  }

  TEST_CASE("perturbation round-trip and format") {
    Perturbation p(4);
    p.set(0, 1, -4.0);
    p.set(2, 3, 0.1);
    std::ostringstream out;
    io::write_perturbation(out, p);
    CHECK(out.str() == "i,j,value\n1,2,-4\n3,4,0.10000000000000001\n");
    std::istringstream in(out.str());
    CHECK(io::read_perturbation(in, 4) == p);

    std::ostringstream empty;
    io::write_perturbation(empty, Perturbation(3));
    CHECK(empty.str() == "i,j,value\n");
  }

  TEST_CASE("perturbation errors") {
    auto fails = [](const std::string& text, int n) {
      std::istringstream in(text);
      CHECK_THROWS_AS(io::read_perturbation(in, n), io::ParseError);
    };
    fails("1,2,3\n", 3);                      // no header
    fails("i,j,value\n2,1,3\n", 3);           // i > j
    fails("i,j,value\n1,4,3\n", 3);           // out of range
    fails("i,j,value\n1,2,3\n1,2,4\n", 3);    // duplicate
    fails("i,j,value\n1,2\n", 3);             // short row
    fails("i,j,value\n1,2,abc\n", 3);         // bad value
    fails("", 3);
  }

  TEST_CASE("oracle files") {
    OracleMask q(4);
    q.mark(0, 2);
    q.mark(1, 3);
    std::ostringstream out;
    io::write_oracle(out, q);
    CHECK(out.str() == "i,j,value\n1,3,1\n2,4,1\n");
    std::istringstream in(out.str() + "1,2,0\n");
    CHECK(io::read_oracle(in, 4) == q);
    std::istringstream bad("i,j,value\n1,2,0.5\n");
    CHECK_THROWS_AS(io::read_oracle(bad, 4), io::ParseError);
  }

  TEST_CASE("file wrappers") {
    const fs::path dir = fs::temp_directory_path() / "metric_repair_io_test";
    fs::create_directories(dir);
    const DistanceMatrix d = gen_random(InstanceKind::uniform, 6, 1.0, 2);
    io::save_matrix(dir / "m.csv", d);
    CHECK(io::load_matrix(dir / "m.csv") == d);
    try {
      io::load_matrix(dir / "missing.csv");
      FAIL("expected ParseError");
    } catch (const io::ParseError& e) {
      CHECK(e.line() == 0);
    }
    CHECK_THROWS_AS(io::save_matrix(dir / "no" / "such" / "m.csv", d), std::runtime_error);
    fs::remove_all(dir);
  }
}
