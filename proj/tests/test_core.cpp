#include "exi/core.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& text) {
    static int counter = 0;
    path = (std::filesystem::temp_directory_path() /
            ("exi_core_test_" + std::to_string(counter++) + ".csv"))
               .string();
    std::ofstream out(path);
    out << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

std::string error_of(const std::string& text, const exi::ColumnSpec& col = {}) {
  TempFile f(text);
  try {
    exi::load_csv(f.path, col);
  } catch (const exi::DataError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("load_csv reads a plain single column") {
  TempFile f("1.5\n2.5\n\n3.5\n");
  const auto x = exi::load_csv(f.path);
  REQUIRE(x.size() == 3);
  CHECK(x[0] == 1.5);
  CHECK(x[2] == 3.5);
}

TEST_CASE("load_csv skips comment lines and detects headers") {
  TempFile f("# generated fixture\ndate,close\n2020-01-01,100\n2020-01-02,101\n");
  const auto by_name = exi::load_csv(f.path, {.index = 0, .name = "close"});
  REQUIRE(by_name.size() == 2);
  CHECK(by_name[1] == 101);

  // By index: the unparsable first row is treated as a header.
  const auto by_index = exi::load_csv(f.path, {.index = 1, .name = {}});
  REQUIRE(by_index.size() == 2);
  CHECK(by_index[0] == 100);
}

TEST_CASE("load_csv errors carry file coordinates") {
  const auto msg = error_of("close\n100\nabc\n", {.name = "close"});
  CHECK(msg.find("line 3") != std::string::npos);

  const auto missing = error_of("a,b\n1,2\n", {.name = "c"});
  CHECK(missing.find("'c'") != std::string::npos);

  // Parseable-but-not-finite text is data corruption, not a number.
  CHECK(error_of("1\nnan\n") != "");
  CHECK(error_of("1\ninf\n") != "");
  CHECK(error_of("") != "");  // no data rows

  const auto short_row = error_of("1,2\n3\n", {.index = 1, .name = {}});
  CHECK(short_row.find("line") != std::string::npos);
}

TEST_CASE("load_csv by-name requires a header row") {
  CHECK(error_of("1\n2\n", {.name = "x"}) != "");
}

TEST_CASE("write_csv then load_csv round-trips exactly") {
  exi::Series x(3);
  x << 0.1, 12345.6789, 1e-300;
  TempFile f("");
  exi::write_csv(f.path, x, "value", "fixture");
  const auto back = exi::load_csv(f.path, {.name = "value"});
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(back[i] == x[i]);
}

TEST_CASE("log_returns computes log price ratios") {
  exi::Series x(3);
  x << 1.0, std::exp(1.0), std::exp(3.0);
  const auto r = exi::log_returns(x);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-14));

  exi::Series bad(2);
  bad << 1.0, -1.0;
  CHECK_THROWS_AS(exi::log_returns(bad), exi::DataError);
  CHECK_THROWS_AS(exi::log_returns(exi::Series(1)), exi::DataError);
}

TEST_CASE("extract_tail keeps one tail, clamped or dropped") {
  exi::Series x(4);
  x << -1.0, 2.0, -3.0, 4.0;

  const auto up = exi::extract_tail(x, exi::TailSide::upper, exi::TailMode::clamp);
  REQUIRE(up.size() == 4);
  CHECK(up[0] == 0.0);
  CHECK(up[1] == 2.0);
  CHECK(up[3] == 4.0);

  const auto up_drop =
      exi::extract_tail(x, exi::TailSide::upper, exi::TailMode::drop);
  REQUIRE(up_drop.size() == 2);
  CHECK(up_drop[0] == 2.0);
  CHECK(up_drop[1] == 4.0);

  // Lower tail: losses become positive magnitudes.
  const auto lo = exi::extract_tail(x, exi::TailSide::lower, exi::TailMode::drop);
  REQUIRE(lo.size() == 2);
  CHECK(lo[0] == 1.0);
  CHECK(lo[1] == 3.0);
}

TEST_CASE("num_str is a shortest round-trip rendering") {
  CHECK(exi::num_str(0.5) == "0.5");
  CHECK(exi::num_str(-3.0) == "-3");
  CHECK(std::stod(exi::num_str(0.1)) == 0.1);
  CHECK(std::stod(exi::num_str(1.0 / 3.0)) == 1.0 / 3.0);
}
