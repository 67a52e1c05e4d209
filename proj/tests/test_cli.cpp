// End-to-end checks of the command line tool. The binary path is injected
// by the build as EXI_BIN.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  RunResult r;
  FILE* pipe = popen((std::string(EXI_BIN) + " " + args + " 2>/dev/null").c_str(),
                     "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::filesystem::path work_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "exi_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

const std::string& fixture_csv() {
  static const std::string path = [] {
    const auto p = (work_dir() / "armax.csv").string();
    const auto r = run("simulate --family armax --b 0.5 --alpha 1 --n 4096 "
                       "--seed 7 --out " + p);
    REQUIRE(r.status == 0);
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("version and help exit cleanly") {
  CHECK(run("--version").out.rfind("exi ", 0) == 0);
  const auto help = run("--help");
  CHECK(help.status == 0);
  CHECK(help.out.find("estimate") != std::string::npos);
}

TEST_CASE("simulate writes a commented header and plain values") {
  std::ifstream in(fixture_csv());
  std::string first, second;
  std::getline(in, first);
  std::getline(in, second);
  CHECK(first.rfind("# process=armax", 0) == 0);
  CHECK(first.find("theta=0.5") != std::string::npos);
  CHECK(std::stod(second) > 0.0);
  int lines = 1;
  std::string line;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 4096);
}

TEST_CASE("estimate produces the full report with files") {
  const auto out_dir = (work_dir() / "report").string();
  const auto r = run("estimate --input " + fixture_csv() +
                     " --n-out 40 --n-in 2 --seed 3 --out-dir " + out_dir);
  CHECK(r.status == 0);
  for (const char* section :
       {"# section config", "# section alpha", "# section boxplot",
        "# section selection", "# section estimate", "# section ci"})
    CHECK(r.out.find(section) != std::string::npos);
  CHECK(r.out.find("threads") == std::string::npos);  // not part of the echo
  for (const char* name :
       {"spectrum.csv", "theta_samples.csv", "boxplot.csv", "pvalues.csv"})
    CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / name));
}

TEST_CASE("estimate respects a fixed scale range") {
  const auto r = run("estimate --input " + fixture_csv() +
                     " --n-out 20 --seed 3 --scales 4:6");
  CHECK(r.status == 0);
  CHECK(r.out.find("4,6,fixed") != std::string::npos);
}

TEST_CASE("jsonl mode emits one json object per line") {
  const auto r = run("estimate --input " + fixture_csv() +
                     " --n-out 10 --seed 3 --jsonl");
  CHECK(r.status == 0);
  CHECK(r.out.find("{\"") == 0);
  CHECK(r.out.find("\"record\":\"config\"") != std::string::npos);
  CHECK(r.out.find("\"record\":\"estimate\"") != std::string::npos);
  CHECK(r.out.find("# section") == std::string::npos);
}

TEST_CASE("spectrum lists one row per scale") {
  const auto r = run("spectrum --input " + fixture_csv());
  CHECK(r.status == 0);
  CHECK(r.out.find("# section spectrum") != std::string::npos);
  CHECK(r.out.find("\n1,2048,") != std::string::npos);
  CHECK(r.out.find("\n12,1,") != std::string::npos);
}

TEST_CASE("scales reports the p-value table") {
  const auto r = run("scales --input " + fixture_csv() +
                     " --n-out 40 --seed 3 --window 4:7");
  CHECK(r.status == 0);
  CHECK(r.out.find("# section pvalue") != std::string::npos);
  CHECK(r.out.find("# section selection") != std::string::npos);
}

TEST_CASE("competitors sweeps the quantile grid") {
  const auto r = run("competitors --input " + fixture_csv() +
                     " --quantiles 0.95:0.97:0.01 --r 1 3");
  CHECK(r.status == 0);
  CHECK(r.out.find("# section sweep") != std::string::npos);
  CHECK(r.out.find("runs") != std::string::npos);
  CHECK(r.out.find("ferro-segers") != std::string::npos);
}

TEST_CASE("bench runs a study from a json config") {
  const auto cfg = (work_dir() / "study.json").string();
  {
    std::ofstream out(cfg);
    out << R"({"replicates": 3, "n_out": 8, "n_in": 1, "seed": 5,
               "processes": [{"family": "armax", "b": 0.5, "alpha": 1.0,
                              "n": 512}]})";
  }
  const auto out_dir = (work_dir() / "bench_out").string();
  const auto r =
      run("bench --config " + cfg + " --study rmse --out-dir " + out_dir);
  CHECK(r.status == 0);
  CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / "rmse.csv"));
}

TEST_CASE("exit codes distinguish config, data, and estimation failures") {
  CHECK(run("estimate --input /nonexistent.csv").status == 3);
  CHECK(run("estimate --input " + fixture_csv() + " --method ols").status == 2);
  CHECK(run("estimate --input " + fixture_csv() + " --no-such-flag").status == 2);
  CHECK(run("estimate --input " + fixture_csv() +
            " --n-out 10 --scales 1:99").status == 4);
  CHECK(run("estimate --input " + fixture_csv() + " --window junk").status == 2);
  CHECK(run("simulate --family linear --n 100").status == 2);  // needs psi
}

TEST_CASE("identical runs are byte-identical across thread counts") {
  const std::string common = "estimate --input " + fixture_csv() +
                             " --n-out 30 --n-in 2 --seed 11 --threads ";
  const auto a = run(common + "1");
  const auto b = run(common + "8");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
}
