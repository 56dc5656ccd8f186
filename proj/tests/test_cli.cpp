#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("guesswork-cli-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  REQUIRE(f.good());
  f << content;
}

std::string read_file(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run(const std::vector<std::string>& args) { return guesswork::cli::run_cli(args); }

std::string golden(const std::string& name) {
  return read_file(std::string(GOLDEN_DIR) + "/" + name);
}

const char* kIid442 = "type = iid\nprobs = 0.4, 0.4, 0.2\n";
const char* kGolden = "type = markov\ntransition = 0.6, 0.4, 0.9, 0.1\n";
const char* kUni2 = "type = iid\nprobs = 0.5 0.5\n";
const char* kUni3 =
    "type = iid\nprobs = 0.3333333333333333 0.3333333333333333 0.3333333333333333\n";
const char* kCounter = "type = counterexample\nm = 2\nk = 8\neps = 0.1\n";
const char* kBad = "type = iid\nprobs = 0.5, 0.6\n";

}  // namespace

TEST_CASE("golden outputs stay byte identical") {
  TempDir tmp;
  write_file(tmp.file("iid442.src"), kIid442);
  write_file(tmp.file("golden.src"), kGolden);
  write_file(tmp.file("uni2.src"), kUni2);
  write_file(tmp.file("uni3.src"), kUni3);

  SUBCASE("scgf") {
    std::string out = tmp.file("o.csv");
    REQUIRE(run({"scgf", "--source", tmp.file("iid442.src"), "--alpha", "-0.5:2:6",
                 "--out", out}) == 0);
    CHECK(read_file(out) == golden("scgf_iid442.csv"));
  }
  SUBCASE("exact") {
    std::string out = tmp.file("o.csv");
    REQUIRE(run({"exact", "--source", tmp.file("golden.src"), "--k", "4", "--out", out}) == 0);
    CHECK(read_file(out) == golden("exact_golden_k4.csv"));
  }
  SUBCASE("rate") {
    std::string out = tmp.file("o.csv");
    REQUIRE(run({"rate", "--source", tmp.file("uni3.src"), "--out", out}) == 0);
    CHECK(read_file(out) == golden("rate_uni3.csv"));
  }
  SUBCASE("compare") {
    std::string out = tmp.file("o.csv");
    REQUIRE(run({"compare", "--source", tmp.file("uni2.src"), "--k", "4,8", "--ranks",
                 "1,2,16", "--out", out}) == 0);
    CHECK(read_file(out) == golden("compare_uni2.csv"));
  }
}

TEST_CASE("repeated runs emit identical bytes") {
  TempDir tmp;
  write_file(tmp.file("iid442.src"), kIid442);
  write_file(tmp.file("golden.src"), kGolden);

  std::string a = tmp.file("a.csv"), b = tmp.file("b.csv");
  REQUIRE(run({"scgf", "--source", tmp.file("golden.src"), "--out", a}) == 0);
  REQUIRE(run({"scgf", "--source", tmp.file("golden.src"), "--out", b}) == 0);
  CHECK(read_file(a) == read_file(b));

  REQUIRE(run({"compare", "--source", tmp.file("iid442.src"), "--out", a}) == 0);
  REQUIRE(run({"compare", "--source", tmp.file("iid442.src"), "--out", b}) == 0);
  CHECK(read_file(a) == read_file(b));
}

TEST_CASE("bits divide log outputs by log 2") {
  TempDir tmp;
  write_file(tmp.file("uni2.src"), kUni2);
  std::string out = tmp.file("o.csv");
  REQUIRE(run({"scgf", "--source", tmp.file("uni2.src"), "--unit", "bits", "--alpha",
               "0.5:2:4", "--out", out}) == 0);
  std::string text = read_file(out);
  CHECK(text.find("# unit = bits\n") != std::string::npos);
  CHECK(text.find("# gamma = -1\n") != std::string::npos);
  CHECK(text.find("# support_rate = 1\n") != std::string::npos);
  CHECK(text.find("\n1,1,1\n") != std::string::npos);
}

TEST_CASE("exact on the fixed-length source reports the single near-tie") {
  TempDir tmp;
  write_file(tmp.file("ce.src"), kCounter);
  std::string out = tmp.file("o.csv");
  REQUIRE(run({"exact", "--source", tmp.file("ce.src"), "--k", "8", "--out", out}) == 0);
  std::string text = read_file(out);
  CHECK(text.find("# empirical_turn_count = 1\n") != std::string::npos);
  CHECK(text.find("# ranks_exact = true\n") != std::string::npos);
  // the source file pins the word length; any other k is a contradiction
  CHECK(run({"exact", "--source", tmp.file("ce.src"), "--k", "5", "--out", out}) == 2);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  write_file(tmp.file("iid442.src"), kIid442);
  write_file(tmp.file("golden.src"), kGolden);
  write_file(tmp.file("uni2.src"), kUni2);
  write_file(tmp.file("ce.src"), kCounter);
  write_file(tmp.file("bad.src"), kBad);
  std::string out = tmp.file("o.csv");

  SUBCASE("validate reports and signals violations") {
    REQUIRE(run({"validate", "--source", tmp.file("bad.src"), "--out", out}) == 2);
    std::string text = read_file(out);
    CHECK(text.find("# violations = ") != std::string::npos);
    CHECK(text.find("letter") != std::string::npos);
    REQUIRE(run({"validate", "--source", tmp.file("iid442.src"), "--out", out}) == 0);
    CHECK(read_file(out).find("# violations = 0\n") != std::string::npos);
  }
  SUBCASE("spec errors exit 2") {
    CHECK(run({"scgf", "--source", tmp.file("missing.src"), "--out", out}) == 2);
    CHECK(run({"scgf", "--source", tmp.file("ce.src"), "--out", out}) == 2);
    CHECK(run({"scgf", "--source", tmp.file("bad.src"), "--out", out}) == 2);
    CHECK(run({"scgf", "--source", tmp.file("iid442.src"), "--alpha", "-1.5:2:5",
               "--out", out}) == 2);
    CHECK(run({"scgf", "--source", tmp.file("iid442.src"), "--alpha", "1:2",
               "--out", out}) == 2);
    CHECK(run({"rate", "--source", tmp.file("uni2.src"), "--x", "0:1:5",
               "--out", out}) == 2);
    CHECK(run({"compare", "--source", tmp.file("uni2.src"), "--k", "4", "--ranks", "17",
               "--out", out}) == 2);
    CHECK(run({"exact", "--source", tmp.file("iid442.src"), "--k", "3,4",
               "--out", out}) == 2);
  }
  SUBCASE("usage errors exit 2") {
    CHECK(run({"scgf", "--source", tmp.file("iid442.src"), "--bogus"}) == 2);
    CHECK(run({"scgf"}) == 2);
    CHECK(run({}) == 2);
    CHECK(run({"scgf", "--source", tmp.file("iid442.src"), "--unit", "trits"}) == 2);
    CHECK(run({"--help"}) == 0);
  }
  SUBCASE("enumeration caps exit 4") {
    CHECK(run({"exact", "--source", tmp.file("golden.src"), "--k", "24",
               "--out", out}) == 4);
    CHECK(run({"exact", "--source", tmp.file("golden.src"), "--k", "21", "--cap",
               "2200000", "--out", out}) == 0);
  }
}
