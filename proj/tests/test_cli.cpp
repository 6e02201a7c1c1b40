#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "rr/cli.hpp"
#include "rr/kb.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result rr_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = rr::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("rr_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(rr_run({}).code, rr::cli::kUsage);
  EXPECT_EQ(rr_run({"bogus"}).code, rr::cli::kUsage);
  EXPECT_EQ(rr_run({"run", "--task", "T1"}).code, rr::cli::kUsage);
  EXPECT_EQ(rr_run({"run", "--task", "T12", "--level", "E1"}).code, rr::cli::kUsage);
  EXPECT_EQ(rr_run({"run", "--task", "T1", "--level", "E9"}).code, rr::cli::kUsage);
  EXPECT_EQ(rr_run({"--step-limit", "0", "matrix"}).code, rr::cli::kUsage);
  EXPECT_EQ(rr_run({"--threshold", "0", "matrix"}).code, rr::cli::kUsage);
  EXPECT_EQ(rr_run({"--format", "json", "matrix"}).code, rr::cli::kUsage);
  EXPECT_EQ(rr_run({"redescribe"}).code, rr::cli::kUsage);
  EXPECT_EQ(rr_run({"redescribe", "--phase", "4"}).code, rr::cli::kUsage);
  EXPECT_FALSE(rr_run({"bogus"}).err.empty());
}

TEST(Cli, Help) {
  auto r = rr_run({"--help"});
  EXPECT_EQ(r.code, rr::cli::kOk);
  EXPECT_NE(r.out.find("matrix"), std::string::npos);
}

TEST(Cli, MatrixDiff) {
  auto r = rr_run({"matrix", "--diff"});
  EXPECT_EQ(r.code, rr::cli::kOk) << r.err;
  EXPECT_TRUE(r.err.empty());
  auto tsv = rr_run({"--format", "tsv", "matrix"});
  EXPECT_EQ(tsv.out, rr_run({"matrix", "--format", "tsv"}).out);
  EXPECT_NE(tsv.out.find("E3\tT8\tSolved\n"), std::string::npos);
}

TEST(Cli, MatrixDiffFailsOnIncompleteKb) {
  TempDir dir("partial");
  rr::KnowledgeBase kb;
  kb.add(rr::test::unit_from("e1_counting_apples.rr"));
  rr::save(kb, dir.path);
  auto r = rr_run({"--kb", dir.path.string(), "matrix", "--diff"});
  EXPECT_EQ(r.code, rr::cli::kDiagnostics);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, RunWritesTrace) {
  TempDir dir("trace");
  auto r = rr_run({"run", "--task", "T5", "--level", "E2", "--seed", "0", "--trace-dir", dir.path.string()});
  EXPECT_EQ(r.code, rr::cli::kOk) << r.err;
  EXPECT_NE(r.out.find("Solved"), std::string::npos);
  fs::path trace = dir.path / "T5_E2_0.tsv";
  EXPECT_NE(r.out.find("trace: " + trace.string()), std::string::npos);
  std::string text = slurp(trace);
  std::size_t took = 0;
  for (std::size_t at = text.find("\tTookAway\t"); at != std::string::npos; at = text.find("\tTookAway\t", at + 1)) ++took;
  EXPECT_EQ(took, 5u);
}

TEST(Cli, RunReportsFailureReason) {
  TempDir dir("short");
  auto r = rr_run({"--format", "tsv", "run", "--task", "T5", "--level", "E2", "--size", "4", "--trace-dir",
                   dir.path.string()});
  EXPECT_EQ(r.code, rr::cli::kOk);
  EXPECT_EQ(r.out.rfind("T5\tE2\t0\tFailed\t", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("Error"), std::string::npos);
}

TEST(Cli, TraceMatchesRun) {
  auto a = rr_run({"trace", "--task", "T3", "--level", "E1", "--seed", "2"});
  auto b = rr_run({"trace", "--task", "T3", "--level", "E1", "--seed", "2"});
  EXPECT_EQ(a.code, rr::cli::kOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\tPointedTo\t"), std::string::npos);
}

TEST(Cli, ParseCanonicalizes) {
  auto r = rr_run({"parse", rr::test::fixture_path("e3_counting.rr")});
  EXPECT_EQ(r.code, rr::cli::kOk) << r.err;
  EXPECT_EQ(r.out, rr::test::read_fixture("e3_counting.rr"));
}

TEST(Cli, ParseReportsDiagnostics) {
  TempDir dir("bad");
  std::ofstream(dir.path / "syntax.rr") << "class A {\nprivate:\n    int n\n}\n";
  auto syntax = rr_run({"parse", (dir.path / "syntax.rr").string()});
  EXPECT_EQ(syntax.code, rr::cli::kDiagnostics);
  EXPECT_NE(syntax.err.find("syntax.rr"), std::string::npos);
  std::ofstream(dir.path / "level.rr") << "@level(E3)\n@domain(x)\nclass A {\nprivate:\n    int n;\n}\n";
  auto level = rr_run({"parse", (dir.path / "level.rr").string()});
  EXPECT_EQ(level.code, rr::cli::kDiagnostics);
  EXPECT_NE(level.err.find("LevelDiscipline"), std::string::npos);
  EXPECT_EQ(rr_run({"parse", (dir.path / "missing.rr").string()}).code, rr::cli::kIo);
}

TEST(Cli, Verbalize) {
  auto ok = rr_run({"verbalize", "Set"});
  EXPECT_EQ(ok.code, rr::cli::kOk);
  EXPECT_NE(ok.out.find("cardinal sum"), std::string::npos);
  auto low = rr_run({"verbalize", "CountingApples"});
  EXPECT_EQ(low.code, rr::cli::kDiagnostics);
  EXPECT_NE(low.err.find("NotE3"), std::string::npos);
  EXPECT_EQ(rr_run({"verbalize", "Nobody"}).code, rr::cli::kDiagnostics);
}

TEST(Cli, KbFromEnvironment) {
  ::setenv("RR_KB", "/nonexistent/rr", 1);
  auto r = rr_run({"matrix"});
  ::unsetenv("RR_KB");
  EXPECT_EQ(r.code, rr::cli::kIo);
  EXPECT_EQ(rr_run({"--kb", "/nonexistent/rr", "matrix"}).code, rr::cli::kIo);
}

TEST(Cli, RedescribeAutoFromInstance) {
  TempDir src("src"), out("out");
  rr::KnowledgeBase kb;
  kb.add(rr::test::unit_from("i_counting_apples.rr"));
  rr::save(kb, src.path);
  auto r = rr_run({"--kb", src.path.string(), "redescribe", "--auto", "--demo", "2", "--out", out.path.string()});
  EXPECT_EQ(r.code, rr::cli::kOk) << r.err;
  EXPECT_NE(r.out.find("phase\tP1"), std::string::npos);
  EXPECT_NE(r.out.find("phase\tP3"), std::string::npos);
  auto matrix = rr_run({"--kb", out.path.string(), "matrix", "--diff"});
  EXPECT_EQ(matrix.code, rr::cli::kOk) << matrix.err;
}

TEST(Cli, RedescribeSinglePhase) {
  TempDir src("phase");
  rr::KnowledgeBase kb;
  kb.add(rr::test::unit_from("e1_counting_apples.rr"));
  rr::save(kb, src.path);
  auto r = rr_run({"--kb", src.path.string(), "redescribe", "--phase", "2", "--report"});
  EXPECT_EQ(r.code, rr::cli::kOk) << r.err;
  EXPECT_EQ(r.out.substr(0, rr::test::read_fixture("e2_counting.rr").size()), rr::test::read_fixture("e2_counting.rr"));
  EXPECT_NE(r.out.find("phase\tP2"), std::string::npos);
  auto bad = rr_run({"--kb", src.path.string(), "redescribe", "--phase", "3"});
  EXPECT_EQ(bad.code, rr::cli::kDiagnostics);
  auto p1 = rr_run({"--kb", src.path.string(), "redescribe", "--phase", "1"});
  EXPECT_EQ(p1.code, rr::cli::kDiagnostics);
}
