#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scottflat/corpus.hpp"
#include "scottflat/flat.hpp"

using namespace scottflat;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  std::string cmd = std::string(SCOTTFLAT_CLI) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("scottflat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
};

const char* kPath = "size 3; rel E/2 {(0,1),(1,0),(1,2),(2,1)};";

}  // namespace

TEST_F(Cli, ScottPath) {
  CliResult r = run("scott " + write("p3.struct", kPath) + " --n-max 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("E_1 = {{0,2},{1}}"), std::string::npos) << r.out;
}

TEST_F(Cli, ScottEmptyHasOneClass) {
  CliResult r = run("scott " + write("e2.struct", "size 2;") + " --n-max 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("E_1 = {{0,1}}"), std::string::npos) << r.out;
}

TEST_F(Cli, MalformedInputExitsTwo) {
  EXPECT_EQ(run("scott " + write("bad.struct", "size 2; rel E/2 {(0,")).code, 2);
  EXPECT_EQ(run("scott " + (dir / "missing.struct").string()).code, 2);
  EXPECT_EQ(run("scott").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, FlattenAndChecks) {
  std::string e2 = write("e2.struct", "size 2;");
  CliResult sys = run("scott " + e2 + " --n-max 2 --format json");
  ASSERT_EQ(sys.code, 0);
  std::string sys_path = write("sys.json", sys.out);
  std::string flat_path = (dir / "e2.flat").string();
  ASSERT_EQ(run("flatten " + e2 + " " + sys_path + " -o " + flat_path).code, 0);
  FlatStructure b = parse_flat_json(slurp(flat_path));
  EXPECT_EQ(b.universes()[2].size(), 2u);
  CliResult ok = run("checkflat " + flat_path);
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("flat: yes"), std::string::npos);

  int pair = b.universes()[2][1];
  b.elements[pair].proj[projection_slot(2, {0})] = -1;
  CliResult bad = run("checkflat " + write("bad.flat", serialize_flat_json(b)));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("axiom 1b"), std::string::npos) << bad.out;
}

TEST_F(Cli, ReconstructRoundTrip) {
  std::string p3 = write("p3.struct", kPath);
  std::string flat_path = (dir / "p3.flat").string();
  ASSERT_EQ(run("flatten " + p3 + " --n-max 4 -o " + flat_path).code, 0);
  CliResult r = run("reconstruct " + flat_path + " --format json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"closed\": true"), std::string::npos) << r.out;
  EXPECT_EQ(run("reconstruct " + flat_path + " --order sideways").code, 2);
  std::string short_flat = (dir / "short.flat").string();
  ASSERT_EQ(run("flatten " + p3 + " --n-max 3 -o " + short_flat).code, 0);
  EXPECT_EQ(run("reconstruct " + short_flat).code, 1);
}

TEST_F(Cli, HausdorffCyclic) {
  std::string e3 = write("e3.struct", "size 3;");
  FlatStructure full = parse_flat_json(run("flatten " + e3 + " --n-max 2").out);
  TruncatedSystem cyc = orbit_system(3, 2, {{1, 2, 0}});
  std::string flat_path = write("c3.flat", serialize_flat_json(flatten(parse_structure("size 3;"), cyc)));
  CliResult r = run("hausdorff " + flat_path);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("hausdorff: no"), std::string::npos) << r.out;
  CliResult yes = run("hausdorff " + write("full.flat", serialize_flat_json(full)));
  EXPECT_NE(yes.out.find("hausdorff: yes"), std::string::npos) << yes.out;
}

TEST_F(Cli, CodeAndConj) {
  CliResult code = run("code s3 --n-max 3");
  EXPECT_EQ(code.code, 0);
  EXPECT_NE(code.out.find("order 6"), std::string::npos);
  EXPECT_NE(code.out.find("sharp: yes"), std::string::npos);
  CliResult conj = run("conj s3 \"(01)\" \"(12)\"");
  EXPECT_EQ(conj.code, 0);
  EXPECT_NE(conj.out.find("δ=("), std::string::npos) << conj.out;
  EXPECT_NE(run("conj s3 \"(01)\" \"(012)\"").out.find("not conjugate"), std::string::npos);
  EXPECT_EQ(run("conj \"(012)\" \"(01)\" \"(12)\"").code, 2);
}

TEST_F(Cli, FsExample) {
  CliResult r = run("fs " + write("k2.graph", "2; (0,1);") + " " + write("e2.graph", "2;") + " --p 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "not isomorphic; codes not conjugate; agreement: yes\n");
}

TEST_F(Cli, ThExample) {
  CliResult r = run("th --h 2,3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("exponent 6 divides 6", 0), 0u) << r.out;
  EXPECT_EQ(run("th --h 3,3,3 --guard-size 10").code, 3);
  EXPECT_EQ(run("th --h 2,1").code, 2);
  CliResult q = run("th --h 2,2 --mult 0,0=2");
  EXPECT_EQ(q.code, 0);
  EXPECT_NE(q.out.find("U2"), std::string::npos) << q.out;
}

TEST_F(Cli, CorpusIsDeterministicAndMatchesRecordedHash) {
  CliResult a = run("corpus --seed 0 --out " + (dir / "a").string());
  CliResult b = run("corpus --seed 0 --out " + (dir / "b").string());
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  for (const auto& f : corpus_files(generate_corpus(0))) EXPECT_EQ(slurp(dir / "a" / f.path), slurp(dir / "b" / f.path));
  std::string recorded = slurp(fs::path(SCOTTFLAT_SOURCE_DIR) / "corpus" / "HASH");
  while (!recorded.empty() && std::isspace(static_cast<unsigned char>(recorded.back()))) recorded.pop_back();
  EXPECT_EQ(recorded, hex64(corpus_hash(generate_corpus(0))));
  EXPECT_NE(a.out.find(recorded), std::string::npos);
}
