#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {
std::string bin() {
  const char* b = std::getenv("LOWSTRETCH_BIN");
  REQUIRE(b != nullptr);
  return b;
}

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = bin() + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
  int st = pclose(p);
  return {WEXITSTATUS(st), out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("gen is deterministic and embeds its config") {
  Run a = run("gen --gen er:100,300 --seed 7");
  Run b = run("gen --gen er:100,300 --seed 7");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# lowstretch gen") != std::string::npos);
  CHECK(a.out.find("# seed 7") != std::string::npos);
}

TEST_CASE("tree then verify round trip") {
  std::string tf = "cli_test_tree.tmp";
  Run t = run("tree --gen grid:16x16 --p 0.5 --seed 1 --out " + tf);
  CHECK(t.code == 0);
  Run v = run("verify --gen grid:16x16 --seed 1 --tree " + tf);
  CHECK(v.code == 0);
  CHECK(v.out.find("ok 1") != std::string::npos);

  // tamper with the certificate: blow up one allocation weight
  std::string content = slurp(tf);
  size_t pos = content.find("cert ");
  REQUIRE(pos != std::string::npos);
  size_t colon = content.find(':', pos);
  REQUIRE(colon != std::string::npos);
  size_t end = content.find_first_of(" \n", colon + 1);
  double w = std::stod(content.substr(colon + 1, end - colon - 1));
  std::ostringstream repl;
  repl.precision(17);
  repl << w * 1e6;
  content = content.substr(0, colon + 1) + repl.str() + content.substr(end);
  std::ofstream(tf) << content;
  Run bad = run("verify --gen grid:16x16 --seed 1 --tree " + tf);
  CHECK(bad.code == 1);
  std::remove(tf.c_str());
}

TEST_CASE("decompose and stretch subcommands run") {
  CHECK(run("decompose --gen grid:8x8 --method simple --seed 3").code == 0);
  CHECK(run("decompose --gen grid:8x8 --method two-stage --seed 3").code == 0);
  std::string tf = "cli_test_tree2.tmp";
  REQUIRE(run("tree --gen cycle:64 --seed 5 --out " + tf).code == 0);
  Run s = run("stretch --gen cycle:64 --seed 5 --tree " + tf);
  CHECK(s.code == 0);
  CHECK(s.out.find("graph,n,m,p,seed,metric,value") != std::string::npos);
  CHECK(s.out.find("mean_lp_stretch") != std::string::npos);
  Run l = run("laplacian-check --gen cycle:64 --seed 5 --tree " + tf);
  CHECK(l.code == 0);
  CHECK(l.out.find("pass 1") != std::string::npos);
  std::remove(tf.c_str());
}

TEST_CASE("bench CSV is byte-identical across reruns") {
  Run a = run("bench --suite stretch-scaling --seeds 2 --seed 11");
  Run b = run("bench --suite stretch-scaling --seeds 2 --seed 11");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("graph,n,m,p,seed,metric,value") != std::string::npos);
  // one mean_lp_stretch row per (instance, seed)
  int rows = 0;
  size_t pos = 0;
  while ((pos = a.out.find("mean_lp_stretch", pos)) != std::string::npos) {
    ++rows;
    ++pos;
  }
  CHECK(rows == 6);  // 3 sizes x 2 seeds
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("no-such-command").code == 2);
  CHECK(run("tree").code == 2);                      // no input source
  CHECK(run("decompose --gen grid:4x4 --method nope").code == 2);
}
