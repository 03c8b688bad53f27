#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "laud/dataset.hpp"
#include "laud/synth.hpp"
#include "support.hpp"

using namespace laud;

namespace {

struct Outcome {
  int code;
  std::string output;  // stdout and stderr
};

Outcome cli(const std::string& args) {
  const std::string cmd = std::string(LAUD_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  Outcome o{0, {}};
  char buf[4096];
  while (const auto n = std::fread(buf, 1, sizeof buf, pipe)) o.output.append(buf, n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

struct Corpus {
  test::TempDir dir;
  std::string pool, lexicon;
  Corpus() {
    pool = (dir / "pool.jsonl").string();
    lexicon = (dir / "lexicon.tsv").string();
    const auto o = cli("synth --size 1500 --seed 4 --out " + pool + " --lexicon-out " + lexicon);
    REQUIRE(o.code == 0);
  }
  std::string run_args(const std::string& out, int k = 8) const {
    return "run --dataset " + pool + " --lexicon " + lexicon + " --category coffee --k " + std::to_string(k) +
           " --max-iters 2 --n-eval 20 --fixed-clock 0 --out " + out;
  }
};

}  // namespace

TEST_CASE("cli usage errors exit with 2") {
  Corpus c;
  auto o = cli(c.run_args((c.dir / "r").string(), 15));
  CHECK(o.code == 2);
  CHECK(contains(o.output, "k must be even"));
  o = cli("run --out " + (c.dir / "r").string());
  CHECK(o.code == 2);
  CHECK(contains(o.output, "--dataset is required"));
  o = cli("compare " + (c.dir / "r").string());
  CHECK(o.code == 2);
  o = cli("frobnicate");
  CHECK(o.code == 2);
  o = cli(c.run_args((c.dir / "r").string()) + " --oracle maybe");
  CHECK(o.code == 2);
  CHECK(contains(o.output, "unknown oracle"));
}

TEST_CASE("cli data errors exit with 3") {
  test::TempDir dir;
  auto o = cli("run --dataset " + (dir / "missing.jsonl").string() + " --out " + (dir / "r").string());
  CHECK(o.code == 3);
  {
    std::ofstream bad(dir / "bad.jsonl");
    bad << "{\"id\":\"a\",\"text\":\"x\"}\n{oops\n";
  }
  o = cli("run --dataset " + (dir / "bad.jsonl").string() + " --out " + (dir / "r").string());
  CHECK(o.code == 3);
  CHECK(contains(o.output, "line 2"));
}

TEST_CASE("cli oracle failures exit with 4") {
  Corpus c;
  const auto o =
      cli(c.run_args((c.dir / "r").string()) + " --oracle remote:http://127.0.0.1:1/label --config /dev/null");
  // /dev/null is not a config; the data error wins before any request
  CHECK(o.code == 3);
  std::ofstream cfg(c.dir / "cfg.json");
  cfg << R"({"endpoint": {"max_retries": 0, "timeout_ms": 200}})";
  cfg.close();
  const auto p = cli(c.run_args((c.dir / "r2").string()) + " --oracle remote:http://127.0.0.1:1/label --config " +
                     (c.dir / "cfg.json").string());
  CHECK(p.code == 4);
}

TEST_CASE("cli synth output is reproducible") {
  const auto a = cli("synth --size 300 --seed 8");
  const auto b = cli("synth --size 300 --seed 8");
  CHECK(a.code == 0);
  CHECK(a.output == b.output);
  std::istringstream in(a.output);
  CHECK(ingest_pool(in).size() == 300);
  CHECK(cli("synth --category wine").code == 2);
}

TEST_CASE("cli runs are byte-identical under a fixed clock and seed") {
  Corpus c;
  const auto a = (c.dir / "a").string(), b = (c.dir / "b").string();
  const auto ra = cli(c.run_args(a) + " --oracle noisy:0.1 --seed 7");
  const auto rb = cli(c.run_args(b) + " --oracle noisy:0.1 --seed 7");
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(contains(ra.output, "annotations: 24"));
  CHECK(contains(ra.output, "model versions: 3"));
  CHECK(contains(ra.output, "Method: TLLM+LAUD"));
  for (const char* f : {"annotations.log", "evaluation.log", "state.snapshot", "iterations.report", "evaluation.report"})
    CHECK(test::slurp(c.dir / "a" / f) == test::slurp(c.dir / "b" / f));
}

TEST_CASE("cli evaluate, zeroshot and compare") {
  Corpus c;
  const auto laud = (c.dir / "laud").string(), rand = (c.dir / "rand").string(), zl = (c.dir / "zl").string();
  REQUIRE(cli(c.run_args(laud)).code == 0);
  REQUIRE(cli(c.run_args(rand) + " --strategy confident_zero_shot").code == 0);
  const auto z = cli("zeroshot --dataset " + c.pool + " --lexicon " + c.lexicon +
                     " --category coffee --n-eval 20 --out " + zl);
  REQUIRE(z.code == 0);
  CHECK(contains(z.output, "Method: LLM+ZL"));

  // re-audit with a larger sample
  const auto e = cli("evaluate --run " + laud + " --n-eval 30 --fixed-clock 0");
  CHECK(e.code == 0);
  CHECK(contains(e.output, "Method: TLLM+LAUD"));
  CHECK(cli("evaluate --run " + (c.dir / "nowhere").string()).code == 2);

  const auto t = cli("compare " + laud + " " + rand + " " + zl);
  CHECK(t.code == 0);
  CHECK(contains(t.output, "coffee"));
  CHECK(contains(t.output, "TLLM+LAUD"));
  CHECK(contains(t.output, "TLLM+RAND"));
  CHECK(contains(t.output, "LLM+ZL"));
}

TEST_CASE("cli human runs need the service") {
  Corpus c;
  const auto o = cli(c.run_args((c.dir / "h").string()) + " --oracle human --service http://127.0.0.1:1");
  CHECK(o.code == 2);
  CHECK(contains(o.output, "laud serve"));
}
