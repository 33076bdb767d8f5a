#include "helpers.h"

#include <doctest.h>

#include <json.hpp>

using namespace cryptoslice;
using cryptoslice::testing::fixture;
using cryptoslice::testing::runCli;

TEST_CASE("execution order puts rule 7 last") {
  CHECK(executionOrder({}) ==
        std::vector<int>{1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 14, 15, 16, 7});
  CHECK(executionOrder({7, 2, 9}) == std::vector<int>{2, 9, 7});
}

TEST_CASE("rule lists") {
  CHECK(parseRuleList("1-3,7") == std::set<int>{1, 2, 3, 7});
  CHECK(parseRuleList("16") == std::set<int>{16});
  CHECK(parseRuleList("2,2,1-2") == std::set<int>{1, 2});
  for (const char *bad : {"", "0", "17", "3-1", "a", "1-", "1,,2", "5x"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parseRuleList(bad), std::invalid_argument);
  }
}

TEST_CASE("exit codes") {
  std::string fig1 = fixture("fig1.tir");
  CHECK(runCli("analyze " + fig1).exitCode == 1);
  CHECK(runCli("analyze --rules 9 " + fig1).exitCode == 0);
  CHECK(runCli("analyze --fail-on M " + fig1).exitCode == 1);
  CHECK(runCli("analyze /nonexistent.tir").exitCode == 2);
  CHECK(runCli("analyze --rules 99 " + fig1).exitCode == 2);
  CHECK(runCli("analyze --depth -1 " + fig1).exitCode == 2);
  CHECK(runCli("analyze").exitCode == 2);
  CHECK(runCli("analyze --manifest " + fixture("ranger/project.manifest") + " " + fig1).exitCode == 2);
  CHECK(runCli("analyze --list-rules").exitCode == 0);
}

TEST_CASE("fig1 example: through the CLI") {
  auto refined = nlohmann::json::parse(runCli("analyze --format json " + fixture("fig1.tir")).out);
  REQUIRE(refined["findings"].size() == 1);
  CHECK(refined["findings"][0]["rule"] == 1);
  CHECK(refined["findings"][0]["severity"] == "H");
  CHECK(refined["findings"][0]["evidence"] == "defaultkey");
  CHECK(refined["perRule"]["1"] == 1);

  auto raw = nlohmann::json::parse(
      runCli("analyze --no-refine --format json " + fixture("fig1.tir")).out);
  CHECK(raw["findings"].size() >= 4);
  std::set<std::string> ev;
  for (const auto &f : raw["findings"])
    ev.insert(f["evidence"].get<std::string>());
  CHECK(ev == std::set<std::string>{"pass.key", "1", "defaultkey", "UTF-8"});
}

TEST_CASE("JSON output is byte-stable") {
  std::string args = "analyze --format json --jobs 4 --manifest " + fixture("ranger/project.manifest");
  auto first = runCli(args);
  for (int i = 0; i < 3; ++i)
    CHECK(runCli(args).out == first.out);
  CHECK(runCli("analyze --format json " + fixture("fig1.tir")).out ==
        runCli("analyze --format json " + fixture("fig1.tir")).out);
}

TEST_CASE("empty report") {
  RunConfig cfg;
  Report r = runProgram(cfg, parseProgram("", "empty.tir"));
  auto j = nlohmann::json::parse(emitReport(r, OutputFormat::Json));
  CHECK(j["findings"].is_array());
  CHECK(j["findings"].empty());
  CHECK(j["partialRoots"].empty());
  CHECK(j["perRule"].size() == 16);
  CHECK(emitReport(r, OutputFormat::Text).find("0 finding(s)") != std::string::npos);
}

TEST_CASE("text output groups by severity") {
  RunConfig cfg;
  cfg.manifest = fixture("ranger/project.manifest");
  std::string text = emitReport(run(cfg), OutputFormat::Text);
  size_t h = text.find("== severity H =="), m = text.find("== severity M ==");
  REQUIRE(h != std::string::npos);
  REQUIRE(m != std::string::npos);
  CHECK(h < m);
  size_t l = text.find("== severity L ==");
  if (l != std::string::npos)
    CHECK(m < l);
}

TEST_CASE("zero budget marks every root partial") {
  RunConfig cfg;
  cfg.manifest = fixture("ranger/project.manifest");
  cfg.budgetSeconds = 0;
  Report r = run(cfg);
  CHECK(r.findings.empty());
  CHECK(r.partialRoots == std::vector<std::string>{"plugins-kms", "security-admin"});
  CHECK(exitCode(r) == 0);
}

TEST_CASE("shared code is reported once across roots") {
  RunConfig cfg;
  cfg.manifest = fixture("ranger/project.manifest");
  Report one = run(cfg);
  cfg.jobs = 3;
  Report many = run(cfg);
  CHECK(one.findings == many.findings);
  std::set<std::tuple<int, std::string, int, std::string>> keys;
  for (const auto &f : one.findings)
    CHECK(keys.insert({f.ruleId, f.file, f.line, f.evidence}).second);
  size_t perRuleTotal = 0;
  for (const auto &[rule, n] : one.perRule)
    perRuleTotal += n;
  CHECK(perRuleTotal == one.findings.size());
  // A finding seen from several roots keeps the lexicographically first.
  SubprojectManifest m = parseManifest(*cfg.manifest);
  std::map<std::tuple<int, std::string, int, std::string>, std::string> firstRoot;
  for (const auto &root : rootSubprojects(m))
    for (const auto &f : runProgram({}, classesForRoot(m, root), root).findings)
      firstRoot.emplace(std::make_tuple(f.ruleId, f.file, f.line, f.evidence), root);
  CHECK(firstRoot.size() == one.findings.size());
  for (const auto &f : one.findings)
    CHECK(f.rootSubproject == firstRoot.at({f.ruleId, f.file, f.line, f.evidence}));
  // Nothing from the test subproject.
  for (const auto &f : one.findings)
    CHECK(f.file.find("/kmstest/") == std::string::npos);
}

TEST_CASE("distinct evidence on one line is kept") {
  const char *text = R"(class Pair {
  method void go() {
    k = "alpha" + "beta"
    c = k.<java.lang.String: byte[] getBytes()>()
    s = new javax.crypto.spec.SecretKeySpec
    specialinvoke s.<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>(c, "AES")
    return
  }
})";
  RunConfig cfg;
  cfg.rules = {1};
  Report r = runProgram(cfg, parseProgram(text, "pair.tir"));
  REQUIRE(r.findings.size() == 2);
  CHECK(r.findings[0].line == r.findings[1].line);
  CHECK(r.findings[0].evidence != r.findings[1].evidence);
}
