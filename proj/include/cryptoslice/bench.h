// Labeled benchmark corpus and its scorer.
#pragma once

#include "cryptoslice/report.h"

namespace cryptoslice {

extern const std::vector<std::string> kBenchCategories;

struct ExpectedFinding {
  int ruleId = 0;
  int line = 0;
  auto operator<=>(const ExpectedFinding &) const = default;
};

struct BenchCase {
  std::string id;
  int ruleId = 0;
  std::string category;
  std::string program; // path of case.tir
  std::vector<ExpectedFinding> expected;
  bool clean = false;
};

// Reads `case.expect`; category and id default to the directory layout
// <corpus>/<category>/<id>/. Throws std::runtime_error on malformed metadata.
BenchCase loadCase(const std::string &caseDir);
std::vector<BenchCase> loadCorpus(const std::string &corpusDir);

struct CaseScore {
  size_t tp = 0, fp = 0, fn = 0;
  auto operator<=>(const CaseScore &) const = default;
};

// Strict (rule, line) matching; each expectation matches at most one finding.
CaseScore scoreFindings(const std::vector<ExpectedFinding> &expected,
                        const std::vector<ExpectedFinding> &actual);

struct Counts {
  size_t gtp = 0, tp = 0, fp = 0, fn = 0;
  size_t negatives = 0; // clean cases
  size_t tn = 0;        // clean cases without findings
  double precision() const; // percent; 100 when nothing was reported
  double recall() const;
  double fpr() const;
  double fnr() const;
  void add(const Counts &o);
};

struct CaseOutcome {
  BenchCase bcase;
  CaseScore score;
  std::vector<ExpectedFinding> actual;
};

struct ScoreReport {
  std::map<std::string, Counts> perCategory;
  std::map<int, Counts> perRule;
  Counts overall;
  std::vector<CaseOutcome> cases;
  double seconds = 0;
};

struct BenchConfig {
  int depth = 1;
  std::set<int> rules; // empty: all
  bool refine = true;
};

ScoreReport runBench(const std::string &corpusDir, const BenchConfig &config);
std::string emitScore(const ScoreReport &report, OutputFormat format);

} // namespace cryptoslice
