#include "cryptoslice/bench.h"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <sstream>

namespace cryptoslice {

namespace fs = std::filesystem;

const std::vector<std::string> kBenchCategories = {
    "basic", "interprocTwo", "interprocMulti", "fieldSensitive", "fpTest", "correctUse"};

BenchCase loadCase(const std::string &caseDir) {
  fs::path dir(caseDir);
  BenchCase c;
  c.id = dir.filename().string();
  c.category = dir.parent_path().filename().string();
  c.program = (dir / "case.tir").string();
  const std::string meta = (dir / "case.expect").string();
  if (!fs::exists(c.program))
    throw std::runtime_error(caseDir + ": missing case.tir");
  std::istringstream in(readFile(meta));
  std::string raw;
  int lineNo = 0;
  bool sawClean = false;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::istringstream ls(raw.substr(0, raw.find('#')));
    std::string key;
    if (!(ls >> key))
      continue;
    auto bad = [&](const std::string &why) {
      return std::runtime_error(meta + ":" + std::to_string(lineNo) + ": " + why);
    };
    if (key == "clean") {
      sawClean = true;
    } else if (key == "expect") {
      ExpectedFinding e;
      if (!(ls >> e.ruleId >> e.line) || e.ruleId < 1 || e.ruleId > 16 || e.line < 1)
        throw bad("expected 'expect <rule> <line>'");
      c.expected.push_back(e);
    } else if (key == "rule") {
      if (!(ls >> c.ruleId) || c.ruleId < 1 || c.ruleId > 16)
        throw bad("bad rule id");
    } else if (key == "category") {
      if (!(ls >> c.category))
        throw bad("missing category");
    } else {
      throw bad("unknown key '" + key + "'");
    }
    std::string extra;
    if (ls >> extra)
      throw bad("trailing text");
  }
  if (sawClean == !c.expected.empty())
    throw std::runtime_error(meta + ": need either 'clean' or expectations");
  if (std::find(kBenchCategories.begin(), kBenchCategories.end(), c.category) ==
      kBenchCategories.end())
    throw std::runtime_error(meta + ": unknown category " + c.category);
  c.clean = sawClean;
  if (!c.ruleId && !c.expected.empty())
    c.ruleId = c.expected.front().ruleId;
  if (!c.ruleId)
    throw std::runtime_error(meta + ": clean case without a rule line");
  std::sort(c.expected.begin(), c.expected.end());
  return c;
}

std::vector<BenchCase> loadCorpus(const std::string &corpusDir) {
  std::vector<std::string> dirs;
  for (const auto &cat : fs::directory_iterator(corpusDir)) {
    if (!cat.is_directory())
      continue;
    for (const auto &d : fs::directory_iterator(cat.path()))
      if (d.is_directory() && fs::exists(d.path() / "case.expect"))
        dirs.push_back(d.path().string());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<BenchCase> out;
  for (const auto &d : dirs)
    out.push_back(loadCase(d));
  return out;
}

CaseScore scoreFindings(const std::vector<ExpectedFinding> &expected,
                        const std::vector<ExpectedFinding> &actual) {
  CaseScore s;
  std::vector<bool> used(actual.size(), false);
  for (const auto &e : expected) {
    bool hit = false;
    for (size_t i = 0; i < actual.size() && !hit; ++i)
      if (!used[i] && actual[i] == e)
        used[i] = hit = true;
    hit ? ++s.tp : ++s.fn;
  }
  s.fp = static_cast<size_t>(std::count(used.begin(), used.end(), false));
  return s;
}

namespace {
double pct(size_t num, size_t den, double whenEmpty) {
  return den ? 100.0 * static_cast<double>(num) / static_cast<double>(den) : whenEmpty;
}
} // namespace

double Counts::precision() const { return pct(tp, tp + fp, 100.0); }
double Counts::recall() const { return pct(tp, gtp, 100.0); }
double Counts::fpr() const { return pct(fp, fp + tn, 0.0); }
double Counts::fnr() const { return pct(fn, gtp, 0.0); }

void Counts::add(const Counts &o) {
  gtp += o.gtp;
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  negatives += o.negatives;
  tn += o.tn;
}

ScoreReport runBench(const std::string &corpusDir, const BenchConfig &config) {
  auto start = std::chrono::steady_clock::now();
  ScoreReport rep;
  RunConfig rc;
  rc.depth = config.depth;
  rc.rules = config.rules;
  rc.refine = config.refine;
  for (auto &bc : loadCorpus(corpusDir)) {
    if (!config.rules.empty() && !config.rules.count(bc.ruleId))
      continue;
    std::vector<ExpectedFinding> expected;
    for (const auto &e : bc.expected)
      if (config.rules.empty() || config.rules.count(e.ruleId))
        expected.push_back(e);
    Program p = parseProgram(readFile(bc.program), bc.program);
    Report r = runProgram(rc, p);
    CaseOutcome out;
    for (const auto &f : r.findings)
      out.actual.push_back({f.ruleId, f.line});
    out.score = scoreFindings(expected, out.actual);
    bc.expected = expected;
    out.bcase = bc;

    Counts c;
    c.gtp = expected.size();
    c.tp = out.score.tp;
    c.fp = out.score.fp;
    c.fn = out.score.fn;
    if (bc.clean) {
      c.negatives = 1;
      c.tn = out.actual.empty() ? 1 : 0;
    }
    rep.perCategory[bc.category].add(c);
    rep.overall.add(c);

    std::vector<bool> used(out.actual.size(), false);
    for (const auto &e : expected) {
      Counts &pr = rep.perRule[e.ruleId];
      ++pr.gtp;
      bool hit = false;
      for (size_t i = 0; i < out.actual.size() && !hit; ++i)
        if (!used[i] && out.actual[i] == e)
          used[i] = hit = true;
      hit ? ++pr.tp : ++pr.fn;
    }
    for (size_t i = 0; i < out.actual.size(); ++i)
      if (!used[i])
        ++rep.perRule[out.actual[i].ruleId].fp;
    rep.cases.push_back(std::move(out));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace {

nlohmann::ordered_json countsJson(const Counts &c) {
  nlohmann::ordered_json j;
  j["GTP"] = c.gtp;
  j["TP"] = c.tp;
  j["FP"] = c.fp;
  j["FN"] = c.fn;
  j["negatives"] = c.negatives;
  j["TN"] = c.tn;
  j["precision"] = c.precision();
  j["recall"] = c.recall();
  j["FPR"] = c.fpr();
  j["FNR"] = c.fnr();
  return j;
}

void countsRow(std::ostream &os, const std::string &label, const Counts &c) {
  os << std::left << std::setw(16) << label << std::right << std::setw(5) << c.gtp
     << std::setw(5) << c.tp << std::setw(5) << c.fp << std::setw(5) << c.fn << std::fixed
     << std::setprecision(1) << std::setw(8) << c.precision() << std::setw(8) << c.recall()
     << std::setw(8) << c.fpr() << std::setw(8) << c.fnr() << "\n";
}

} // namespace

std::string emitScore(const ScoreReport &r, OutputFormat format) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json cats = nlohmann::ordered_json::object();
    for (const auto &cat : kBenchCategories)
      if (r.perCategory.count(cat))
        cats[cat] = countsJson(r.perCategory.at(cat));
    doc["perCategory"] = cats;
    nlohmann::ordered_json rules = nlohmann::ordered_json::object();
    for (const auto &[id, c] : r.perRule)
      rules[std::to_string(id)] = countsJson(c);
    doc["perRule"] = rules;
    doc["overall"] = countsJson(r.overall);
    nlohmann::ordered_json misses = nlohmann::ordered_json::array();
    for (const auto &c : r.cases)
      if (c.score.fp || c.score.fn)
        misses.push_back({{"case", c.bcase.category + "/" + c.bcase.id},
                          {"FP", c.score.fp},
                          {"FN", c.score.fn}});
    doc["mismatches"] = misses;
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << std::left << std::setw(16) << "category" << std::right << std::setw(5) << "GTP"
     << std::setw(5) << "TP" << std::setw(5) << "FP" << std::setw(5) << "FN" << std::setw(8)
     << "Pre." << std::setw(8) << "Rec." << std::setw(8) << "FPR" << std::setw(8) << "FNR"
     << "\n";
  for (const auto &cat : kBenchCategories)
    if (r.perCategory.count(cat))
      countsRow(os, cat, r.perCategory.at(cat));
  countsRow(os, "overall", r.overall);
  os << "\n";
  for (const auto &[id, c] : r.perRule)
    countsRow(os, "rule " + std::to_string(id), c);
  for (const auto &c : r.cases)
    if (c.score.fp || c.score.fn)
      os << "mismatch " << c.bcase.category << "/" << c.bcase.id << ": FP " << c.score.fp
         << " FN " << c.score.fn << "\n";
  os << std::fixed << std::setprecision(2) << "time " << r.seconds << " s\n";
  return os.str();
}

} // namespace cryptoslice
