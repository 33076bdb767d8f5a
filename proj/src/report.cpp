#include "cryptoslice/report.h"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace cryptoslice {

using Clock = std::chrono::steady_clock;

std::vector<int> executionOrder(const std::set<int> &subset) {
  std::vector<int> order;
  for (int r = 1; r <= 16; ++r)
    if (r != 7)
      order.push_back(r);
  order.push_back(7);
  if (subset.empty())
    return order;
  std::vector<int> out;
  for (int r : order)
    if (subset.count(r))
      out.push_back(r);
  return out;
}

std::set<int> parseRuleList(const std::string &text) {
  std::set<int> out;
  std::stringstream ss(text);
  std::string item;
  auto number = [&](const std::string &s) {
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != s.size() || s.empty() || v < 1 || v > 16)
      throw std::invalid_argument("bad rule id '" + s + "' in --rules");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    size_t dash = item.find('-');
    if (dash == std::string::npos) {
      out.insert(number(item));
      continue;
    }
    int lo = number(item.substr(0, dash));
    int hi = number(item.substr(dash + 1));
    if (lo > hi)
      throw std::invalid_argument("empty rule range '" + item + "'");
    for (int r = lo; r <= hi; ++r)
      out.insert(r);
  }
  if (out.empty())
    throw std::invalid_argument("empty --rules list");
  return out;
}

namespace {

struct RootOutcome {
  std::optional<std::string> root;
  std::vector<Finding> findings;
  CheckStats stats;
  bool partial = false;
  double ms = 0;
};

RootOutcome analyzeRoot(const RunConfig &cfg, const Program &program,
                        const std::optional<std::string> &root) {
  auto start = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (cfg.budgetSeconds)
    deadline = start + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(*cfg.budgetSeconds));
  auto expired = [&] { return deadline && Clock::now() >= *deadline; };

  RootOutcome out;
  out.root = root;
  if (expired()) {
    out.partial = true;
    return out;
  }
  AnalysisContext ctx(program);
  CheckOptions opts;
  opts.depth = cfg.depth;
  opts.refine = cfg.refine;
  opts.checkClientTrusted = cfg.checkClientTrusted;
  opts.expired = expired;
  for (int rule : executionOrder(cfg.rules)) {
    if (expired()) {
      out.partial = true;
      break;
    }
    try {
      CheckStats st;
      auto f = runRule(rule, ctx, opts, &st);
      out.stats.add(st);
      out.findings.insert(out.findings.end(), f.begin(), f.end());
    } catch (const BudgetExpired &) {
      out.partial = true;
      break;
    }
  }
  for (auto &f : out.findings)
    f.rootSubproject = root;
  out.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

Report assemble(const RunConfig &cfg, std::vector<RootOutcome> outcomes) {
  Report r;
  r.config = cfg;
  std::map<std::tuple<int, std::string, std::string, std::string, int, std::string>, Finding>
      unique;
  for (auto &o : outcomes) {
    for (auto &f : o.findings) {
      auto key = std::make_tuple(f.ruleId, f.file, f.cls, f.method, f.line, f.evidence);
      auto it = unique.find(key);
      if (it == unique.end())
        unique.emplace(key, f);
      else if (f.rootSubproject < it->second.rootSubproject)
        it->second.rootSubproject = f.rootSubproject;
    }
    r.candidates += o.stats.candidates;
    for (int i = 0; i < kRiCount; ++i)
      r.perRI[i] += o.stats.removedByRi[i];
    if (o.partial)
      r.partialRoots.push_back(o.root.value_or("<input>"));
    r.timing.push_back({o.root.value_or("<input>"), o.ms});
  }
  for (auto &[k, f] : unique)
    r.findings.push_back(std::move(f));
  std::sort(r.findings.begin(), r.findings.end());
  for (int rule : executionOrder(cfg.rules))
    r.perRule[rule] = 0;
  for (const auto &f : r.findings)
    ++r.perRule[f.ruleId];
  std::sort(r.partialRoots.begin(), r.partialRoots.end());
  return r;
}

Program programFromFiles(const std::vector<std::string> &files) {
  std::vector<ClassDef> classes;
  for (const auto &file : files)
    for (auto &c : parseClasses(readFile(file), file))
      classes.push_back(std::move(c));
  return linkProgram(std::move(classes));
}

} // namespace

Report runProgram(const RunConfig &config, const Program &program,
                  const std::optional<std::string> &rootName) {
  std::vector<RootOutcome> outcomes;
  outcomes.push_back(analyzeRoot(config, program, rootName));
  return assemble(config, std::move(outcomes));
}

Report run(const RunConfig &config) {
  if (config.depth < 0)
    throw std::invalid_argument("depth must be >= 0");
  if (!config.manifest) {
    if (config.files.empty())
      throw std::invalid_argument("no input files");
    return runProgram(config, programFromFiles(config.files));
  }

  SubprojectManifest manifest = parseManifest(*config.manifest);
  std::vector<std::string> roots = rootSubprojects(manifest);
  std::vector<Program> programs;
  for (const auto &root : roots)
    programs.push_back(classesForRoot(manifest, root));

  std::vector<RootOutcome> outcomes(roots.size());
  std::atomic<size_t> next{0};
  std::mutex errorMu;
  std::exception_ptr error;
  auto worker = [&] {
    for (size_t i = next++; i < roots.size(); i = next++) {
      try {
        outcomes[i] = analyzeRoot(config, programs[i], roots[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(errorMu);
        if (!error)
          error = std::current_exception();
      }
    }
  };
  unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, roots.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
  return assemble(config, std::move(outcomes));
}

int exitCode(const Report &report) {
  for (const auto &f : report.findings)
    if (atLeast(f.severity, report.config.failOn))
      return 1;
  return 0;
}

namespace {

std::string emitJson(const Report &r) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["version"] = 1;
  ordered_json cfg;
  cfg["inputs"] = r.config.files;
  cfg["manifest"] = r.config.manifest ? ordered_json(*r.config.manifest) : ordered_json();
  cfg["rules"] = executionOrder(r.config.rules);
  cfg["depth"] = r.config.depth;
  cfg["refine"] = r.config.refine;
  cfg["budgetSeconds"] =
      r.config.budgetSeconds ? ordered_json(*r.config.budgetSeconds) : ordered_json();
  cfg["failOn"] = severityName(r.config.failOn);
  cfg["checkClientTrusted"] = r.config.checkClientTrusted;
  doc["config"] = cfg;
  ordered_json findings = ordered_json::array();
  for (const auto &f : r.findings) {
    ordered_json j;
    j["rule"] = f.ruleId;
    j["severity"] = severityName(f.severity);
    j["title"] = ruleSpec(f.ruleId).title;
    j["file"] = f.file;
    j["class"] = f.cls;
    j["method"] = f.method;
    j["line"] = f.line;
    j["evidence"] = f.evidence;
    j["root"] = f.rootSubproject ? ordered_json(*f.rootSubproject) : ordered_json();
    findings.push_back(j);
  }
  doc["findings"] = findings;
  ordered_json perRule = ordered_json::object();
  for (const auto &[rule, n] : r.perRule)
    perRule[std::to_string(rule)] = n;
  doc["perRule"] = perRule;
  ordered_json perRI = ordered_json::object();
  for (int i = 0; i < kRiCount; ++i)
    perRI[riName(static_cast<Ri>(i + 1))] = r.perRI[i];
  doc["perRI"] = perRI;
  doc["candidates"] = r.candidates;
  doc["partialRoots"] = r.partialRoots;
  return doc.dump(2) + "\n";
}

std::string emitText(const Report &r) {
  std::ostringstream os;
  for (Severity s : {Severity::H, Severity::M, Severity::L}) {
    std::vector<const Finding *> group;
    for (const auto &f : r.findings)
      if (f.severity == s)
        group.push_back(&f);
    if (group.empty())
      continue;
    std::stable_sort(group.begin(), group.end(), [](const Finding *a, const Finding *b) {
      return a->ruleId < b->ruleId;
    });
    os << "== severity " << severityName(s) << " ==\n";
    int lastRule = 0;
    for (const Finding *f : group) {
      if (f->ruleId != lastRule) {
        os << "rule " << f->ruleId << ": " << ruleSpec(f->ruleId).title << "\n";
        lastRule = f->ruleId;
      }
      os << "  " << f->file << ":" << f->line << "  " << f->cls << " " << f->method
         << "  [" << f->evidence << "]";
      if (f->rootSubproject)
        os << "  (root " << *f->rootSubproject << ")";
      os << "\n";
    }
  }
  os << r.findings.size() << " finding(s)";
  if (!r.partialRoots.empty()) {
    os << "; partial roots:";
    for (const auto &p : r.partialRoots)
      os << " " << p;
  }
  os << "\n";
  if (r.config.refineBreakdown) {
    os << "refinement removals (" << r.candidates << " candidates):";
    for (int i = 0; i < kRiCount; ++i)
      os << " " << riName(static_cast<Ri>(i + 1)) << "=" << r.perRI[i];
    os << "\n";
  }
  for (const auto &t : r.timing)
    os << "time " << t.root << ": " << std::fixed << std::setprecision(1) << t.milliseconds
       << " ms\n";
  return os.str();
}

} // namespace

std::string emitReport(const Report &report, OutputFormat format) {
  return format == OutputFormat::Json ? emitJson(report) : emitText(report);
}

} // namespace cryptoslice
