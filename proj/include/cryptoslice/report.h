// Orchestration of a run over roots and rules, and report rendering.
#pragma once

#include "cryptoslice/project.h"
#include "cryptoslice/rules.h"

namespace cryptoslice {

enum class OutputFormat { Text, Json };

struct RunConfig {
  std::vector<std::string> files;
  std::optional<std::string> manifest;
  std::set<int> rules; // empty: all 16
  int depth = 1;
  bool refine = true;
  bool refineBreakdown = false;
  unsigned jobs = 1;
  std::optional<double> budgetSeconds; // per root
  OutputFormat format = OutputFormat::Text;
  Severity failOn = Severity::L;
  bool checkClientTrusted = false;
};

struct RootTiming {
  std::string root;
  double milliseconds = 0;
};

struct Report {
  RunConfig config;
  std::vector<Finding> findings;
  std::map<int, size_t> perRule;
  std::array<size_t, kRiCount> perRI{};
  size_t candidates = 0;
  std::vector<std::string> partialRoots;
  std::vector<RootTiming> timing;
};

// Rules in execution order: 1-6, 8-16, then 7.
std::vector<int> executionOrder(const std::set<int> &subset);

// Throws ParseError, ManifestError or std::runtime_error on bad input.
Report run(const RunConfig &config);
// Analyzes one already-linked program as a single root.
Report runProgram(const RunConfig &config, const Program &program,
                  const std::optional<std::string> &rootName = std::nullopt);

std::string emitReport(const Report &report, OutputFormat format);
int exitCode(const Report &report);

// Parses "1,4-7,16".
std::set<int> parseRuleList(const std::string &text);

} // namespace cryptoslice
