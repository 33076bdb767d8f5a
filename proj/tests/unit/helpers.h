#pragma once

#include "cli_runner.h"
#include "cryptoslice/report.h"

#include <string>

namespace cryptoslice::testing {

inline std::string fixture(const std::string &rel) {
  return std::string(CRYPTOSLICE_SOURCE_DIR) + "/tests/fixtures/" + rel;
}

inline Report analyzeText(const std::string &text, RunConfig cfg = {}) {
  return runProgram(cfg, parseProgram(text, "test.tir"));
}

inline Report analyzeFile(const std::string &path, RunConfig cfg = {}) {
  cfg.files = {path};
  return run(cfg);
}

} // namespace cryptoslice::testing
