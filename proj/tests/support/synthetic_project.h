// Layered multi-subproject workload used for the scalability checks.
#pragma once

#include <cstddef>
#include <string>

namespace cryptoslice::testing {

struct SyntheticProject {
  std::string manifest; // path of the generated project.manifest
  size_t classes = 0;
  size_t instructions = 0;
};

// Writes five subprojects of ten classes each below `dir`. Two application
// roots sit on top of three library layers.
SyntheticProject writeSyntheticProject(const std::string &dir);

} // namespace cryptoslice::testing
