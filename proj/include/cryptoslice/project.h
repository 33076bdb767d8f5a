// Subproject manifests, their dependency DAG and per-root programs.
#pragma once

#include "cryptoslice/ir.h"

#include <map>
#include <set>
#include <stdexcept>

namespace cryptoslice {

class ManifestError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Subproject {
  std::string name;
  std::vector<std::string> files; // resolved, sorted
  std::vector<std::string> deps;
  bool test = false;
};

struct SubprojectManifest {
  std::string path;
  std::vector<Subproject> subprojects;

  const Subproject *find(const std::string &name) const;
};

class DependencyDag {
public:
  explicit DependencyDag(const SubprojectManifest &manifest);

  const std::vector<std::string> &nodes() const { return nodes_; }
  // dependent -> dependencies
  const std::map<std::string, std::vector<std::string>> &edges() const { return edges_; }
  size_t edgeCount() const;
  // The node and everything reachable from it.
  std::set<std::string> closure(const std::string &node) const;

private:
  std::vector<std::string> nodes_;
  std::map<std::string, std::vector<std::string>> edges_;
};

// Parses manifest text; `files` patterns are resolved against `baseDir`.
// Throws ManifestError on syntax errors, unknown dependencies, cycles and
// patterns matching no file.
SubprojectManifest parseManifestText(const std::string &text, const std::string &baseDir,
                                     const std::string &path = "<manifest>");
SubprojectManifest parseManifest(const std::string &path);

// Nodes without incoming edges, sorted; test subprojects are excluded.
std::vector<std::string> rootSubprojects(const SubprojectManifest &manifest);
std::vector<std::string> rootSubprojects(const DependencyDag &dag);

// Classes of the root and of every subproject it reaches.
Program classesForRoot(const SubprojectManifest &manifest, const std::string &root);

std::string readFile(const std::string &path);

} // namespace cryptoslice
