#include "cryptoslice/project.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <glob.h>
#include <sstream>

namespace cryptoslice {

namespace fs = std::filesystem;

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Subproject *SubprojectManifest::find(const std::string &name) const {
  for (const auto &s : subprojects)
    if (s.name == name)
      return &s;
  return nullptr;
}

DependencyDag::DependencyDag(const SubprojectManifest &manifest) {
  for (const auto &s : manifest.subprojects) {
    nodes_.push_back(s.name);
    auto &e = edges_[s.name];
    e = s.deps;
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }
  std::sort(nodes_.begin(), nodes_.end());
}

size_t DependencyDag::edgeCount() const {
  size_t n = 0;
  for (const auto &[k, v] : edges_)
    n += v.size();
  return n;
}

std::set<std::string> DependencyDag::closure(const std::string &node) const {
  std::set<std::string> seen;
  std::vector<std::string> work{node};
  while (!work.empty()) {
    std::string n = work.back();
    work.pop_back();
    if (!seen.insert(n).second)
      continue;
    auto it = edges_.find(n);
    if (it != edges_.end())
      for (const auto &d : it->second)
        work.push_back(d);
  }
  return seen;
}

namespace {

std::vector<std::string> splitList(const std::string &s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty())
        out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

std::vector<std::string> expand(const std::string &pattern, const std::string &baseDir,
                                const std::string &where) {
  fs::path p(pattern);
  std::string full = p.is_absolute() ? pattern : (fs::path(baseDir) / p).string();
  glob_t g{};
  int rc = ::glob(full.c_str(), 0, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0)
    for (size_t i = 0; i < g.gl_pathc; ++i)
      out.push_back(g.gl_pathv[i]);
  globfree(&g);
  if (out.empty())
    throw ManifestError(where + ": no file matches " + pattern);
  return out;
}

void checkAcyclic(const SubprojectManifest &m) {
  enum Mark { White, Grey, Black };
  std::map<std::string, Mark> mark;
  std::map<std::string, const Subproject *> byName;
  for (const auto &s : m.subprojects)
    byName[s.name] = &s;
  std::vector<std::string> path;
  std::function<void(const std::string &)> visit = [&](const std::string &n) {
    mark[n] = Grey;
    path.push_back(n);
    for (const auto &d : byName[n]->deps) {
      if (mark[d] == Grey) {
        std::string cycle;
        auto from = std::find(path.begin(), path.end(), d);
        for (auto it = from; it != path.end(); ++it)
          cycle += *it + " -> ";
        throw ManifestError(m.path + ": dependency cycle " + cycle + d);
      }
      if (mark[d] == White)
        visit(d);
    }
    path.pop_back();
    mark[n] = Black;
  };
  for (const auto &[n, s] : byName)
    if (mark[n] == White)
      visit(n);
}

} // namespace

SubprojectManifest parseManifestText(const std::string &text, const std::string &baseDir,
                                     const std::string &path) {
  SubprojectManifest m;
  m.path = path;
  std::istringstream in(text);
  std::string raw;
  int lineNo = 0;
  Subproject *cur = nullptr;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string line = raw.substr(0, raw.find('#'));
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key))
      continue;
    std::string rest;
    std::getline(ls, rest);
    if (!key.empty() && key.back() == ':')
      key.pop_back();
    const std::string where = path + ":" + std::to_string(lineNo);
    if (key == "subproject") {
      auto names = splitList(rest);
      if (names.size() != 1)
        throw ManifestError(where + ": expected one subproject name");
      if (m.find(names[0]))
        throw ManifestError(where + ": duplicate subproject " + names[0]);
      m.subprojects.push_back({names[0], {}, {}, false});
      cur = &m.subprojects.back();
      continue;
    }
    if (!cur)
      throw ManifestError(where + ": '" + key + "' outside a subproject");
    if (key == "files") {
      for (const auto &pat : splitList(rest))
        for (auto &f : expand(pat, baseDir, where))
          cur->files.push_back(std::move(f));
    } else if (key == "deps") {
      for (auto &d : splitList(rest))
        cur->deps.push_back(std::move(d));
    } else if (key == "test") {
      auto v = splitList(rest);
      if (v.size() != 1 || (v[0] != "true" && v[0] != "false"))
        throw ManifestError(where + ": test expects true or false");
      cur->test = v[0] == "true";
    } else {
      throw ManifestError(where + ": unknown key '" + key + "'");
    }
  }
  for (auto &s : m.subprojects) {
    std::sort(s.files.begin(), s.files.end());
    s.files.erase(std::unique(s.files.begin(), s.files.end()), s.files.end());
    for (const auto &d : s.deps)
      if (!m.find(d))
        throw ManifestError(path + ": " + s.name + " depends on unknown subproject " + d);
  }
  checkAcyclic(m);
  return m;
}

SubprojectManifest parseManifest(const std::string &path) {
  std::string base = fs::path(path).parent_path().string();
  return parseManifestText(readFile(path), base.empty() ? "." : base, path);
}

std::vector<std::string> rootSubprojects(const DependencyDag &dag) {
  std::set<std::string> hasIncoming;
  for (const auto &[from, tos] : dag.edges())
    for (const auto &t : tos)
      hasIncoming.insert(t);
  std::vector<std::string> out;
  for (const auto &n : dag.nodes())
    if (!hasIncoming.count(n))
      out.push_back(n);
  return out;
}

std::vector<std::string> rootSubprojects(const SubprojectManifest &manifest) {
  // Test subprojects leave the graph first so they cannot hide a real root.
  SubprojectManifest shipped = manifest;
  shipped.subprojects.erase(std::remove_if(shipped.subprojects.begin(),
                                           shipped.subprojects.end(),
                                           [](const Subproject &s) { return s.test; }),
                            shipped.subprojects.end());
  return rootSubprojects(DependencyDag(shipped));
}

Program classesForRoot(const SubprojectManifest &manifest, const std::string &root) {
  if (!manifest.find(root))
    throw ManifestError("unknown subproject " + root);
  std::vector<ClassDef> classes;
  for (const auto &name : DependencyDag(manifest).closure(root))
    for (const auto &file : manifest.find(name)->files)
      for (auto &c : parseClasses(readFile(file), file))
        classes.push_back(std::move(c));
  return linkProgram(std::move(classes));
}

} // namespace cryptoslice
