#include "helpers.h"

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

using namespace cryptoslice;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("cryptoslice-project-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string &rel, const std::string &text) const {
    fs::create_directories((path / rel).parent_path());
    std::ofstream(path / rel) << text;
  }
  std::string base() const { return path.string(); }
};

std::string cls(const std::string &name) {
  return "class " + name + " {\n  method void m() {\n    return\n  }\n}\n";
}

std::set<std::string> classNames(const Program &p) {
  std::set<std::string> out;
  for (const auto &[name, c] : p.classes)
    if (!c.isPhantom)
      out.insert(name);
  return out;
}

} // namespace

TEST_CASE("ranger manifest has two roots") {
  SubprojectManifest m = parseManifest(cryptoslice::testing::fixture("ranger/project.manifest"));
  CHECK(m.subprojects.size() == 6);
  CHECK(rootSubprojects(m) == std::vector<std::string>{"plugins-kms", "security-admin"});
  DependencyDag dag(m);
  CHECK(dag.edgeCount() == 8);
  CHECK(dag.closure("plugins-kms") ==
        std::set<std::string>{"plugins-kms", "credentialbuilder", "agents-common", "ranger-util"});
  // With the test subproject in the graph, plugins-kms would not be a root.
  CHECK(rootSubprojects(dag) == std::vector<std::string>{"kms-tests", "security-admin"});
}

TEST_CASE("manifest shapes") {
  TempDir d;
  d.write("a/A.tir", cls("A"));
  d.write("b/B.tir", cls("B"));
  d.write("c/C.tir", cls("C"));

  SUBCASE("single subproject") {
    auto m = parseManifestText("subproject solo\n  files a/*.tir\n", d.base());
    CHECK(rootSubprojects(m) == std::vector<std::string>{"solo"});
    CHECK(classNames(classesForRoot(m, "solo")) == std::set<std::string>{"A"});
  }
  SUBCASE("chain") {
    auto m = parseManifestText(
        "subproject top\n  files a/*.tir\n  deps low\nsubproject low\n  files b/*.tir\n", d.base());
    CHECK(rootSubprojects(m) == std::vector<std::string>{"top"});
    CHECK(classNames(classesForRoot(m, "top")) == std::set<std::string>{"A", "B"});
    CHECK(classNames(classesForRoot(m, "low")) == std::set<std::string>{"B"});
  }
  SUBCASE("diamond reaches the shared node once") {
    d.write("s/S.tir", cls("S"));
    auto m = parseManifestText("subproject top\n  files a/*.tir\n  deps l, r\n"
                               "subproject l\n  files b/*.tir\n  deps s\n"
                               "subproject r\n  files c/*.tir\n  deps s\n"
                               "subproject s\n  files s/*.tir\n",
                               d.base());
    Program p = classesForRoot(m, "top");
    CHECK(classNames(p) == std::set<std::string>{"A", "B", "C", "S"});
    CHECK(classesForRoot(m, "top") == p);
  }
  SUBCASE("cycle") {
    CHECK_THROWS_AS(parseManifestText("subproject x\n  files a/*.tir\n  deps y\n"
                                      "subproject y\n  files b/*.tir\n  deps x\n",
                                      d.base()),
                    ManifestError);
  }
  SUBCASE("unknown dependency") {
    CHECK_THROWS_AS(parseManifestText("subproject x\n  files a/*.tir\n  deps ghost\n", d.base()),
                    ManifestError);
  }
  SUBCASE("pattern matching no file") {
    CHECK_THROWS_AS(parseManifestText("subproject x\n  files nowhere/*.tir\n", d.base()),
                    ManifestError);
  }
  SUBCASE("syntax") {
    CHECK_THROWS_AS(parseManifestText("files a/*.tir\n", d.base()), ManifestError);
    CHECK_THROWS_AS(parseManifestText("subproject x\n  colour blue\n", d.base()), ManifestError);
    CHECK_THROWS_AS(parseManifestText("subproject x\nsubproject x\n", d.base()), ManifestError);
    CHECK_THROWS_AS(parseManifestText("subproject x\n  test maybe\n", d.base()), ManifestError);
  }
  SUBCASE("unknown root") {
    auto m = parseManifestText("subproject solo\n  files a/*.tir\n", d.base());
    CHECK_THROWS_AS(classesForRoot(m, "other"), ManifestError);
  }
  SUBCASE("one class in two reachable subprojects") {
    d.write("dup/A.tir", cls("A"));
    auto m = parseManifestText(
        "subproject top\n  files a/*.tir\n  deps low\nsubproject low\n  files dup/*.tir\n", d.base());
    CHECK_THROWS_AS(classesForRoot(m, "top"), ParseError);
  }
}

TEST_CASE("missing manifest file") {
  CHECK_THROWS(parseManifest("/nonexistent/project.manifest"));
}
