#include "helpers.h"

#include "cryptoslice/callgraph.h"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace cryptoslice;
using cryptoslice::testing::fixture;

namespace {

Program fig1() {
  std::ifstream f(fixture("fig1.tir"));
  std::stringstream ss;
  ss << f.rdbuf();
  return parseProgram(ss.str(), "fig1.tir");
}

const char *kHierarchy = R"(class A {
  method void m() {
    return
  }
}
class B extends A {
  method void m() {
    return
  }
}
class C extends B {
  method void m() {
    return
  }
}
class Use {
  method void go(A) {
    r0 := param 0
    r0.<A: void m()>()
    return
  }
}
)";

std::set<std::string> targetsOf(const CallGraph &g, const CallSite &s) {
  std::set<std::string> out;
  for (const auto &t : g.resolvedTargets(s))
    out.insert(t.str());
  return out;
}

} // namespace

TEST_CASE("callers of Crypto.encrypt") {
  Program p = fig1();
  CallGraph g = buildCallGraph(p);
  auto callers = g.callersOf(parseMethodSig(
      "<Crypto: byte[] encrypt(java.lang.String,java.lang.String)>"));
  REQUIRE(callers.size() == 1);
  CHECK(callers[0].caller.name == "encPass");
  CHECK(callers[0].line == 16);
  CHECK(callers[0].kind == InvokeKind::Virtual);
}

TEST_CASE("SecretKeySpec constructor call sites") {
  CallGraph g = buildCallGraph(fig1());
  auto sites = callSitesOf(g, parseMethodSig(
      "<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>"));
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].caller.owner == "Crypto");
  CHECK(sites[0].line == 54);
  CHECK(g.isPhantom(g.siteAt(sites[0].caller, sites[0].instructionIndex)));
  CHECK(callSitesOf(g, parseMethodSig("<Crypto: void never()>")).empty());
}

TEST_CASE("virtual dispatch stops at direct subclasses") {
  Program p = parseProgram(kHierarchy);
  CallGraph g = buildCallGraph(p);
  auto sites = callSitesOf(g, parseMethodSig("<A: void m()>"));
  REQUIRE(sites.size() == 1);
  CHECK(targetsOf(g, sites[0]) == std::set<std::string>{"<A: void m()>", "<B: void m()>"});
  CHECK(g.callersOf(parseMethodSig("<C: void m()>")).empty());
}

TEST_CASE("interface invokes resolve to immediate implementers") {
  Program p = parseProgram(R"(class Impl implements Svc {
  method void run() {
    return
  }
}
class Sub extends Impl {
  method void run() {
    return
  }
}
class Use {
  method void go(Svc) {
    r0 := param 0
    interfaceinvoke r0.<Svc: void run()>()
    return
  }
})");
  CallGraph g = buildCallGraph(p);
  auto sites = callSitesOf(g, parseMethodSig("<Impl: void run()>"));
  REQUIRE(sites.size() == 1);
  CHECK(targetsOf(g, sites[0]) == std::set<std::string>{"<Impl: void run()>"});
}

TEST_CASE("static and special invokes resolve to the declared method") {
  Program p = parseProgram(R"(class A {
  method void <init>() {
    return
  }
  static method void s() {
    return
  }
}
class B extends A {
  method void <init>() {
    return
  }
}
class Use {
  method void go() {
    r0 = new A
    specialinvoke r0.<A: void <init>()>()
    staticinvoke <A: void s()>()
    return
  }
})");
  CallGraph g = buildCallGraph(p);
  for (const auto &s : g.sites())
    CHECK(targetsOf(g, s) == std::set<std::string>{s.callee.str()});
}

TEST_CASE("two callers come back in file then line order") {
  std::vector<ClassDef> classes;
  for (auto &c : parseClasses("class T {\n  static method void t() {\n    return\n  }\n}\n", "b.tir"))
    classes.push_back(c);
  for (auto &c : parseClasses("class X {\n  method void x() {\n    staticinvoke <T: void t()>()\n"
                              "    return\n  }\n}\n", "c.tir"))
    classes.push_back(c);
  for (auto &c : parseClasses("# header\n\n\nclass W {\n  method void w() {\n"
                              "    staticinvoke <T: void t()>()\n    return\n  }\n}\n", "a.tir"))
    classes.push_back(c);
  CallGraph g = buildCallGraph(linkProgram(std::move(classes)));
  auto sites = callSitesOf(g, parseMethodSig("<T: void t()>"));
  REQUIRE(sites.size() == 2);
  CHECK(sites[0].file == "a.tir");
  CHECK(sites[0].line == 6);
  CHECK(sites[1].file == "c.tir");
  CHECK(sites[1].line == 3);
}

TEST_CASE("random hierarchies: targets match brute force and callers agree") {
  for (uint32_t seed = 0; seed < 50; ++seed) {
    std::mt19937 rng(seed);
    auto coin = [&] { return std::bernoulli_distribution(0.5)(rng); };
    int n = std::uniform_int_distribution<int>(2, 9)(rng);
    std::vector<int> parent(n, -1);
    std::vector<bool> defines(n);
    std::ostringstream os;
    for (int i = 0; i < n; ++i) {
      if (i > 0 && coin())
        parent[i] = std::uniform_int_distribution<int>(0, i - 1)(rng);
      defines[i] = coin();
      os << "class K" << i;
      if (parent[i] >= 0)
        os << " extends K" << parent[i];
      os << " {\n";
      if (defines[i])
        os << "  method void m() {\n    return\n  }\n";
      os << "}\n";
    }
    os << "class Driver {\n  method void go(java.lang.Object) {\n    r0 := param 0\n";
    for (int i = 0; i < n; ++i)
      os << "    r0.<K" << i << ": void m()>()\n";
    os << "    return\n  }\n}\n";
    CAPTURE(os.str());
    Program p = parseProgram(os.str());
    CallGraph g = buildCallGraph(p);
    REQUIRE(g.sites().size() == static_cast<size_t>(n));
    for (const auto &s : g.sites()) {
      int owner = std::stoi(s.callee.owner.substr(1));
      std::set<std::string> expected;
      for (int j = 0; j < n; ++j)
        if (defines[j] && (j == owner || parent[j] == owner))
          expected.insert("<K" + std::to_string(j) + ": void m()>");
      CHECK(targetsOf(g, s) == expected);
      for (const auto &t : g.resolvedTargets(s)) {
        auto callers = g.callersOf(t);
        CHECK(std::find(callers.begin(), callers.end(), s) != callers.end());
      }
    }
    for (int j = 0; j < n; ++j)
      for (const auto &c : g.callersOf(parseMethodSig("<K" + std::to_string(j) + ": void m()>"))) {
        auto ts = targetsOf(g, c);
        CHECK(ts.count("<K" + std::to_string(j) + ": void m()>"));
      }
    CHECK(buildCallGraph(parseProgram(os.str())).dump() == g.dump());
  }
}

TEST_CASE("dump lists one line per edge and marks phantoms") {
  CallGraph g = buildCallGraph(fig1());
  std::string d = g.dump();
  CHECK(d.find("<PasswordEncryptor: byte[] encPass(java.lang.String[])> @16 -> "
               "<Crypto: byte[] encrypt(java.lang.String,java.lang.String)>") != std::string::npos);
  CHECK(d.find("phantom") != std::string::npos);
  CHECK(d == buildCallGraph(fig1()).dump());
}
