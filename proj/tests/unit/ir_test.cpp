#include "helpers.h"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace cryptoslice;
using cryptoslice::testing::fixture;

namespace {

const char *kAllVariants = R"(class Base {
}

class Shape extends Base implements java.io.Serializable, java.lang.Cloneable {
  field byte[] data
  static field java.lang.String NAME
  static method void <clinit>() {
    Shape.NAME = "sh\"ape\\"
    return
  }
  method long mix(int,java.lang.Object) {
    r0 := param 0
    r1 := param 1
    b0 = true
    c0 = 'x'
    l0 = 42L
    n0 = null
    i0 = r0 + 7
    a0 = newarray byte[8]
    a0[0] = 48
    a0[r0] = i0
    i1 = a0[1]
    this.data = a0
    r2 = this.data
    r3 = Shape.NAME
    r4 = new java.lang.StringBuilder
    specialinvoke r4.<java.lang.StringBuilder: void <init>(java.lang.String)>(r3)
    r5 = r4.<java.lang.StringBuilder: java.lang.String toString()>()
    r6 = interfaceinvoke r1.<java.util.Map: java.lang.Object get(java.lang.Object)>(r5)
    r7 = staticinvoke <java.lang.String: java.lang.String valueOf(long)>(l0)
    r4.<java.lang.StringBuilder: java.lang.StringBuilder append(char)>(c0)
    if r6 == null goto L1
    if i0 >= 3 goto L2
    goto L2
  L1:
    r8 = new java.lang.IllegalStateException
    throw r8
  L2:
    return l0
  }
  method void nothing() {
    return
  }
}
)";

std::string slurp(const std::string &path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void expectParseError(const std::string &text, const std::string &fragment) {
  try {
    parseProgram(text);
    FAIL("expected a parse error containing: " << fragment);
  } catch (const ParseError &e) {
    CHECK(std::string(e.what()).find(fragment) != std::string::npos);
  }
}

} // namespace

TEST_CASE("fig1 example parses into its two classes") {
  Program p = parseProgram(slurp(fixture("fig1.tir")), "fig1.tir");
  const ClassDef *enc = p.findClass("PasswordEncryptor");
  const ClassDef *crypto = p.findClass("Crypto");
  REQUIRE(enc);
  REQUIRE(crypto);
  CHECK_FALSE(enc->isPhantom);
  CHECK(enc->methods.size() == 3);
  CHECK(crypto->methods.size() == 2);
  CHECK(crypto->fields.size() == 4);
  // Referenced library owners become phantom classes without bodies.
  const ClassDef *cipher = p.findClass("javax.crypto.Cipher");
  REQUIRE(cipher);
  CHECK(cipher->isPhantom);
  for (const auto &m : cipher->methods)
    CHECK_FALSE(m.hasBody());
}

TEST_CASE("empty input yields no classes") {
  CHECK(parseProgram("").classes.empty());
  CHECK(parseProgram("# only a comment\n\n").classes.empty());
}

TEST_CASE("an absent superclass is registered as phantom") {
  Program p = parseProgram("class A extends Missing {\n}\n");
  REQUIRE(p.findClass("Missing"));
  CHECK(p.findClass("Missing")->isPhantom);
  CHECK(p.findClass("A")->superclass == std::optional<std::string>("Missing"));
}

TEST_CASE("identity bindings populate paramLocals") {
  Program p = parseProgram(kAllVariants);
  const MethodDef *m = p.findClass("Shape")->findMethod("mix(int,java.lang.Object)");
  REQUIRE(m);
  CHECK(m->paramLocals == std::vector<std::string>{"r0", "r1"});
}

TEST_CASE("render/parse round-trip") {
  for (std::string text : {slurp(fixture("fig1.tir")), std::string(kAllVariants),
                           std::string("class Empty {\n}\n"),
                           slurp(fixture("iteration_guard.tir")),
                           slurp(fixture("hex_key.tir"))}) {
    Program p = parseProgram(text);
    std::string rendered = renderProgram(p);
    Program q = parseProgram(rendered);
    CHECK(q == p);
    CHECK(renderProgram(q) == rendered);
  }
  Program single = parseProgram("class Empty {\n}\n");
  CHECK(single.classes.size() == 1);
  CHECK(parseProgram(renderProgram(single)).findClass("Empty")->methods.empty());
}

TEST_CASE("every instruction variant survives the round-trip") {
  Program p = parseProgram(kAllVariants);
  std::set<Instruction::Kind> kinds;
  for (const auto &ins : *p.findClass("Shape")->findMethod("mix(int,java.lang.Object)")->body)
    kinds.insert(ins.kind);
  CHECK(kinds.size() == 9);
  CHECK(parseProgram(renderProgram(p)) == p);
}

TEST_CASE("parse errors carry position and reason") {
  SUBCASE("syntax") {
    try {
      parseProgram("class A {\n  method void m() {\n    r0 = = 1\n  }\n}\n", "bad.tir");
      FAIL("no error");
    } catch (const ParseError &e) {
      CHECK(e.file() == "bad.tir");
      CHECK(e.line() == 3);
      CHECK(e.column() > 0);
    }
  }
  SUBCASE("duplicate class") {
    expectParseError("class A {\n}\nclass A {\n}\n", "duplicate");
  }
  SUBCASE("undefined label") {
    expectParseError("class A {\n  method void m() {\n    goto L9\n  }\n}\n", "undefined label");
  }
  SUBCASE("duplicate label") {
    expectParseError("class A {\n  method void m() {\n  L1:\n  L1:\n    return\n  }\n}\n",
                     "duplicate label");
  }
  SUBCASE("use before definition") {
    expectParseError("class A {\n  method void m() {\n    r1 = r0\n    return\n  }\n}\n",
                     "before definition");
  }
  SUBCASE("static invoke with a base") {
    CHECK_THROWS_AS(parseProgram("class A {\n  method void m() {\n    r0 = null\n"
                                 "    staticinvoke r0.<A: void m()>()\n    return\n  }\n}\n"),
                    ParseError);
  }
}

TEST_CASE("deleting any structural token makes the file invalid") {
  const std::string text = slurp(fixture("fig1.tir"));
  Program reference = parseProgram(text);
  size_t mutants = 0;
  for (const std::string tok : {"{", "}", "(", ")", "<", ">", ":=", "goto", "=", ":"}) {
    for (size_t pos = text.find(tok); pos != std::string::npos;
         pos = text.find(tok, pos + 1)) {
      // Skip occurrences inside comments or string literals and longer tokens.
      size_t lineStart = text.rfind('\n', pos) + 1;
      std::string before = text.substr(lineStart, pos - lineStart);
      if (before.find('#') != std::string::npos ||
          std::count(before.begin(), before.end(), '"') % 2 == 1)
        continue;
      if (tok == std::string("=") && (text[pos + 1] == '=' || text[pos - 1] == '=' ||
                                      text[pos - 1] == '!' || text[pos - 1] == ':'))
        continue;
      std::string mutant = text;
      mutant.erase(pos, std::string(tok).size());
      CAPTURE(tok);
      CAPTURE(pos);
      CHECK_THROWS_AS(parseProgram(mutant), ParseError);
      ++mutants;
    }
  }
  CHECK(mutants > 100);
}
