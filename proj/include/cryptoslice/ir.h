// In-memory model of the three-address IR (TIR) consumed by every analysis.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cryptoslice {

enum class InvokeKind { Static, Virtual, Special, Interface };

const char *invokeKindName(InvokeKind kind);

struct MethodSig {
  std::string owner;
  std::string returnType;
  std::string name;
  std::vector<std::string> paramTypes;

  // "<owner: ret name(p1,p2)>"
  std::string str() const;
  // "name(p1,p2)", unique within a class
  std::string subSignature() const;

  bool operator==(const MethodSig &o) const {
    return owner == o.owner && returnType == o.returnType && name == o.name &&
           paramTypes == o.paramTypes;
  }
  bool operator!=(const MethodSig &o) const { return !(*this == o); }
  bool operator<(const MethodSig &o) const { return str() < o.str(); }
};

struct Value {
  enum class Kind { Local, String, Int, Long, Bool, Char, Null, Field, Array };

  Kind kind = Kind::Null;
  // Local name, string text, field name, or array base local.
  std::string text;
  // Int/Long value, Bool (0/1), Char code point.
  int64_t num = 0;
  // Field refs: base local (instance) or owner class (static).
  std::string owner;
  bool staticField = false;
  // Array refs: the index immediate.
  std::shared_ptr<const Value> index;

  static Value local(std::string name);
  static Value string(std::string text);
  static Value integer(int64_t v);
  static Value longInt(int64_t v);
  static Value boolean(bool v);
  static Value character(uint32_t c);
  static Value null();
  static Value instanceField(std::string base, std::string field);
  static Value staticFieldRef(std::string owner, std::string field);
  static Value arrayRef(std::string base, Value index);

  bool isConstant() const {
    return kind != Kind::Local && kind != Kind::Field && kind != Kind::Array;
  }
  bool isLocal() const { return kind == Kind::Local; }

  // Printable text of a constant without TIR quoting ("defaultkey", "42").
  std::string constantText() const;

  bool operator==(const Value &o) const;
  bool operator!=(const Value &o) const { return !(*this == o); }
};

struct Expr {
  enum class Kind { Value, New, Binary };
  Kind kind = Kind::Value;
  Value a;
  Value b;
  std::string op;   // Binary
  std::string type; // New

  bool operator==(const Expr &o) const;
};

struct Instruction {
  enum class Kind {
    Assign,
    Identity,
    Invoke,
    NewArray,
    Return,
    Throw,
    If,
    Goto,
    Label
  };

  Kind kind = Kind::Label;
  int line = 0;

  // Assign: target is a Local, Field or Array value. NewArray: target local.
  // Identity: target local bound to parameter paramIndex.
  Value target;
  Expr rhs;
  int paramIndex = -1;

  // Invoke
  InvokeKind invokeKind = InvokeKind::Static;
  std::optional<std::string> base;
  MethodSig callee;
  std::vector<Value> args;
  std::optional<std::string> assignTarget;

  // NewArray
  std::string elemType;
  Value size;

  // Return (optional) and Throw (required)
  std::optional<Value> value;

  // If / Goto / Label
  Value left;
  Value right;
  std::string cmp;
  std::string label;

  bool operator==(const Instruction &o) const;
  bool operator!=(const Instruction &o) const { return !(*this == o); }
};

struct FieldDef {
  std::string name;
  std::string declaredType;
  bool isStatic = false;
  int line = 0;

  bool operator==(const FieldDef &o) const {
    return name == o.name && declaredType == o.declaredType &&
           isStatic == o.isStatic;
  }
};

struct MethodDef {
  MethodSig sig;
  bool isStatic = false;
  std::optional<std::vector<Instruction>> body;
  std::vector<std::string> paramLocals;
  int line = 0;

  bool hasBody() const { return body.has_value(); }
  bool operator==(const MethodDef &o) const;
};

struct ClassDef {
  std::string name;
  std::optional<std::string> superclass;
  std::vector<std::string> interfaces;
  std::vector<FieldDef> fields;
  std::vector<MethodDef> methods;
  bool isPhantom = false;
  std::string file;
  int line = 0;

  const MethodDef *findMethod(const std::string &subSignature) const;
  const FieldDef *findField(const std::string &name) const;
  bool operator==(const ClassDef &o) const;
};

struct Program {
  std::map<std::string, ClassDef> classes;
  // Name of the manifest subproject set this program was assembled from.
  std::optional<std::string> manifest;

  const ClassDef *findClass(const std::string &name) const;
  const MethodDef *findMethod(const MethodSig &sig) const;
  bool operator==(const Program &o) const { return classes == o.classes; }
};

class ParseError : public std::runtime_error {
public:
  ParseError(std::string file, int line, int column, const std::string &msg);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string &file() const { return file_; }

private:
  std::string file_;
  int line_;
  int column_;
};

// Parses one TIR file. The result is linked: unresolved classes become
// phantom and all method bodies are validated.
Program parseProgram(const std::string &sourceText,
                     const std::string &fileName = "<input>");

// Parses defined classes only, without linking.
std::vector<ClassDef> parseClasses(const std::string &sourceText,
                                   const std::string &fileName);

// Merges defined classes into a Program, registering phantom classes for every
// unresolved reference. Throws ParseError on duplicate classes.
Program linkProgram(std::vector<ClassDef> defined);

// Parses "<owner: ret name(p1,p2)>"; throws ParseError.
MethodSig parseMethodSig(const std::string &text);

std::string renderProgram(const Program &program);
std::string renderInstruction(const Instruction &ins);
std::string renderValue(const Value &v);

} // namespace cryptoslice
