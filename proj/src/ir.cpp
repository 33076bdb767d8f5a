#include "cryptoslice/ir.h"

#include <sstream>

namespace cryptoslice {

const char *invokeKindName(InvokeKind kind) {
  switch (kind) {
  case InvokeKind::Static:
    return "static";
  case InvokeKind::Virtual:
    return "virtual";
  case InvokeKind::Special:
    return "special";
  case InvokeKind::Interface:
    return "interface";
  }
  return "?";
}

std::string MethodSig::subSignature() const {
  std::string s = name + "(";
  for (size_t i = 0; i < paramTypes.size(); ++i) {
    if (i)
      s += ",";
    s += paramTypes[i];
  }
  return s + ")";
}

std::string MethodSig::str() const {
  return "<" + owner + ": " + returnType + " " + subSignature() + ">";
}

Value Value::local(std::string name) {
  Value v;
  v.kind = Kind::Local;
  v.text = std::move(name);
  return v;
}

Value Value::string(std::string text) {
  Value v;
  v.kind = Kind::String;
  v.text = std::move(text);
  return v;
}

Value Value::integer(int64_t n) {
  Value v;
  v.kind = Kind::Int;
  v.num = n;
  return v;
}

Value Value::longInt(int64_t n) {
  Value v;
  v.kind = Kind::Long;
  v.num = n;
  return v;
}

Value Value::boolean(bool b) {
  Value v;
  v.kind = Kind::Bool;
  v.num = b ? 1 : 0;
  return v;
}

Value Value::character(uint32_t c) {
  Value v;
  v.kind = Kind::Char;
  v.num = c;
  return v;
}

Value Value::null() { return Value(); }

Value Value::instanceField(std::string base, std::string field) {
  Value v;
  v.kind = Kind::Field;
  v.owner = std::move(base);
  v.text = std::move(field);
  return v;
}

Value Value::staticFieldRef(std::string owner, std::string field) {
  Value v = instanceField(std::move(owner), std::move(field));
  v.staticField = true;
  return v;
}

Value Value::arrayRef(std::string base, Value index) {
  Value v;
  v.kind = Kind::Array;
  v.text = std::move(base);
  v.index = std::make_shared<const Value>(std::move(index));
  return v;
}

std::string Value::constantText() const {
  switch (kind) {
  case Kind::String:
    return text;
  case Kind::Int:
  case Kind::Long:
    return std::to_string(num);
  case Kind::Bool:
    return num ? "true" : "false";
  case Kind::Char:
    if (num < 128)
      return std::string(1, static_cast<char>(num));
    return "\\u" + std::to_string(num);
  case Kind::Null:
    return "null";
  default:
    return renderValue(*this);
  }
}

bool Value::operator==(const Value &o) const {
  if (kind != o.kind || text != o.text || num != o.num || owner != o.owner ||
      staticField != o.staticField)
    return false;
  if (static_cast<bool>(index) != static_cast<bool>(o.index))
    return false;
  return !index || *index == *o.index;
}

bool Expr::operator==(const Expr &o) const {
  if (kind != o.kind)
    return false;
  switch (kind) {
  case Kind::Value:
    return a == o.a;
  case Kind::New:
    return type == o.type;
  case Kind::Binary:
    return op == o.op && a == o.a && b == o.b;
  }
  return false;
}

bool Instruction::operator==(const Instruction &o) const {
  if (kind != o.kind)
    return false;
  switch (kind) {
  case Kind::Assign:
    return target == o.target && rhs == o.rhs;
  case Kind::Identity:
    return target == o.target && paramIndex == o.paramIndex;
  case Kind::Invoke:
    return invokeKind == o.invokeKind && base == o.base && callee == o.callee &&
           args == o.args && assignTarget == o.assignTarget;
  case Kind::NewArray:
    return target == o.target && elemType == o.elemType && size == o.size;
  case Kind::Return:
  case Kind::Throw:
    return value == o.value;
  case Kind::If:
    return left == o.left && cmp == o.cmp && right == o.right &&
           label == o.label;
  case Kind::Goto:
  case Kind::Label:
    return label == o.label;
  }
  return false;
}

bool MethodDef::operator==(const MethodDef &o) const {
  return sig == o.sig && isStatic == o.isStatic && body == o.body &&
         paramLocals == o.paramLocals;
}

const MethodDef *ClassDef::findMethod(const std::string &subSignature) const {
  for (const auto &m : methods)
    if (m.sig.subSignature() == subSignature)
      return &m;
  return nullptr;
}

const FieldDef *ClassDef::findField(const std::string &fieldName) const {
  for (const auto &f : fields)
    if (f.name == fieldName)
      return &f;
  return nullptr;
}

bool ClassDef::operator==(const ClassDef &o) const {
  return name == o.name && superclass == o.superclass &&
         interfaces == o.interfaces && fields == o.fields &&
         methods == o.methods && isPhantom == o.isPhantom;
}

const ClassDef *Program::findClass(const std::string &name) const {
  auto it = classes.find(name);
  return it == classes.end() ? nullptr : &it->second;
}

const MethodDef *Program::findMethod(const MethodSig &sig) const {
  const ClassDef *c = findClass(sig.owner);
  if (!c)
    return nullptr;
  const MethodDef *m = c->findMethod(sig.subSignature());
  if (m && m->sig.returnType != sig.returnType)
    return nullptr;
  return m;
}

ParseError::ParseError(std::string file, int line, int column,
                       const std::string &msg)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + msg),
      file_(std::move(file)), line_(line), column_(column) {}

// Rendering

static std::string quote(const std::string &s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
    case '"':
      out += "\\\"";
      break;
    case '\\':
      out += "\\\\";
      break;
    case '\n':
      out += "\\n";
      break;
    case '\t':
      out += "\\t";
      break;
    default:
      out += c;
    }
  }
  return out + "\"";
}

std::string renderValue(const Value &v) {
  switch (v.kind) {
  case Value::Kind::Local:
    return v.text;
  case Value::Kind::String:
    return quote(v.text);
  case Value::Kind::Int:
    return std::to_string(v.num);
  case Value::Kind::Long:
    return std::to_string(v.num) + "L";
  case Value::Kind::Bool:
    return v.num ? "true" : "false";
  case Value::Kind::Char: {
    char c = static_cast<char>(v.num);
    if (c == '\'')
      return "'\\''";
    if (c == '\\')
      return "'\\\\'";
    if (c == '\n')
      return "'\\n'";
    if (c == '\t')
      return "'\\t'";
    return std::string("'") + c + "'";
  }
  case Value::Kind::Null:
    return "null";
  case Value::Kind::Field:
    return v.owner + "." + v.text;
  case Value::Kind::Array:
    return v.text + "[" + renderValue(*v.index) + "]";
  }
  return "?";
}

static std::string renderInvoke(const Instruction &ins) {
  std::string s;
  switch (ins.invokeKind) {
  case InvokeKind::Static:
    s = "staticinvoke ";
    break;
  case InvokeKind::Special:
    s = "specialinvoke " + *ins.base + ".";
    break;
  case InvokeKind::Interface:
    s = "interfaceinvoke " + *ins.base + ".";
    break;
  case InvokeKind::Virtual:
    s = *ins.base + ".";
    break;
  }
  s += ins.callee.str() + "(";
  for (size_t i = 0; i < ins.args.size(); ++i) {
    if (i)
      s += ", ";
    s += renderValue(ins.args[i]);
  }
  return s + ")";
}

std::string renderInstruction(const Instruction &ins) {
  using K = Instruction::Kind;
  switch (ins.kind) {
  case K::Assign: {
    std::string rhs;
    switch (ins.rhs.kind) {
    case Expr::Kind::Value:
      rhs = renderValue(ins.rhs.a);
      break;
    case Expr::Kind::New:
      rhs = "new " + ins.rhs.type;
      break;
    case Expr::Kind::Binary:
      rhs = renderValue(ins.rhs.a) + " " + ins.rhs.op + " " +
            renderValue(ins.rhs.b);
      break;
    }
    return renderValue(ins.target) + " = " + rhs;
  }
  case K::Identity:
    return ins.target.text + " := param " + std::to_string(ins.paramIndex);
  case K::Invoke:
    if (ins.assignTarget)
      return *ins.assignTarget + " = " + renderInvoke(ins);
    return renderInvoke(ins);
  case K::NewArray:
    return ins.target.text + " = newarray " + ins.elemType + "[" +
           renderValue(ins.size) + "]";
  case K::Return:
    return ins.value ? "return " + renderValue(*ins.value) : "return";
  case K::Throw:
    return "throw " + renderValue(*ins.value);
  case K::If:
    return "if " + renderValue(ins.left) + " " + ins.cmp + " " +
           renderValue(ins.right) + " goto " + ins.label;
  case K::Goto:
    return "goto " + ins.label;
  case K::Label:
    return ins.label + ":";
  }
  return "";
}

static std::string renderMethodHeader(const MethodDef &m) {
  std::string s = m.isStatic ? "static method " : "method ";
  s += m.sig.returnType + " " + m.sig.name + "(";
  for (size_t i = 0; i < m.sig.paramTypes.size(); ++i) {
    if (i)
      s += ", ";
    s += m.sig.paramTypes[i];
  }
  return s + ")";
}

std::string renderProgram(const Program &program) {
  std::ostringstream os;
  bool first = true;
  for (const auto &[name, cls] : program.classes) {
    if (cls.isPhantom)
      continue;
    if (!first)
      os << "\n";
    first = false;
    os << "class " << name;
    if (cls.superclass)
      os << " extends " << *cls.superclass;
    if (!cls.interfaces.empty()) {
      os << " implements ";
      for (size_t i = 0; i < cls.interfaces.size(); ++i)
        os << (i ? ", " : "") << cls.interfaces[i];
    }
    os << " {\n";
    for (const auto &f : cls.fields)
      os << "  " << (f.isStatic ? "static " : "") << "field " << f.declaredType
         << " " << f.name << "\n";
    for (const auto &m : cls.methods) {
      os << "  " << renderMethodHeader(m);
      if (!m.body) {
        os << "\n";
        continue;
      }
      os << " {\n";
      for (const auto &ins : *m.body)
        os << (ins.kind == Instruction::Kind::Label ? "  " : "    ")
           << renderInstruction(ins) << "\n";
      os << "  }\n";
    }
    os << "}\n";
  }
  return os.str();
}

} // namespace cryptoslice
