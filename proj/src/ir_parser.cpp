#include "cryptoslice/ir.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>

namespace cryptoslice {
namespace {

struct Token {
  enum class Kind { Ident, Number, String, Char, Punct };
  Kind kind;
  std::string text;
  int col = 0;
  int64_t num = 0;
  bool isLong = false;
};

bool isIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool isIdentChar(char c) {
  return isIdentStart(c) || std::isdigit(static_cast<unsigned char>(c));
}

const std::set<std::string> kKeywords = {
    "class",        "extends",       "implements",      "field",
    "method",       "static",        "staticinvoke",    "specialinvoke",
    "virtualinvoke", "interfaceinvoke", "newarray",     "new",
    "if",           "goto",          "return",          "throw",
    "param",        "true",          "false",           "null"};

class LineLexer {
public:
  LineLexer(const std::string &file, int line, const std::string &text)
      : file_(file), line_(line), s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s_.size()) {
      char c = s_[i];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      if (c == '#')
        break;
      int col = static_cast<int>(i) + 1;
      if (isIdentStart(c)) {
        size_t j = i;
        while (j < s_.size() && isIdentChar(s_[j]))
          ++j;
        out.push_back({Token::Kind::Ident, s_.substr(i, j - i), col});
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j])))
          ++j;
        Token t{Token::Kind::Number, s_.substr(i, j - i), col};
        if (t.text.size() > 19)
          fail(col, "integer literal out of range");
        unsigned long long v = std::stoull(t.text);
        if (v > static_cast<unsigned long long>(
                    std::numeric_limits<int64_t>::max()))
          fail(col, "integer literal out of range");
        t.num = static_cast<int64_t>(v);
        if (j < s_.size() && s_[j] == 'L') {
          t.isLong = true;
          ++j;
        }
        if (j < s_.size() && isIdentChar(s_[j]))
          fail(static_cast<int>(j) + 1, "malformed number");
        out.push_back(t);
        i = j;
        continue;
      }
      if (c == '"') {
        std::string text;
        size_t j = i + 1;
        bool closed = false;
        while (j < s_.size()) {
          char d = s_[j];
          if (d == '"') {
            closed = true;
            ++j;
            break;
          }
          if (d == '\\') {
            if (j + 1 >= s_.size())
              break;
            text += unescape(s_[j + 1], static_cast<int>(j) + 1);
            j += 2;
            continue;
          }
          text += d;
          ++j;
        }
        if (!closed)
          fail(col, "unterminated string literal");
        out.push_back({Token::Kind::String, text, col});
        i = j;
        continue;
      }
      if (c == '\'') {
        size_t j = i + 1;
        if (j >= s_.size())
          fail(col, "unterminated char literal");
        char v;
        if (s_[j] == '\\') {
          if (j + 1 >= s_.size())
            fail(col, "unterminated char literal");
          v = unescape(s_[j + 1], static_cast<int>(j) + 1);
          j += 2;
        } else {
          v = s_[j];
          ++j;
        }
        if (j >= s_.size() || s_[j] != '\'')
          fail(col, "unterminated char literal");
        Token t{Token::Kind::Char, std::string(1, v), col};
        t.num = static_cast<unsigned char>(v);
        out.push_back(t);
        i = j + 1;
        continue;
      }
      static const char *two[] = {":=", "==", "!=", "<=", ">="};
      bool matched = false;
      for (const char *p : two) {
        if (s_.compare(i, 2, p) == 0) {
          out.push_back({Token::Kind::Punct, p, col});
          i += 2;
          matched = true;
          break;
        }
      }
      if (matched)
        continue;
      if (std::string("{}()<>[],:=.+-*/%&|^").find(c) != std::string::npos) {
        out.push_back({Token::Kind::Punct, std::string(1, c), col});
        ++i;
        continue;
      }
      fail(col, std::string("unexpected character '") + c + "'");
    }
    return out;
  }

private:
  char unescape(char e, int col) {
    switch (e) {
    case '"':
      return '"';
    case '\\':
      return '\\';
    case '\'':
      return '\'';
    case 'n':
      return '\n';
    case 't':
      return '\t';
    default:
      fail(col, std::string("unknown escape '\\") + e + "'");
    }
    return 0;
  }

  [[noreturn]] void fail(int col, const std::string &msg) {
    throw ParseError(file_, line_, col, msg);
  }

  const std::string &file_;
  int line_;
  const std::string &s_;
};

struct SourceLine {
  int line;
  std::vector<Token> toks;
};

// Cursor over the tokens of one line.
class Cursor {
public:
  Cursor(const std::string &file, const SourceLine &l,
         const std::set<std::string> *locals = nullptr)
      : file_(file), l_(l), locals_(locals) {}

  bool atEnd() const { return pos_ >= l_.toks.size(); }
  const Token *peek(size_t ahead = 0) const {
    return pos_ + ahead < l_.toks.size() ? &l_.toks[pos_ + ahead] : nullptr;
  }
  bool isPunct(const char *p, size_t ahead = 0) const {
    const Token *t = peek(ahead);
    return t && t->kind == Token::Kind::Punct && t->text == p;
  }
  bool isWord(const char *w, size_t ahead = 0) const {
    const Token *t = peek(ahead);
    return t && t->kind == Token::Kind::Ident && t->text == w;
  }
  bool adjacent(size_t a) const {
    const Token *x = peek(a), *y = peek(a + 1);
    return x && y &&
           y->col == x->col + static_cast<int>(x->text.size());
  }

  const Token &next() {
    if (atEnd())
      fail("unexpected end of line");
    return l_.toks[pos_++];
  }
  void expectPunct(const char *p) {
    if (!isPunct(p))
      fail(std::string("expected '") + p + "'");
    ++pos_;
  }
  void expectWord(const char *w) {
    if (!isWord(w))
      fail(std::string("expected '") + w + "'");
    ++pos_;
  }
  void expectEnd() {
    if (!atEnd())
      fail("unexpected token '" + peek()->text + "'");
  }

  std::string ident() {
    const Token *t = peek();
    if (!t || t->kind != Token::Kind::Ident)
      fail("expected identifier");
    if (kKeywords.count(t->text))
      fail("unexpected keyword '" + t->text + "'");
    ++pos_;
    return t->text;
  }

  std::string qname() {
    std::string s = ident();
    while (isPunct(".") && peek(1) && peek(1)->kind == Token::Kind::Ident) {
      ++pos_;
      s += "." + ident();
    }
    return s;
  }

  std::string type() {
    std::string s = qname();
    while (isPunct("[")) {
      ++pos_;
      expectPunct("]");
      s += "[]";
    }
    return s;
  }

  // `<init>`, `<clinit>` or a plain identifier.
  std::string methodName() {
    if (isPunct("<")) {
      ++pos_;
      std::string n = ident();
      if (n != "init" && n != "clinit")
        fail("expected <init> or <clinit>");
      expectPunct(">");
      return "<" + n + ">";
    }
    return ident();
  }

  std::vector<std::string> typeList() {
    std::vector<std::string> out;
    expectPunct("(");
    if (isPunct(")")) {
      ++pos_;
      return out;
    }
    while (true) {
      out.push_back(type());
      if (isPunct(",")) {
        ++pos_;
        continue;
      }
      expectPunct(")");
      return out;
    }
  }

  MethodSig signature() {
    MethodSig sig;
    expectPunct("<");
    sig.owner = qname();
    expectPunct(":");
    sig.returnType = type();
    sig.name = methodName();
    sig.paramTypes = typeList();
    expectPunct(">");
    return sig;
  }

  Value immediate() {
    Value v = value();
    if (v.kind == Value::Kind::Field || v.kind == Value::Kind::Array)
      failAt(lastCol_, "expected local or constant");
    return v;
  }

  Value value() {
    const Token *t = peek();
    if (!t)
      fail("expected value");
    lastCol_ = t->col;
    switch (t->kind) {
    case Token::Kind::String:
      ++pos_;
      return Value::string(t->text);
    case Token::Kind::Char:
      ++pos_;
      return Value::character(static_cast<uint32_t>(t->num));
    case Token::Kind::Number:
      ++pos_;
      return t->isLong ? Value::longInt(t->num) : Value::integer(t->num);
    case Token::Kind::Punct:
      if (t->text == "-" && peek(1) && peek(1)->kind == Token::Kind::Number &&
          adjacent(0)) {
        ++pos_;
        const Token &n = next();
        return n.isLong ? Value::longInt(-n.num) : Value::integer(-n.num);
      }
      fail("expected value");
    case Token::Kind::Ident:
      break;
    }
    if (t->text == "true" || t->text == "false") {
      ++pos_;
      return Value::boolean(t->text == "true");
    }
    if (t->text == "null") {
      ++pos_;
      return Value::null();
    }
    std::vector<std::string> parts{ident()};
    while (isPunct(".") && peek(1) && peek(1)->kind == Token::Kind::Ident) {
      ++pos_;
      parts.push_back(ident());
    }
    if (parts.size() == 1) {
      if (isPunct("[")) {
        ++pos_;
        Value idx = immediate();
        expectPunct("]");
        return Value::arrayRef(parts[0], idx);
      }
      return Value::local(parts[0]);
    }
    std::string field = parts.back();
    parts.pop_back();
    if (parts.size() == 1 && locals_ && locals_->count(parts[0]))
      return Value::instanceField(parts[0], field);
    std::string owner = parts[0];
    for (size_t i = 1; i < parts.size(); ++i)
      owner += "." + parts[i];
    return Value::staticFieldRef(owner, field);
  }

  int col() const { return atEnd() ? lastTokenEnd() : peek()->col; }

  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError(file_, l_.line, col(), msg);
  }
  [[noreturn]] void failAt(int col, const std::string &msg) const {
    throw ParseError(file_, l_.line, col, msg);
  }

private:
  int lastTokenEnd() const {
    if (l_.toks.empty())
      return 1;
    const Token &t = l_.toks.back();
    return t.col + static_cast<int>(t.text.size());
  }

  const std::string &file_;
  const SourceLine &l_;
  const std::set<std::string> *locals_;
  size_t pos_ = 0;
  int lastCol_ = 1;
};

bool startsInvoke(const Cursor &c) {
  return c.isWord("staticinvoke") || c.isWord("specialinvoke") ||
         c.isWord("interfaceinvoke") || c.isWord("virtualinvoke") ||
         (c.peek() && c.peek()->kind == Token::Kind::Ident && c.isPunct(".", 1) &&
          c.isPunct("<", 2));
}

void parseInvoke(Cursor &c, Instruction &ins) {
  ins.kind = Instruction::Kind::Invoke;
  if (c.isWord("staticinvoke")) {
    c.next();
    ins.invokeKind = InvokeKind::Static;
    if (c.peek() && c.peek()->kind == Token::Kind::Ident)
      c.fail("staticinvoke takes no base");
  } else {
    if (c.isWord("specialinvoke")) {
      ins.invokeKind = InvokeKind::Special;
      c.next();
    } else if (c.isWord("interfaceinvoke")) {
      ins.invokeKind = InvokeKind::Interface;
      c.next();
    } else {
      if (c.isWord("virtualinvoke"))
        c.next();
      ins.invokeKind = InvokeKind::Virtual;
    }
    ins.base = c.ident();
    c.expectPunct(".");
  }
  int sigCol = c.col();
  ins.callee = c.signature();
  c.expectPunct("(");
  if (!c.isPunct(")")) {
    while (true) {
      ins.args.push_back(c.immediate());
      if (c.isPunct(",")) {
        c.next();
        continue;
      }
      break;
    }
  }
  c.expectPunct(")");
  c.expectEnd();
  if (ins.args.size() != ins.callee.paramTypes.size())
    c.failAt(sigCol, "argument count does not match signature");
}

const std::set<std::string> kBinaryOps = {"+", "-", "*", "/", "%",
                                          "&", "|", "^", "<<", ">>"};
const std::set<std::string> kCmpOps = {"==", "!=", "<", "<=", ">", ">="};

std::string binaryOp(Cursor &c) {
  const Token *t = c.peek();
  if (!t || t->kind != Token::Kind::Punct)
    return "";
  if ((t->text == "<" || t->text == ">") && c.isPunct(t->text.c_str(), 1) &&
      c.adjacent(0)) {
    std::string op = t->text + t->text;
    c.next();
    c.next();
    return op;
  }
  if (kBinaryOps.count(t->text)) {
    c.next();
    return t->text;
  }
  return "";
}

Instruction parseInstruction(const std::string &file, const SourceLine &l,
                             const std::set<std::string> &locals) {
  Cursor c(file, l, &locals);
  Instruction ins;
  ins.line = l.line;

  if (l.toks.size() == 2 && l.toks[0].kind == Token::Kind::Ident &&
      c.isPunct(":", 1)) {
    ins.kind = Instruction::Kind::Label;
    ins.label = c.ident();
    return ins;
  }
  if (c.isWord("goto")) {
    c.next();
    ins.kind = Instruction::Kind::Goto;
    ins.label = c.ident();
    c.expectEnd();
    return ins;
  }
  if (c.isWord("if")) {
    c.next();
    ins.kind = Instruction::Kind::If;
    ins.left = c.immediate();
    const Token *op = c.peek();
    if (!op || op->kind != Token::Kind::Punct || !kCmpOps.count(op->text))
      c.fail("expected comparison operator");
    ins.cmp = c.next().text;
    ins.right = c.immediate();
    c.expectWord("goto");
    ins.label = c.ident();
    c.expectEnd();
    return ins;
  }
  if (c.isWord("return")) {
    c.next();
    ins.kind = Instruction::Kind::Return;
    if (!c.atEnd())
      ins.value = c.immediate();
    c.expectEnd();
    return ins;
  }
  if (c.isWord("throw")) {
    c.next();
    ins.kind = Instruction::Kind::Throw;
    ins.value = c.immediate();
    c.expectEnd();
    return ins;
  }
  if (startsInvoke(c)) {
    parseInvoke(c, ins);
    return ins;
  }

  int lhsCol = c.col();
  Value lhs = c.value();
  if (lhs.isConstant())
    c.failAt(lhsCol, "assignment target must be a local, field or array cell");
  if (c.isPunct(":=")) {
    c.next();
    if (!lhs.isLocal())
      c.failAt(lhsCol, "parameter binding requires a local");
    c.expectWord("param");
    const Token &n = c.next();
    if (n.kind != Token::Kind::Number || n.isLong)
      c.failAt(n.col, "expected parameter index");
    c.expectEnd();
    ins.kind = Instruction::Kind::Identity;
    ins.target = lhs;
    ins.paramIndex = static_cast<int>(n.num);
    return ins;
  }
  c.expectPunct("=");
  if (c.isWord("newarray")) {
    c.next();
    if (!lhs.isLocal())
      c.failAt(lhsCol, "newarray target must be a local");
    ins.kind = Instruction::Kind::NewArray;
    ins.target = lhs;
    ins.elemType = c.qname();
    c.expectPunct("[");
    ins.size = c.immediate();
    c.expectPunct("]");
    c.expectEnd();
    return ins;
  }
  if (c.isWord("new")) {
    c.next();
    if (!lhs.isLocal())
      c.failAt(lhsCol, "new target must be a local");
    ins.kind = Instruction::Kind::Assign;
    ins.target = lhs;
    ins.rhs.kind = Expr::Kind::New;
    ins.rhs.type = c.qname();
    c.expectEnd();
    return ins;
  }
  if (startsInvoke(c)) {
    if (!lhs.isLocal())
      c.failAt(lhsCol, "invoke result must be assigned to a local");
    parseInvoke(c, ins);
    ins.assignTarget = lhs.text;
    return ins;
  }
  ins.kind = Instruction::Kind::Assign;
  ins.target = lhs;
  int rhsCol = c.col();
  ins.rhs.a = c.value();
  bool rhsRef = !ins.rhs.a.isConstant() && !ins.rhs.a.isLocal();
  if (rhsRef && !lhs.isLocal())
    c.failAt(rhsCol, "memory-to-memory assignment");
  if (!c.atEnd()) {
    std::string op = binaryOp(c);
    if (op.empty())
      c.fail("unexpected token '" + c.peek()->text + "'");
    if (rhsRef)
      c.failAt(rhsCol, "binary operands must be locals or constants");
    if (!lhs.isLocal())
      c.failAt(lhsCol, "binary result must be assigned to a local");
    ins.rhs.kind = Expr::Kind::Binary;
    ins.rhs.op = op;
    ins.rhs.b = c.immediate();
  }
  c.expectEnd();
  return ins;
}

// Locals read by an instruction, for the use-before-def check.
void readLocals(const Instruction &ins, std::vector<std::string> &out) {
  auto val = [&](const Value &v) {
    switch (v.kind) {
    case Value::Kind::Local:
      out.push_back(v.text);
      break;
    case Value::Kind::Field:
      if (!v.staticField)
        out.push_back(v.owner);
      break;
    case Value::Kind::Array:
      out.push_back(v.text);
      if (v.index->isLocal())
        out.push_back(v.index->text);
      break;
    default:
      break;
    }
  };
  using K = Instruction::Kind;
  switch (ins.kind) {
  case K::Assign:
    if (ins.target.kind != Value::Kind::Local)
      val(ins.target);
    if (ins.rhs.kind != Expr::Kind::New)
      val(ins.rhs.a);
    if (ins.rhs.kind == Expr::Kind::Binary)
      val(ins.rhs.b);
    break;
  case K::Invoke:
    if (ins.base)
      out.push_back(*ins.base);
    for (const auto &a : ins.args)
      val(a);
    break;
  case K::NewArray:
    val(ins.size);
    break;
  case K::Return:
  case K::Throw:
    if (ins.value)
      val(*ins.value);
    break;
  case K::If:
    val(ins.left);
    val(ins.right);
    break;
  default:
    break;
  }
}

void validateMethod(const std::string &file, MethodDef &m) {
  auto &body = *m.body;
  std::map<std::string, int> labels;
  for (const auto &ins : body) {
    if (ins.kind != Instruction::Kind::Label)
      continue;
    if (!labels.emplace(ins.label, ins.line).second)
      throw ParseError(file, ins.line, 1, "duplicate label " + ins.label);
  }
  m.paramLocals.assign(m.sig.paramTypes.size(), "");
  std::set<std::string> defined{"this"};
  for (const auto &ins : body) {
    if ((ins.kind == Instruction::Kind::Goto ||
         ins.kind == Instruction::Kind::If) &&
        !labels.count(ins.label))
      throw ParseError(file, ins.line, 1, "undefined label " + ins.label);
    std::vector<std::string> reads;
    readLocals(ins, reads);
    for (const auto &r : reads)
      if (!defined.count(r))
        throw ParseError(file, ins.line, 1,
                         "local " + r + " used before definition");
    if (ins.kind == Instruction::Kind::Identity) {
      if (ins.paramIndex < 0 ||
          ins.paramIndex >= static_cast<int>(m.sig.paramTypes.size()))
        throw ParseError(file, ins.line, 1, "parameter index out of range");
      if (!m.paramLocals[ins.paramIndex].empty())
        throw ParseError(file, ins.line, 1, "parameter bound twice");
      m.paramLocals[ins.paramIndex] = ins.target.text;
    }
    if (ins.kind == Instruction::Kind::Invoke && ins.assignTarget)
      defined.insert(*ins.assignTarget);
    if ((ins.kind == Instruction::Kind::Assign ||
         ins.kind == Instruction::Kind::Identity ||
         ins.kind == Instruction::Kind::NewArray) &&
        ins.target.isLocal())
      defined.insert(ins.target.text);
  }
}

class FileParser {
public:
  FileParser(const std::string &text, const std::string &file) : file_(file) {
    std::istringstream in(text);
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
      ++n;
      SourceLine l{n, LineLexer(file_, n, raw).run()};
      if (!l.toks.empty())
        lines_.push_back(std::move(l));
    }
    lastLine_ = n;
  }

  std::vector<ClassDef> run() {
    std::vector<ClassDef> out;
    std::set<std::string> seen;
    while (pos_ < lines_.size()) {
      ClassDef c = parseClass();
      if (!seen.insert(c.name).second)
        throw ParseError(file_, c.line, 1, "duplicate class " + c.name);
      out.push_back(std::move(c));
    }
    return out;
  }

private:
  ClassDef parseClass() {
    const SourceLine &l = lines_[pos_++];
    Cursor c(file_, l);
    ClassDef cls;
    cls.file = file_;
    cls.line = l.line;
    c.expectWord("class");
    cls.name = c.qname();
    if (c.isWord("extends")) {
      c.next();
      cls.superclass = c.qname();
    }
    if (c.isWord("implements")) {
      c.next();
      cls.interfaces.push_back(c.qname());
      while (c.isPunct(",")) {
        c.next();
        cls.interfaces.push_back(c.qname());
      }
    }
    c.expectPunct("{");
    c.expectEnd();
    while (true) {
      if (pos_ >= lines_.size())
        throw ParseError(file_, lastLine_ + 1, 1,
                         "unexpected end of input in class " + cls.name);
      const SourceLine &m = lines_[pos_];
      Cursor mc(file_, m);
      if (mc.isPunct("}")) {
        mc.next();
        mc.expectEnd();
        ++pos_;
        return cls;
      }
      bool isStatic = false;
      if (mc.isWord("static")) {
        mc.next();
        isStatic = true;
      }
      if (mc.isWord("field")) {
        mc.next();
        FieldDef f;
        f.isStatic = isStatic;
        f.line = m.line;
        f.declaredType = mc.type();
        f.name = mc.ident();
        mc.expectEnd();
        if (cls.findField(f.name))
          throw ParseError(file_, m.line, 1, "duplicate field " + f.name);
        cls.fields.push_back(f);
        ++pos_;
        continue;
      }
      if (mc.isWord("method")) {
        mc.next();
        MethodDef md;
        md.isStatic = isStatic;
        md.line = m.line;
        md.sig.owner = cls.name;
        md.sig.returnType = mc.type();
        md.sig.name = mc.methodName();
        md.sig.paramTypes = mc.typeList();
        bool hasBody = false;
        if (mc.isPunct("{")) {
          mc.next();
          hasBody = true;
        }
        mc.expectEnd();
        ++pos_;
        if (cls.findMethod(md.sig.subSignature()))
          throw ParseError(file_, m.line, 1,
                           "duplicate method " + md.sig.subSignature());
        if (hasBody)
          md.body = parseBody();
        else
          md.paramLocals.assign(md.sig.paramTypes.size(), "");
        if (md.body)
          validateMethod(file_, md);
        cls.methods.push_back(std::move(md));
        continue;
      }
      mc.fail("expected field, method or '}'");
    }
  }

  std::vector<Instruction> parseBody() {
    size_t start = pos_;
    while (pos_ < lines_.size()) {
      const SourceLine &l = lines_[pos_];
      if (l.toks.size() == 1 && l.toks[0].kind == Token::Kind::Punct &&
          l.toks[0].text == "}")
        break;
      ++pos_;
    }
    if (pos_ >= lines_.size())
      throw ParseError(file_, lastLine_ + 1, 1,
                       "unexpected end of input in method body");
    size_t end = pos_++;
    std::set<std::string> locals{"this"};
    for (size_t i = start; i < end; ++i) {
      const auto &t = lines_[i].toks;
      if (t.size() > 1 && t[0].kind == Token::Kind::Ident &&
          t[1].kind == Token::Kind::Punct &&
          (t[1].text == "=" || t[1].text == ":=" || t[1].text == "["))
        locals.insert(t[0].text);
    }
    std::vector<Instruction> body;
    for (size_t i = start; i < end; ++i)
      body.push_back(parseInstruction(file_, lines_[i], locals));
    return body;
  }

  std::string file_;
  std::vector<SourceLine> lines_;
  size_t pos_ = 0;
  int lastLine_ = 0;
};

ClassDef &phantom(Program &p, const std::string &name) {
  auto it = p.classes.find(name);
  if (it != p.classes.end())
    return it->second;
  ClassDef c;
  c.name = name;
  c.isPhantom = true;
  return p.classes.emplace(name, std::move(c)).first->second;
}

} // namespace

std::vector<ClassDef> parseClasses(const std::string &sourceText,
                                   const std::string &fileName) {
  return FileParser(sourceText, fileName).run();
}

Program linkProgram(std::vector<ClassDef> defined) {
  Program p;
  for (auto &c : defined) {
    std::string name = c.name;
    std::string file = c.file;
    int line = c.line;
    if (!p.classes.emplace(name, std::move(c)).second)
      throw ParseError(file, line, 1, "duplicate class " + name);
  }
  std::vector<std::string> names;
  for (const auto &[n, c] : p.classes)
    names.push_back(n);
  for (const auto &n : names) {
    // Copy the references first: phantom() may rehash the map.
    ClassDef snapshot = p.classes.at(n);
    if (snapshot.superclass)
      phantom(p, *snapshot.superclass);
    for (const auto &i : snapshot.interfaces)
      phantom(p, i);
    for (const auto &m : snapshot.methods) {
      if (!m.body)
        continue;
      for (const auto &ins : *m.body) {
        auto fieldOwner = [&](const Value &v) {
          if (v.kind == Value::Kind::Field && v.staticField)
            phantom(p, v.owner);
        };
        fieldOwner(ins.target);
        fieldOwner(ins.rhs.a);
        if (ins.kind != Instruction::Kind::Invoke)
          continue;
        ClassDef &owner = phantom(p, ins.callee.owner);
        if (!owner.isPhantom)
          continue;
        if (!owner.findMethod(ins.callee.subSignature())) {
          MethodDef md;
          md.sig = ins.callee;
          md.isStatic = ins.invokeKind == InvokeKind::Static;
          md.paramLocals.assign(md.sig.paramTypes.size(), "");
          owner.methods.push_back(std::move(md));
        }
      }
    }
  }
  for (auto &[n, c] : p.classes)
    if (c.isPhantom)
      std::sort(c.methods.begin(), c.methods.end(),
                [](const MethodDef &a, const MethodDef &b) {
                  return a.sig.str() < b.sig.str();
                });
  return p;
}

Program parseProgram(const std::string &sourceText,
                     const std::string &fileName) {
  return linkProgram(parseClasses(sourceText, fileName));
}

MethodSig parseMethodSig(const std::string &text) {
  SourceLine l{1, LineLexer("<signature>", 1, text).run()};
  Cursor c("<signature>", l);
  MethodSig sig = c.signature();
  c.expectEnd();
  return sig;
}

} // namespace cryptoslice
