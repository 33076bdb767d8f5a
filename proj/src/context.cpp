#include "cryptoslice/context.h"

#include <set>

namespace cryptoslice {

AnalysisContext::AnalysisContext(Program program)
    : program_(std::make_shared<const Program>(std::move(program))),
      graph_(buildCallGraph(*program_)) {
  for (const auto &[name, c] : program_->classes)
    for (const auto &m : c.methods)
      if (m.body) {
        bodies_.push_back(m.sig);
        defUse_.emplace(m.sig.str(), std::make_unique<DefUseGraph>(m));
      }
  for (const auto &sig : bodies_) {
    const MethodDef *m = method(sig);
    for (size_t i = 0; i < m->body->size(); ++i) {
      const Instruction &ins = (*m->body)[i];
      if (ins.kind != Instruction::Kind::Assign ||
          ins.target.kind != Value::Kind::Field)
        continue;
      for (const auto &k : fieldKeys(sig, ins.target))
        stores_[k].push_back({sig, static_cast<int>(i)});
    }
  }
}

const MethodDef *AnalysisContext::method(const MethodSig &sig) const {
  return program_->findMethod(sig);
}

const DefUseGraph &AnalysisContext::defUse(const MethodSig &sig) const {
  auto it = defUse_.find(sig.str());
  if (it == defUse_.end())
    throw std::invalid_argument("no body: " + sig.str());
  return *it->second;
}

FieldKey AnalysisContext::declaringField(const std::string &cls,
                                         const std::string &field) const {
  std::set<std::string> seen;
  std::string cur = cls;
  while (seen.insert(cur).second) {
    const ClassDef *c = program_->findClass(cur);
    if (!c)
      break;
    if (c->findField(field))
      return {cur, field};
    if (!c->superclass)
      break;
    cur = *c->superclass;
  }
  return {cls, field};
}

std::vector<FieldKey> AnalysisContext::fieldKeys(const MethodSig &inMethod,
                                                 const Value &ref) const {
  if (ref.staticField)
    return {declaringField(ref.owner, ref.text)};
  if (ref.owner == "this")
    return {declaringField(inMethod.owner, ref.text)};
  // Receiver type is unknown: every class declaring a field of that name.
  std::vector<FieldKey> out;
  for (const auto &[name, c] : program_->classes)
    if (c.findField(ref.text))
      out.push_back({name, ref.text});
  if (out.empty())
    out.push_back({"?", ref.text});
  return out;
}

std::vector<FieldKey> AnalysisContext::fieldKeys(const MethodSig &inMethod,
                                                 const Cell &cell) const {
  if (cell.kind == Cell::Kind::StaticField)
    return fieldKeys(inMethod, Value::staticFieldRef(cell.base, cell.field));
  return fieldKeys(inMethod, Value::instanceField(cell.base, cell.field));
}

const std::vector<FieldStore> &AnalysisContext::storesOf(const FieldKey &key) const {
  static const std::vector<FieldStore> empty;
  auto it = stores_.find(key);
  return it == stores_.end() ? empty : it->second;
}

} // namespace cryptoslice
